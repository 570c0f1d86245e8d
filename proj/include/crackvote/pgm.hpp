// Copyright 2026 The crackvote Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// PGM (P2 / P5) reader and P5 writer.

#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "crackvote/raster.hpp"

namespace crackvote {

enum class PgmErrc {
    open_failed,
    bad_magic,
    bad_header,
    unsupported_maxval,
    truncated,
    bad_pixel,
    write_failed,
};

inline std::string_view to_string(PgmErrc e) noexcept {
    switch (e) {
        case PgmErrc::open_failed: return "open_failed";
        case PgmErrc::bad_magic: return "bad_magic";
        case PgmErrc::bad_header: return "bad_header";
        case PgmErrc::unsupported_maxval: return "unsupported_maxval";
        case PgmErrc::truncated: return "truncated";
        case PgmErrc::bad_pixel: return "bad_pixel";
        case PgmErrc::write_failed: return "write_failed";
    }
    return "unknown";
}

class PgmError : public std::runtime_error {
public:
    PgmError(PgmErrc code, const std::string& path, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + path + ": " + detail),
          code_(code),
          path_(path) {}

    PgmErrc code() const noexcept { return code_; }
    const std::string& path() const noexcept { return path_; }

private:
    PgmErrc code_;
    std::string path_;
};

namespace detail {

class PgmCursor {
public:
    explicit PgmCursor(const std::vector<unsigned char>& buf) : buf_(buf) {}

    bool at_end() const noexcept { return pos_ >= buf_.size(); }
    std::size_t pos() const noexcept { return pos_; }
    void advance(std::size_t n) noexcept { pos_ += n; }

    void skip_space_and_comments() {
        while (!at_end()) {
            unsigned char c = buf_[pos_];
            if (c == '#') {
                while (!at_end() && buf_[pos_] != '\n' && buf_[pos_] != '\r') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    // Returns false when no digits are present.
    bool read_uint(long long& out) {
        skip_space_and_comments();
        std::size_t start = pos_;
        long long v = 0;
        while (!at_end() && std::isdigit(buf_[pos_])) {
            v = v * 10 + (buf_[pos_] - '0');
            if (v > (1LL << 40)) return false;
            ++pos_;
        }
        if (pos_ == start) return false;
        out = v;
        return true;
    }

private:
    const std::vector<unsigned char>& buf_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse an in-memory PGM. `origin` only labels errors.
inline GrayImage decode_pgm(const std::vector<unsigned char>& buf,
                            const std::string& origin = "<memory>") {
    if (buf.size() < 2 || buf[0] != 'P' || (buf[1] != '2' && buf[1] != '5')) {
        throw PgmError(PgmErrc::bad_magic, origin, "expected P2 or P5 magic");
    }
    const bool binary = buf[1] == '5';
    detail::PgmCursor cur(buf);
    cur.advance(2);
    if (!cur.at_end() && !std::isspace(buf[cur.pos()]) && buf[cur.pos()] != '#') {
        throw PgmError(PgmErrc::bad_magic, origin, "magic not followed by whitespace");
    }

    long long w = 0, h = 0, maxval = 0;
    if (!cur.read_uint(w) || !cur.read_uint(h) || !cur.read_uint(maxval)) {
        throw PgmError(PgmErrc::bad_header, origin, "missing width/height/maxval");
    }
    if (w < 1 || h < 1 || w > 65535 || h > 65535) {
        throw PgmError(PgmErrc::bad_header, origin,
                       "invalid dimensions " + std::to_string(w) + "x" + std::to_string(h));
    }
    if (maxval < 1 || maxval > 255) {
        throw PgmError(PgmErrc::unsupported_maxval, origin,
                       "maxval " + std::to_string(maxval) + " not in [1,255]");
    }

    const auto n = static_cast<std::size_t>(w * h);
    std::vector<double> px(n);
    auto to_unit = [maxval](long long v) {
        // snap to the 8-bit grid; identity for maxval 255
        return from_u8(static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval));
    };

    if (binary) {
        // exactly one whitespace byte separates the header from the raster
        if (cur.at_end() || !std::isspace(buf[cur.pos()])) {
            throw PgmError(PgmErrc::bad_header, origin, "missing separator before raster");
        }
        cur.advance(1);
        if (buf.size() - cur.pos() < n) {
            throw PgmError(PgmErrc::truncated, origin,
                           "expected " + std::to_string(n) + " bytes of pixel data, found " +
                               std::to_string(buf.size() - cur.pos()));
        }
        for (std::size_t i = 0; i < n; ++i) {
            long long v = buf[cur.pos() + i];
            if (v > maxval) throw PgmError(PgmErrc::bad_pixel, origin, "value exceeds maxval");
            px[i] = to_unit(v);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            long long v = 0;
            if (!cur.read_uint(v)) {
                cur.skip_space_and_comments();
                if (cur.at_end()) {
                    throw PgmError(PgmErrc::truncated, origin,
                                   "expected " + std::to_string(n) + " samples, found " +
                                       std::to_string(i));
                }
                throw PgmError(PgmErrc::bad_pixel, origin, "non-numeric sample");
            }
            if (v > maxval) throw PgmError(PgmErrc::bad_pixel, origin, "value exceeds maxval");
            px[i] = to_unit(v);
        }
    }
    return GrayImage(static_cast<int>(w), static_cast<int>(h), std::move(px));
}

inline GrayImage load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PgmError(PgmErrc::open_failed, path.string(), "cannot open for reading");
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    return decode_pgm(buf, path.string());
}

/// Any nonzero sample is foreground. Masks are written as 0/255, but loading
/// is tolerant of other encodings.
inline BinaryMask load_mask(const std::filesystem::path& path) {
    GrayImage g = load_pgm(path);
    BinaryMask m(g.width(), g.height());
    for (std::size_t i = 0; i < g.size(); ++i) m[i] = g[i] >= 0.5 ? 1 : 0;
    return m;
}

inline std::vector<unsigned char> encode_pgm(const GrayImage& img) {
    std::string header = "P5\n" + std::to_string(img.width()) + " " +
                         std::to_string(img.height()) + "\n255\n";
    std::vector<unsigned char> out(header.begin(), header.end());
    out.reserve(out.size() + img.size());
    for (double v : img.pixels()) out.push_back(to_u8(v));
    return out;
}

inline std::vector<unsigned char> encode_pgm(const BinaryMask& m) {
    std::string header = "P5\n" + std::to_string(m.width()) + " " +
                         std::to_string(m.height()) + "\n255\n";
    std::vector<unsigned char> out(header.begin(), header.end());
    out.reserve(out.size() + m.size());
    for (auto b : m.pixels()) out.push_back(b ? 255 : 0);
    return out;
}

namespace detail {
inline void write_bytes(const std::filesystem::path& path,
                        const std::vector<unsigned char>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw PgmError(PgmErrc::write_failed, path.string(), "cannot open for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw PgmError(PgmErrc::write_failed, path.string(), "short write");
}
}  // namespace detail

inline void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
    detail::write_bytes(path, encode_pgm(img));
}

inline void save_pgm(const BinaryMask& m, const std::filesystem::path& path) {
    detail::write_bytes(path, encode_pgm(m));
}

}  // namespace crackvote
