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

// Pipeline configuration and its flat key/value file format.
//
//   # comment
//   singh.k = 0.06
//   singh.w = 51
//
// One `key = value` per line. Unknown keys, malformed values and duplicate
// keys are errors; absent keys keep their defaults. The full key list lives
// in config_keys() and in the README.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "crackvote/enhance.hpp"
#include "crackvote/median.hpp"
#include "crackvote/morphology.hpp"
#include "crackvote/threshold.hpp"

namespace crackvote {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PipelineConfig {
    Neighborhood median = Neighborhood::square(3);
    int bottom_hat_radius = 15;
    SinghParams singh{0.06, 51, Polarity::dark};
    MultiScaleParams voting;
    double tau = 2.0;
    double pixel_size = 1.0;
    bool dump_saliency = false;

    void validate() const {
        (void)median.offsets();
        if (bottom_hat_radius < 1) throw ParamError("bottomhat.radius must be >= 1");
        singh.validate();
        voting.validate();
        if (!(tau >= 0.0)) throw ParamError("eval.tau must be >= 0");
        if (!(pixel_size > 0.0)) throw ParamError("eval.pixel_size must be > 0");
    }

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::string format_double(double v) {
    // shortest representation that round-trips
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw ConfigError(key + ": expected a real number, got '" + v + "'");
    }
    return out;
}

inline int parse_int(const std::string& key, const std::string& v) {
    int out = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
    return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

struct ConfigKey {
    enum class Type { real, integer, word, boolean };
    std::string name;
    std::function<std::string(const PipelineConfig&)> get;
    std::function<void(PipelineConfig&, const std::string&)> set;
    Type type = Type::word;
};

template <typename Field>
ConfigKey real_key(std::string name, Field field) {
    return {name, [field](const PipelineConfig& c) { return format_double(field(c)); },
            [name, field](PipelineConfig& c, const std::string& v) { field(c) = parse_double(name, v); },
            ConfigKey::Type::real};
}

template <typename Field>
ConfigKey int_key(std::string name, Field field) {
    return {name, [field](const PipelineConfig& c) { return std::to_string(field(c)); },
            [name, field](PipelineConfig& c, const std::string& v) { field(c) = parse_int(name, v); },
            ConfigKey::Type::integer};
}

}  // namespace detail

/// Every recognised key, in file order.
inline const std::vector<detail::ConfigKey>& config_keys() {
    using detail::int_key;
    using detail::real_key;
    using C = PipelineConfig;
    static const std::vector<detail::ConfigKey> keys = {
        {"median.shape", [](const C& c) { return std::string(to_string(c.median.shape)); },
         [](C& c, const std::string& v) {
             if (v == "square") c.median.shape = Neighborhood::Shape::square;
             else if (v == "cross") c.median.shape = Neighborhood::Shape::cross;
             else if (v == "disk") c.median.shape = Neighborhood::Shape::disk;
             else throw ConfigError("median.shape: expected square, cross or disk, got '" + v + "'");
         }},
        int_key("median.size", [](auto& c) -> auto& { return c.median.size; }),
        int_key("bottomhat.radius", [](auto& c) -> auto& { return c.bottom_hat_radius; }),
        real_key("singh.k", [](auto& c) -> auto& { return c.singh.k; }),
        int_key("singh.w", [](auto& c) -> auto& { return c.singh.w; }),
        {"singh.polarity", [](const C& c) { return std::string(to_string(c.singh.polarity)); },
         [](C& c, const std::string& v) {
             if (v == "dark") c.singh.polarity = Polarity::dark;
             else if (v == "bright") c.singh.polarity = Polarity::bright;
             else throw ConfigError("singh.polarity: expected dark or bright, got '" + v + "'");
         }},
        real_key("voting.sigma_ball", [](auto& c) -> auto& { return c.voting.sigma_ball; }),
        real_key("voting.sigma_ball2", [](auto& c) -> auto& { return c.voting.sigma_ball2; }),
        real_key("voting.sigma_stick1", [](auto& c) -> auto& { return c.voting.sigma_stick1; }),
        real_key("voting.sigma_stick2", [](auto& c) -> auto& { return c.voting.sigma_stick2; }),
        real_key("voting.t_stick1", [](auto& c) -> auto& { return c.voting.t_stick1; }),
        real_key("voting.t_ball", [](auto& c) -> auto& { return c.voting.t_ball; }),
        real_key("voting.t_stick2", [](auto& c) -> auto& { return c.voting.t_stick2; }),
        real_key("voting.t_stick3", [](auto& c) -> auto& { return c.voting.t_stick3; }),
        int_key("voting.ball_angles", [](auto& c) -> auto& { return c.voting.ball_angles; }),
        int_key("cleanup.min_area", [](auto& c) -> auto& { return c.voting.min_area; }),
        int_key("cleanup.connectivity", [](auto& c) -> auto& { return c.voting.connectivity; }),
        int_key("cleanup.spur_iterations", [](auto& c) -> auto& { return c.voting.spur_iterations; }),
        real_key("eval.tau", [](auto& c) -> auto& { return c.tau; }),
        real_key("eval.pixel_size", [](auto& c) -> auto& { return c.pixel_size; }),
        {"debug.dump_saliency", [](const C& c) { return std::string(c.dump_saliency ? "true" : "false"); },
         [](C& c, const std::string& v) { c.dump_saliency = detail::parse_bool("debug.dump_saliency", v); },
         detail::ConfigKey::Type::boolean},
    };
    return keys;
}

/// Parses config text on top of the defaults. `origin` labels errors.
inline PipelineConfig parse_config(std::string_view text, const std::string& origin = "<config>") {
    PipelineConfig cfg;
    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = detail::trim(line);
        if (body.empty()) continue;
        const std::string where = origin + ":" + std::to_string(lineno) + ": ";
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
        const std::string key = detail::trim(std::string_view(body).substr(0, eq));
        const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
        if (value.empty()) throw ConfigError(where + key + ": missing value");
        const auto& keys = config_keys();
        auto it = std::find_if(keys.begin(), keys.end(), [&](const auto& k) { return k.name == key; });
        if (it == keys.end()) throw ConfigError(where + "unknown key '" + key + "'");
        if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
        try {
            it->set(cfg, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    try {
        cfg.validate();
    } catch (const ParamError& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return cfg;
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open config");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

/// Writes every key, so the output fully determines the configuration.
inline std::string serialize_config(const PipelineConfig& cfg) {
    std::string out;
    for (const auto& k : config_keys()) out += k.name + " = " + k.get(cfg) + "\n";
    return out;
}

}  // namespace crackvote
