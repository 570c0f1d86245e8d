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

// End-to-end crack detection and single-stage runners.
//
//   median -> bottom-hat -> invert -> local threshold -> multi-scale enhancement
//
// The enhancement stage includes the final cleanup (small components, spurs).

#pragma once

#include <chrono>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "crackvote/config.hpp"
#include "crackvote/enhance.hpp"
#include "crackvote/evaluation.hpp"
#include "crackvote/median.hpp"
#include "crackvote/morphology.hpp"
#include "crackvote/raster.hpp"
#include "crackvote/threshold.hpp"

namespace crackvote {

/// Failure inside a named pipeline stage.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& what)
        : std::runtime_error("stage " + stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

struct StageTiming {
    std::string name;
    double ms = 0.0;
};

struct DetectResult {
    BinaryMask mask;
    std::vector<StageTiming> timings;
};

namespace detail {

template <typename F>
auto timed_stage(const std::string& name, std::vector<StageTiming>& log, F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        auto out = fn();
        const auto t1 = std::chrono::steady_clock::now();
        log.push_back({name, std::chrono::duration<double, std::milli>(t1 - t0).count()});
        return out;
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

}  // namespace detail

/// Bottom-hat output in the polarity the threshold stage expects: inverted
/// (cracks dark) for Polarity::dark, raw (cracks bright) for Polarity::bright.
inline GrayImage threshold_input(const GrayImage& bottom_hat_img, Polarity polarity) {
    return polarity == Polarity::dark ? invert(bottom_hat_img) : bottom_hat_img;
}

inline DetectResult run_detect(const GrayImage& input, const PipelineConfig& cfg,
                               const SaliencySink& sink = {}) {
    cfg.validate();
    DetectResult res;
    auto& log = res.timings;
    const GrayImage smoothed =
        detail::timed_stage("median", log, [&] { return median_filter(input, cfg.median); });
    const GrayImage hat = detail::timed_stage("bottomhat", log, [&] {
        return bottom_hat(smoothed, StructuringElement::disk(cfg.bottom_hat_radius));
    });
    const GrayImage inverted = detail::timed_stage(
        "invert", log, [&] { return threshold_input(hat, cfg.singh.polarity); });
    const BinaryMask binary =
        detail::timed_stage("binarize", log, [&] { return singh_threshold(inverted, cfg.singh); });
    res.mask = detail::timed_stage(
        "enhance", log, [&] { return multiscale_enhance(binary, cfg.voting, sink); });
    return res;
}

// Single stages -----------------------------------------------------------------

inline constexpr std::string_view kStageNames[] = {"median", "bottomhat", "binarize", "otsu",
                                                   "enhance"};

inline bool is_stage_name(std::string_view name) {
    for (auto s : kStageNames)
        if (s == name) return true;
    return false;
}

/// Output of one stage: a gray image (median, bottomhat) or a mask.
struct StageOutput {
    bool is_mask = false;
    GrayImage image;
    BinaryMask mask;
};

/// Runs one stage on `input`. `bottomhat` emits the threshold-stage input
/// (see threshold_input), so stages chain: median | bottomhat | binarize | enhance.
/// `otsu` is the global alternative to `binarize` with the same polarity.
/// `enhance` reads `input` as a mask (>= 0.5 is foreground).
inline StageOutput run_stage(std::string_view name, const GrayImage& input,
                             const PipelineConfig& cfg) {
    cfg.validate();
    std::vector<StageTiming> log;
    StageOutput out;
    const std::string stage(name);
    if (name == "median") {
        out.image = detail::timed_stage(stage, log, [&] { return median_filter(input, cfg.median); });
    } else if (name == "bottomhat") {
        out.image = detail::timed_stage(stage, log, [&] {
            return threshold_input(bottom_hat(input, StructuringElement::disk(cfg.bottom_hat_radius)),
                                   cfg.singh.polarity);
        });
    } else if (name == "binarize") {
        out.is_mask = true;
        out.mask = detail::timed_stage(stage, log, [&] { return singh_threshold(input, cfg.singh); });
    } else if (name == "otsu") {
        out.is_mask = true;
        out.mask = detail::timed_stage(stage, log, [&] {
            return otsu_threshold(cfg.singh.polarity == Polarity::dark ? invert(input) : input);
        });
    } else if (name == "enhance") {
        out.is_mask = true;
        out.mask = detail::timed_stage(stage, log, [&] {
            BinaryMask m(input.width(), input.height(), 0);
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = input[i] >= 0.5 ? 1 : 0;
            return multiscale_enhance(m, cfg.voting);
        });
    } else {
        throw ParamError("unknown stage '" + stage +
                         "' (expected median, bottomhat, binarize, otsu or enhance)");
    }
    return out;
}

// JSON reports ------------------------------------------------------------------

/// Every config key with a typed value.
inline nlohmann::ordered_json config_json(const PipelineConfig& cfg) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    using Type = detail::ConfigKey::Type;
    for (const auto& k : config_keys()) {
        const std::string v = k.get(cfg);
        switch (k.type) {
            case Type::real: j[k.name] = detail::parse_double(k.name, v); break;
            case Type::integer: j[k.name] = detail::parse_int(k.name, v); break;
            case Type::boolean: j[k.name] = detail::parse_bool(k.name, v); break;
            case Type::word: j[k.name] = v; break;
        }
    }
    return j;
}

inline nlohmann::ordered_json eval_report_json(const EvalReport& r) {
    nlohmann::ordered_json j;
    j["h_ab"] = r.h_ab;
    j["h_ba"] = r.h_ba;
    j["H"] = r.H;
    j["SM"] = r.SM;
    j["sm_definition"] = "buffered-match";
    j["size_a"] = r.size_a;
    j["size_b"] = r.size_b;
    j["tau"] = r.tau;
    return j;
}

}  // namespace crackvote
