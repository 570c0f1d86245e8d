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

// crackvote command-line front end.
//
//   crackvote detect   --input IMG --output MASK [--config CFG] [--report JSON] [--dump-saliency]
//   crackvote evaluate --input MASK --reference MASK [--tau T] [--config CFG] [--report JSON]
//   crackvote stage NAME --input IMG --output IMG [--config CFG]
//   crackvote synth    --input SCENE.json --output IMG --reference MASK [--seed N]
//
// Errors print one JSON object on stderr, {"error": kind, "message": text},
// and exit with status 2 (usage) or 1 (everything else).

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "crackvote/crackvote.hpp"

namespace fs = std::filesystem;
using crackvote::BinaryMask;
using crackvote::GrayImage;
using crackvote::PipelineConfig;
using ojson = nlohmann::ordered_json;

namespace {

struct Failure {
    std::string kind;
    std::string message;
    int status = 1;
};

int fail(const Failure& f) {
    ojson j;
    j["error"] = f.kind;
    j["message"] = f.message;
    std::cerr << j.dump() << '\n';
    return f.status;
}

PipelineConfig resolve_config(const std::string& path) {
    return path.empty() ? PipelineConfig{} : crackvote::load_config(path);
}

void emit_report(const ojson& j, const std::string& report_path) {
    if (report_path.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(report_path, std::ios::binary);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error(report_path + ": cannot write report");
}

GrayImage normalized(const crackvote::Raster<double>& r) {
    double top = 0.0;
    for (double v : r.pixels()) top = std::max(top, v);
    GrayImage out(r.width(), r.height(), 0.0);
    if (top > 0.0)
        for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[i] / top;
    return out;
}

// <dir>/<stem>.<name>.<kind>.pgm next to the output mask.
fs::path dump_path(const fs::path& output, const std::string& name, const char* kind) {
    return output.parent_path() / (output.stem().string() + "." + name + "." + kind + ".pgm");
}

struct Options {
    std::string input, output, config, reference, report, stage;
    double tau = -1.0;
    std::optional<std::uint64_t> seed;
    bool dump_saliency = false;
};

int cmd_detect(const Options& o) {
    PipelineConfig cfg = resolve_config(o.config);
    if (o.dump_saliency) cfg.dump_saliency = true;
    const GrayImage input = crackvote::load_pgm(o.input);

    std::vector<std::string> dumped;
    crackvote::SaliencySink sink;
    if (cfg.dump_saliency) {
        sink = [&](const std::string& name, const crackvote::SaliencyMaps& maps) {
            for (auto [kind, raster] : {std::pair{"stick", &maps.stick}, std::pair{"ball", &maps.ball}}) {
                const fs::path p = dump_path(o.output, name, kind);
                crackvote::save_pgm(normalized(*raster), p);
                dumped.push_back(p.string());
            }
        };
    }
    const auto res = crackvote::run_detect(input, cfg, sink);
    crackvote::save_pgm(res.mask, o.output);

    ojson j;
    j["command"] = "detect";
    j["input"] = o.input;
    j["output"] = o.output;
    j["width"] = input.width();
    j["height"] = input.height();
    j["foreground_pixels"] = crackvote::count_foreground(res.mask);
    ojson stages = ojson::array();
    double total = 0.0;
    for (const auto& t : res.timings) {
        stages.push_back({{"name", t.name}, {"timing_ms", t.ms}});
        total += t.ms;
    }
    j["stages"] = stages;
    j["total_timing_ms"] = total;
    j["config"] = crackvote::config_json(cfg);
    if (!dumped.empty()) j["saliency_dumps"] = dumped;
    emit_report(j, o.report);
    return 0;
}

int cmd_evaluate(const Options& o) {
    const PipelineConfig cfg = resolve_config(o.config);
    const double tau = o.tau >= 0.0 ? o.tau : cfg.tau;
    const BinaryMask a = crackvote::load_mask(o.input);
    const BinaryMask b = crackvote::load_mask(o.reference);
    const auto r = crackvote::evaluate(a, b, tau, cfg.pixel_size);
    ojson j;
    j["command"] = "evaluate";
    j["detected"] = o.input;
    j["reference"] = o.reference;
    const ojson report = crackvote::eval_report_json(r);
    for (const auto& [k, v] : report.items()) j[k] = v;
    j["pixel_size"] = cfg.pixel_size;
    emit_report(j, o.report);
    return 0;
}

int cmd_stage(const Options& o) {
    if (!crackvote::is_stage_name(o.stage)) {
        throw crackvote::ParamError("unknown stage '" + o.stage +
                                    "' (expected median, bottomhat, binarize, otsu or enhance)");
    }
    const PipelineConfig cfg = resolve_config(o.config);
    const GrayImage input = crackvote::load_pgm(o.input);
    const auto out = crackvote::run_stage(o.stage, input, cfg);
    if (out.is_mask) {
        crackvote::save_pgm(out.mask, o.output);
    } else {
        crackvote::save_pgm(out.image, o.output);
    }
    return 0;
}

int cmd_synth(const Options& o) {
    crackvote::SyntheticSceneSpec spec = crackvote::load_scene_spec(o.input);
    if (o.seed) spec.seed = *o.seed;
    const PipelineConfig cfg = resolve_config(o.config);
    const auto scene = crackvote::render_scene(spec, cfg.bottom_hat_radius);
    for (const auto& w : scene.warnings) {
        ojson j;
        j["warning"] = w;
        std::cerr << j.dump() << '\n';
    }
    crackvote::save_pgm(scene.image, o.output);
    crackvote::save_pgm(scene.cracks, o.reference);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crackvote: pavement crack detection and scoring"};
    app.require_subcommand(1);
    Options o;

    auto* detect = app.add_subcommand("detect", "run the full detection pipeline");
    detect->add_option("--input", o.input, "input PGM image")->required();
    detect->add_option("--output", o.output, "output mask PGM")->required();
    detect->add_option("--config", o.config, "config file");
    detect->add_option("--report", o.report, "write the JSON summary here instead of stdout");
    detect->add_flag("--dump-saliency", o.dump_saliency, "write intermediate saliency maps");

    auto* eval = app.add_subcommand("evaluate", "score a detected mask against a reference");
    eval->add_option("--input", o.input, "detected mask PGM")->required();
    eval->add_option("--reference", o.reference, "reference mask PGM")->required();
    eval->add_option("--tau", o.tau, "SM search radius in pixels (default from config)");
    eval->add_option("--config", o.config, "config file");
    eval->add_option("--report", o.report, "write the JSON report here instead of stdout");

    auto* stage = app.add_subcommand("stage", "run a single pipeline stage");
    stage->add_option("name", o.stage, "median | bottomhat | binarize | otsu | enhance")->required();
    stage->add_option("--input", o.input, "input PGM")->required();
    stage->add_option("--output", o.output, "output PGM")->required();
    stage->add_option("--config", o.config, "config file");

    auto* synth = app.add_subcommand("synth", "render a synthetic scene and its ground truth");
    synth->add_option("--input", o.input, "scene description JSON")->required();
    synth->add_option("--output", o.output, "scene PGM")->required();
    synth->add_option("--reference", o.reference, "ground-truth mask PGM")->required();
    synth->add_option("--seed", o.seed, "override the scene seed");
    synth->add_option("--config", o.config, "config file (bottom-hat radius for warnings)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        return fail({"usage", e.what(), 2});
    }

    try {
        if (detect->parsed()) return cmd_detect(o);
        if (eval->parsed()) return cmd_evaluate(o);
        if (stage->parsed()) return cmd_stage(o);
        if (synth->parsed()) return cmd_synth(o);
    } catch (const crackvote::ConfigError& e) {
        return fail({"config", e.what()});
    } catch (const crackvote::PgmError& e) {
        return fail({"pgm", e.what()});
    } catch (const crackvote::StageError& e) {
        return fail({"stage", e.what()});
    } catch (const crackvote::EvalError& e) {
        return fail({"evaluate", e.what()});
    } catch (const crackvote::ParamError& e) {
        return fail({"parameter", e.what()});
    } catch (const std::exception& e) {
        return fail({"runtime", e.what()});
    }
    return fail({"usage", "no subcommand", 2});
}
