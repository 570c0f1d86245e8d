#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <json.hpp>

#include "scenes.hpp"
#include "support.hpp"

namespace cv = crackvote;
namespace fs = std::filesystem;
using namespace cvtest;

namespace {

struct CliRun {
    int status = 0;
    std::string out, err;
};

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / "crackvote_cli" / info->name();
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path path(const std::string& name) const { return dir_ / name; }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    CliRun run(const std::string& args) const {
        const std::string cmd = "\"" + std::string(CRACKVOTE_CLI) + "\" " + args + " > \"" + path("stdout").string() +
                                "\" 2> \"" + path("stderr").string() + "\"";
        const int raw = std::system(cmd.c_str());
        CliRun r;
        r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
        r.out = slurp(path("stdout"));
        r.err = slurp(path("stderr"));
        return r;
    }

    std::string q(const std::string& name) const { return "\"" + path(name).string() + "\""; }

    // Exactly one line of JSON with an "error" field.
    static void expect_error_line(const std::string& err, const std::string& kind) {
        ASSERT_FALSE(err.empty());
        EXPECT_EQ(std::count(err.begin(), err.end(), '\n'), 1) << err;
        const auto j = nlohmann::json::parse(err);
        EXPECT_EQ(j.at("error"), kind);
        EXPECT_TRUE(j.at("message").is_string());
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, DetectFindsSyntheticCrack) {
    const auto scene = cv::render_scene(efficacy_scene(5));
    cv::save_pgm(scene.image, path("scene.pgm"));
    cv::save_pgm(scene.cracks, path("truth.pgm"));
    const auto d = run("detect --input " + q("scene.pgm") + " --output " + q("mask.pgm"));
    ASSERT_EQ(d.status, 0) << d.err;
    const auto summary = nlohmann::json::parse(d.out);
    EXPECT_EQ(summary.at("width"), 256);
    EXPECT_GT(summary.at("foreground_pixels").get<int>(), 0);
    std::vector<std::string> stages;
    for (const auto& s : summary.at("stages")) {
        stages.push_back(s.at("name"));
        EXPECT_GE(s.at("timing_ms").get<double>(), 0.0);
    }
    EXPECT_EQ(stages, (std::vector<std::string>{"median", "bottomhat", "invert", "binarize", "enhance"}));

    const auto e = run("evaluate --input " + q("mask.pgm") + " --reference " + q("truth.pgm"));
    ASSERT_EQ(e.status, 0) << e.err;
    const auto report = nlohmann::json::parse(e.out);
    EXPECT_GE(report.at("SM").get<double>(), 90.0);
    EXPECT_EQ(report.at("sm_definition"), "buffered-match");
}

TEST_F(Cli, DetectEchoesResolvedConfig) {
    cv::save_pgm(cv::render_scene(gradient_scene()).image, path("scene.pgm"));
    std::ofstream(path("run.cfg")) << "singh.k = 0.1\nvoting.t_ball = 0.5\n";
    const auto d = run("detect --input " + q("scene.pgm") + " --output " + q("mask.pgm") + " --config " +
                       q("run.cfg") + " --report " + q("summary.json"));
    ASSERT_EQ(d.status, 0) << d.err;
    const auto cfg = nlohmann::json::parse(slurp(path("summary.json"))).at("config");
    EXPECT_EQ(cfg.at("singh.k"), 0.1);
    EXPECT_EQ(cfg.at("voting.t_ball"), 0.5);
    EXPECT_EQ(cfg.at("singh.w"), 51);  // default filled in
    EXPECT_EQ(cfg.size(), cv::config_keys().size());
}

TEST_F(Cli, DetectDumpsSaliency) {
    cv::save_pgm(cv::render_scene(efficacy_scene(2)).image, path("scene.pgm"));
    const auto d = run("detect --input " + q("scene.pgm") + " --output " + q("mask.pgm") + " --dump-saliency");
    ASSERT_EQ(d.status, 0) << d.err;
    const auto dumps = nlohmann::json::parse(d.out).at("saliency_dumps");
    EXPECT_EQ(dumps.size(), 8u);
    for (const auto& p : dumps) EXPECT_TRUE(fs::exists(p.get<std::string>()));
    EXPECT_TRUE(fs::exists(path("mask.round2_stick.stick.pgm")));
}

TEST_F(Cli, AllBackgroundGivesEmptyMask) {
    cv::save_pgm(GrayImage(64, 48, 0.7), path("flat.pgm"));
    const auto d = run("detect --input " + q("flat.pgm") + " --output " + q("mask.pgm"));
    ASSERT_EQ(d.status, 0) << d.err;
    EXPECT_EQ(cv::count_foreground(cv::load_mask(path("mask.pgm"))), 0u);
}

TEST_F(Cli, MissingInputNamesPath) {
    const auto d = run("detect --input " + q("absent.pgm") + " --output " + q("mask.pgm"));
    EXPECT_NE(d.status, 0);
    expect_error_line(d.err, "pgm");
    EXPECT_NE(d.err.find("absent.pgm"), std::string::npos);
}

TEST_F(Cli, EvaluateIdenticalMasks) {
    std::mt19937_64 rng(61);
    cv::save_pgm(random_mask(rng, 40, 40, 0.1), path("m.pgm"));
    const auto e = run("evaluate --input " + q("m.pgm") + " --reference " + q("m.pgm"));
    ASSERT_EQ(e.status, 0) << e.err;
    const auto r = nlohmann::json::parse(e.out);
    EXPECT_EQ(r.at("SM"), 100.0);
    EXPECT_EQ(r.at("H"), 0.0);
}

TEST_F(Cli, EvaluateNearMissMatchesLibrary) {
    std::mt19937_64 rng(62);
    BinaryMask a(50, 50, 0), b(50, 50, 0);
    for (int x = 5; x < 45; ++x) {
        a(x, 20) = 1;
        b(x, 21 + (x % 7 == 0 ? 2 : 0)) = 1;
    }
    b(48, 48) = 1;
    cv::save_pgm(a, path("a.pgm"));
    cv::save_pgm(b, path("b.pgm"));
    const auto e = run("evaluate --input " + q("a.pgm") + " --reference " + q("b.pgm") + " --tau 1.5");
    ASSERT_EQ(e.status, 0) << e.err;
    const auto r = nlohmann::json::parse(e.out);
    const auto pa = cv::foreground_coords(a), pb = cv::foreground_coords(b);
    EXPECT_NEAR(r.at("h_ab").get<double>(), brute_directed_hausdorff(pa, pb), 1e-12);
    EXPECT_NEAR(r.at("h_ba").get<double>(), brute_directed_hausdorff(pb, pa), 1e-12);
    EXPECT_NEAR(r.at("SM").get<double>(), brute_sm(pa, pb, 1.5), 1e-9);
    EXPECT_EQ(r.at("tau"), 1.5);
}

TEST_F(Cli, EvaluateDimensionMismatch) {
    cv::save_pgm(BinaryMask(10, 10, 1), path("a.pgm"));
    cv::save_pgm(BinaryMask(10, 12, 1), path("b.pgm"));
    const auto e = run("evaluate --input " + q("a.pgm") + " --reference " + q("b.pgm"));
    EXPECT_NE(e.status, 0);
    expect_error_line(e.err, "evaluate");
}

TEST_F(Cli, StageBottomHatRemovesMarking) {
    const auto scene = cv::render_scene(bottom_hat_scene());
    cv::save_pgm(scene.image, path("scene.pgm"));
    std::ofstream(path("bright.cfg")) << "singh.polarity = bright\n";
    const auto s = run("stage bottomhat --input " + q("scene.pgm") + " --output " + q("hat.pgm") + " --config " +
                       q("bright.cfg"));
    ASSERT_EQ(s.status, 0) << s.err;
    const auto hat = cv::load_pgm(path("hat.pgm"));
    double stripe = 0, crack = 0;
    int ns = 0, nc = 0;
    for (int y = 0; y < hat.height(); ++y)
        for (int x = 0; x < hat.width(); ++x) {
            if (x >= 160 && x <= 180) {
                stripe += hat(x, y);
                ++ns;
            }
            if (scene.cracks(x, y)) {
                crack += hat(x, y);
                ++nc;
            }
        }
    EXPECT_LE(stripe / ns, 0.02);
    EXPECT_GE(crack / nc, 0.5);
}

TEST_F(Cli, StageOtsuLosesCrackInBrightHalf) {
    const auto scene = cv::render_scene(gradient_scene());
    cv::save_pgm(scene.image, path("scene.pgm"));
    for (const char* name : {"otsu", "binarize"}) {
        const auto s = run(std::string("stage ") + name + " --input " + q("scene.pgm") + " --output " +
                           q(std::string(name) + ".pgm"));
        ASSERT_EQ(s.status, 0) << s.err;
    }
    auto bright_half_recall = [&](const BinaryMask& m) {
        std::size_t hit = 0, total = 0;
        for (int y = 0; y < m.height(); ++y)
            for (int x = m.width() / 2; x < m.width(); ++x)
                if (scene.cracks(x, y)) {
                    ++total;
                    hit += m(x, y);
                }
        return double(hit) / double(total);
    };
    const double otsu = bright_half_recall(cv::load_mask(path("otsu.pgm")));
    const double singh = bright_half_recall(cv::load_mask(path("binarize.pgm")));
    EXPECT_LT(otsu, 0.5);
    EXPECT_GT(singh, 0.9);
}

TEST_F(Cli, StageChainMatchesDetect) {
    cv::save_pgm(cv::render_scene(efficacy_scene(3)).image, path("scene.pgm"));
    ASSERT_EQ(run("detect --input " + q("scene.pgm") + " --output " + q("direct.pgm")).status, 0);
    std::string prev = "scene.pgm";
    for (const char* name : {"median", "bottomhat", "binarize", "enhance"}) {
        const std::string out = std::string(name) + ".pgm";
        const auto s = run(std::string("stage ") + name + " --input " + q(prev) + " --output " + q(out));
        ASSERT_EQ(s.status, 0) << name << ": " << s.err;
        prev = out;
    }
    EXPECT_EQ(slurp(path("enhance.pgm")), slurp(path("direct.pgm")));
}

TEST_F(Cli, UnknownStage) {
    cv::save_pgm(GrayImage(8, 8, 0.5), path("x.pgm"));
    const auto s = run("stage sharpen --input " + q("x.pgm") + " --output " + q("y.pgm"));
    EXPECT_NE(s.status, 0);
    expect_error_line(s.err, "parameter");
}

TEST_F(Cli, SynthIsDeterministic) {
    std::ofstream(path("scene.json")) << R"({"seed": 3, "noise": 0.03,
        "cracks": [{"points": [[10, 20], [240, 200]], "width": 5}],
        "specks": {"count": 40, "max_radius": 2}})";
    for (const char* tag : {"1", "2"}) {
        const auto s = run("synth --input " + q("scene.json") + " --output " + q(std::string("img") + tag + ".pgm") +
                           " --reference " + q(std::string("gt") + tag + ".pgm"));
        ASSERT_EQ(s.status, 0) << s.err;
    }
    EXPECT_EQ(slurp(path("img1.pgm")), slurp(path("img2.pgm")));
    EXPECT_EQ(slurp(path("gt1.pgm")), slurp(path("gt2.pgm")));
    ASSERT_EQ(run("synth --input " + q("scene.json") + " --output " + q("img3.pgm") + " --reference " + q("gt3.pgm") +
                  " --seed 4")
                  .status,
              0);
    EXPECT_NE(slurp(path("img1.pgm")), slurp(path("img3.pgm")));
}

TEST_F(Cli, SynthWithoutCracksHasEmptyTruth) {
    std::ofstream(path("scene.json")) << R"({"noise": 0.05})";
    ASSERT_EQ(run("synth --input " + q("scene.json") + " --output " + q("img.pgm") + " --reference " + q("gt.pgm"))
                  .status,
              0);
    EXPECT_EQ(cv::count_foreground(cv::load_mask(path("gt.pgm"))), 0u);
}

TEST_F(Cli, ErrorPathsAreSingleLineJson) {
    cv::save_pgm(GrayImage(8, 8, 0.5), path("x.pgm"));
    std::ofstream(path("bad.cfg")) << "singh.q = 1\n";
    std::ofstream(path("bad.json")) << R"({"colour": 1})";
    std::ofstream(path("garbage.pgm")) << "P7 nope";

    const auto c = run("detect --input " + q("x.pgm") + " --output " + q("m.pgm") + " --config " + q("bad.cfg"));
    EXPECT_EQ(c.status, 1);
    expect_error_line(c.err, "config");

    const auto p = run("detect --input " + q("garbage.pgm") + " --output " + q("m.pgm"));
    EXPECT_EQ(p.status, 1);
    expect_error_line(p.err, "pgm");

    const auto s = run("synth --input " + q("bad.json") + " --output " + q("i.pgm") + " --reference " + q("g.pgm"));
    EXPECT_EQ(s.status, 1);
    expect_error_line(s.err, "parameter");

    const auto u = run("detect --input " + q("x.pgm"));
    EXPECT_EQ(u.status, 2);
    expect_error_line(u.err, "usage");

    const auto none = run("");
    EXPECT_EQ(none.status, 2);
    expect_error_line(none.err, "usage");
}
