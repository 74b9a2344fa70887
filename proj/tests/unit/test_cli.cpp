#include <cmath>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>
#include <unistd.h>

#include "minkperi/harness.hpp"
#include "minkperi/io.hpp"
#include "oracles.hpp"

namespace minkperi::harness {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

const fs::path kPresets = MINKPERI_PRESETS_DIR;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("minkperi_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunOptions opts_with_out(const std::string& sub) {
    RunOptions opts;
    opts.out = dir_ / sub;
    return opts;
  }

  fs::path write_config(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    write_text_file(path, text);
    return path;
  }

  static json read_json(const fs::path& p) { return json::parse(read_text_file(p)); }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(Cli, MeasureBall) {
  RunOptions opts = opts_with_out("m");
  opts.r = 0.5;
  opts.alpha = 1.0;
  ASSERT_EQ(cmd_measure(kPresets / "shapes/ball.json", opts, out_, err_), kExitOk) << err_.str();
  const auto doc = read_json(dir_ / "m/measure.json");
  EXPECT_EQ(doc["method"], "exact");
  EXPECT_NEAR(doc["per_r"].get<double>(), 2 * oracle::kPi, 1e-3 * 2 * oracle::kPi);
  EXPECT_NEAR(doc["phi"].get<double>(), oracle::kDiskPhi1, 1e-3 * oracle::kDiskPhi1);
  EXPECT_TRUE(doc["riesz1"]["holds"].get<bool>());
  EXPECT_TRUE(fs::exists(dir_ / "m/measure.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "m/manifest.json"));
}

TEST_F(Cli, MeasureSquareExact) {
  RunOptions opts;
  opts.r = 0.1;
  ASSERT_EQ(cmd_measure(kPresets / "shapes/square.json", opts, out_, err_), kExitOk);
  const std::string text = out_.str();
  const auto doc = json::parse(text.substr(0, text.find("\n}\n") + 2));
  EXPECT_EQ(doc["method"], "exact");
  EXPECT_NEAR(doc["per_r"].get<double>(), oracle::kSquarePer01, 1e-13);
}

TEST_F(Cli, MeasureEmptyGrid) {
  RunOptions opts;
  opts.r = 0.1;
  EXPECT_EQ(cmd_measure(kPresets / "shapes/empty.pgm", opts, out_, err_), kExitInvalidInput);
  const std::string text = out_.str();
  const auto doc = json::parse(text);
  EXPECT_EQ(doc["volume"].get<double>(), 0.0);
  EXPECT_EQ(doc["phi"].get<double>(), 0.0);
  EXPECT_NE(err_.str().find("empty"), std::string::npos);
}

TEST_F(Cli, MeasureResolutionGuardExitsThree) {
  RunOptions opts;
  opts.r = 0.1;
  opts.h = 0.08;
  EXPECT_EQ(cmd_measure(kPresets / "shapes/square.json", opts, out_, err_), kExitResource);
  EXPECT_NE(err_.str().find("largest accepted h"), std::string::npos);
}

TEST_F(Cli, MeasureMalformedShapeExitsTwo) {
  RunOptions opts;
  opts.r = 0.1;
  const auto bad = write_config("bad.json", "{\"n\": 2, \"vertices\": ");
  EXPECT_EQ(cmd_measure(bad, opts, out_, err_), kExitInvalidInput);
}

TEST_F(Cli, VerifyIsoDefaultFamily) {
  RunOptions opts = opts_with_out("iso");
  opts.trials = 200;
  opts.seed = 42;
  ASSERT_EQ(cmd_verify("iso", opts, out_, err_), kExitOk) << err_.str();
  const auto summary = read_json(dir_ / "iso/iso_summary.json");
  EXPECT_EQ(summary["violations"].get<int>(), 0);
  EXPECT_GE(summary["min_constant"].get<double>(), oracle::kIsoConstantLock);
  EXPECT_TRUE(fs::exists(dir_ / "iso/iso_records.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "iso/iso_scatter.csv"));
  const auto manifest = read_json(dir_ / "iso/manifest.json");
  EXPECT_EQ(manifest["seed"].get<int>(), 42);
  EXPECT_EQ(manifest["command"], "verify iso");
}

TEST_F(Cli, VerifyBoundsThinRectangles) {
  RunOptions opts = opts_with_out("b");
  opts.config = write_config("c.json", R"({"family": "thin-rectangles", "trials": 30})");
  EXPECT_EQ(cmd_verify("bounds", opts, out_, err_), kExitOk) << err_.str();
  const auto manifest = read_json(dir_ / "b/manifest.json");
  EXPECT_EQ(manifest["input_hashes"][opts.config->string()], sha256_file(*opts.config));
}

TEST_F(Cli, VerifyIsoForcedFailure) {
  RunOptions opts = opts_with_out("f");
  opts.config = write_config("neg.json", R"({"tolerance": -1.0, "trials": 3})");
  EXPECT_EQ(cmd_verify("iso", opts, out_, err_), kExitCheckFailed);
  ASSERT_TRUE(fs::exists(dir_ / "f/violations"));
  std::size_t dumped = 0;
  for (const auto& entry : fs::directory_iterator(dir_ / "f/violations")) {
    EXPECT_NO_THROW(read_shape(entry.path()));
    ++dumped;
  }
  EXPECT_EQ(dumped, 3u);
}

TEST_F(Cli, VerifyCylinder) {
  RunOptions opts = opts_with_out("c");
  opts.config = kPresets / "cylinder.json";
  EXPECT_EQ(cmd_verify("cylinder", opts, out_, err_), kExitOk);
  EXPECT_TRUE(read_json(dir_ / "c/cylinder_summary.json")["stable"].get<bool>());
}

TEST_F(Cli, VerifyRejectsBadInput) {
  RunOptions opts = opts_with_out("x");
  EXPECT_EQ(cmd_verify("everything", opts, out_, err_), kExitInvalidInput);
  opts.config = write_config("k.json", R"({"famly": "balls"})");
  EXPECT_EQ(cmd_verify("iso", opts, out_, err_), kExitInvalidInput);
  opts.config = write_config("f.json", R"({"family": "spheres"})");
  EXPECT_EQ(cmd_verify("iso", opts, out_, err_), kExitInvalidInput);
  opts.config = dir_ / "missing.json";
  EXPECT_EQ(cmd_verify("iso", opts, out_, err_), kExitInvalidInput);
}

TEST_F(Cli, OptimizeSmallVolume) {
  RunOptions opts = opts_with_out("o");
  opts.config = kPresets / "small-m.json";
  ASSERT_EQ(cmd_optimize(opts, out_, err_), kExitOk) << err_.str();
  const auto result = read_json(dir_ / "o/result.json");
  EXPECT_TRUE(result["ball"].get<bool>());
  EXPECT_LE(result["asymmetry"].get<double>(), 0.05);
  EXPECT_LE(result["hausdorff_to_ball"].get<double>(), 0.05);
  EXPECT_TRUE(fs::exists(dir_ / "o/shape.json"));
  EXPECT_TRUE(fs::exists(dir_ / "o/trace.ndjson"));
}

TEST_F(Cli, OptimizeLargeVolumeIsElongated) {
  RunOptions opts = opts_with_out("o");
  opts.config = kPresets / "large-m.json";
  ASSERT_EQ(cmd_optimize(opts, out_, err_), kExitOk) << err_.str();
  const auto result = read_json(dir_ / "o/result.json");
  EXPECT_FALSE(result["ball"].get<bool>());
  const auto lambdas = result["lambdas"].get<std::vector<double>>();
  ASSERT_EQ(lambdas.size(), 2u);
  EXPECT_LT(lambdas[0] / lambdas[1], 0.01);
}

TEST_F(Cli, OptimizeBadRadius) {
  RunOptions opts = opts_with_out("o");
  opts.config = kPresets / "bad-r.json";
  EXPECT_EQ(cmd_optimize(opts, out_, err_), kExitInvalidInput);
  EXPECT_TRUE(fs::exists(dir_ / "o/manifest.json"));
}

TEST_F(Cli, SweepRejectsCriticalAlpha) {
  RunOptions opts = opts_with_out("s");
  opts.mode = "large";
  opts.alpha = 1.5;
  EXPECT_EQ(cmd_sweep(opts, out_, err_), kExitInvalidInput);
  opts.mode = "medium";
  opts.alpha = 0.5;
  EXPECT_EQ(cmd_sweep(opts, out_, err_), kExitInvalidInput);
}

TEST_F(Cli, SweepLarge) {
  RunOptions opts = opts_with_out("s");
  opts.mode = "large";
  opts.config = kPresets / "large-sweep.json";
  ASSERT_EQ(cmd_sweep(opts, out_, err_), kExitOk) << err_.str();
  const auto summary = read_json(dir_ / "s/sweep_summary.json");
  const double slope = summary["diameter_fit"]["slope"].get<double>();
  EXPECT_GE(slope, 0.708);
  EXPECT_LE(slope, 0.958);
  EXPECT_TRUE(fs::exists(dir_ / "s/sweep.csv"));
}

TEST(Manifest, JsonFields) {
  ExperimentManifest m;
  m.command = "verify iso";
  m.seed = 5;
  m.output_dir = "out";
  m.tool_version = tool_version();
  m.input_hashes["a.json"] = "00";
  m.timestamp = "2026-01-01T00:00:00Z";
  const auto doc = nlohmann::json::parse(manifest_json(m));
  EXPECT_EQ(doc["seed"].get<int>(), 5);
  EXPECT_TRUE(doc["config_path"].is_null());
  EXPECT_EQ(doc["input_hashes"]["a.json"], "00");
  EXPECT_EQ(doc["tool_version"], "0.1.0");
}

}  // namespace
}  // namespace minkperi::harness
