#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "wdoa/config.hpp"

using namespace wdoa;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

int error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string error_message(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, EmptyInputGivesDefaults) {
  const auto cfg = parse("");
  const ExperimentConfig def;
  EXPECT_EQ(dump_config(cfg), dump_config(def));
  EXPECT_EQ(cfg.sensors, 10);
  EXPECT_EQ(cfg.r1, -819);
  EXPECT_EQ(cfg.r2, 818);
  EXPECT_EQ(cfg.search.q, 50);
  EXPECT_EQ(cfg.search.oversample_factor, 2);
  EXPECT_DOUBLE_EQ(cfg.pfa, 0.01);
  EXPECT_EQ(cfg.trials, 100);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, DefaultArrayMatchesReference) {
  const auto a = ExperimentConfig{}.array();
  EXPECT_EQ(a.sensors(), 10);
  EXPECT_EQ(a.index_count(), 1638);
}

TEST(Config, CommentsAndBlankLines) {
  const auto cfg = parse("# header\n\n  trials = 7   # trailing\nseed=42\n");
  EXPECT_EQ(cfg.trials, 7);
  EXPECT_EQ(cfg.seed, 42u);
}

TEST(Config, ParsesListsAndEstimators) {
  const auto cfg = parse(
      "estimators = cheb_ml:10, bin_ml:47\n"
      "snr_grid_db = -5, 15.5\n"
      "gamma_true = -0.5, 0.5\n"
      "amplitudes = 1, 0.5-0.5j\n"
      "delays = 0, 1e-9\n"
      "scenario = CS\n"
      "clamp_snr_db = none\n");
  ASSERT_EQ(cfg.estimators.size(), 2u);
  EXPECT_EQ(cfg.estimators[0], (EstimatorSpec{EstimatorKind::cheb_ml, 10}));
  EXPECT_EQ(cfg.estimators[1].label(), "bin_ml:47");
  EXPECT_EQ(cfg.snr_grid_db, (std::vector<double>{-5.0, 15.5}));
  EXPECT_EQ(cfg.scenario.amplitudes[1], Complex(0.5, -0.5));
  EXPECT_EQ(cfg.scenario.kind, ScenarioKind::correlated);
  EXPECT_FALSE(cfg.clamp_snr_db.has_value());
}

TEST(Config, ZeroTrialsNamesField) {
  const auto msg = error_message("trials = 0\n");
  EXPECT_NE(msg.find("trials"), std::string::npos) << msg;
}

TEST(Config, UnknownKeyReportsLine) {
  EXPECT_EQ(error_line("trials = 3\n\n# c\nbogus = 1\n"), 4);
  EXPECT_NE(error_message("bogus = 1\n").find("bogus"), std::string::npos);
}

TEST(Config, MalformedLinesReportLine) {
  EXPECT_EQ(error_line("seed = 1\nno equals sign\n"), 2);
  EXPECT_EQ(error_line("trials = many\n"), 1);
  EXPECT_EQ(error_line("pfa = 0.1x\n"), 1);
  EXPECT_EQ(error_line("estimators = cheb_ml\n"), 1);
  EXPECT_EQ(error_line("estimators = foo:3\n"), 1);
  EXPECT_EQ(error_line("scenario = XS\n"), 1);
}

TEST(Config, InvariantViolations) {
  EXPECT_NE(error_message("pfa = 1\n").find("pfa"), std::string::npos);
  EXPECT_NE(error_message("bt = 1.5\n").find("bt"), std::string::npos);
  EXPECT_NE(error_message("r1 = 5\nr2 = 5\n").find("r1"), std::string::npos);
  EXPECT_NE(error_message("sensors = 3\n").find("gamma_true"), std::string::npos);
  EXPECT_NE(error_message("search_q = 1\n").find("search"), std::string::npos);
  EXPECT_NE(error_message("estimators = cheb_ml:0\n").find("estimators"), std::string::npos);
  EXPECT_EQ(error_line("trials = 0\n"), 0);
}

TEST(Config, DumpRoundTrip) {
  const auto cfg = parse(
      "sensors = 8\nbandwidth_hz = 123456789.125\nsnr_grid_db = 0.1, 0.2\nseed = 18446744073709551615\n"
      "amplitudes = 1+0.25j, -0.3\ndelays = 0, 3e-10\ngamma_true = -0.1, 0.1\noutput_dir = out/x\n");
  const auto text = dump_config(cfg);
  const auto again = parse(text);
  EXPECT_EQ(dump_config(again), text);
  EXPECT_EQ(config_hash(again), config_hash(cfg));
  EXPECT_EQ(again.seed, 18446744073709551615ull);
  EXPECT_EQ(again.bandwidth_hz, 123456789.125);
}

TEST(Config, HashStableAndSensitive) {
  const ExperimentConfig a;
  const auto h = config_hash(a);
  EXPECT_EQ(h.size(), 16u);
  EXPECT_EQ(h, config_hash(ExperimentConfig{}));
  auto b = a;
  b.seed = 2;
  EXPECT_NE(config_hash(b), h);
  b = a;
  b.snr_grid_db.back() += 1e-12;
  EXPECT_NE(config_hash(b), h);
  b = a;
  b.output_dir = "elsewhere";
  EXPECT_EQ(config_hash(b), h);
}

TEST(Config, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "wdoa_test_config.cfg";
  {
    std::ofstream f(path);
    f << "trials = 3\nbogus = 2\n";
  }
  try {
    load_config(path);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_NE(std::string(e.what()).find(path.string()), std::string::npos);
  }
  {
    std::ofstream f(path);
    f << "trials = 3\n";
  }
  EXPECT_EQ(load_config(path).trials, 3);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path), ConfigError);
}
