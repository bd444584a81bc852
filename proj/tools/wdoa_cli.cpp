// Command-line driver for the interpolation, RMSE and detection studies.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wdoa/harness.hpp"

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Key-value configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Override the experiment seed");
  cmd->add_option("--trials", c.trials, "Override the number of Monte-Carlo trials")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "Output directory (default: output_dir from the config)");
}

wdoa::ExperimentConfig resolve(const Common& c) {
  auto cfg = c.config.empty() ? wdoa::ExperimentConfig{} : wdoa::load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.trials) cfg.trials = *c.trials;
  if (!c.out.empty()) cfg.output_dir = c.out;
  cfg.validate();
  return cfg;
}

class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  std::ofstream open(const std::string& name) {
    const auto path = dir_ / name;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    names_.push_back(name);
    return f;
  }

  void finish(const wdoa::ExperimentConfig& cfg, const std::string& command, double seconds) {
    const auto path = dir_ / "manifest.json";
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << wdoa::run_manifest(cfg, command, seconds, names_).dump(2) << '\n';
    std::cout << "wrote " << names_.size() << " file(s) and manifest.json to " << dir_.string() << '\n';
  }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void cmd_interp_error(const Common& c, const std::string& method, std::vector<int> orders, int sep_order) {
  const auto start = std::chrono::steady_clock::now();
  const auto cfg = resolve(c);
  const auto kind = method == "bin" ? wdoa::CorrKind::bin : wdoa::CorrKind::chebyshev;
  if (orders.empty()) {
    for (int p = 2; p <= 7; ++p) orders.push_back(kind == wdoa::CorrKind::bin ? 10 * p : p);
  }
  Outputs out(cfg.output_dir);
  const auto report = wdoa::run_interp_error(cfg, kind, orders);
  for (std::size_t i = 0; i < orders.size(); ++i) {
    auto f = out.open("interp_" + method + "_" + std::to_string(orders[i]) + ".csv");
    wdoa::write_interp_curve_csv(cfg, report.curves[i], f);
  }
  {
    auto f = out.open("interp_" + method + "_summary.csv");
    wdoa::write_interp_summary_csv(cfg, report, f);
  }
  if (kind == wdoa::CorrKind::chebyshev) {
    std::vector<double> seps;
    for (int i = 1; i <= 50; ++i) seps.push_back(0.02 * i);
    const double gamma1 = *std::min_element(cfg.scenario.gamma_true.begin(), cfg.scenario.gamma_true.end());
    const auto sweep = wdoa::separation_sweep(cfg.array(), sep_order, gamma1, seps);
    auto f = out.open("interp_separation_" + std::to_string(sep_order) + ".csv");
    wdoa::write_separation_csv(cfg, sep_order, sweep, f);
  }
  out.finish(cfg, "interp-error", elapsed(start));
}

void cmd_rmse(const Common& c) {
  const auto start = std::chrono::steady_clock::now();
  const auto cfg = resolve(c);
  const auto table = wdoa::run_rmse(cfg);
  for (const auto& row : table) {
    if (row.failures > 0) {
      std::cerr << row.estimator << ':' << row.order << " at " << row.snr_db << " dB: " << row.failures
                << " trial(s) failed and were excluded\n";
    }
  }
  Outputs out(cfg.output_dir);
  auto f = out.open("rmse.csv");
  wdoa::write_rmse_csv(cfg, table, f);
  f.close();
  out.finish(cfg, "rmse", elapsed(start));
}

void cmd_detect(const Common& c) {
  const auto start = std::chrono::steady_clock::now();
  const auto cfg = resolve(c);
  const auto rows = wdoa::run_detect(cfg);
  Outputs out(cfg.output_dir);
  auto f = out.open("detect.csv");
  wdoa::write_detect_csv(cfg, rows, f);
  f.close();
  out.finish(cfg, "detect", elapsed(start));
}

void cmd_simulate(const Common& c, std::optional<double> snr) {
  const auto start = std::chrono::steady_clock::now();
  auto cfg = resolve(c);
  auto scenario = cfg.scenario;
  scenario.seed = cfg.seed;
  if (snr) scenario.snr_db = *snr;
  const auto set = wdoa::generate_snapshots(scenario, cfg.array());
  Outputs out(cfg.output_dir);
  auto f = out.open("snapshots.csv");
  f << "# config_hash=" << wdoa::config_hash(cfg) << " wdoa=" << wdoa::kVersion << '\n';
  wdoa::write_snapshots_csv(set, f);
  f.close();
  out.finish(cfg, "simulate", elapsed(start));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wideband DOA estimation studies"};
  app.require_subcommand(1);

  Common c;
  std::string method = "chebyshev";
  std::vector<int> orders;
  int sep_order = 6;
  std::optional<double> snr;

  auto* interp = app.add_subcommand("interp-error", "Projector interpolation error versus frequency index");
  add_common(interp, c);
  interp->add_option("--method", method, "chebyshev or bin")->check(CLI::IsMember({"chebyshev", "bin"}));
  interp->add_option("--orders", orders, "Interpolation orders")->delimiter(',');
  interp->add_option("--separation-order", sep_order, "Chebyshev order of the two-wave separation sweep");

  auto* rmse = app.add_subcommand("rmse", "Known-K RMSE versus SNR");
  add_common(rmse, c);

  auto* detect = app.add_subcommand("detect", "Detection probability and RMSE versus SNR");
  add_common(detect, c);

  auto* simulate = app.add_subcommand("simulate", "Write one simulated snapshot set");
  add_common(simulate, c);
  simulate->add_option("--snr", snr, "SNR in dB (default: snr_db from the config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*interp) cmd_interp_error(c, method, orders, sep_order);
    if (*rmse) cmd_rmse(c);
    if (*detect) cmd_detect(c);
    if (*simulate) cmd_simulate(c, snr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
