#include "wdoa/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <thread>

#include "wdoa/error.hpp"

namespace wdoa {

InterpErrorReport run_interp_error(const ExperimentConfig& cfg, CorrKind method, const std::vector<int>& orders) {
  const ArrayConfig array = cfg.array();
  InterpErrorReport rep{method, orders, {}};
  rep.curves.resize(orders.size());
  parallel_for(static_cast<int>(orders.size()), [&](int i) {
    rep.curves[i] = interp_error_sweep(array, cfg.scenario.gamma_true, method, orders[i]);
  });
  return rep;
}

int min_order_reaching(const ArrayConfig& cfg, std::span<const double> gamma, CorrKind method, double threshold_db,
                       int max_order) {
  for (int order = 1; order <= max_order; ++order) {
    if (interp_error_sweep(cfg, gamma, method, order).max_error_db() <= threshold_db) return order;
  }
  return -1;
}

std::vector<SeparationPoint> separation_sweep(const ArrayConfig& cfg, int order, double gamma1,
                                              std::span<const double> separations) {
  std::vector<SeparationPoint> out(separations.size());
  parallel_for(static_cast<int>(separations.size()), [&](int i) {
    const double g[] = {gamma1, gamma1 + separations[i]};
    out[i] = {separations[i], interp_error_sweep(cfg, g, CorrKind::chebyshev, order).max_error};
  });
  return out;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  const int workers = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, n);
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

ScenarioConfig trial_scenario(const ExperimentConfig& cfg, int trial, double snr_db) {
  ScenarioConfig s = cfg.scenario;
  s.snr_db = snr_db;
  s.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(trial));
  return s;
}

TrialOutcome run_estimator(const EstimatorSpec& spec, const SnapshotSet& data, int known_k,
                           const ExperimentConfig& cfg) {
  TrialOutcome out;
  try {
    const auto det = DetectorConfig::for_snapshots(data, cfg.pfa, cfg.clamp_snr_db);
    if (spec.kind == EstimatorKind::ic_music) {
      if (known_k < 1) throw InvalidArgument("IC-MUSIC needs a known number of waves");
      const auto corr = compress_bin(data, spec.order);
      const auto ps = music_pseudospectrum_grid(corr, known_k, cfg.search);
      for (const auto& m : locate_minima(ps, known_k, cfg.search)) out.gamma_hat.push_back(m.gamma);
      std::sort(out.gamma_hat.begin(), out.gamma_hat.end());
      out.k_hat = known_k;
    } else {
      const auto corr =
          spec.kind == EstimatorKind::bin_ml ? compress_bin(data, spec.order) : compress_cheb(data, spec.order);
      const auto res = known_k >= 0 ? estimate_known_k(corr, known_k, det, cfg.search)
                                    : run_detection_estimation(corr, det, cfg.search);
      out.gamma_hat = res.gamma_hat;
      out.k_hat = res.k_hat;
    }
    out.ok = true;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

std::vector<double> rmse_sorted(std::span<const DoaVector> estimates, DoaVector truth) {
  std::sort(truth.begin(), truth.end());
  std::vector<double> acc(truth.size(), 0.0);
  int used = 0;
  for (auto est : estimates) {
    if (est.size() != truth.size()) continue;
    std::sort(est.begin(), est.end());
    for (std::size_t k = 0; k < truth.size(); ++k) acc[k] += (est[k] - truth[k]) * (est[k] - truth[k]);
    ++used;
  }
  for (double& a : acc) a = used > 0 ? std::sqrt(a / used) : std::numeric_limits<double>::quiet_NaN();
  return acc;
}

RmseTable run_rmse(const ExperimentConfig& cfg) {
  cfg.validate();
  const ArrayConfig array = cfg.array();
  const int k_true = cfg.scenario.signals();
  const auto n_est = cfg.estimators.size();
  RmseTable table;
  for (double snr : cfg.snr_grid_db) {
    std::vector<std::vector<TrialOutcome>> outcomes(static_cast<std::size_t>(cfg.trials));
    parallel_for(cfg.trials, [&](int t) {
      const auto data = generate_snapshots(trial_scenario(cfg, t, snr), array);
      auto& row = outcomes[t];
      row.reserve(n_est);
      for (const auto& spec : cfg.estimators) row.push_back(run_estimator(spec, data, k_true, cfg));
    });
    for (std::size_t e = 0; e < n_est; ++e) {
      std::vector<DoaVector> good;
      int failures = 0;
      for (const auto& row : outcomes) {
        if (row[e].ok) good.push_back(row[e].gamma_hat);
        else ++failures;
      }
      RmseRow r;
      r.estimator = to_string(cfg.estimators[e].kind);
      r.order = cfg.estimators[e].order;
      r.snr_db = snr;
      r.rmse = rmse_sorted(good, cfg.scenario.gamma_true);
      r.trials_used = static_cast<int>(good.size());
      r.failures = failures;
      r.detected_fraction = static_cast<double>(good.size()) / cfg.trials;
      table.push_back(std::move(r));
    }
  }
  return table;
}

std::vector<DetectRow> run_detect(const ExperimentConfig& cfg) {
  cfg.validate();
  const ArrayConfig array = cfg.array();
  const int k_true = cfg.scenario.signals();
  std::vector<EstimatorSpec> ml;
  for (const auto& e : cfg.estimators) {
    if (e.kind != EstimatorKind::ic_music) ml.push_back(e);
  }
  std::vector<DetectRow> rows;
  for (double snr : cfg.snr_grid_db) {
    std::vector<std::vector<TrialOutcome>> outcomes(static_cast<std::size_t>(cfg.trials));
    parallel_for(cfg.trials, [&](int t) {
      const auto data = generate_snapshots(trial_scenario(cfg, t, snr), array);
      for (const auto& spec : ml) outcomes[t].push_back(run_estimator(spec, data, -1, cfg));
    });
    for (std::size_t e = 0; e < ml.size(); ++e) {
      DetectRow r;
      r.estimator = to_string(ml[e].kind);
      r.order = ml[e].order;
      r.snr_db = snr;
      r.trials = cfg.trials;
      std::vector<DoaVector> hits;
      for (const auto& row : outcomes) {
        if (!row[e].ok) {
          ++r.failures;
        } else if (row[e].k_hat == k_true) {
          hits.push_back(row[e].gamma_hat);
        }
      }
      r.detected = static_cast<int>(hits.size());
      r.p_detect = static_cast<double>(r.detected) / cfg.trials;
      r.rmse = rmse_sorted(hits, cfg.scenario.gamma_true);
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

namespace {

void preamble(const ExperimentConfig& cfg, std::ostream& out) {
  out << "# config_hash=" << config_hash(cfg) << " wdoa=" << kVersion << '\n';
  out << std::setprecision(12);
}

}  // namespace

void write_rmse_csv(const ExperimentConfig& cfg, const RmseTable& table, std::ostream& out) {
  preamble(cfg, out);
  const auto k = cfg.scenario.signals();
  out << "estimator,order,snr_db";
  for (int i = 1; i <= k; ++i) out << ",rmse_" << i << ",rmse_db_" << i;
  out << ",trials_used,failures,detected_fraction\n";
  for (const auto& r : table) {
    out << r.estimator << ',' << r.order << ',' << r.snr_db;
    for (double v : r.rmse) out << ',' << v << ',' << amplitude_db(v);
    out << ',' << r.trials_used << ',' << r.failures << ',' << r.detected_fraction << '\n';
  }
}

void write_detect_csv(const ExperimentConfig& cfg, const std::vector<DetectRow>& rows, std::ostream& out) {
  preamble(cfg, out);
  const auto k = cfg.scenario.signals();
  out << "estimator,order,snr_db,p_detect";
  for (int i = 1; i <= k; ++i) out << ",rmse_db_" << i;
  out << ",detected,failures,trials\n";
  for (const auto& r : rows) {
    out << r.estimator << ',' << r.order << ',' << r.snr_db << ',' << r.p_detect;
    for (double v : r.rmse) out << ',' << amplitude_db(v);
    out << ',' << r.detected << ',' << r.failures << ',' << r.trials << '\n';
  }
}

void write_interp_curve_csv(const ExperimentConfig& cfg, const InterpErrorCurve& curve, std::ostream& out) {
  preamble(cfg, out);
  out << "r,error_db\n";
  for (std::size_t i = 0; i < curve.index.size(); ++i) out << curve.index[i] << ',' << amplitude_db(curve.error[i]) << '\n';
}

void write_interp_summary_csv(const ExperimentConfig& cfg, const InterpErrorReport& report, std::ostream& out) {
  preamble(cfg, out);
  out << "method,order,max_error_db\n";
  for (std::size_t i = 0; i < report.orders.size(); ++i) {
    out << to_string(report.method) << ',' << report.orders[i] << ',' << report.curves[i].max_error_db() << '\n';
  }
}

void write_separation_csv(const ExperimentConfig& cfg, int order, const std::vector<SeparationPoint>& sweep,
                          std::ostream& out) {
  preamble(cfg, out);
  out << "order,separation,max_error_db\n";
  for (const auto& p : sweep) out << order << ',' << p.separation << ',' << amplitude_db(p.max_error) << '\n';
}

nlohmann::json run_manifest(const ExperimentConfig& cfg, const std::string& command, double seconds,
                            const std::vector<std::string>& outputs) {
  return {{"command", command},
          {"version", kVersion},
          {"config_hash", config_hash(cfg)},
          {"config", dump_config(cfg)},
          {"elapsed_seconds", seconds},
          {"outputs", outputs}};
}

}  // namespace wdoa
