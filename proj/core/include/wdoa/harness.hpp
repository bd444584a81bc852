#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wdoa/config.hpp"

namespace wdoa {

// ---- interpolation error studies ------------------------------------------

struct InterpErrorReport {
  CorrKind method;
  std::vector<int> orders;
  std::vector<InterpErrorCurve> curves;  // one per order
};

/// Projector interpolation error versus frequency index at the scenario's
/// gamma_true, one curve per order.
InterpErrorReport run_interp_error(const ExperimentConfig& cfg, CorrKind method, const std::vector<int>& orders);

/// Smallest order in [1, max_order] whose maximum error is at or below
/// threshold_db, or -1.
int min_order_reaching(const ArrayConfig& cfg, std::span<const double> gamma, CorrKind method, double threshold_db,
                       int max_order);

struct SeparationPoint {
  double separation;
  double max_error;
};

/// Two waves at gamma1 and gamma1 + separation; maximum Chebyshev error over
/// all indices for each separation.
std::vector<SeparationPoint> separation_sweep(const ArrayConfig& cfg, int order, double gamma1,
                                              std::span<const double> separations);

// ---- Monte-Carlo studies ----------------------------------------------------

struct TrialOutcome {
  bool ok = false;
  DoaVector gamma_hat;
  int k_hat = 0;
  std::string error;
};

/// One estimator on one data set. known_k < 0 runs the full detection loop
/// (not available for IC-MUSIC).
TrialOutcome run_estimator(const EstimatorSpec& spec, const SnapshotSet& data, int known_k,
                           const ExperimentConfig& cfg);

/// Scenario of trial `trial` at the given SNR; the seed depends only on the
/// experiment seed and the trial index.
ScenarioConfig trial_scenario(const ExperimentConfig& cfg, int trial, double snr_db);

struct RmseRow {
  std::string estimator;
  int order = 0;
  double snr_db = 0.0;
  std::vector<double> rmse;  // per component, gamma_true sorted ascending
  int trials_used = 0;
  int failures = 0;
  double detected_fraction = 0.0;
};
using RmseTable = std::vector<RmseRow>;

/// Known-K estimation for every (estimator, SNR); all estimators see the same
/// data in a given trial.
RmseTable run_rmse(const ExperimentConfig& cfg);

struct DetectRow {
  std::string estimator;
  int order = 0;
  double snr_db = 0.0;
  double p_detect = 0.0;     // fraction of trials with K_hat == K_true
  std::vector<double> rmse;  // over the detected trials
  int detected = 0;
  int failures = 0;
  int trials = 0;
};

/// Detection-estimation with unknown K for every ML estimator in the config.
std::vector<DetectRow> run_detect(const ExperimentConfig& cfg);

/// Per-component RMSE after sorting both sides; trials with the wrong length
/// are skipped.
std::vector<double> rmse_sorted(std::span<const DoaVector> estimates, DoaVector truth);

/// Runs fn(i) for i in [0, n) on a worker pool.
void parallel_for(int n, const std::function<void(int)>& fn);

// ---- output -----------------------------------------------------------------

void write_rmse_csv(const ExperimentConfig& cfg, const RmseTable& table, std::ostream& out);
void write_detect_csv(const ExperimentConfig& cfg, const std::vector<DetectRow>& rows, std::ostream& out);
void write_interp_curve_csv(const ExperimentConfig& cfg, const InterpErrorCurve& curve, std::ostream& out);
void write_interp_summary_csv(const ExperimentConfig& cfg, const InterpErrorReport& report, std::ostream& out);
void write_separation_csv(const ExperimentConfig& cfg, int order, const std::vector<SeparationPoint>& sweep,
                          std::ostream& out);

/// Run manifest: command, config echo and hash, library version, timings.
nlohmann::json run_manifest(const ExperimentConfig& cfg, const std::string& command, double seconds,
                            const std::vector<std::string>& outputs);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace wdoa
