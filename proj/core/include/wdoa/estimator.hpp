#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wdoa/cost.hpp"
#include "wdoa/search1d.hpp"

namespace wdoa {

/// Parameters of the chi-squared residual test.
struct DetectorConfig {
  double pfa = 0.01;
  double noise_var = 1.0;
  /// When set, the test variance is never below the noise variance that this
  /// SNR would imply for the observed signal power.
  std::optional<double> clamp_snr_db = 37.0;

  void validate() const;

  /// Detector for a simulated data set: the true noise variance, clamped.
  static DetectorConfig for_snapshots(const SnapshotSet& set, double pfa = 0.01,
                                      std::optional<double> clamp_snr_db = 37.0);
};

/// A = (sigma^2 / 2) F^{-1}(1 - P_FA) with F the chi-squared CDF on
/// 2 (M - K) n_idx degrees of freedom.
double detection_threshold(const DetectorConfig& det, int sensors, int components, int index_count);

struct Decision {
  bool add = false;
  double gamma_new = 0.0;
  double cost = 0.0;
  double threshold = 0.0;
  std::string diagnostic;
};

/// Tests the residual of `current`; when it exceeds the threshold, locates the
/// best additional wave on the extended search function.
Decision detect_step(const CorrSet& corr, std::span<const double> current, const DetectorConfig& det,
                     const SearchConfig& search);

struct GradientHessian {
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;  // Gauss-Newton approximation, symmetric
};

/// Gradient and approximate Hessian of the compressed cost, evaluated from
/// the thin QR factors of each A(rho_p, gamma).
GradientHessian mvp_gradient_hessian(const CorrSet& corr, std::span<const double> gamma);

struct MvpOptions {
  double rel_tol = 1e-10;
  int max_iter = 50;
  int max_halvings = 40;
};

struct MvpState {
  DoaVector gamma;
  int iterations = 0;  // accepted updates
  double cost = 0.0;
  double mu = 1.0;     // step scale of the last accepted update
  bool converged = false;
  bool regularized = false;
  std::vector<double> cost_trace;  // initial cost, then one entry per accepted update

  int components() const noexcept { return static_cast<int>(gamma.size()); }
};

/// gamma <- gamma - mu H^{-1} g, halving mu until the cost decreases.
MvpState mvp_refine(const CorrSet& corr, DoaVector gamma_init, const MvpOptions& opts = {});

enum class StepKind { detect, refine };

struct TraceEntry {
  StepKind kind;
  int components;
  int iteration;
  double cost;
  double threshold;
  bool exceeded;
};

struct EstimationResult {
  DoaVector gamma_hat;
  int k_hat = 0;
  std::vector<TraceEntry> trace;
  bool converged = false;
};

/// More components requested than the array can resolve.
class MaxComponentsError : public std::runtime_error {
 public:
  explicit MaxComponentsError(int sensors)
      : std::runtime_error("model saturated: detection requested " + std::to_string(sensors) +
                           " components on " + std::to_string(sensors) + " sensors") {}
};

/// Alternates detect_step and mvp_refine from an empty vector until the
/// residual test passes. gamma_hat is returned in ascending order.
EstimationResult run_detection_estimation(const CorrSet& corr, const DetectorConfig& det,
                                          const SearchConfig& search, const MvpOptions& opts = {});

/// Exactly K add-then-refine rounds, without the residual test. The detector
/// only annotates the trace.
EstimationResult estimate_known_k(const CorrSet& corr, int components, const DetectorConfig& det,
                                  const SearchConfig& search, const MvpOptions& opts = {});

nlohmann::json to_json(const EstimationResult& result);
EstimationResult estimation_result_from_json(const nlohmann::json& j);

}  // namespace wdoa
