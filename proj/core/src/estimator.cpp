#include "wdoa/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "wdoa/error.hpp"

namespace wdoa {

void DetectorConfig::validate() const {
  if (!(pfa > 0.0 && pfa < 1.0)) throw InvalidArgument("DetectorConfig: pfa must lie in (0, 1)");
  if (!(noise_var > 0.0)) throw InvalidArgument("DetectorConfig: noise_var must be positive");
}

DetectorConfig DetectorConfig::for_snapshots(const SnapshotSet& set, double pfa, std::optional<double> clamp_snr_db) {
  DetectorConfig det;
  det.pfa = pfa;
  det.clamp_snr_db = clamp_snr_db;
  det.noise_var = set.noise_var;
  if (clamp_snr_db && set.signal_power > 0.0) {
    det.noise_var = std::max(det.noise_var, set.signal_power * std::pow(10.0, -*clamp_snr_db / 10.0));
  }
  return det;
}

double detection_threshold(const DetectorConfig& det, int sensors, int components, int index_count) {
  det.validate();
  if (components < 0 || components >= sensors) throw InvalidArgument("detection_threshold: requires 0 <= K < M");
  if (index_count < 1) throw InvalidArgument("detection_threshold: index_count must be >= 1");
  const long dof = 2L * (sensors - components) * index_count;
  return 0.5 * det.noise_var * chi2_inv_cdf(1.0 - det.pfa, dof);
}

namespace {

// Minimum of the search function for one more wave beside `fixed`.
double best_additional(const CorrSet& corr, std::span<const double> fixed, const SearchConfig& search) {
  const auto ps = extended_beamformer_grid(corr, fixed, search, ExtendedForm::exact);
  return locate_minima(ps, 1, search).front().gamma;
}

}  // namespace

Decision detect_step(const CorrSet& corr, std::span<const double> current, const DetectorConfig& det,
                     const SearchConfig& search) {
  Decision d;
  const int k = static_cast<int>(current.size());
  d.cost = compressed_cost(corr, current);
  d.threshold = detection_threshold(det, corr.array.sensors(), k, corr.index_count());
  if (d.cost < d.threshold) return d;
  try {
    d.gamma_new = best_additional(corr, current, search);
    d.add = true;
  } catch (const MinimaShortage& e) {
    d.diagnostic = e.what();
  }
  return d;
}

GradientHessian mvp_gradient_hessian(const CorrSet& corr, std::span<const double> gamma) {
  const auto k = static_cast<Eigen::Index>(gamma.size());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(k);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k, k);
  if (k == 0) return {g, h};

  for (int p = 0; p < corr.order(); ++p) {
    const double rho = corr.abscissas[p];
    const CMatrix& rp = corr.matrices[p];
    const auto f = thin_qr(steering_matrix(corr.array, rho, gamma));
    const CMatrix d = steering_derivative(corr.array, rho, gamma);
    const auto tri = f.r.triangularView<Eigen::Upper>();

    // A^+ R_p = R^{-1} Q^H R_p and P_perp D = D - Q Q^H D.
    const CMatrix qh_rp = f.q.adjoint() * rp;
    const CMatrix pinv_rp = tri.solve(qh_rp);
    const CMatrix perp_d = d - f.q * (f.q.adjoint() * d);
    for (Eigen::Index i = 0; i < k; ++i) g(i) -= 2.0 * (pinv_rp.row(i) * perp_d.col(i)).value().real();

    // A^+ R_p (A^+)^H = R^{-1} (Q^H R_p Q) R^{-H}.
    const CMatrix x = tri.solve(qh_rp * f.q);
    const CMatrix sandwich = tri.solve(x.adjoint()).adjoint();
    const CMatrix gram = perp_d.adjoint() * perp_d;
    h += 2.0 * gram.transpose().cwiseProduct(sandwich).real();
  }
  h = 0.5 * (h + h.transpose()).eval();
  return {g, h};
}

namespace {

bool admissible(std::span<const double> gamma) {
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (!(std::abs(gamma[i]) <= 1.0)) return false;
    for (std::size_t j = i + 1; j < gamma.size(); ++j) {
      if (std::abs(gamma[i] - gamma[j]) < 1e-9) return false;
    }
  }
  return true;
}

// Solves H x = g, adding lambda I while H fails to be positive definite.
Eigen::VectorXd newton_direction(const Eigen::MatrixXd& h, const Eigen::VectorXd& g, bool& regularized) {
  Eigen::LLT<Eigen::MatrixXd> llt(h);
  if (llt.info() == Eigen::Success) return llt.solve(g);
  regularized = true;
  const auto k = h.rows();
  double lambda = 1e-8 * std::max(std::abs(h.trace()), h.cwiseAbs().maxCoeff()) / static_cast<double>(k);
  if (!(lambda > 0.0)) lambda = 1e-12;
  const double shift = std::max(0.0, -h.diagonal().minCoeff());
  for (int attempt = 0; attempt < 60; ++attempt) {
    const Eigen::MatrixXd hr = h + (shift + lambda) * Eigen::MatrixXd::Identity(k, k);
    Eigen::LLT<Eigen::MatrixXd> reg(hr);
    if (reg.info() == Eigen::Success) return reg.solve(g);
    lambda *= 10.0;
  }
  return g;
}

}  // namespace

MvpState mvp_refine(const CorrSet& corr, DoaVector gamma_init, const MvpOptions& opts) {
  check_doa(gamma_init);
  MvpState st;
  st.gamma = std::move(gamma_init);
  st.cost = compressed_cost(corr, st.gamma);
  st.cost_trace.push_back(st.cost);
  if (st.gamma.empty()) {
    st.converged = true;
    return st;
  }

  for (int it = 0; it < opts.max_iter; ++it) {
    const auto gh = mvp_gradient_hessian(corr, st.gamma);
    if (gh.gradient.squaredNorm() == 0.0) {
      st.converged = true;
      break;
    }
    const Eigen::VectorXd dir = newton_direction(gh.hessian, gh.gradient, st.regularized);

    double mu = 1.0;
    bool accepted = false;
    DoaVector cand(st.gamma.size());
    double cand_cost = 0.0;
    for (int halving = 0; halving <= opts.max_halvings; ++halving, mu *= 0.5) {
      for (std::size_t i = 0; i < cand.size(); ++i) cand[i] = st.gamma[i] - mu * dir(static_cast<Eigen::Index>(i));
      if (!admissible(cand)) continue;
      try {
        cand_cost = compressed_cost(corr, cand);
      } catch (const SingularMatrixError&) {
        continue;
      }
      if (cand_cost < st.cost) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      st.converged = true;
      break;
    }
    const double decrease = st.cost - cand_cost;
    const double previous = st.cost;
    st.gamma = cand;
    st.cost = cand_cost;
    st.mu = mu;
    ++st.iterations;
    st.cost_trace.push_back(st.cost);
    if (decrease <= opts.rel_tol * std::abs(previous)) {
      st.converged = true;
      break;
    }
  }
  return st;
}

namespace {

void append_refine(EstimationResult& res, const MvpState& st, double threshold) {
  for (std::size_t a = 1; a < st.cost_trace.size(); ++a) {
    res.trace.push_back({StepKind::refine, st.components(), static_cast<int>(a), st.cost_trace[a], threshold,
                         st.cost_trace[a] > threshold});
  }
}

}  // namespace

EstimationResult run_detection_estimation(const CorrSet& corr, const DetectorConfig& det,
                                          const SearchConfig& search, const MvpOptions& opts) {
  const int sensors = corr.array.sensors();
  EstimationResult res;
  DoaVector gamma;
  bool all_converged = true;
  for (;;) {
    const auto k = static_cast<int>(gamma.size());
    const auto d = detect_step(corr, gamma, det, search);
    res.trace.push_back({StepKind::detect, k, 0, d.cost, d.threshold, d.cost >= d.threshold});
    if (!d.add) break;
    if (k + 1 >= sensors) throw MaxComponentsError(sensors);
    gamma.push_back(d.gamma_new);
    const auto st = mvp_refine(corr, gamma, opts);
    all_converged = all_converged && st.converged;
    gamma = st.gamma;
    append_refine(res, st, k + 1 < sensors ? detection_threshold(det, sensors, k + 1, corr.index_count()) : 0.0);
  }
  std::sort(gamma.begin(), gamma.end());
  res.gamma_hat = std::move(gamma);
  res.k_hat = static_cast<int>(res.gamma_hat.size());
  res.converged = all_converged;
  return res;
}

EstimationResult estimate_known_k(const CorrSet& corr, int components, const DetectorConfig& det,
                                  const SearchConfig& search, const MvpOptions& opts) {
  const int sensors = corr.array.sensors();
  if (components < 0 || components >= sensors) throw InvalidArgument("estimate_known_k: requires 0 <= K < M");
  EstimationResult res;
  res.converged = true;
  DoaVector gamma;
  for (int k = 0; k < components; ++k) {
    const double cost = compressed_cost(corr, gamma);
    const double threshold = detection_threshold(det, sensors, k, corr.index_count());
    res.trace.push_back({StepKind::detect, k, 0, cost, threshold, cost >= threshold});
    gamma.push_back(best_additional(corr, gamma, search));
    const auto st = mvp_refine(corr, gamma, opts);
    res.converged = res.converged && st.converged;
    gamma = st.gamma;
    append_refine(res, st, detection_threshold(det, sensors, k + 1, corr.index_count()));
  }
  std::sort(gamma.begin(), gamma.end());
  res.gamma_hat = std::move(gamma);
  res.k_hat = components;
  return res;
}

nlohmann::json to_json(const EstimationResult& result) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& e : result.trace) {
    trace.push_back({{"step", e.kind == StepKind::detect ? "detect" : "refine"},
                     {"K", e.components},
                     {"alpha", e.iteration},
                     {"cost", e.cost},
                     {"threshold", e.threshold},
                     {"exceeded", e.exceeded}});
  }
  return {{"gamma_hat", result.gamma_hat}, {"K_hat", result.k_hat}, {"converged", result.converged}, {"trace", trace}};
}

EstimationResult estimation_result_from_json(const nlohmann::json& j) {
  EstimationResult r;
  r.gamma_hat = j.at("gamma_hat").get<DoaVector>();
  r.k_hat = j.at("K_hat").get<int>();
  r.converged = j.at("converged").get<bool>();
  for (const auto& e : j.at("trace")) {
    r.trace.push_back({e.at("step").get<std::string>() == "detect" ? StepKind::detect : StepKind::refine,
                       e.at("K").get<int>(), e.at("alpha").get<int>(), e.at("cost").get<double>(),
                       e.at("threshold").get<double>(), e.at("exceeded").get<bool>()});
  }
  if (static_cast<int>(r.gamma_hat.size()) != r.k_hat) throw InvalidArgument("EstimationResult: K_hat mismatch");
  return r;
}

}  // namespace wdoa
