#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "wdoa/error.hpp"
#include "wdoa/estimator.hpp"

using namespace wdoa;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SnapshotSet scenario_set(double snr_db, std::uint64_t seed = 1) {
  auto sc = ScenarioConfig::three_waves();
  sc.snr_db = snr_db;
  sc.seed = seed;
  return generate_snapshots(sc, ArrayConfig::uniform_linear(10));
}

SnapshotSet single_wave_set(double gamma, double snr_db, std::uint64_t seed = 1) {
  auto sc = ScenarioConfig::three_waves();
  sc.amplitudes = {1.0};
  sc.delays = {0.0};
  sc.gamma_true = {gamma};
  sc.snr_db = snr_db;
  sc.seed = seed;
  return generate_snapshots(sc, ArrayConfig::uniform_linear(10));
}

// unit-variance complex noise on a narrow band of a small array
SnapshotSet noise_set(int sensors, int r1, int r2, std::uint64_t seed) {
  auto cfg = ArrayConfig::uniform_linear(sensors);
  cfg.r1 = r1;
  cfg.r2 = r2;
  SnapshotSet set;
  set.array = cfg;
  set.noise_var = 1.0;
  set.data.resize(sensors, cfg.index_count());
  ComplexGaussianRng rng(seed);
  for (int j = 0; j < set.data.cols(); ++j) {
    for (int i = 0; i < sensors; ++i) set.data(i, j) = rng();
  }
  return set;
}

DetectorConfig exact_detector(double noise_var) {
  DetectorConfig det;
  det.noise_var = noise_var;
  det.clamp_snr_db.reset();
  return det;
}

// Wilson-Hilferty approximation of the 0.99 chi-squared quantile
double wilson_hilferty_99(double dof) {
  constexpr double z = 2.3263478740408408;
  const double c = 2.0 / (9.0 * dof);
  return dof * std::pow(1.0 - c + z * std::sqrt(c), 3);
}

double binomial_upper(int n, double p) { return n * p + 3.0 * std::sqrt(n * p * (1.0 - p)); }

std::vector<double> random_doa(std::mt19937& gen, int k) {
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  std::vector<double> g;
  while (static_cast<int>(g.size()) < k) {
    const double c = u(gen);
    bool far = true;
    for (double x : g) far = far && std::abs(x - c) >= 0.05;
    if (far) g.push_back(c);
  }
  return g;
}

double max_abs_diff(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

const std::vector<double> kTruth{-0.71, -0.63, 0.27};

}  // namespace

TEST(DetectionThreshold, TwoDofClosedForm) {
  for (double pfa : {0.01, 0.05, 0.3}) {
    auto det = exact_detector(1.7);
    det.pfa = pfa;
    EXPECT_NEAR(detection_threshold(det, 2, 1, 1), 0.5 * 1.7 * (-2.0 * std::log(pfa)), 1e-10);
  }
}

TEST(DetectionThreshold, ScenarioDofMatchesWilsonHilferty) {
  const auto det = exact_detector(1.0);
  const double dof = 2.0 * (10 - 3) * 1638;
  EXPECT_EQ(dof, 22932.0);
  const double a = detection_threshold(det, 10, 3, 1638);
  EXPECT_NEAR(a, 0.5 * wilson_hilferty_99(dof), 1e-5 * a);
}

TEST(DetectionThreshold, LinearInNoiseVariance) {
  const double a = detection_threshold(exact_detector(0.3), 10, 2, 100);
  const double b = detection_threshold(exact_detector(0.6), 10, 2, 100);
  EXPECT_NEAR(b, 2.0 * a, 1e-12 * b);
}

TEST(DetectionThreshold, DecreasesWithComponents) {
  const auto det = exact_detector(1.0);
  for (int k = 1; k < 10; ++k) EXPECT_LT(detection_threshold(det, 10, k, 50), detection_threshold(det, 10, k - 1, 50));
}

TEST(DetectionThreshold, RejectsBadArguments) {
  const auto det = exact_detector(1.0);
  EXPECT_THROW(detection_threshold(det, 10, 10, 1), InvalidArgument);
  EXPECT_THROW(detection_threshold(det, 10, -1, 1), InvalidArgument);
  EXPECT_THROW(detection_threshold(det, 10, 0, 0), InvalidArgument);
  auto bad = det;
  bad.pfa = 1.0;
  EXPECT_THROW(detection_threshold(bad, 10, 0, 1), InvalidArgument);
  bad = det;
  bad.noise_var = 0.0;
  EXPECT_THROW(detection_threshold(bad, 10, 0, 1), InvalidArgument);
}

TEST(DetectorConfigTest, ClampRaisesNoiseVarianceAtHighSnr) {
  const auto set = scenario_set(kInf);
  const auto det = DetectorConfig::for_snapshots(set);
  EXPECT_NEAR(det.noise_var, set.signal_power * std::pow(10.0, -3.7), 1e-12 * set.signal_power);
  const auto low = scenario_set(10.0);
  EXPECT_DOUBLE_EQ(DetectorConfig::for_snapshots(low).noise_var, low.noise_var);
}

TEST(DetectStep, NoiselessSingleWaveFromEmpty) {
  const auto set = single_wave_set(0.27, kInf);
  const auto corr = compress_cheb(set, 6);
  const auto d = detect_step(corr, std::vector<double>{}, DetectorConfig::for_snapshots(set), SearchConfig{});
  ASSERT_TRUE(d.add);
  EXPECT_NEAR(d.gamma_new, 0.27, 1e-3);
  EXPECT_GT(d.cost, d.threshold);
}

TEST(DetectStep, StopsAtTruthWhenNoiseless) {
  const auto set = scenario_set(kInf);
  const auto corr = compress_cheb(set, 6);
  const auto d = detect_step(corr, kTruth, DetectorConfig::for_snapshots(set), SearchConfig{});
  EXPECT_FALSE(d.add);
  EXPECT_LT(d.cost, d.threshold);
}

TEST(DetectStep, PureNoiseFalseAlarmRate) {
  const int trials = 1000;
  int alarms = 0;
  for (int t = 0; t < trials; ++t) {
    const auto corr = compress_cheb(noise_set(4, -8, 8, mix_seed(11, t)), 6);
    alarms += detect_step(corr, std::vector<double>{}, exact_detector(1.0), SearchConfig{}).add ? 1 : 0;
  }
  EXPECT_LE(alarms, binomial_upper(trials, 0.01));
  EXPECT_GE(alarms, 1);
}

TEST(DetectStep, CalibratedAtTrueComponents) {
  // noise-only residual tested at a fixed one-component vector
  const int trials = 1000;
  int exceed = 0;
  for (int t = 0; t < trials; ++t) {
    const auto corr = compress_cheb(noise_set(4, -8, 8, mix_seed(12, t)), 12);
    exceed += detect_step(corr, std::vector<double>{0.3}, exact_detector(1.0), SearchConfig{}).add ? 1 : 0;
  }
  EXPECT_LE(exceed, binomial_upper(trials, 0.01));
  EXPECT_GE(exceed, 1);
}

TEST(MvpGradient, MatchesCentralDifferences) {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto set = scenario_set(10.0, mix_seed(3, trial));
    const auto corr = compress_cheb(set, 6);
    const auto gamma = random_doa(gen, 1 + trial % 3);
    const auto gh = mvp_gradient_hessian(corr, gamma);
    const double h = 1e-6;
    Eigen::VectorXd fd(gamma.size());
    for (std::size_t k = 0; k < gamma.size(); ++k) {
      auto up = gamma, dn = gamma;
      up[k] += h;
      dn[k] -= h;
      fd(static_cast<int>(k)) = (cost_cheb(corr, up) - cost_cheb(corr, dn)) / (2 * h);
    }
    EXPECT_LE((gh.gradient - fd).norm(), 1e-5 * fd.norm()) << trial;
  }
}

TEST(MvpGradient, HessianSymmetricAndPositiveNearOptimum) {
  const auto set = scenario_set(kInf);
  const auto corr = compress_cheb(set, 6);
  const std::vector<double> gamma{-0.71 + 1e-3, -0.63 - 1e-3, 0.27 + 1e-3};
  const auto gh = mvp_gradient_hessian(corr, gamma);
  EXPECT_LE((gh.hessian - gh.hessian.transpose()).norm(), 1e-12 * gh.hessian.norm());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gh.hessian);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(MvpGradient, StationaryAtTruthWhenNoiseless) {
  // high order so the interpolation bias is below the check
  const auto set = scenario_set(kInf);
  const auto corr = compress_cheb(set, 22);
  const double scale = mvp_gradient_hessian(corr, std::vector<double>{-0.70, -0.64, 0.28}).gradient.norm();
  EXPECT_LE(mvp_gradient_hessian(corr, kTruth).gradient.norm(), 1e-8 * scale);
}

TEST(MvpGradient, PermutationEquivariant) {
  const auto corr = compress_cheb(scenario_set(20.0), 6);
  const std::vector<double> a{-0.7, -0.6, 0.3};
  const std::vector<double> b{0.3, -0.7, -0.6};
  EXPECT_NEAR(cost_cheb(corr, a), cost_cheb(corr, b), 1e-10 * cost_cheb(corr, a));
  const auto ga = mvp_gradient_hessian(corr, a).gradient;
  const auto gb = mvp_gradient_hessian(corr, b).gradient;
  EXPECT_NEAR(ga(0), gb(1), 1e-8 * ga.norm());
  EXPECT_NEAR(ga(1), gb(2), 1e-8 * ga.norm());
  EXPECT_NEAR(ga(2), gb(0), 1e-8 * ga.norm());
}

TEST(MvpGradient, CoincidentComponentsAreSingular) {
  const auto corr = compress_cheb(scenario_set(20.0), 6);
  EXPECT_THROW(mvp_gradient_hessian(corr, std::vector<double>{0.1, 0.1}), SingularMatrixError);
}

TEST(MvpRefine, ConvergesFromPerturbedTruth) {
  const auto set = scenario_set(kInf);
  const auto corr = compress_cheb(set, 14);
  const auto st = mvp_refine(corr, {-0.71 + 0.01, -0.63 - 0.01, 0.27 + 0.01});
  EXPECT_TRUE(st.converged);
  EXPECT_LE(st.iterations, 20);
  EXPECT_LE(max_abs_diff(st.gamma, kTruth), 1e-6);
}

TEST(MvpRefine, CostTraceNonincreasing) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto corr = compress_cheb(scenario_set(10.0, seed), 6);
    const auto st = mvp_refine(corr, {-0.68, -0.6, 0.3});
    ASSERT_EQ(st.cost_trace.size(), static_cast<std::size_t>(st.iterations) + 1);
    for (std::size_t i = 1; i < st.cost_trace.size(); ++i) EXPECT_LE(st.cost_trace[i], st.cost_trace[i - 1]);
    EXPECT_DOUBLE_EQ(st.cost, st.cost_trace.back());
  }
}

TEST(MvpRefine, AlreadyStationaryAtTruth) {
  const auto corr = compress_cheb(scenario_set(kInf), 22);
  const auto st = mvp_refine(corr, kTruth);
  EXPECT_TRUE(st.converged);
  EXPECT_LE(max_abs_diff(st.gamma, kTruth), 1e-9);
}

TEST(MvpRefine, PermutationInvariantResult) {
  const auto corr = compress_cheb(scenario_set(20.0), 6);
  const auto a = mvp_refine(corr, {-0.70, -0.64, 0.28});
  const auto b = mvp_refine(corr, {0.28, -0.70, -0.64});
  EXPECT_LE(max_abs_diff(a.gamma, b.gamma), 1e-9);
}

TEST(DetectionEstimation, NoiselessRecoversScenario) {
  const auto set = scenario_set(kInf);
  const auto res = run_detection_estimation(compress_cheb(set, 14), DetectorConfig::for_snapshots(set), SearchConfig{});
  ASSERT_EQ(res.k_hat, 3);
  EXPECT_TRUE(std::is_sorted(res.gamma_hat.begin(), res.gamma_hat.end()));
  EXPECT_LE(max_abs_diff(res.gamma_hat, kTruth), 1e-6);
  ASSERT_FALSE(res.trace.empty());
  EXPECT_EQ(res.trace.back().kind, StepKind::detect);
  EXPECT_EQ(res.trace.back().components, res.k_hat);
  EXPECT_FALSE(res.trace.back().exceeded);
}

TEST(DetectionEstimation, PureNoiseStopsAtZero) {
  const int trials = 1000;
  int zero = 0;
  for (int t = 0; t < trials; ++t) {
    const auto corr = compress_cheb(noise_set(4, -8, 8, mix_seed(13, t)), 6);
    const auto res = run_detection_estimation(corr, exact_detector(1.0), SearchConfig{});
    EXPECT_EQ(res.k_hat, static_cast<int>(res.gamma_hat.size()));
    zero += res.k_hat == 0 ? 1 : 0;
  }
  EXPECT_GE(zero, trials - binomial_upper(trials, 0.01));
}

TEST(DetectionEstimation, SaturatedModelThrows) {
  const auto corr = compress_cheb(noise_set(3, -4, 4, 5), 6);
  EXPECT_THROW(run_detection_estimation(corr, exact_detector(1e-9), SearchConfig{}), MaxComponentsError);
}

TEST(KnownK, NoiselessRecoversScenario) {
  const auto set = scenario_set(kInf);
  const auto res = estimate_known_k(compress_cheb(set, 14), 3, DetectorConfig::for_snapshots(set), SearchConfig{});
  ASSERT_EQ(res.k_hat, 3);
  EXPECT_LE(max_abs_diff(res.gamma_hat, kTruth), 1e-6);
}

TEST(KnownK, SingleComponentMatchesDetectionLoop) {
  const auto set = single_wave_set(-0.4, 20.0);
  const auto corr = compress_cheb(set, 6);
  const auto det = DetectorConfig::for_snapshots(set);
  const auto known = estimate_known_k(corr, 1, det, SearchConfig{});
  const auto loop = run_detection_estimation(corr, det, SearchConfig{});
  ASSERT_EQ(loop.k_hat, 1);
  EXPECT_NEAR(known.gamma_hat[0], loop.gamma_hat[0], 1e-12);
}

TEST(KnownK, ZeroComponentsIsEmpty) {
  const auto set = scenario_set(20.0);
  const auto res = estimate_known_k(compress_cheb(set, 6), 0, DetectorConfig::for_snapshots(set), SearchConfig{});
  EXPECT_EQ(res.k_hat, 0);
  EXPECT_TRUE(res.gamma_hat.empty());
}

TEST(KnownK, RejectsTooManyComponents) {
  const auto set = scenario_set(20.0);
  EXPECT_THROW(estimate_known_k(compress_cheb(set, 6), 10, DetectorConfig::for_snapshots(set), SearchConfig{}),
               InvalidArgument);
}

TEST(EstimationJson, RoundTrip) {
  const auto set = scenario_set(20.0);
  const auto res = run_detection_estimation(compress_cheb(set, 6), DetectorConfig::for_snapshots(set), SearchConfig{});
  const auto back = estimation_result_from_json(nlohmann::json::parse(to_json(res).dump()));
  EXPECT_EQ(back.k_hat, res.k_hat);
  EXPECT_EQ(back.gamma_hat, res.gamma_hat);
  EXPECT_EQ(back.converged, res.converged);
  ASSERT_EQ(back.trace.size(), res.trace.size());
  for (std::size_t i = 0; i < res.trace.size(); ++i) {
    EXPECT_EQ(back.trace[i].kind, res.trace[i].kind);
    EXPECT_EQ(back.trace[i].components, res.trace[i].components);
    EXPECT_EQ(back.trace[i].iteration, res.trace[i].iteration);
    EXPECT_EQ(back.trace[i].cost, res.trace[i].cost);
    EXPECT_EQ(back.trace[i].threshold, res.trace[i].threshold);
    EXPECT_EQ(back.trace[i].exceeded, res.trace[i].exceeded);
  }
}
