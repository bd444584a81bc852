#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "wdoa/array_model.hpp"
#include "wdoa/error.hpp"

using namespace wdoa;

namespace {

constexpr double kPi = std::numbers::pi;

ArrayConfig reference_array() { return ArrayConfig::uniform_linear(10); }

// scalar evaluation of one steering entry, isotropic patterns
Complex steering_entry(const ArrayConfig& cfg, double r, int m, double gamma) {
  const double f = cfg.carrier_hz + r / (cfg.dft_length * cfg.sampling_period);
  const double tau = cfg.positions[m] / cfg.propagation_speed;
  return std::polar(1.0, -2.0 * kPi * f * tau * gamma);
}

}  // namespace

TEST(ArrayConfigTest, DefaultsAndValidation) {
  const auto cfg = reference_array();
  EXPECT_EQ(cfg.sensors(), 10);
  EXPECT_EQ(cfg.positions[0], 0.0);
  EXPECT_NEAR(cfg.positions[1], kSpeedOfLight / (2.0 * 2.4e9), 1e-15);
  EXPECT_EQ(cfg.index_count(), 1638);
  EXPECT_NO_THROW(cfg.validate());

  auto bad = cfg;
  bad.r2 = bad.r1;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = cfg;
  bad.sampling_period = 0.0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  EXPECT_THROW(ArrayConfig::uniform_linear(1), InvalidArgument);
}

TEST(CheckDoa, RangeAndDistinctness) {
  const std::vector<double> ok{-0.71, -0.63, 0.27};
  EXPECT_NO_THROW(check_doa(ok));
  const std::vector<double> out{0.2, 1.2};
  EXPECT_THROW(check_doa(out), InvalidArgument);
  const std::vector<double> dup{0.2, 0.2 + 1e-12};
  EXPECT_THROW(check_doa(dup), InvalidArgument);
}

TEST(SteeringMatrix, Broadside) {
  const auto cfg = reference_array();
  const std::vector<double> g{0.0};
  const CMatrix a = steering_matrix(cfg, 37.5, g);
  ASSERT_EQ(a.rows(), 10);
  ASSERT_EQ(a.cols(), 1);
  for (int m = 0; m < 10; ++m) EXPECT_NEAR(std::abs(a(m, 0) - 1.0), 0.0, 1e-15);
}

TEST(SteeringMatrix, HalfWavelengthEndfire) {
  auto cfg = ArrayConfig::uniform_linear(2);
  const std::vector<double> g{1.0};
  const CMatrix a = steering_matrix(cfg, 0.0, g);
  EXPECT_NEAR(std::abs(a(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a(1, 0) + 1.0), 0.0, 1e-12);
}

TEST(SteeringMatrix, MatchesScalarFormula) {
  const auto cfg = reference_array();
  const std::vector<double> g{-0.71, 0.27};
  for (double r : {818.0, -819.0, 0.0, 123.4567}) {
    const CMatrix a = steering_matrix(cfg, r, g);
    for (int m = 0; m < 10; ++m) {
      for (int k = 0; k < 2; ++k) EXPECT_NEAR(std::abs(a(m, k) - steering_entry(cfg, r, m, g[k])), 0.0, 1e-12);
    }
  }
}

TEST(SteeringMatrix, PatternsApplied) {
  auto cfg = ArrayConfig::uniform_linear(3);
  cfg.patterns.assign(3, SensorPattern{[](double g) { return 1.0 + 0.5 * g; }, [](double) { return 0.5; }});
  const std::vector<double> g{0.4};
  const CMatrix a = steering_matrix(cfg, 10.0, g);
  for (int m = 0; m < 3; ++m) EXPECT_NEAR(std::abs(a(m, 0)), 1.2, 1e-14);
}

TEST(SteeringDerivative, Examples) {
  const auto cfg = reference_array();
  const std::vector<double> zero{0.0};
  const double r = 200.0;
  const CMatrix d = steering_derivative(cfg, r, zero);
  EXPECT_NEAR(std::abs(d(0, 0)), 0.0, 1e-15);
  for (int m = 0; m < 10; ++m) {
    const Complex expect(0.0, -2.0 * kPi * cfg.frequency(r) * cfg.delay(m));
    EXPECT_NEAR(std::abs(d(m, 0) - expect), 0.0, 1e-9 * std::abs(expect) + 1e-15);
  }
}

TEST(SteeringDerivative, CentralDifferences) {
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> ug(-0.95, 0.95), ur(-819, 818);
  for (int trial = 0; trial < 20; ++trial) {
    auto cfg = ArrayConfig::uniform_linear(4 + trial % 7);
    if (trial % 2) {
      cfg.patterns.assign(cfg.sensors(),
                          SensorPattern{[](double g) { return std::cos(0.5 * g); }, [](double g) { return -0.5 * std::sin(0.5 * g); }});
    }
    const std::vector<double> g{ug(gen), ug(gen)};
    const double r = ur(gen);
    const double h = 1e-6;
    const CMatrix d = steering_derivative(cfg, r, g);
    for (int k = 0; k < 2; ++k) {
      auto gp = g, gm = g;
      gp[k] += h;
      gm[k] -= h;
      const CMatrix fd = (steering_matrix(cfg, r, gp).col(k) - steering_matrix(cfg, r, gm).col(k)) / (2 * h);
      EXPECT_LE((fd - d.col(k)).norm(), 1e-6 * d.col(k).norm());
    }
  }
}

TEST(ProjectionOrth, Examples) {
  ComplexGaussianRng rng(3);
  CMatrix sq(4, 4);
  for (int i = 0; i < 16; ++i) sq(i % 4, i / 4) = rng();
  EXPECT_LE(projection_orth(sq).norm(), 1e-10);

  CVector v(5);
  for (int i = 0; i < 5; ++i) v(i) = rng();
  v /= v.norm();
  EXPECT_LE((projection_orth(v) - (CMatrix::Identity(5, 5) - v * v.adjoint())).norm(), 1e-12);

  CMatrix a(10, 3);
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 10; ++i) a(i, j) = rng();
  }
  const CMatrix p = projection_orth(a);
  EXPECT_LE((p * a).norm(), 1e-10);
  EXPECT_LE((p * p - p).norm(), 1e-10);
  EXPECT_LE((p - p.adjoint()).norm(), 1e-10);
}

TEST(ProjectionOrth, RankDeficiencyPropagates) {
  const auto cfg = reference_array();
  CMatrix a(10, 2);
  a.col(0) = steering_matrix(cfg, 0.0, std::vector<double>{0.3});
  a.col(1) = a.col(0);
  EXPECT_THROW(projection_orth(a), SingularMatrixError);
}

TEST(NormalizedSignature, Properties) {
  const auto cfg = reference_array();
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> ug(-1, 1), ur(-819, 818);
  for (int i = 0; i < 100; ++i) {
    const CVector a = normalized_signature(cfg, ur(gen), ug(gen));
    EXPECT_NEAR(a.norm(), 1.0, 1e-14);
    for (int m = 0; m < 10; ++m) EXPECT_NEAR(std::abs(a(m)), 1.0 / std::sqrt(10.0), 1e-14);
  }
  const CVector a = normalized_signature(cfg, 0.0, 0.27);
  const CMatrix s = steering_matrix(cfg, 0.0, std::vector<double>{0.27});
  EXPECT_LE((a - s.col(0) / std::sqrt(10.0)).norm(), 1e-14);
}

TEST(NormalizedSignature, ZeroPatternRejected) {
  auto cfg = ArrayConfig::uniform_linear(3);
  cfg.patterns.assign(3, SensorPattern{[](double) { return 0.0; }, [](double) { return 0.0; }});
  EXPECT_THROW(normalized_signature(cfg, 0.0, 0.1), InvalidArgument);
}

TEST(ProjectionOrth, SingleWaveIsRankOneUpdate) {
  const auto cfg = reference_array();
  std::mt19937 gen(6);
  std::uniform_real_distribution<double> ug(-1, 1), ur(-819, 818);
  for (int i = 0; i < 50; ++i) {
    const double r = ur(gen), g = ug(gen);
    const CVector a = normalized_signature(cfg, r, g);
    const CMatrix p = projection_orth(steering_matrix(cfg, r, std::vector<double>{g}));
    EXPECT_LE((p - (CMatrix::Identity(10, 10) - a * a.adjoint())).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ProjectionOrth, SmoothInFrequency) {
  const auto cfg = reference_array();
  const std::vector<double> g{-0.71, -0.63, 0.27};
  double max_tau = 0.0;
  for (int m = 0; m < 10; ++m) max_tau = std::max(max_tau, cfg.delay(m));
  const double bound = 2.0 * kPi * max_tau / (cfg.dft_length * cfg.sampling_period) * 10.0;
  for (int r = cfg.r1; r < cfg.r2; r += 37) {
    const CMatrix step = projection_orth(steering_matrix(cfg, r + 1, g)) - projection_orth(steering_matrix(cfg, r, g));
    EXPECT_LE(step.cwiseAbs().maxCoeff(), 10.0 * bound);
  }
}
