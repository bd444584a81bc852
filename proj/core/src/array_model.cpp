#include "wdoa/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wdoa/error.hpp"

namespace wdoa {

SensorPattern SensorPattern::isotropic() {
  return {[](double) { return 1.0; }, [](double) { return 0.0; }};
}

ArrayConfig ArrayConfig::uniform_linear(int sensors, double spacing_m, double carrier_hz) {
  ArrayConfig cfg;
  cfg.carrier_hz = carrier_hz;
  const double spacing = spacing_m > 0.0 ? spacing_m : cfg.propagation_speed / (2.0 * carrier_hz);
  cfg.positions.resize(static_cast<std::size_t>(std::max(sensors, 0)));
  for (int m = 0; m < sensors; ++m) cfg.positions[m] = m * spacing;
  cfg.validate();
  return cfg;
}

void ArrayConfig::validate() const {
  if (sensors() < 2) throw InvalidArgument("ArrayConfig: needs at least two sensors");
  if (!patterns.empty() && patterns.size() != positions.size()) {
    throw InvalidArgument("ArrayConfig: one pattern per sensor required");
  }
  if (!(carrier_hz > 0.0)) throw InvalidArgument("ArrayConfig: carrier_hz must be positive");
  if (!(propagation_speed > 0.0)) throw InvalidArgument("ArrayConfig: propagation_speed must be positive");
  if (dft_length < 1) throw InvalidArgument("ArrayConfig: dft_length must be positive");
  if (!(sampling_period > 0.0)) throw InvalidArgument("ArrayConfig: sampling_period must be positive");
  if (!(r1 < r2)) throw InvalidArgument("ArrayConfig: requires r1 < r2");
}

double ArrayConfig::gain(int m, double gamma) const {
  return patterns.empty() ? 1.0 : patterns[m].gain(gamma);
}

double ArrayConfig::gain_slope(int m, double gamma) const {
  return patterns.empty() ? 0.0 : patterns[m].slope(gamma);
}

void check_doa(std::span<const double> gamma, double tol) {
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (!(std::abs(gamma[i]) <= 1.0)) throw InvalidArgument("DOA parameter outside [-1, 1]");
    for (std::size_t j = i + 1; j < gamma.size(); ++j) {
      if (std::abs(gamma[i] - gamma[j]) < tol) throw InvalidArgument("DOA parameters are not distinct");
    }
  }
}

CMatrix steering_matrix(const ArrayConfig& cfg, double r, std::span<const double> gamma) {
  const int m_count = cfg.sensors();
  const auto k_count = static_cast<Eigen::Index>(gamma.size());
  const double w = 2.0 * std::numbers::pi * cfg.frequency(r);
  CMatrix a(m_count, k_count);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    for (int m = 0; m < m_count; ++m) {
      a(m, k) = std::polar(cfg.gain(m, gamma[k]), -w * cfg.delay(m) * gamma[k]);
    }
  }
  return a;
}

CMatrix steering_derivative(const ArrayConfig& cfg, double r, std::span<const double> gamma) {
  const int m_count = cfg.sensors();
  const auto k_count = static_cast<Eigen::Index>(gamma.size());
  const double w = 2.0 * std::numbers::pi * cfg.frequency(r);
  CMatrix d(m_count, k_count);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    for (int m = 0; m < m_count; ++m) {
      const double phase_rate = -w * cfg.delay(m);
      const Complex factor{cfg.gain_slope(m, gamma[k]), phase_rate * cfg.gain(m, gamma[k])};
      d(m, k) = factor * std::polar(1.0, phase_rate * gamma[k]);
    }
  }
  return d;
}

CMatrix projection_orth(const CMatrix& a) {
  const Eigen::Index m = a.rows();
  if (a.cols() == 0) return CMatrix::Identity(m, m);
  const auto f = thin_qr(a);
  return CMatrix::Identity(m, m) - f.q * f.q.adjoint();
}

CVector normalized_signature(const ArrayConfig& cfg, double r, double gamma) {
  const double g[] = {gamma};
  CVector a = steering_matrix(cfg, r, g).col(0);
  const double n = a.norm();
  if (!(n > 0.0)) throw InvalidArgument("normalized_signature: zero steering vector");
  return a / n;
}

}  // namespace wdoa
