#pragma once

#include <functional>
#include <span>
#include <vector>

#include "wdoa/linalg.hpp"

namespace wdoa {

/// A sensor's real-valued gain pattern b(gamma) and its derivative.
struct SensorPattern {
  std::function<double(double)> gain;
  std::function<double(double)> slope;

  static SensorPattern isotropic();
};

inline constexpr double kSpeedOfLight = 299792458.0;

/// Linear array geometry plus the DFT/sampling constants of the receiver.
///
/// Frequency index r maps to the passband frequency f_o + r / (N T). Indices
/// are real-valued so that Chebyshev abscissas and bin centers can be used
/// directly.
struct ArrayConfig {
  std::vector<double> positions;        // d_m in meters, d_1 is the reference
  std::vector<SensorPattern> patterns;  // empty means isotropic everywhere
  double carrier_hz = 2.4e9;
  double propagation_speed = kSpeedOfLight;
  int dft_length = 2048;
  double sampling_period = 0.8 / 600e6;
  int r1 = -819;
  int r2 = 818;

  /// M sensors at (m - 1) * spacing. A non-positive spacing selects half a
  /// wavelength at the carrier.
  static ArrayConfig uniform_linear(int sensors, double spacing_m = 0.0, double carrier_hz = 2.4e9);

  void validate() const;

  int sensors() const noexcept { return static_cast<int>(positions.size()); }
  int index_count() const noexcept { return r2 - r1 + 1; }
  double delay(int m) const noexcept { return positions[m] / propagation_speed; }
  double frequency(double r) const noexcept { return carrier_hz + r / (dft_length * sampling_period); }
  double baseband_frequency(double r) const noexcept { return r / (dft_length * sampling_period); }
  double gain(int m, double gamma) const;
  double gain_slope(int m, double gamma) const;
};

using DoaVector = std::vector<double>;

/// Throws InvalidArgument when two entries lie within `tol` of each other or
/// any entry falls outside [-1, 1].
void check_doa(std::span<const double> gamma, double tol = 1e-9);

/// [A(r, gamma)]_{m,k} = exp(-j 2 pi (f_o + r/(NT)) tau_m gamma_k) b_m(gamma_k)
CMatrix steering_matrix(const ArrayConfig& cfg, double r, std::span<const double> gamma);

/// Column-wise derivative dA/dgamma_k.
CMatrix steering_derivative(const ArrayConfig& cfg, double r, std::span<const double> gamma);

/// I - A A^+, computed from the thin QR of A.
CMatrix projection_orth(const CMatrix& a);

/// a(r, gamma) / ||a(r, gamma)||
CVector normalized_signature(const ArrayConfig& cfg, double r, double gamma);

}  // namespace wdoa
