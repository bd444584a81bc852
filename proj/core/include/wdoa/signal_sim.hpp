#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "wdoa/array_model.hpp"

namespace wdoa {

enum class ScenarioKind {
  independent,  // one white symbol sequence per wave
  correlated,   // every wave carries the same sequence
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::independent;
  std::vector<Complex> amplitudes;
  /// Delays in units of 1/(2 f_o): tau'_k = delays[k] / (2 f_o).
  std::vector<double> delays;
  DoaVector gamma_true;
  double rolloff = 0.2;
  double symbol_rate_hz = 600e6;
  /// +infinity disables the noise entirely.
  double snr_db = 20.0;
  std::uint64_t seed = 1;

  /// Three waves at gamma = (-0.71, -0.63, 0.27) with the reference
  /// amplitudes and delays.
  static ScenarioConfig three_waves(ScenarioKind kind = ScenarioKind::independent);

  int signals() const noexcept { return static_cast<int>(gamma_true.size()); }
  void validate() const;
};

/// Frequency-domain snapshots x_r for r in [r1, r2]; column r - r1 holds x_r.
struct SnapshotSet {
  ArrayConfig array;
  CMatrix data;
  double noise_var = 0.0;
  /// Mean of |[A s_r]_m|^2 over all r and m (zero for pure noise).
  double signal_power = 0.0;

  int r1() const noexcept { return array.r1; }
  int r2() const noexcept { return array.r2; }
  int index_count() const noexcept { return static_cast<int>(data.cols()); }
  auto column(int r) const { return data.col(r - array.r1); }
  double energy() const { return data.squaredNorm(); }
};

/// Raised-cosine impulse normalized to p(0) = 1.
double raised_cosine_pulse(double t, double symbol_period, double rolloff);

/// Raised-cosine spectrum normalized to unit passband gain.
double raised_cosine_spectrum(double f, double symbol_period, double rolloff);

/// Row k holds the baseband spectrum s_k(r/(NT)) for r = r1..r2 (K x n).
CMatrix generate_baseband(const ScenarioConfig& scenario, const ArrayConfig& cfg);

/// x_r = A(r, gamma_true) s_r + w_r with w_r white at the variance that
/// produces the requested SNR. Symbols and noise draw from separate streams
/// derived from scenario.seed, so the signal part does not depend on snr_db.
SnapshotSet generate_snapshots(const ScenarioConfig& scenario, const ArrayConfig& cfg);

/// Noise variance used when no signal is present (snr_db is then read
/// relative to unit power).
double reference_noise_var(double snr_db);

/// Plain-text matrix export: comment header, then one row per sensor with
/// interleaved real/imaginary parts per frequency index.
void write_snapshots_csv(const SnapshotSet& set, std::ostream& out);

/// Reads a file produced by write_snapshots_csv. `cfg` must agree with the
/// stored sensor count and index range.
SnapshotSet read_snapshots_csv(std::istream& in, const ArrayConfig& cfg);

}  // namespace wdoa
