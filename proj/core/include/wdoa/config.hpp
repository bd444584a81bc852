#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "wdoa/estimator.hpp"

namespace wdoa {

enum class EstimatorKind { ic_music, bin_ml, cheb_ml };

/// One estimator under test together with its compression order (P_b for
/// the bin-based ones, P for ChebML).
struct EstimatorSpec {
  EstimatorKind kind;
  int order;

  std::string label() const;  // e.g. "cheb_ml:6"
  bool operator==(const EstimatorSpec&) const = default;
};

/// Everything an experiment needs. Defaults reproduce the reference
/// three-wave setup: 10-sensor half-wavelength ULA at 2.4 GHz, N = 2048,
/// BT = 0.8, indices [-819, 818], Q = 50 with 2x oversampling, P_FA = 0.01,
/// 100 trials.
struct ExperimentConfig {
  int sensors = 10;
  double spacing_m = 0.0;  // 0 selects half a wavelength at the carrier
  double carrier_hz = 2.4e9;
  double propagation_speed = kSpeedOfLight;
  int dft_length = 2048;
  double bandwidth_hz = 600e6;
  double bt = 0.8;
  int r1 = -819;
  int r2 = 818;

  ScenarioConfig scenario = ScenarioConfig::three_waves();
  std::vector<EstimatorSpec> estimators = {
      {EstimatorKind::ic_music, 50}, {EstimatorKind::bin_ml, 60}, {EstimatorKind::cheb_ml, 5}, {EstimatorKind::cheb_ml, 6}};
  SearchConfig search;
  double pfa = 0.01;
  std::optional<double> clamp_snr_db = 37.0;

  std::vector<double> snr_grid_db = {-10.0, 0.0, 10.0, 20.0, 30.0, 40.0};
  int trials = 100;
  std::uint64_t seed = 1;
  std::string output_dir = "results";

  ArrayConfig array() const;
  void validate() const;
};

/// Parse failure or invariant violation. `line()` is 0 when the problem is
/// not tied to a specific line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Parses `key = value` lines; '#' starts a comment. Missing keys keep their
/// defaults; unknown keys are rejected.
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical text form: every key, fixed order, full precision.
std::string dump_config(const ExperimentConfig& cfg);

/// FNV-1a 64 of dump_config with output_dir cleared, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

std::string to_string(EstimatorKind kind);

}  // namespace wdoa
