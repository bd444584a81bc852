#include "wdoa/signal_sim.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "wdoa/error.hpp"

namespace wdoa {

namespace {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

ScenarioConfig ScenarioConfig::three_waves(ScenarioKind kind) {
  ScenarioConfig s;
  s.kind = kind;
  s.amplitudes = {{0.626, 0.7798}, {-0.4432, -0.552}, {0.3138, 0.3908}};
  s.delays = {0.0, 0.6, 37.53};
  s.gamma_true = {-0.71, -0.63, 0.27};
  return s;
}

void ScenarioConfig::validate() const {
  const auto k = gamma_true.size();
  if (amplitudes.size() != k || delays.size() != k) {
    throw InvalidArgument("ScenarioConfig: amplitudes, delays and gamma_true must have equal length");
  }
  if (!(rolloff >= 0.0 && rolloff <= 1.0)) throw InvalidArgument("ScenarioConfig: rolloff must lie in [0, 1]");
  if (!(symbol_rate_hz > 0.0)) throw InvalidArgument("ScenarioConfig: symbol_rate_hz must be positive");
  if (std::isnan(snr_db)) throw InvalidArgument("ScenarioConfig: snr_db is NaN");
  check_doa(gamma_true);
}

double raised_cosine_pulse(double t, double symbol_period, double rolloff) {
  const double x = t / symbol_period;
  if (rolloff > 0.0) {
    const double edge = 1.0 / (2.0 * rolloff);
    if (std::abs(std::abs(x) - edge) < 1e-12 * edge) {
      return 0.25 * std::numbers::pi * sinc(edge);
    }
  }
  const double q = 2.0 * rolloff * x;
  return sinc(x) * std::cos(std::numbers::pi * rolloff * x) / (1.0 - q * q);
}

double raised_cosine_spectrum(double f, double symbol_period, double rolloff) {
  const double af = std::abs(f);
  const double lo = (1.0 - rolloff) / (2.0 * symbol_period);
  const double hi = (1.0 + rolloff) / (2.0 * symbol_period);
  if (af <= lo) return 1.0;
  if (af > hi) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * symbol_period / rolloff * (af - lo)));
}

CMatrix generate_baseband(const ScenarioConfig& scenario, const ArrayConfig& cfg) {
  scenario.validate();
  const int k_count = scenario.signals();
  const int n_idx = cfg.index_count();
  CMatrix s = CMatrix::Zero(k_count, n_idx);
  if (k_count == 0) return s;

  const double tsym = 1.0 / scenario.symbol_rate_hz;
  const double window = cfg.dft_length * cfg.sampling_period;
  const auto symbols = static_cast<int>(std::ceil(window / tsym));
  const int sequences = scenario.kind == ScenarioKind::independent ? k_count : 1;

  ComplexGaussianRng rng(mix_seed(scenario.seed, 0));
  std::vector<std::vector<Complex>> seq(static_cast<std::size_t>(sequences));
  for (auto& sq : seq) {
    sq.resize(static_cast<std::size_t>(symbols));
    for (auto& c : sq) c = rng();
  }

  // Shaped DTFT of each sequence at the DFT bins, unit expected power in the
  // passband.
  const double norm = 1.0 / std::sqrt(static_cast<double>(symbols));
  CMatrix shaped(sequences, n_idx);
  for (int col = 0; col < n_idx; ++col) {
    const double f = cfg.baseband_frequency(cfg.r1 + col);
    const double h = raised_cosine_spectrum(f, tsym, scenario.rolloff);
    const Complex w = std::polar(1.0, -2.0 * std::numbers::pi * f * tsym);
    for (int q = 0; q < sequences; ++q) {
      Complex acc{0.0, 0.0};
      if (h != 0.0) {
        const auto& sq = seq[q];
        for (int n = symbols - 1; n >= 0; --n) acc = acc * w + sq[n];
      }
      shaped(q, col) = h * norm * acc;
    }
  }

  for (int k = 0; k < k_count; ++k) {
    const double tau = scenario.delays[k] / (2.0 * cfg.carrier_hz);
    const int q = scenario.kind == ScenarioKind::independent ? k : 0;
    for (int col = 0; col < n_idx; ++col) {
      const double f = cfg.baseband_frequency(cfg.r1 + col);
      s(k, col) = scenario.amplitudes[k] * std::polar(1.0, -2.0 * std::numbers::pi * f * tau) * shaped(q, col);
    }
  }
  return s;
}

double reference_noise_var(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

SnapshotSet generate_snapshots(const ScenarioConfig& scenario, const ArrayConfig& cfg) {
  cfg.validate();
  const CMatrix s = generate_baseband(scenario, cfg);
  const int m_count = cfg.sensors();
  const int n_idx = cfg.index_count();

  SnapshotSet out;
  out.array = cfg;
  out.data = CMatrix::Zero(m_count, n_idx);
  if (scenario.signals() > 0) {
    for (int col = 0; col < n_idx; ++col) {
      out.data.col(col) = steering_matrix(cfg, cfg.r1 + col, scenario.gamma_true) * s.col(col);
    }
  }
  out.signal_power = out.data.squaredNorm() / (static_cast<double>(m_count) * n_idx);

  if (std::isinf(scenario.snr_db) && scenario.snr_db > 0) return out;
  out.noise_var = out.signal_power > 0.0 ? out.signal_power * std::pow(10.0, -scenario.snr_db / 10.0)
                                         : reference_noise_var(scenario.snr_db);
  ComplexGaussianRng rng(mix_seed(scenario.seed, 1));
  const double sd = std::sqrt(out.noise_var);
  for (int col = 0; col < n_idx; ++col) {
    for (int m = 0; m < m_count; ++m) out.data(m, col) += sd * rng();
  }
  return out;
}

void write_snapshots_csv(const SnapshotSet& set, std::ostream& out) {
  out << "# wdoa-snapshots v1\n";
  out << "# sensors=" << set.data.rows() << " r1=" << set.r1() << " r2=" << set.r2()
      << std::setprecision(17) << " noise_var=" << set.noise_var << " signal_power=" << set.signal_power
      << "\n";
  for (Eigen::Index m = 0; m < set.data.rows(); ++m) {
    for (Eigen::Index c = 0; c < set.data.cols(); ++c) {
      if (c > 0) out << ',';
      out << set.data(m, c).real() << ',' << set.data(m, c).imag();
    }
    out << '\n';
  }
}

SnapshotSet read_snapshots_csv(std::istream& in, const ArrayConfig& cfg) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# wdoa-snapshots", 0) != 0) {
    throw InvalidArgument("read_snapshots_csv: missing format header");
  }
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw InvalidArgument("read_snapshots_csv: missing dimension header");
  }
  long sensors = -1;
  long r1 = 0;
  long r2 = -1;
  SnapshotSet set;
  {
    std::istringstream hs(line.substr(2));
    std::string tok;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const auto key = tok.substr(0, eq);
      const auto val = tok.substr(eq + 1);
      if (key == "sensors") sensors = std::stol(val);
      else if (key == "r1") r1 = std::stol(val);
      else if (key == "r2") r2 = std::stol(val);
      else if (key == "noise_var") set.noise_var = std::stod(val);
      else if (key == "signal_power") set.signal_power = std::stod(val);
    }
  }
  if (sensors != cfg.sensors() || r1 != cfg.r1 || r2 != cfg.r2) {
    throw InvalidArgument("read_snapshots_csv: file dimensions do not match the array configuration");
  }
  set.array = cfg;
  const auto n_idx = static_cast<Eigen::Index>(r2 - r1 + 1);
  set.data.resize(sensors, n_idx);
  for (long m = 0; m < sensors; ++m) {
    if (!std::getline(in, line)) throw InvalidArgument("read_snapshots_csv: truncated file");
    std::istringstream ls(line);
    std::string re;
    std::string im;
    for (Eigen::Index c = 0; c < n_idx; ++c) {
      if (!std::getline(ls, re, ',') || !std::getline(ls, im, ',')) {
        throw InvalidArgument("read_snapshots_csv: short row " + std::to_string(m + 1));
      }
      set.data(m, c) = {std::stod(re), std::stod(im)};
    }
  }
  return set;
}

}  // namespace wdoa
