#include "wdoa/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "wdoa/error.hpp"

namespace wdoa {

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::ic_music:
      return "ic_music";
    case EstimatorKind::bin_ml:
      return "bin_ml";
    case EstimatorKind::cheb_ml:
      return "cheb_ml";
  }
  return "unknown";
}

std::string EstimatorSpec::label() const { return to_string(kind) + ":" + std::to_string(order); }

ArrayConfig ExperimentConfig::array() const {
  const double spacing = spacing_m > 0.0 ? spacing_m : propagation_speed / (2.0 * carrier_hz);
  ArrayConfig a = ArrayConfig::uniform_linear(sensors, spacing, carrier_hz);
  a.propagation_speed = propagation_speed;
  a.dft_length = dft_length;
  a.sampling_period = bt / bandwidth_hz;
  a.r1 = r1;
  a.r2 = r2;
  return a;
}

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + message),
      line_(line) {}

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  throw ConfigError("<config>", 0, "invalid value for '" + field + "': " + what);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (sensors < 2) invalid("sensors", "must be >= 2");
  if (!(carrier_hz > 0.0)) invalid("carrier_hz", "must be positive");
  if (!(propagation_speed > 0.0)) invalid("propagation_speed", "must be positive");
  if (dft_length < 1) invalid("dft_length", "must be positive");
  if (!(bandwidth_hz > 0.0)) invalid("bandwidth_hz", "must be positive");
  if (!(bt > 0.0 && bt < 1.0)) invalid("bt", "must lie in (0, 1)");
  if (!(r1 < r2)) invalid("r1", "must be below r2");
  try {
    scenario.validate();
  } catch (const InvalidArgument& e) {
    invalid("scenario", e.what());
  }
  if (scenario.signals() >= sensors) invalid("gamma_true", "needs fewer waves than sensors");
  for (const auto& e : estimators) {
    if (e.order < 1) invalid("estimators", e.label() + " needs order >= 1");
  }
  try {
    search.validate();
  } catch (const InvalidArgument& e) {
    invalid("search", e.what());
  }
  if (!(pfa > 0.0 && pfa < 1.0)) invalid("pfa", "must lie in (0, 1)");
  if (snr_grid_db.empty()) invalid("snr_grid_db", "must not be empty");
  if (trials < 1) invalid("trials", "must be >= 1");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (trim(s.substr(pos)).size() != 0) throw std::invalid_argument("trailing characters");
  return v;
}

long parse_long(const std::string& s) {
  std::size_t pos = 0;
  const long v = std::stol(s, &pos);
  if (trim(s.substr(pos)).size() != 0) throw std::invalid_argument("trailing characters");
  return v;
}

// Accepts "a", "bj", "a+bj", "a-bj" (with optional exponents).
Complex parse_complex(const std::string& raw) {
  std::string s;
  for (char c : raw) {
    if (c != ' ') s.push_back(c);
  }
  if (s.empty()) throw std::invalid_argument("empty complex value");
  if (s.back() != 'j' && s.back() != 'i') return {parse_double(s), 0.0};
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) {
    const std::string im = (s.empty() || s == "+" || s == "-") ? s + "1" : s;
    return {0.0, parse_double(im)};
  }
  std::string im = s.substr(split);
  if (im == "+" || im == "-") im += "1";
  return {parse_double(s.substr(0, split)), parse_double(im)};
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(parse_double(item));
  return out;
}

EstimatorSpec parse_estimator(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("expected kind:order, got '" + s + "'");
  const auto kind = trim(s.substr(0, colon));
  const auto order = static_cast<int>(parse_long(s.substr(colon + 1)));
  if (kind == "ic_music") return {EstimatorKind::ic_music, order};
  if (kind == "bin_ml") return {EstimatorKind::bin_ml, order};
  if (kind == "cheb_ml") return {EstimatorKind::cheb_ml, order};
  throw std::invalid_argument("unknown estimator '" + kind + "'");
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  // shortest representation that round-trips
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt_complex(Complex c) {
  std::string im = fmt(c.imag());
  if (im.front() != '-') im = "+" + im;
  return fmt(c.real()) + im + "j";
}

template <class T, class F>
std::string join(const std::vector<T>& v, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += f(v[i]);
  }
  return out;
}

using Setter = void (*)(ExperimentConfig&, const std::string&);

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"sensors", [](ExperimentConfig& c, const std::string& v) { c.sensors = static_cast<int>(parse_long(v)); }},
      {"spacing_m", [](ExperimentConfig& c, const std::string& v) { c.spacing_m = parse_double(v); }},
      {"carrier_hz", [](ExperimentConfig& c, const std::string& v) { c.carrier_hz = parse_double(v); }},
      {"propagation_speed", [](ExperimentConfig& c, const std::string& v) { c.propagation_speed = parse_double(v); }},
      {"dft_length", [](ExperimentConfig& c, const std::string& v) { c.dft_length = static_cast<int>(parse_long(v)); }},
      {"bandwidth_hz", [](ExperimentConfig& c, const std::string& v) { c.bandwidth_hz = parse_double(v); }},
      {"bt", [](ExperimentConfig& c, const std::string& v) { c.bt = parse_double(v); }},
      {"r1", [](ExperimentConfig& c, const std::string& v) { c.r1 = static_cast<int>(parse_long(v)); }},
      {"r2", [](ExperimentConfig& c, const std::string& v) { c.r2 = static_cast<int>(parse_long(v)); }},
      {"scenario",
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "IS") c.scenario.kind = ScenarioKind::independent;
         else if (v == "CS") c.scenario.kind = ScenarioKind::correlated;
         else throw std::invalid_argument("expected IS or CS");
       }},
      {"amplitudes",
       [](ExperimentConfig& c, const std::string& v) {
         c.scenario.amplitudes.clear();
         for (const auto& item : split_list(v)) c.scenario.amplitudes.push_back(parse_complex(item));
       }},
      {"delays", [](ExperimentConfig& c, const std::string& v) { c.scenario.delays = parse_doubles(v); }},
      {"gamma_true", [](ExperimentConfig& c, const std::string& v) { c.scenario.gamma_true = parse_doubles(v); }},
      {"rolloff", [](ExperimentConfig& c, const std::string& v) { c.scenario.rolloff = parse_double(v); }},
      {"symbol_rate_hz", [](ExperimentConfig& c, const std::string& v) { c.scenario.symbol_rate_hz = parse_double(v); }},
      {"snr_db", [](ExperimentConfig& c, const std::string& v) { c.scenario.snr_db = parse_double(v); }},
      {"estimators",
       [](ExperimentConfig& c, const std::string& v) {
         c.estimators.clear();
         for (const auto& item : split_list(v)) c.estimators.push_back(parse_estimator(item));
       }},
      {"search_q", [](ExperimentConfig& c, const std::string& v) { c.search.q = static_cast<int>(parse_long(v)); }},
      {"search_oversample",
       [](ExperimentConfig& c, const std::string& v) { c.search.oversample_factor = static_cast<int>(parse_long(v)); }},
      {"newton_tol", [](ExperimentConfig& c, const std::string& v) { c.search.newton_tol = parse_double(v); }},
      {"newton_max_iter",
       [](ExperimentConfig& c, const std::string& v) { c.search.newton_max_iter = static_cast<int>(parse_long(v)); }},
      {"pfa", [](ExperimentConfig& c, const std::string& v) { c.pfa = parse_double(v); }},
      {"clamp_snr_db",
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "none") c.clamp_snr_db.reset();
         else c.clamp_snr_db = parse_double(v);
       }},
      {"snr_grid_db", [](ExperimentConfig& c, const std::string& v) { c.snr_grid_db = parse_doubles(v); }},
      {"trials", [](ExperimentConfig& c, const std::string& v) { c.trials = static_cast<int>(parse_long(v)); }},
      {"seed", [](ExperimentConfig& c, const std::string& v) { c.seed = std::stoull(v); }},
      {"output_dir", [](ExperimentConfig& c, const std::string& v) { c.output_dir = v; }},
  };
  return table;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  ExperimentConfig cfg;
  bool symbol_rate_set = false;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(source, line_no, "unknown key '" + key + "'");
    try {
      it->second(cfg, value);
    } catch (const std::exception& e) {
      throw ConfigError(source, line_no, "bad value for '" + key + "': " + e.what());
    }
    if (key == "symbol_rate_hz") symbol_rate_set = true;
  }
  // One symbol per 1/B unless stated otherwise.
  if (!symbol_rate_set) cfg.scenario.symbol_rate_hz = cfg.bandwidth_hz;
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source, 0, std::string(e.what()).substr(std::string("<config>: ").size()));
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "cannot open file");
  return parse_config(in, path.string());
}

std::string dump_config(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "sensors = " << c.sensors << '\n'
    << "spacing_m = " << fmt(c.spacing_m) << '\n'
    << "carrier_hz = " << fmt(c.carrier_hz) << '\n'
    << "propagation_speed = " << fmt(c.propagation_speed) << '\n'
    << "dft_length = " << c.dft_length << '\n'
    << "bandwidth_hz = " << fmt(c.bandwidth_hz) << '\n'
    << "bt = " << fmt(c.bt) << '\n'
    << "r1 = " << c.r1 << '\n'
    << "r2 = " << c.r2 << '\n'
    << "scenario = " << (c.scenario.kind == ScenarioKind::independent ? "IS" : "CS") << '\n'
    << "amplitudes = " << join(c.scenario.amplitudes, fmt_complex) << '\n'
    << "delays = " << join(c.scenario.delays, fmt) << '\n'
    << "gamma_true = " << join(c.scenario.gamma_true, fmt) << '\n'
    << "rolloff = " << fmt(c.scenario.rolloff) << '\n'
    << "symbol_rate_hz = " << fmt(c.scenario.symbol_rate_hz) << '\n'
    << "snr_db = " << fmt(c.scenario.snr_db) << '\n'
    << "estimators = " << join(c.estimators, [](const EstimatorSpec& e) { return e.label(); }) << '\n'
    << "search_q = " << c.search.q << '\n'
    << "search_oversample = " << c.search.oversample_factor << '\n'
    << "newton_tol = " << fmt(c.search.newton_tol) << '\n'
    << "newton_max_iter = " << c.search.newton_max_iter << '\n'
    << "pfa = " << fmt(c.pfa) << '\n'
    << "clamp_snr_db = " << (c.clamp_snr_db ? fmt(*c.clamp_snr_db) : std::string("none")) << '\n'
    << "snr_grid_db = " << join(c.snr_grid_db, fmt) << '\n'
    << "trials = " << c.trials << '\n'
    << "seed = " << c.seed << '\n'
    << "output_dir = " << c.output_dir << '\n';
  return o.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
  // where results are written does not change them
  auto keyed = cfg;
  keyed.output_dir.clear();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : dump_config(keyed)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace wdoa
