#include "wdoa/search1d.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

#include "wdoa/error.hpp"

namespace wdoa {

void SearchConfig::validate() const {
  if (q < 2) throw InvalidArgument("SearchConfig: q must be >= 2");
  if (oversample_factor < 2) throw InvalidArgument("SearchConfig: oversample_factor must be >= 2");
  if (!(newton_tol > 0.0)) throw InvalidArgument("SearchConfig: newton_tol must be positive");
  if (newton_max_iter < 0) throw InvalidArgument("SearchConfig: newton_max_iter must be >= 0");
}

namespace {

// Normalized signatures a_pq for every abscissa p and search node q.
std::vector<std::vector<CVector>> signatures(const CorrSet& corr, const std::vector<double>& nodes) {
  std::vector<std::vector<CVector>> sig(static_cast<std::size_t>(corr.order()));
  for (int p = 0; p < corr.order(); ++p) {
    sig[p].reserve(nodes.size());
    for (double g : nodes) sig[p].push_back(normalized_signature(corr.array, corr.abscissas[p], g));
  }
  return sig;
}

}  // namespace

PseudoSpectrum beamformer_grid(const CorrSet& corr, const SearchConfig& search) {
  return extended_beamformer_grid(corr, {}, search);
}

PseudoSpectrum extended_beamformer_grid(const CorrSet& corr, std::span<const double> fixed,
                                        const SearchConfig& search, ExtendedForm form) {
  search.validate();
  const auto nodes = cheb_nodes(search.q, search.interval);
  const auto sig = signatures(corr, nodes);
  std::vector<Complex> values(nodes.size(), Complex{0.0, 0.0});

  for (int p = 0; p < corr.order(); ++p) {
    const CMatrix& r = corr.matrices[p];
    CMatrix q1;
    Complex base = r.trace();
    if (!fixed.empty()) {
      q1 = thin_qr(steering_matrix(corr.array, corr.abscissas[p], fixed)).q;
      base -= (q1.adjoint() * r * q1).trace();
    }
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      const CVector& a = sig[p][q];
      if (fixed.empty()) {
        values[q] += base - a.dot(r * a);
        continue;
      }
      const CVector v = a - q1 * (q1.adjoint() * a);
      if (form == ExtendedForm::product) {
        values[q] += base - v.dot(r * a);
        continue;
      }
      const double nv = v.norm();
      // A node inside the span of the fixed waves adds nothing.
      if (nv <= 1e-10) {
        values[q] += base;
      } else {
        const CVector b = v / nv;
        values[q] += base - b.dot(r * b);
      }
    }
  }
  for (auto& v : values) v = {v.real(), 0.0};
  return PseudoSpectrum(ChebGrid(search.interval, std::move(values)));
}

PseudoSpectrum music_pseudospectrum_grid(const CorrSet& bins, int signals, const SearchConfig& search) {
  search.validate();
  if (bins.kind != CorrKind::bin) throw InvalidArgument("music_pseudospectrum_grid: expected a bin CorrSet");
  if (signals < 1 || signals >= bins.array.sensors()) {
    throw InvalidArgument("music_pseudospectrum_grid: requires 1 <= K < M");
  }
  const auto nodes = cheb_nodes(search.q, search.interval);
  const auto sig = signatures(bins, nodes);
  std::vector<Complex> values(nodes.size(), Complex{static_cast<double>(signals) * bins.order(), 0.0});
  for (int p = 0; p < bins.order(); ++p) {
    const CMatrix u = hermitian_eig(bins.matrices[p], signals).vectors;
    for (std::size_t q = 0; q < nodes.size(); ++q) values[q] -= (u.adjoint() * sig[p][q]).squaredNorm();
  }
  return PseudoSpectrum(ChebGrid(search.interval, std::move(values)));
}

MinimaShortage::MinimaShortage(int requested, std::vector<Minimum> found)
    : std::runtime_error("located " + std::to_string(found.size()) + " local minima, " +
                         std::to_string(requested) + " requested"),
      requested_(requested),
      found_(std::move(found)) {}

namespace {

struct Refiner {
  const PseudoSpectrum& ps;
  ChebSeries d1;
  ChebSeries d2;
  double slack;  // rounding allowance when comparing interpolant values
  const SearchConfig& search;

  Refiner(const PseudoSpectrum& spectrum, double scale, const SearchConfig& cfg)
      : ps(spectrum),
        d1(cheb_derivative(spectrum.series)),
        d2(cheb_derivative(d1)),
        slack(16.0 * std::numeric_limits<double>::epsilon() * scale),
        search(cfg) {}

  double golden(double lo, double hi) const {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = ps(c);
    double fd = ps(d);
    for (int i = 0; i < 200 && (b - a) > search.newton_tol; ++i) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - kInvPhi * (b - a);
        fc = ps(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kInvPhi * (b - a);
        fd = ps(d);
      }
    }
    return 0.5 * (a + b);
  }

  Minimum refine(double x0, double lo, double hi) const {
    const double f0 = ps(x0);
    double x = x0;
    double fx = f0;
    for (int it = 0; it < search.newton_max_iter; ++it) {
      const double g = d1(x).real();
      const double h = d2(x).real();
      if (!(h > 0.0)) {
        const double xg = golden(lo, hi);
        const double fg = ps(xg);
        if (fg <= fx) {
          x = xg;
          fx = fg;
        }
        break;
      }
      double step = -g / h;
      bool accepted = false;
      for (int halving = 0; halving < 60; ++halving) {
        const double xn = x + step;
        if (xn > lo && xn < hi) {
          const double fn = ps(xn);
          if (fn <= fx + slack) {
            x = xn;
            fx = fn;
            accepted = true;
            break;
          }
        }
        step *= 0.5;
      }
      if (!accepted || std::abs(step) <= search.newton_tol) break;
    }
    if (fx > f0) return {x0, f0};
    return {x, fx};
  }
};

}  // namespace

std::vector<Minimum> locate_minima(const PseudoSpectrum& ps, int count, const SearchConfig& search) {
  search.validate();
  if (count < 1) throw InvalidArgument("locate_minima: count must be >= 1");
  const int order = search.oversampled_order();
  const auto fine = cheb_oversample(ps.grid, std::max(order, ps.grid.order() + 1));
  const auto nodes = fine.nodes();
  std::vector<double> v(fine.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fine.values()[i].real();

  const auto [vmin, vmax] = std::minmax_element(v.begin(), v.end());
  const double range = *vmax - *vmin;
  const double scale = std::max({std::abs(*vmin), std::abs(*vmax), range});
  const Refiner refiner(ps, scale, search);

  std::vector<Minimum> found;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] < v[i - 1] && v[i] <= v[i + 1]) found.push_back(refiner.refine(nodes[i], nodes[i - 1], nodes[i + 1]));
  }

  std::sort(found.begin(), found.end(), [](const Minimum& a, const Minimum& b) { return a.value < b.value; });
  // Near-equal depths form a plateau; order each plateau by |gamma|.
  const double tie = 1e-9 * std::max(range, std::numeric_limits<double>::min());
  for (std::size_t start = 0; start < found.size();) {
    std::size_t end = start + 1;
    while (end < found.size() && found[end].value - found[end - 1].value <= tie) ++end;
    std::stable_sort(found.begin() + static_cast<long>(start), found.begin() + static_cast<long>(end),
                     [](const Minimum& a, const Minimum& b) { return std::abs(a.gamma) < std::abs(b.gamma); });
    start = end;
  }

  if (static_cast<int>(found.size()) < count) throw MinimaShortage(count, std::move(found));
  found.resize(static_cast<std::size_t>(count));
  return found;
}

void write_pseudospectrum_csv(const PseudoSpectrum& ps, const SearchConfig& search, std::ostream& out) {
  const auto fine = cheb_oversample(ps.grid, std::max(search.oversampled_order(), ps.grid.order() + 1));
  const auto nodes = fine.nodes();
  out << "gamma,value\n" << std::setprecision(17);
  for (std::size_t i = 0; i < nodes.size(); ++i) out << nodes[i] << ',' << fine.values()[i].real() << '\n';
}

}  // namespace wdoa
