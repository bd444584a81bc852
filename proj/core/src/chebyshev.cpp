#include "wdoa/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wdoa/error.hpp"

namespace wdoa {

Interval::Interval(double a, double b) : a_(a), b_(b) {
  if (!(a < b)) throw InvalidArgument("Interval requires a < b");
}

std::vector<double> cheb_unit_nodes(int order) {
  if (order < 1) throw InvalidArgument("cheb_unit_nodes: order must be >= 1");
  std::vector<double> y(static_cast<std::size_t>(order));
  for (int p = 1; p <= order; ++p) {
    y[p - 1] = -std::cos(std::numbers::pi * (p - 0.5) / order);
  }
  // cos(pi/2) is not exactly zero in floating point.
  if (order % 2 == 1) y[order / 2] = 0.0;
  return y;
}

std::vector<double> cheb_nodes(int order, const Interval& interval) {
  auto x = cheb_unit_nodes(order);
  for (double& v : x) v = interval.from_unit(v);
  return x;
}

namespace {

// cos(pi m / (2N)) for m in [0, 4N). Arguments k(2p-1) are reduced exactly
// modulo 4N before the lookup.
std::vector<double> quarter_cos_table(std::size_t n) {
  std::vector<double> t(4 * n);
  for (std::size_t m = 0; m < t.size(); ++m) {
    t[m] = std::cos(std::numbers::pi * static_cast<double>(m) / (2.0 * static_cast<double>(n)));
  }
  return t;
}

}  // namespace

std::vector<Complex> dct2(std::span<const Complex> v) {
  const std::size_t n = v.size();
  if (n == 0) throw InvalidArgument("dct2: empty input");
  const auto table = quarter_cos_table(n);
  const std::size_t period = 4 * n;
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc{0.0, 0.0};
    for (std::size_t p = 0; p < n; ++p) {
      acc += v[p] * table[(k * (2 * p + 1)) % period];
    }
    out[k] = acc;
  }
  return out;
}

std::vector<Complex> dct3(std::span<const Complex> c) {
  const std::size_t n = c.size();
  if (n == 0) throw InvalidArgument("dct3: empty input");
  const auto table = quarter_cos_table(n);
  const std::size_t period = 4 * n;
  std::vector<Complex> out(n);
  for (std::size_t p = 0; p < n; ++p) {
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
      acc += c[k] * table[(k * (2 * p + 1)) % period];
    }
    out[p] = acc;
  }
  return out;
}

ChebGrid::ChebGrid(Interval interval, std::vector<Complex> values)
    : interval_(interval), values_(std::move(values)) {
  if (values_.empty()) throw InvalidArgument("ChebGrid: order must be >= 1");
}

ChebSeries::ChebSeries(Interval interval, std::vector<Complex> coeffs)
    : interval_(interval), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw InvalidArgument("ChebSeries: needs at least one coefficient");
}

Complex ChebSeries::operator()(double x) const { return cheb_eval(*this, x); }

ChebSeries cheb_fit(const ChebGrid& grid) {
  const int order = grid.order();
  // The coefficient formula reads the samples in reverse node order.
  std::vector<Complex> reversed(grid.values().rbegin(), grid.values().rend());
  auto c = dct2(reversed);
  const double scale = 2.0 / order;
  for (auto& ck : c) ck *= scale;
  c[0] *= 0.5;
  return ChebSeries(grid.interval(), std::move(c));
}

Complex cheb_eval(const ChebSeries& series, double x) {
  const auto& c = series.coeffs();
  const double y = series.interval().to_unit(x);
  Complex b1{0.0, 0.0};
  Complex b2{0.0, 0.0};
  for (std::size_t k = c.size() - 1; k >= 1; --k) {
    const Complex b0 = c[k] + 2.0 * y * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c[0] + y * b1 - b2;
}

std::vector<double> cheb_weights(int order, const Interval& interval, double x) {
  if (order < 1) throw InvalidArgument("cheb_weights: order must be >= 1");
  const auto nodes = cheb_unit_nodes(order);
  const double y = interval.to_unit(x);
  std::vector<double> w(static_cast<std::size_t>(order), 0.0);
  for (int p = 0; p < order; ++p) {
    if (std::abs(y - nodes[p]) < kCardinalSwitchTol) {
      w[p] = 1.0;
      return w;
    }
  }
  // Barycentric form; for first-kind nodes the weights are (-1)^p sin(theta_p).
  double denom = 0.0;
  for (int p = 0; p < order; ++p) {
    const double theta = std::numbers::pi * (p + 0.5) / order;
    const double bw = ((p % 2 == 0) ? 1.0 : -1.0) * std::sin(theta);
    w[p] = bw / (y - nodes[p]);
    denom += w[p];
  }
  for (double& v : w) v /= denom;
  return w;
}

ChebGrid cheb_oversample(const ChebGrid& grid, int target_order) {
  if (target_order <= grid.order()) {
    throw InvalidArgument("cheb_oversample: target order must exceed the grid order");
  }
  auto coeffs = cheb_fit(grid).coeffs();
  coeffs.resize(static_cast<std::size_t>(target_order), Complex{0.0, 0.0});
  auto v = dct3(coeffs);
  std::reverse(v.begin(), v.end());
  return ChebGrid(grid.interval(), std::move(v));
}

ChebSeries cheb_derivative(const ChebSeries& series) {
  const auto& c = series.coeffs();
  const int n = series.size();
  if (n == 1) return ChebSeries(series.interval(), {Complex{0.0, 0.0}});
  std::vector<Complex> d(static_cast<std::size_t>(n), Complex{0.0, 0.0});
  for (int k = n - 2; k >= 0; --k) {
    d[k] = (k + 2 < n ? d[k + 2] : Complex{0.0, 0.0}) + 2.0 * (k + 1) * c[k + 1];
  }
  d[0] *= 0.5;
  d.pop_back();
  const double chain = 2.0 / series.interval().width();
  for (auto& v : d) v *= chain;
  return ChebSeries(series.interval(), std::move(d));
}

}  // namespace wdoa
