#pragma once

#include <complex>
#include <span>
#include <vector>

namespace wdoa {

using Complex = std::complex<double>;

/// Closed interval [a, b] together with the affine map onto [-1, 1].
class Interval {
 public:
  Interval(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double width() const noexcept { return b_ - a_; }

  /// y(x) = (2x - a - b) / (b - a)
  double to_unit(double x) const noexcept { return (2.0 * x - a_ - b_) / (b_ - a_); }
  double from_unit(double y) const noexcept { return 0.5 * (b_ - a_) * y + 0.5 * (a_ + b_); }

  bool operator==(const Interval&) const = default;

 private:
  double a_;
  double b_;
};

/// Roots of T_P on [-1, 1], y_p = -cos(pi (p - 1/2) / P), increasing.
std::vector<double> cheb_unit_nodes(int order);

/// The same roots mapped onto `interval`.
std::vector<double> cheb_nodes(int order, const Interval& interval);

/// Unnormalized type-2 DCT:
///   C_k = sum_{p=1..N} v_p cos(pi k (p - 1/2) / N),  k = 0..N-1.
std::vector<Complex> dct2(std::span<const Complex> v);

/// Unnormalized type-3 DCT:
///   v_p = sum_{k=0..N-1} C_k cos(pi k (p - 1/2) / N),  p = 1..N.
///
/// With these conventions dct3(dct2(v))_p = (N/2) v_p + (1/2) sum(v); the
/// k = 0 term carries the extra constant. Callers own all scale factors.
std::vector<Complex> dct3(std::span<const Complex> c);

/// Samples of a function at the mapped Chebyshev nodes of `interval`.
class ChebGrid {
 public:
  ChebGrid(Interval interval, std::vector<Complex> values);

  template <class F>
  static ChebGrid sample(const Interval& interval, int order, F&& f) {
    std::vector<Complex> v;
    v.reserve(static_cast<std::size_t>(order));
    for (double x : cheb_nodes(order, interval)) v.emplace_back(f(x));
    return ChebGrid(interval, std::move(v));
  }

  const Interval& interval() const noexcept { return interval_; }
  int order() const noexcept { return static_cast<int>(values_.size()); }
  const std::vector<Complex>& values() const noexcept { return values_; }
  std::vector<double> nodes() const { return cheb_nodes(order(), interval_); }

 private:
  Interval interval_;
  std::vector<Complex> values_;
};

/// sum_k c_k T_k(y(x)) on `interval`.
class ChebSeries {
 public:
  ChebSeries(Interval interval, std::vector<Complex> coeffs);

  const Interval& interval() const noexcept { return interval_; }
  const std::vector<Complex>& coeffs() const noexcept { return coeffs_; }
  int size() const noexcept { return static_cast<int>(coeffs_.size()); }

  Complex operator()(double x) const;

 private:
  Interval interval_;
  std::vector<Complex> coeffs_;
};

/// c_k = ((2 - delta_k) / P) sum_p g(x_{P-p+1}) cos(pi k (p - 1/2) / P)
ChebSeries cheb_fit(const ChebGrid& grid);

/// Clenshaw evaluation. Points outside the interval extrapolate.
Complex cheb_eval(const ChebSeries& series, double x);

/// Cardinal weights Phi_p(x) of the order-P interpolator on `interval`.
std::vector<double> cheb_weights(int order, const Interval& interval, double x);

/// |y(x) - y_p| below which cheb_weights returns the exact cardinal delta.
inline constexpr double kCardinalSwitchTol = 1e-9;

/// Interpolant values at the R Chebyshev nodes of the same interval, computed
/// by fit, zero padding and one type-3 DCT. Requires R > grid.order().
ChebGrid cheb_oversample(const ChebGrid& grid, int target_order);

/// Derivative series on the same interval (chain-rule factor 2/(b-a) included).
ChebSeries cheb_derivative(const ChebSeries& series);

}  // namespace wdoa
