#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "wdoa/chebyshev.hpp"
#include "wdoa/cost.hpp"

namespace wdoa {

struct SearchConfig {
  int q = 50;                 // Chebyshev order of the gamma interpolator
  int oversample_factor = 2;  // oversampled grid has oversample_factor * q nodes
  Interval interval{-1.0, 1.0};
  double newton_tol = 1e-12;
  int newton_max_iter = 30;

  int oversampled_order() const noexcept { return oversample_factor * q; }
  void validate() const;
};

/// A one-dimensional search function known through its values at the
/// Chebyshev nodes of the search interval.
struct PseudoSpectrum {
  ChebGrid grid;
  ChebSeries series;

  explicit PseudoSpectrum(ChebGrid g) : grid(std::move(g)), series(cheb_fit(grid)) {}

  double operator()(double gamma) const { return series(gamma).real(); }
};

/// Samples sum_p tr{R_p} - a_pq^H R_p a_pq, i.e. the single-wave compressed
/// cost at every node gamma_q.
PseudoSpectrum beamformer_grid(const CorrSet& corr, const SearchConfig& search);

enum class ExtendedForm {
  /// Node values are the compressed cost of [fixed; gamma_q] exactly.
  exact,
  /// sum_p tr{P_o R_p} - a_pq^H P_o R_p a_pq, replacing R_p by P_o R_p in the
  /// single-wave formula (P_o the projector orthogonal to the fixed waves).
  product,
};

/// Search function for one additional wave with `fixed` held constant.
PseudoSpectrum extended_beamformer_grid(const CorrSet& corr, std::span<const double> fixed,
                                        const SearchConfig& search, ExtendedForm form = ExtendedForm::exact);

/// Incoherent MUSIC: K P_b - sum_p ||U_p^H a_pq||^2 with U_p the top-K
/// eigenvectors of each bin covariance.
PseudoSpectrum music_pseudospectrum_grid(const CorrSet& bins, int signals, const SearchConfig& search);

struct Minimum {
  double gamma;
  double value;
};

/// Fewer local minima than requested. `found()` holds what was located,
/// deepest first.
class MinimaShortage : public std::runtime_error {
 public:
  MinimaShortage(int requested, std::vector<Minimum> found);

  int requested() const noexcept { return requested_; }
  const std::vector<Minimum>& found() const noexcept { return found_; }

 private:
  int requested_;
  std::vector<Minimum> found_;
};

/// Oversamples the grid by DCT zero padding, takes the interior local minima
/// of the oversampled sequence, refines every one on the interpolant (Newton
/// with a golden-section fallback) and returns the `count` deepest. Values
/// within a relative 1e-9 of each other tie and are ordered by |gamma|.
std::vector<Minimum> locate_minima(const PseudoSpectrum& ps, int count, const SearchConfig& search);

/// (gamma, value) at the oversampled nodes, with a header row.
void write_pseudospectrum_csv(const PseudoSpectrum& ps, const SearchConfig& search, std::ostream& out);

}  // namespace wdoa
