#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "wdoa/signal_sim.hpp"

namespace wdoa {

/// How the projector is interpolated along the frequency index.
enum class CorrKind {
  chebyshev,  // Chebyshev cardinal weights over [r1, r2]
  bin,        // piecewise constant over equal-width bins
};

std::string_view to_string(CorrKind kind);

/// The weighted correlation matrices that replace the raw snapshots in the
/// compressed DML costs. Chebyshev-kind matrices are Hermitian but may be
/// indefinite; bin-kind matrices are Hermitian PSD.
struct CorrSet {
  CorrKind kind = CorrKind::chebyshev;
  ArrayConfig array;
  std::vector<double> abscissas;
  std::vector<CMatrix> matrices;

  int order() const noexcept { return static_cast<int>(matrices.size()); }
  int index_count() const noexcept { return array.index_count(); }
  double total_trace() const;
};

/// Bin p covers the integer indices [first, last]; `center` is r1 + (p - 1/2) d
/// with d = (r2 - r1) / bins. Bins are right-open, except that r2 joins the
/// last bin.
struct BinRange {
  int first;
  int last;
  double center;
};

std::vector<BinRange> bin_partition(int r1, int r2, int bins);

/// R_p = sum_r Phi_p(r) x_r x_r^H with abscissas at the mapped Chebyshev nodes.
CorrSet compress_cheb(const SnapshotSet& snapshots, int order);

/// R_{b,p} = sum_{r in bin p} x_r x_r^H with abscissas at the bin centers.
CorrSet compress_bin(const SnapshotSet& snapshots, int bins);

/// sum_r ||P_perp(r, gamma) x_r||^2 over every index. Reference only; cost is
/// linear in the number of indices.
double cost_exact(const SnapshotSet& snapshots, std::span<const double> gamma);

/// sum_p tr{P_perp(rho_p, gamma) R_p} for either kind of CorrSet.
double compressed_cost(const CorrSet& corr, std::span<const double> gamma);

/// compressed_cost restricted to a Chebyshev CorrSet.
double cost_cheb(const CorrSet& corr, std::span<const double> gamma);

/// compressed_cost restricted to a bin CorrSet.
double cost_bin(const CorrSet& corr, std::span<const double> gamma);

/// Per-index maximum elementwise modulus of P_perp(r) - interpolated P_perp(r).
struct InterpErrorCurve {
  std::vector<int> index;
  std::vector<double> error;
  double max_error = 0.0;

  double max_error_db() const;
};

InterpErrorCurve interp_error_sweep(const ArrayConfig& cfg, std::span<const double> gamma, CorrKind method,
                                    int order);

/// The same error at a single, possibly non-integer, frequency index.
double interp_error_at(const ArrayConfig& cfg, std::span<const double> gamma, CorrKind method, int order,
                       double r);

/// 20 log10(x); -infinity for zero.
double amplitude_db(double x);

}  // namespace wdoa
