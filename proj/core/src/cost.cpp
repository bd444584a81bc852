#include "wdoa/cost.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "wdoa/chebyshev.hpp"
#include "wdoa/error.hpp"

namespace wdoa {

std::string_view to_string(CorrKind kind) {
  return kind == CorrKind::chebyshev ? "chebyshev" : "bin";
}

double CorrSet::total_trace() const {
  double t = 0.0;
  for (const auto& r : matrices) t += r.trace().real();
  return t;
}

std::vector<BinRange> bin_partition(int r1, int r2, int bins) {
  if (bins < 1) throw InvalidArgument("bin_partition: bins must be >= 1");
  if (!(r1 < r2)) throw InvalidArgument("bin_partition: requires r1 < r2");
  const long span = static_cast<long>(r2) - r1;
  const double d = static_cast<double>(span) / bins;
  std::vector<BinRange> out(static_cast<std::size_t>(bins));
  for (int p = 0; p < bins; ++p) {
    out[p].center = r1 + (p + 0.5) * d;
    out[p].first = std::numeric_limits<int>::max();
    out[p].last = std::numeric_limits<int>::min();
  }
  // (r - r1) * bins / span is evaluated in integers so that bin edges are exact.
  for (long off = 0; off <= span; ++off) {
    auto p = static_cast<int>(off * bins / span);
    if (p >= bins) p = bins - 1;
    const int r = r1 + static_cast<int>(off);
    out[p].first = std::min(out[p].first, r);
    out[p].last = std::max(out[p].last, r);
  }
  return out;
}

namespace {

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

CorrSet compress_cheb(const SnapshotSet& snapshots, int order) {
  if (order < 1) throw InvalidArgument("compress_cheb: order must be >= 1");
  const Interval span(snapshots.r1(), snapshots.r2());
  const int n_idx = snapshots.index_count();

  Eigen::MatrixXd phi(order, n_idx);
  for (int col = 0; col < n_idx; ++col) {
    const auto w = cheb_weights(order, span, snapshots.r1() + col);
    for (int p = 0; p < order; ++p) phi(p, col) = w[p];
  }

  CorrSet corr;
  corr.kind = CorrKind::chebyshev;
  corr.array = snapshots.array;
  corr.abscissas = cheb_nodes(order, span);
  corr.matrices.reserve(static_cast<std::size_t>(order));
  for (int p = 0; p < order; ++p) {
    const CMatrix weighted = snapshots.data * phi.row(p).transpose().asDiagonal();
    corr.matrices.push_back(hermitian_part(weighted * snapshots.data.adjoint()));
  }
  return corr;
}

CorrSet compress_bin(const SnapshotSet& snapshots, int bins) {
  const auto parts = bin_partition(snapshots.r1(), snapshots.r2(), bins);
  const Eigen::Index m = snapshots.data.rows();
  CorrSet corr;
  corr.kind = CorrKind::bin;
  corr.array = snapshots.array;
  corr.abscissas.reserve(parts.size());
  corr.matrices.reserve(parts.size());
  for (const auto& b : parts) {
    corr.abscissas.push_back(b.center);
    if (b.first > b.last) {
      corr.matrices.push_back(CMatrix::Zero(m, m));
      continue;
    }
    const auto block = snapshots.data.middleCols(b.first - snapshots.r1(), b.last - b.first + 1);
    corr.matrices.push_back(hermitian_part(block * block.adjoint()));
  }
  return corr;
}

double cost_exact(const SnapshotSet& snapshots, std::span<const double> gamma) {
  if (gamma.empty()) return snapshots.energy();
  double total = 0.0;
  for (int col = 0; col < snapshots.index_count(); ++col) {
    const auto f = thin_qr(steering_matrix(snapshots.array, snapshots.r1() + col, gamma));
    const CVector x = snapshots.data.col(col);
    total += (x - f.q * (f.q.adjoint() * x)).squaredNorm();
  }
  return total;
}

double compressed_cost(const CorrSet& corr, std::span<const double> gamma) {
  Complex total{0.0, 0.0};
  double scale = 0.0;
  for (int p = 0; p < corr.order(); ++p) {
    const auto& r = corr.matrices[p];
    Complex term = r.trace();
    if (!gamma.empty()) {
      const auto f = thin_qr(steering_matrix(corr.array, corr.abscissas[p], gamma));
      term -= (f.q.adjoint() * r * f.q).trace();
    }
    total += term;
    scale += std::abs(term);
  }
  assert(std::abs(total.imag()) <= 1e-10 * std::max(scale, 1e-300) + 1e-300);
  (void)scale;
  return total.real();
}

double cost_cheb(const CorrSet& corr, std::span<const double> gamma) {
  if (corr.kind != CorrKind::chebyshev) throw InvalidArgument("cost_cheb: expected a Chebyshev CorrSet");
  return compressed_cost(corr, gamma);
}

double cost_bin(const CorrSet& corr, std::span<const double> gamma) {
  if (corr.kind != CorrKind::bin) throw InvalidArgument("cost_bin: expected a bin CorrSet");
  return compressed_cost(corr, gamma);
}

double amplitude_db(double x) {
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(x);
}

double InterpErrorCurve::max_error_db() const { return amplitude_db(max_error); }

namespace {

// Interpolation nodes and the projectors evaluated there.
struct ProjectorInterpolant {
  CorrKind method;
  int order;
  Interval span;
  std::vector<BinRange> bins;
  std::vector<CMatrix> node_projectors;

  ProjectorInterpolant(const ArrayConfig& cfg, std::span<const double> gamma, CorrKind m, int ord)
      : method(m), order(ord), span(cfg.r1, cfg.r2) {
    if (order < 1) throw InvalidArgument("interp_error_sweep: order must be >= 1");
    std::vector<double> nodes;
    if (method == CorrKind::chebyshev) {
      nodes = cheb_nodes(order, span);
    } else {
      bins = bin_partition(cfg.r1, cfg.r2, order);
      for (const auto& b : bins) nodes.push_back(b.center);
    }
    for (double rho : nodes) node_projectors.push_back(projection_orth(steering_matrix(cfg, rho, gamma)));
  }

  CMatrix at(double r) const {
    if (method == CorrKind::chebyshev) {
      const auto w = cheb_weights(order, span, r);
      CMatrix acc = CMatrix::Zero(node_projectors[0].rows(), node_projectors[0].cols());
      for (int p = 0; p < order; ++p) acc += w[p] * node_projectors[p];
      return acc;
    }
    // Same edge arithmetic as bin_partition: exact for integer r.
    auto p = static_cast<int>(std::floor((r - span.a()) * order / span.width()));
    p = std::clamp(p, 0, order - 1);
    return node_projectors[p];
  }
};

double projector_gap(const ArrayConfig& cfg, std::span<const double> gamma, const ProjectorInterpolant& interp,
                     double r) {
  const CMatrix truth = projection_orth(steering_matrix(cfg, r, gamma));
  return (truth - interp.at(r)).cwiseAbs().maxCoeff();
}

}  // namespace

InterpErrorCurve interp_error_sweep(const ArrayConfig& cfg, std::span<const double> gamma, CorrKind method,
                                    int order) {
  const ProjectorInterpolant interp(cfg, gamma, method, order);
  InterpErrorCurve curve;
  for (int r = cfg.r1; r <= cfg.r2; ++r) {
    const double e = projector_gap(cfg, gamma, interp, r);
    curve.index.push_back(r);
    curve.error.push_back(e);
    curve.max_error = std::max(curve.max_error, e);
  }
  return curve;
}

double interp_error_at(const ArrayConfig& cfg, std::span<const double> gamma, CorrKind method, int order,
                       double r) {
  const ProjectorInterpolant interp(cfg, gamma, method, order);
  return projector_gap(cfg, gamma, interp, r);
}

}  // namespace wdoa
