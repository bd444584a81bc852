#include "wdoa/linalg.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include "wdoa/error.hpp"

namespace wdoa {

QRFactors thin_qr(const CMatrix& a) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  if (rows < cols) throw InvalidArgument("thin_qr: needs rows >= cols");
  if (cols == 0) return {CMatrix(rows, 0), CMatrix(0, 0)};

  Eigen::HouseholderQR<CMatrix> qr(a);
  QRFactors f;
  f.r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  const double tol = kRankTol * a.norm();
  for (Eigen::Index k = 0; k < cols; ++k) {
    if (!(std::abs(f.r(k, k)) > tol)) throw SingularMatrixError(static_cast<int>(k));
  }
  f.q = qr.householderQ() * CMatrix::Identity(rows, cols);
  return f;
}

EigenPairs hermitian_eig(const CMatrix& h, int k) {
  if (h.rows() != h.cols()) throw InvalidArgument("hermitian_eig: matrix must be square");
  if (k < 1 || k > h.rows()) throw InvalidArgument("hermitian_eig: k out of range");
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
  if (es.info() != Eigen::Success) throw std::runtime_error("hermitian_eig: solver did not converge");
  const Eigen::Index n = h.rows();
  EigenPairs out;
  out.values.resize(k);
  out.vectors.resize(n, k);
  for (int i = 0; i < k; ++i) {
    out.values(i) = es.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

double chi2_inv_cdf(double p, long dof) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("chi2_inv_cdf: p must lie in (0, 1)");
  if (dof < 1) throw InvalidArgument("chi2_inv_cdf: dof must be >= 1");
  const boost::math::chi_squared_distribution<double> dist(static_cast<double>(dof));
  return boost::math::quantile(dist, p);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace wdoa
