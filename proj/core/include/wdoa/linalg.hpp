#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace wdoa {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Thin QR factors: a = q * r with q (rows x cols) orthonormal and r upper
/// triangular (cols x cols).
struct QRFactors {
  CMatrix q;
  CMatrix r;
};

/// |r_kk| below this fraction of the Frobenius norm of the input is treated
/// as rank deficiency.
inline constexpr double kRankTol = 1e-12;

/// Householder thin QR. Throws SingularMatrixError naming the first column
/// whose diagonal entry falls below kRankTol * ||a||.
QRFactors thin_qr(const CMatrix& a);

struct EigenPairs {
  Eigen::VectorXd values;  // descending
  CMatrix vectors;         // one column per value
};

/// Top-k eigenpairs of a Hermitian matrix (the input is symmetrized first).
EigenPairs hermitian_eig(const CMatrix& h, int k);

/// Quantile of the chi-squared distribution with `dof` degrees of freedom.
double chi2_inv_cdf(double p, long dof);

/// Deterministic splitmix64-based mixing used to derive per-trial streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Stream of circular complex Gaussians with unit variance (real and
/// imaginary parts i.i.d. N(0, 1/2)).
class ComplexGaussianRng {
 public:
  explicit ComplexGaussianRng(std::uint64_t seed) : engine_(seed), normal_(0.0, std::sqrt(0.5)) {}

  std::complex<double> operator()() {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {re, im};
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

inline ComplexGaussianRng seeded_rng(std::uint64_t seed) { return ComplexGaussianRng(seed); }

}  // namespace wdoa
