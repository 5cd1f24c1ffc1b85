#pragma once

#include <Eigen/Dense>
#include <utility>

#include "pcadc/errors.hpp"

namespace pcadc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Numerical-rank threshold, relative to sigma_max * max(m, n).
inline constexpr double kDefaultRankTol = 1e-12;

/// Dense N-by-d sample matrix; rows are samples.
struct DataMatrix {
  Matrix values;

  Index n_samples() const { return values.rows(); }
  Index n_features() const { return values.cols(); }

  /// Validates finiteness and nonempty shape.
  static DataMatrix make(Matrix values);
};

/// Factorization A = left * diag(singulars) * right^T keeping only the
/// nonzero spectrum. Singular values are strictly positive, nonincreasing;
/// the sign of each left singular vector is fixed so its first nonzero
/// entry is nonnegative.
struct CompactSvd {
  Matrix left;       // m x r, column-orthonormal
  Vector singulars;  // length r, positive, nonincreasing
  Matrix right;      // n x r, column-orthonormal

  Index rank() const { return singulars.size(); }
  Matrix reconstruct() const { return left * singulars.asDiagonal() * right.transpose(); }
};

/// Eigendecomposition of a symmetric PSD matrix keeping only columns with
/// nonzero eigenvalues, in nonincreasing order.
struct CompactEig {
  Matrix vectors;      // s x r, column-orthonormal
  Vector eigenvalues;  // length r, positive, nonincreasing

  Index rank() const { return eigenvalues.size(); }
  Matrix reconstruct() const { return vectors * eigenvalues.asDiagonal() * vectors.transpose(); }
};

/// Compact SVD. Singular values below rank_tol * sigma_max * max(m, n) are
/// dropped. The sign convention makes factorizations deterministic for simple
/// spectra; among exactly equal singular values the basis choice within the
/// shared subspace remains backend-dependent, so degenerate cases should be
/// compared at subspace level.
CompactSvd svd_compact(const Matrix& a, double rank_tol = kDefaultRankTol);

/// Compact eigendecomposition of a symmetric PSD matrix. Rejects asymmetric
/// input and significantly negative eigenvalues.
CompactEig eig_compact(const Matrix& s, double rank_tol = kDefaultRankTol);

/// Compact QR of an m-by-n matrix with m >= n and full column rank.
/// Q is m-by-n column-orthonormal, R is n-by-n upper-triangular with
/// positive diagonal.
std::pair<Matrix, Matrix> qr_compact(const Matrix& a, double rank_tol = kDefaultRankTol);

/// Schatten p-norm, p in [1, inf]. Pass std::numeric_limits<double>::infinity()
/// for the spectral norm.
double schatten_norm(const Matrix& a, double p);

/// Canonical angles between two column-orthonormal bases of equal shape,
/// ascending in [0, pi/2]. Zero vector iff the spans coincide.
Vector principal_angles(const Matrix& u1, const Matrix& u2);

/// Orthonormal factor U * V^T of the compact SVD (the partial isometry of the
/// polar decomposition). Maps the zero matrix to zero.
Matrix polar_factor(const Matrix& a, double rank_tol = kDefaultRankTol);

/// Throws InvalidInput if the matrix carries NaN or infinity.
void require_finite(const Matrix& a, const char* who);

}  // namespace pcadc
