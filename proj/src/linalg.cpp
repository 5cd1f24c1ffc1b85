#include "pcadc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pcadc {

namespace {

// Fix column signs so the first nonzero entry of each column of `primary` is
// nonnegative; `mate` columns flip along (may be empty).
void fix_column_signs(Matrix& primary, Matrix* mate) {
  for (Index j = 0; j < primary.cols(); ++j) {
    double lead = 0.0;
    for (Index i = 0; i < primary.rows(); ++i) {
      if (std::abs(primary(i, j)) > 1e-12) {
        lead = primary(i, j);
        break;
      }
    }
    if (lead < 0.0) {
      primary.col(j) = -primary.col(j);
      if (mate != nullptr) mate->col(j) = -mate->col(j);
    }
  }
}

}  // namespace

void require_finite(const Matrix& a, const char* who) {
  if (!a.allFinite()) {
    throw InvalidInput(std::string(who) + ": matrix has non-finite entries");
  }
}

DataMatrix DataMatrix::make(Matrix values) {
  if (values.rows() < 1 || values.cols() < 1) {
    throw InvalidInput("DataMatrix: need at least one sample and one feature");
  }
  require_finite(values, "DataMatrix");
  return DataMatrix{std::move(values)};
}

CompactSvd svd_compact(const Matrix& a, double rank_tol) {
  require_finite(a, "svd_compact");
  if (a.rows() < 1 || a.cols() < 1) throw InvalidInput("svd_compact: empty matrix");
  if (rank_tol < 0.0) throw InvalidInput("svd_compact: rank_tol must be nonnegative");

  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  const double cutoff = rank_tol * sigma_max * static_cast<double>(std::max(a.rows(), a.cols()));

  Index r = 0;
  while (r < sv.size() && sv(r) > cutoff && sv(r) > 0.0) ++r;

  CompactSvd out;
  out.left = svd.matrixU().leftCols(r);
  out.singulars = sv.head(r);
  out.right = svd.matrixV().leftCols(r);
  fix_column_signs(out.left, &out.right);
  return out;
}

CompactEig eig_compact(const Matrix& s, double rank_tol) {
  require_finite(s, "eig_compact");
  if (s.rows() != s.cols() || s.rows() < 1) throw InvalidInput("eig_compact: matrix must be square");

  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidInput("eig_compact: matrix is not symmetric");
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (s + s.transpose()));
  if (eig.info() != Eigen::Success) throw InvalidInput("eig_compact: eigensolver failed");

  const Index n = s.rows();
  Vector lambda(n);
  Matrix vectors(n, n);
  for (Index i = 0; i < n; ++i) {  // descending order
    lambda(i) = eig.eigenvalues()(n - 1 - i);
    vectors.col(i) = eig.eigenvectors().col(n - 1 - i);
  }

  const double lambda_max = lambda(0);
  if (lambda(n - 1) < -1e-10 * std::max(1.0, lambda_max)) {
    throw InvalidInput("eig_compact: matrix has a significant negative eigenvalue");
  }

  const double cutoff = rank_tol * std::max(lambda_max, 0.0) * static_cast<double>(n);
  Index r = 0;
  while (r < n && lambda(r) > cutoff && lambda(r) > 0.0) ++r;

  CompactEig out;
  out.vectors = vectors.leftCols(r);
  out.eigenvalues = lambda.head(r);
  fix_column_signs(out.vectors, nullptr);
  return out;
}

std::pair<Matrix, Matrix> qr_compact(const Matrix& a, double rank_tol) {
  require_finite(a, "qr_compact");
  const Index m = a.rows(), n = a.cols();
  if (m < n || n < 1) throw InvalidInput("qr_compact: need m >= n >= 1");

  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(m, n);
  Matrix r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();

  double diag_max = 0.0;
  for (Index i = 0; i < n; ++i) diag_max = std::max(diag_max, std::abs(r(i, i)));
  const double cutoff = rank_tol * diag_max * static_cast<double>(std::max(m, n));
  for (Index i = 0; i < n; ++i) {
    if (std::abs(r(i, i)) <= cutoff || r(i, i) == 0.0) {
      throw RankDeficient("qr_compact: matrix is rank deficient");
    }
  }

  for (Index i = 0; i < n; ++i) {  // positive-diagonal convention
    if (r(i, i) < 0.0) {
      r.row(i) = -r.row(i);
      q.col(i) = -q.col(i);
    }
  }
  return {std::move(q), std::move(r)};
}

double schatten_norm(const Matrix& a, double p) {
  require_finite(a, "schatten_norm");
  if (p < 1.0 || std::isnan(p)) throw InvalidInput("schatten_norm: p must be in [1, inf]");

  if (p == 2.0) return a.norm();

  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  if (std::isinf(p)) return sigma_max;
  if (sigma_max == 0.0) return 0.0;

  // Scale by sigma_max so large p does not overflow.
  double acc = 0.0;
  for (Index i = 0; i < sv.size(); ++i) acc += std::pow(sv(i) / sigma_max, p);
  return sigma_max * std::pow(acc, 1.0 / p);
}

Vector principal_angles(const Matrix& u1, const Matrix& u2) {
  require_finite(u1, "principal_angles");
  require_finite(u2, "principal_angles");
  if (u1.rows() != u2.rows() || u1.cols() != u2.cols() || u1.cols() < 1) {
    throw InvalidInput("principal_angles: bases must have identical shape");
  }
  const Index s = u1.cols();
  const auto check_orthonormal = [s](const Matrix& u) {
    return ((u.transpose() * u) - Matrix::Identity(s, s)).cwiseAbs().maxCoeff() <= 1e-8;
  };
  if (!check_orthonormal(u1) || !check_orthonormal(u2)) {
    throw InvalidInput("principal_angles: inputs must be column-orthonormal");
  }

  // Cosines from U1^T U2; sines from the residual U2 - U1 (U1^T U2). The
  // sine route evaluates the same angles but stays accurate below 1e-8,
  // where acos of a near-one cosine loses half the digits.
  const Matrix cross = u1.transpose() * u2;
  Eigen::JacobiSVD<Matrix> svd_cos(cross);
  Eigen::JacobiSVD<Matrix> svd_sin(u2 - u1 * cross);
  Vector angles(s);
  for (Index i = 0; i < s; ++i) {
    const double c = std::clamp(svd_cos.singularValues()(i), 0.0, 1.0);
    const double sn = std::clamp(svd_sin.singularValues()(s - 1 - i), 0.0, 1.0);
    angles(s - 1 - i) = c * c > 0.5 ? std::asin(sn) : std::acos(c);  // ascending
  }
  return angles;
}

Matrix polar_factor(const Matrix& a, double rank_tol) {
  const CompactSvd f = svd_compact(a, rank_tol);
  if (f.rank() == 0) return Matrix::Zero(a.rows(), a.cols());
  return f.left * f.right.transpose();
}

}  // namespace pcadc
