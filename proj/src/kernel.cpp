#include "pcadc/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pcadc/rng.hpp"

namespace pcadc {

namespace {

double kernel_eval(const KernelSpec& spec, const Eigen::RowVectorXd& a,
                   const Eigen::RowVectorXd& b) {
  if (spec.kind == KernelSpec::Kind::Linear) return a.dot(b);
  return std::exp(-spec.gamma * (a - b).squaredNorm());
}

}  // namespace

KernelSpec KernelSpec::rbf(double gamma) {
  if (!(gamma > 0.0)) throw InvalidInput("KernelSpec: rbf gamma must be positive");
  KernelSpec spec;
  spec.kind = Kind::Rbf;
  spec.gamma = gamma;
  return spec;
}

Matrix kernel_matrix(const Matrix& x, const KernelSpec& spec) {
  require_finite(x, "kernel_matrix");
  const Index n = x.rows();
  if (spec.kind == KernelSpec::Kind::Linear) {
    Matrix k = x * x.transpose();
    return 0.5 * (k + k.transpose());
  }
  Matrix k(n, n);
  for (Index i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (Index j = 0; j < i; ++j) {
      const double v = kernel_eval(spec, x.row(i), x.row(j));
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

NystromFactor nystrom(const Matrix& x, const KernelSpec& spec, Index pivots, std::uint64_t seed) {
  require_finite(x, "nystrom");
  const Index n = x.rows();
  if (pivots < 1 || pivots > n) throw InvalidInput("nystrom: pivots must be in [1, N]");

  // Seeded partial Fisher-Yates pivot draw without replacement.
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(Rng::derive(seed, 0x9e57));
  for (Index i = 0; i < pivots; ++i) {
    const Index j = i + static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(n - i));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  std::vector<Index> chosen(order.begin(), order.begin() + pivots);
  std::sort(chosen.begin(), chosen.end());

  Matrix c(n, pivots);
  for (Index j = 0; j < pivots; ++j) {
    for (Index i = 0; i < n; ++i) c(i, j) = kernel_eval(spec, x.row(i), x.row(chosen[static_cast<std::size_t>(j)]));
  }
  Matrix core(pivots, pivots);
  for (Index j = 0; j < pivots; ++j) core.row(j) = c.row(chosen[static_cast<std::size_t>(j)]);
  core = 0.5 * (core + core.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> eig(core);
  const double lambda_max = std::max(eig.eigenvalues().maxCoeff(), 0.0);
  const double floor = 1e-10 * std::max(lambda_max, 1.0);

  NystromFactor out;
  out.pivots = std::move(chosen);
  Vector lambda = eig.eigenvalues().cwiseMax(0.0);
  if (lambda.minCoeff() <= floor) {
    out.jittered = true;
    out.jitter = floor;
    lambda.array() += floor;
  }
  const Matrix inv_sqrt =
      eig.eigenvectors() * lambda.cwiseSqrt().cwiseInverse().asDiagonal() *
      eig.eigenvectors().transpose();
  out.factor = c * inv_sqrt;
  return out;
}

Vector nuclear_mu_rule(const Vector& sqrt_lambda) {
  return Vector::Ones(sqrt_lambda.size());
}

OosProjector build_oos_projector(const Matrix& h_star, const Matrix& k, const MuRule& mu_rule,
                                 const KernelSpec& spec, const Matrix& x, double rank_tol) {
  require_finite(h_star, "build_oos_projector");
  require_finite(k, "build_oos_projector");
  if (k.rows() != k.cols() || h_star.rows() != k.rows()) {
    throw InvalidInput("build_oos_projector: shapes do not match");
  }
  const Index s = h_star.cols();
  const Matrix inner = h_star.transpose() * k * h_star;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (inner + inner.transpose()));
  const Vector& lambda = eig.eigenvalues();
  const double lead = std::max(lambda.maxCoeff(), 0.0);
  if (lambda.minCoeff() <= rank_tol * lead * static_cast<double>(s) || lead == 0.0) {
    throw SingularInnerMatrix("build_oos_projector: H*^T K H* is singular");
  }

  const Vector mu = mu_rule(lambda.cwiseSqrt());
  if (mu.size() != s) throw InvalidInput("build_oos_projector: mu rule returned wrong length");

  OosProjector out;
  out.spec = spec;
  out.train = x;
  out.coeffs = eig.eigenvectors() *
               (mu.array() * lambda.array().rsqrt()).matrix().asDiagonal() *
               eig.eigenvectors().transpose() * h_star.transpose();
  return out;
}

Matrix OosProjector::linear_fold() const {
  if (spec.kind != KernelSpec::Kind::Linear) {
    throw InvalidInput("linear_fold: only defined for linear kernels");
  }
  return coeffs * train;
}

Vector project_point(const OosProjector& projector, const Vector& x_new) {
  if (x_new.size() != projector.train.cols()) {
    throw InvalidInput("project_point: feature count does not match training data");
  }
  if (projector.spec.kind == KernelSpec::Kind::Linear) {
    return projector.coeffs * (projector.train * x_new);
  }
  Vector k_tilde(projector.train.rows());
  for (Index i = 0; i < projector.train.rows(); ++i) {
    k_tilde(i) = kernel_eval(projector.spec, projector.train.row(i), x_new.transpose());
  }
  return projector.coeffs * k_tilde;
}

Matrix project_rows(const OosProjector& projector, const Matrix& x_new) {
  Matrix scores(x_new.rows(), projector.coeffs.rows());
  for (Index i = 0; i < x_new.rows(); ++i) {
    scores.row(i) = project_point(projector, x_new.row(i).transpose()).transpose();
  }
  return scores;
}

Matrix center_columns(const Matrix& x) {
  return x.rowwise() - x.colwise().mean();
}

}  // namespace pcadc
