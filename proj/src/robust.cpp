#include "pcadc/robust.hpp"

#include <chrono>
#include <cmath>

namespace pcadc {

namespace {

constexpr double kDomainTol = 1e-9;

Vector row_norms_of(const Matrix& x) {
  return x.rowwise().norm();
}

void validate_robust(const RobustConfig& cfg, Index max_components, const char* who) {
  if (cfg.components < 1 || cfg.components > max_components) {
    throw InvalidInput(std::string(who) + ": components out of range");
  }
  if (cfg.max_iters < 1) throw InvalidInput(std::string(who) + ": max_iters must be positive");
  if (cfg.epsilon.has_value() && !(*cfg.epsilon >= 0.0)) {
    throw InvalidInput(std::string(who) + ": epsilon must be nonnegative");
  }
}

// eps-regularized least-absolute-deviation value. For orthonormal W the
// radicand c_i^2 - ||(XW)_i||^2 equals the squared residual norm, which is
// the cancellation-free way to evaluate it near the subspace.
double regularized_primal(const Matrix& x, const Matrix& w, double eps) {
  const Matrix residual = x - x * w * w.transpose();
  double acc = 0.0;
  for (Index i = 0; i < residual.rows(); ++i) {
    acc += std::sqrt(residual.row(i).squaredNorm() + eps * eps);
  }
  return acc;
}

double trace_sqrt_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.transpose()));
  double acc = 0.0;
  for (Index i = 0; i < m.rows(); ++i) acc += std::sqrt(std::max(eig.eigenvalues()(i), 0.0));
  return acc;
}

// Huber value of one residual at threshold eps: the floored-weight surrogate
// the IRLS iteration decreases exactly.
double huber(double r, double eps) {
  if (eps == 0.0 || r >= eps) return r;
  return 0.5 * r * r / eps + 0.5 * eps;
}

template <class Step, class Obj>
SolverReport robust_loop(Matrix iterate, const RobustConfig& cfg, Step step, Obj obj) {
  const auto t0 = std::chrono::steady_clock::now();
  SolverReport rep;
  rep.objective_trace.push_back(obj(iterate));
  rep.termination = Termination::MaxIters;
  for (int k = 1; k <= cfg.max_iters; ++k) {
    iterate = step(iterate);
    const double f_prev = rep.objective_trace.back();
    const double f = obj(iterate);
    rep.objective_trace.push_back(f);
    rep.iterations = k;
    if (std::abs(f - f_prev) / std::max(1.0, std::abs(f_prev)) < cfg.tol) {
      rep.termination = Termination::Converged;
      break;
    }
  }
  rep.variable = std::move(iterate);
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

Matrix robust_init(const std::optional<Matrix>& init, Index rows, Index cols,
                   std::uint64_t seed, const char* who) {
  Matrix v;
  if (init.has_value()) {
    if (init->rows() != rows || init->cols() != cols) {
      throw InvalidInput(std::string(who) + ": initial iterate has wrong shape");
    }
    require_finite(*init, who);
    v = *init;
  } else {
    v = gaussian_init(rows, cols, seed);
  }
  return v;
}

}  // namespace

double resolve_robust_epsilon(const RobustConfig& cfg, const Vector& row_norms) {
  if (cfg.epsilon.has_value()) return *cfg.epsilon;
  return 1e-8 * row_norms.maxCoeff();
}

double robust_primal_objective(const Matrix& x, const Matrix& w) {
  require_finite(x, "robust_primal_objective");
  require_finite(w, "robust_primal_objective");
  if (w.rows() != x.cols()) throw InvalidInput("robust_primal_objective: W must be d x s");
  if (schatten_norm(w, std::numeric_limits<double>::infinity()) > 1.0 + kDomainTol) {
    throw InvalidInput("robust_primal_objective: spectral norm of W exceeds one");
  }
  const Matrix residual = x - x * w * w.transpose();
  return residual.rowwise().norm().sum();
}

double robust_dual_objective(const Matrix& k, const Matrix& h) {
  require_finite(k, "robust_dual_objective");
  require_finite(h, "robust_dual_objective");
  if (k.rows() != k.cols() || h.rows() != k.rows()) {
    throw InvalidInput("robust_dual_objective: shapes do not match");
  }
  double acc = 0.0;
  for (Index i = 0; i < k.rows(); ++i) {
    const double kii = std::max(k(i, i), 0.0);
    acc += std::sqrt(kii * (1.0 + h.row(i).squaredNorm()));
  }
  return acc - trace_sqrt_psd(h.transpose() * k * h);
}

SolverReport solve_robust_primal(const Matrix& x, const RobustConfig& cfg,
                                 const std::optional<Matrix>& init) {
  require_finite(x, "solve_robust_primal");
  validate_robust(cfg, std::min(x.rows(), x.cols()), "solve_robust_primal");
  const Vector norms = row_norms_of(x);
  const double eps = resolve_robust_epsilon(cfg, norms);

  // Orthonormal start: spectral norm exactly one, and the regularized
  // objective then coincides with the residual-based evaluation everywhere.
  Matrix w0 =
      polar_factor(robust_init(init, x.cols(), cfg.components, cfg.seed, "solve_robust_primal"));
  if (w0.cols() < cfg.components || svd_compact(w0).rank() < cfg.components) {
    throw InvalidInput("solve_robust_primal: initial iterate is rank deficient");
  }

  auto step = [&x, eps](const Matrix& w) {
    const Matrix xw = x * w;
    const Matrix residual = x - xw * w.transpose();
    Matrix y(xw.rows(), xw.cols());
    for (Index i = 0; i < xw.rows(); ++i) {
      const double denom = std::sqrt(residual.row(i).squaredNorm() + eps * eps);
      if (denom == 0.0) {
        y.row(i).setZero();  // (XW)_i = 0 with eps = 0: zero subgradient
      } else {
        y.row(i) = xw.row(i) / denom;
      }
    }
    return polar_factor(x.transpose() * y);
  };
  auto obj = [&x, eps](const Matrix& w) { return regularized_primal(x, w, eps); };
  return robust_loop(std::move(w0), cfg, step, obj);
}

SolverReport solve_robust_dual(const Matrix& k, const RobustConfig& cfg,
                               const std::optional<Matrix>& init) {
  require_finite(k, "solve_robust_dual");
  if (k.rows() != k.cols()) throw InvalidInput("solve_robust_dual: kernel must be square");
  validate_robust(cfg, k.rows(), "solve_robust_dual");
  const Vector norms = k.diagonal().cwiseMax(0.0).cwiseSqrt();
  if ((norms.array() <= 0.0).any()) {
    throw InvalidInput("solve_robust_dual: kernel diagonal must be positive");
  }
  const double eps = resolve_robust_epsilon(cfg, norms);

  Matrix h0 = robust_init(init, k.rows(), cfg.components, cfg.seed, "solve_robust_dual");

  auto step = [&k, eps](const Matrix& h) {
    const Matrix inner = h.transpose() * k * h;
    const CompactEig eig = eig_compact(0.5 * (inner + inner.transpose()));
    if (eig.rank() < h.cols()) {
      throw SingularInnerMatrix("solve_robust_dual: H^T K H is singular");
    }
    const Matrix y = k * h * eig.vectors *
                     eig.eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal() *
                     eig.vectors.transpose();
    Matrix next(h.rows(), h.cols());
    for (Index i = 0; i < h.rows(); ++i) {
      const double denom =
          std::sqrt(std::max(k(i, i) - y.row(i).squaredNorm(), 0.0) + eps * eps);
      next.row(i) = y.row(i) / denom;
    }
    return next;
  };
  // eps-regularized dual value; the unregularized one differs by O(eps^2).
  auto obj = [&k, eps](const Matrix& h) {
    double acc = 0.0;
    for (Index i = 0; i < k.rows(); ++i) {
      acc += std::sqrt((std::max(k(i, i), 0.0) + eps * eps) * (1.0 + h.row(i).squaredNorm()));
    }
    return acc - trace_sqrt_psd(h.transpose() * k * h);
  };
  return robust_loop(std::move(h0), cfg, step, obj);
}

SolverReport solve_robust_irls(const Matrix& x, const RobustConfig& cfg,
                               const std::optional<Matrix>& init) {
  require_finite(x, "solve_robust_irls");
  validate_robust(cfg, std::min(x.rows(), x.cols()), "solve_robust_irls");
  const double eps = resolve_robust_epsilon(cfg, row_norms_of(x));
  const int s = cfg.components;

  // Orthonormal start keeps the floored-weight surrogate a true majorizer
  // from the first step on.
  Matrix w0 =
      polar_factor(robust_init(init, x.cols(), cfg.components, cfg.seed, "solve_robust_irls"));
  if (svd_compact(w0).rank() < cfg.components) {
    throw InvalidInput("solve_robust_irls: initial iterate is rank deficient");
  }

  auto residuals = [&x](const Matrix& w) {
    return Vector((x - x * w * w.transpose()).rowwise().norm());
  };
  auto step = [&x, eps, s, &residuals](const Matrix& w) {
    const Vector beta = residuals(w).cwiseMax(eps);
    // top eigenvectors of X^T diag(1/beta) X
    const Matrix weighted = x.array().colwise() * beta.array().inverse();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(x.transpose() * weighted.matrix());
    const Index d = x.cols();
    Matrix next(d, s);
    for (int i = 0; i < s; ++i) next.col(i) = eig.eigenvectors().col(d - 1 - i);
    return next;
  };
  auto obj = [eps, &residuals](const Matrix& w) {
    const Vector r = residuals(w);
    double acc = 0.0;
    for (Index i = 0; i < r.size(); ++i) acc += huber(r(i), eps);
    return acc;
  };
  return robust_loop(std::move(w0), cfg, step, obj);
}

}  // namespace pcadc
