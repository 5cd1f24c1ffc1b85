#include "pcadc/solvers.hpp"

#include <chrono>
#include <cmath>

#include "pcadc/rng.hpp"
#include "pcadc/spectral_functions.hpp"

namespace pcadc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDomainTol = 1e-9;

double indicator_spectral(const Matrix& a) {
  return schatten_norm(a, kInf) <= 1.0 + kDomainTol ? 0.0 : kInf;
}

double indicator_frobenius(const Matrix& a) {
  return a.norm() <= 1.0 + kDomainTol ? 0.0 : kInf;
}

// sum of sqrt(max(lambda_i, 0)) of a symmetric s x s matrix: the nuclear
// norm of X^T H read off H^T K H.
double trace_sqrt_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.transpose()));
  double acc = 0.0;
  for (Index i = 0; i < m.rows(); ++i) acc += std::sqrt(std::max(eig.eigenvalues()(i), 0.0));
  return acc;
}

double rayleigh_trace(const Matrix& m_times_h, const Matrix& h) {
  return (h.array() * m_times_h.array()).sum();
}

void validate_config(const SolverConfig& cfg, Index max_components, const char* who) {
  if (cfg.components < 1 || cfg.components > max_components) {
    throw InvalidInput(std::string(who) + ": components out of range");
  }
  if (!(cfg.tol >= 0.0)) throw InvalidInput(std::string(who) + ": tol must be nonnegative");
  if (cfg.max_iters < 1) throw InvalidInput(std::string(who) + ": max_iters must be positive");
  if (cfg.stopping == Stopping::RelErrToReference && !std::isfinite(cfg.reference)) {
    throw InvalidInput(std::string(who) + ": RelErrToReference needs a finite reference");
  }
}

Matrix resolve_init(const std::optional<Matrix>& init, Index rows, Index cols,
                    std::uint64_t seed, const char* who) {
  if (init.has_value()) {
    if (init->rows() != rows || init->cols() != cols) {
      throw InvalidInput(std::string(who) + ": initial iterate has wrong shape");
    }
    require_finite(*init, who);
    return *init;
  }
  return gaussian_init(rows, cols, seed);
}

// Rescale so the spectral norm is exactly one.
Matrix unit_spectral(Matrix v, const char* who) {
  const double top = schatten_norm(v, kInf);
  if (top == 0.0) throw InvalidInput(std::string(who) + ": zero initial iterate");
  return v / top;
}

Matrix unit_frobenius(Matrix v, const char* who) {
  const double n = v.norm();
  if (n == 0.0) throw InvalidInput(std::string(who) + ": zero initial iterate");
  return v / n;
}

template <class Step, class Obj>
SolverReport run_loop(Matrix iterate, const SolverConfig& cfg, Step step, Obj obj) {
  const auto t0 = std::chrono::steady_clock::now();
  SolverReport rep;
  rep.objective_trace.reserve(static_cast<std::size_t>(cfg.max_iters) + 1);
  rep.objective_trace.push_back(obj(iterate));
  rep.termination = Termination::MaxIters;

  Matrix prev_basis;
  if (cfg.stopping == Stopping::SubspaceAngle) prev_basis = svd_compact(iterate).left;

  for (int k = 1; k <= cfg.max_iters; ++k) {
    iterate = step(iterate);
    const double f_prev = rep.objective_trace.back();
    const double f = obj(iterate);
    rep.objective_trace.push_back(f);
    rep.iterations = k;

    bool stop = false;
    switch (cfg.stopping) {
      case Stopping::RelObjChange:
        stop = std::abs(f - f_prev) / std::max(1.0, std::abs(f_prev)) < cfg.tol;
        break;
      case Stopping::SubspaceAngle: {
        Matrix basis = svd_compact(iterate).left;
        if (basis.cols() == prev_basis.cols() && basis.cols() > 0) {
          stop = principal_angles(prev_basis, basis).maxCoeff() < cfg.tol;
        }
        prev_basis = std::move(basis);
        break;
      }
      case Stopping::RelErrToReference:
        stop = std::abs(f - cfg.reference) / std::max(1e-300, std::abs(cfg.reference)) < cfg.tol;
        break;
    }
    if (stop) {
      rep.termination = Termination::Converged;
      break;
    }
  }

  rep.variable = std::move(iterate);
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

void fix_column_signs(Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (std::abs(m(i, j)) > 1e-12) {
        if (m(i, j) < 0.0) m.col(j) = -m.col(j);
        break;
      }
    }
  }
}

bool is_sample_space(Formulation f) {
  return f == Formulation::M || f == Formulation::O || f == Formulation::Q ||
         f == Formulation::HolderDual;
}

}  // namespace

Matrix gaussian_init(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(Rng::derive(seed, 0xA11CE));
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  }
  return m;
}

// -- Objective catalogue ------------------------------------------------

double objective(Formulation form, const Matrix& x, const Matrix& variable) {
  require_finite(x, "objective");
  require_finite(variable, "objective");
  const Index expected_rows = is_sample_space(form) ? x.rows() : x.cols();
  if (variable.rows() != expected_rows || variable.cols() < 1) {
    throw InvalidInput("objective: variable shape does not match the formulation");
  }

  switch (form) {
    case Formulation::L: {
      if (indicator_spectral(variable) == kInf) return kInf;
      return -0.5 * (x * variable).squaredNorm();
    }
    case Formulation::M:
      return 0.5 * variable.squaredNorm() - schatten_norm(x.transpose() * variable, 1.0);
    case Formulation::N: {
      if (indicator_spectral(variable) == kInf) return kInf;
      return -(x * variable).norm();
    }
    case Formulation::O: {
      if (indicator_frobenius(variable) == kInf) return kInf;
      return -schatten_norm(x.transpose() * variable, 1.0);
    }
    case Formulation::P: {
      const double top = schatten_norm(variable, kInf);
      return 0.5 * top * top - (x * variable).norm();
    }
    case Formulation::Q: {
      if (indicator_frobenius(variable) == kInf) return kInf;
      const double nuc = schatten_norm(x.transpose() * variable, 1.0);
      return -0.5 * nuc * nuc;
    }
    case Formulation::HolderPrimal: {
      const Matrix gram = variable.transpose() * variable;
      return 0.25 * gram.squaredNorm() - 0.5 * (x * variable).squaredNorm();
    }
    case Formulation::HolderDual: {
      const CompactSvd f = svd_compact(x.transpose() * variable);
      double acc = 0.0;
      for (Index i = 0; i < f.rank(); ++i) acc += std::pow(f.singulars(i), 4.0 / 3.0);
      return 0.5 * variable.squaredNorm() - 0.75 * acc;
    }
  }
  throw InvalidInput("objective: unknown formulation");
}

double objective_kernel(Formulation form, const Matrix& k, const Matrix& h) {
  require_finite(k, "objective_kernel");
  require_finite(h, "objective_kernel");
  if (h.rows() != k.rows() || k.rows() != k.cols()) {
    throw InvalidInput("objective_kernel: shapes do not match");
  }
  const Matrix inner = h.transpose() * k * h;

  switch (form) {
    case Formulation::M:
      return 0.5 * h.squaredNorm() - trace_sqrt_psd(inner);
    case Formulation::O: {
      if (indicator_frobenius(h) == kInf) return kInf;
      return -trace_sqrt_psd(inner);
    }
    case Formulation::Q: {
      if (indicator_frobenius(h) == kInf) return kInf;
      const double nuc = trace_sqrt_psd(inner);
      return -0.5 * nuc * nuc;
    }
    case Formulation::HolderDual: {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (inner + inner.transpose()));
      double acc = 0.0;
      for (Index i = 0; i < inner.rows(); ++i) {
        acc += std::pow(std::max(eig.eigenvalues()(i), 0.0), 2.0 / 3.0);
      }
      return 0.5 * h.squaredNorm() - 0.75 * acc;
    }
    default:
      throw InvalidInput("objective_kernel: formulation is not sample-space");
  }
}

double optimal_value_reference(const Matrix& x, int components) {
  const CompactSvd f = svd_compact(x);
  if (components < 1 || components > f.rank()) {
    throw InvalidInput("optimal_value_reference: components exceeds rank");
  }
  double acc = 0.0;
  for (Index i = 0; i < components; ++i) acc += f.singulars(i) * f.singulars(i);
  return -0.5 * acc;
}

double formulation_optimum(Formulation form, const Matrix& x, int components) {
  const CompactSvd f = svd_compact(x);
  if (components < 1 || components > f.rank()) {
    throw InvalidInput("formulation_optimum: components exceeds rank");
  }
  double sum_sq = 0.0, sum_p4 = 0.0;
  for (Index i = 0; i < components; ++i) {
    const double s = f.singulars(i);
    sum_sq += s * s;
    sum_p4 += s * s * s * s;
  }
  switch (form) {
    case Formulation::L:
    case Formulation::M:
    case Formulation::P:
    case Formulation::Q:
      return -0.5 * sum_sq;
    case Formulation::N:
    case Formulation::O:
      return -std::sqrt(sum_sq);
    case Formulation::HolderPrimal:
    case Formulation::HolderDual:
      return -0.25 * sum_p4;
  }
  throw InvalidInput("formulation_optimum: unknown formulation");
}

DensePcaSolution dense_pca_oracle(const Matrix& x, int components) {
  require_finite(x, "dense_pca_oracle");
  const Index d = x.cols();
  if (components < 1 || components > std::min(x.rows(), d)) {
    throw InvalidInput("dense_pca_oracle: components out of range");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(x.transpose() * x);
  DensePcaSolution sol;
  sol.basis.resize(d, components);
  sol.values.resize(components);
  for (int i = 0; i < components; ++i) {
    sol.values(i) = eig.eigenvalues()(d - 1 - i);
    sol.basis.col(i) = eig.eigenvectors().col(d - 1 - i);
  }
  const double lead = eig.eigenvalues()(d - 1);
  if (sol.values(components - 1) <= kDefaultRankTol * lead * static_cast<double>(d)) {
    throw InvalidInput("dense_pca_oracle: components exceeds numerical rank");
  }
  fix_column_signs(sol.basis);
  return sol;
}

Matrix dual_from_primal(Formulation primal_form, const Matrix& x, const Matrix& w) {
  switch (primal_form) {
    case Formulation::L:
    case Formulation::HolderPrimal:
      return x * w;  // gradient of the half-squared Frobenius norm
    case Formulation::N:
    case Formulation::P: {
      Matrix b = x * w;
      const double n = b.norm();
      return n == 0.0 ? b : Matrix(b / n);
    }
    default:
      throw InvalidInput("dual_from_primal: expected a coefficient-space formulation");
  }
}

Matrix primal_from_dual(Formulation primal_form, const Matrix& x, const Matrix& h) {
  const Matrix z = x.transpose() * h;
  switch (primal_form) {
    case Formulation::L:
    case Formulation::N:
      return polar_factor(z);
    case Formulation::P: {
      const CompactSvd f = svd_compact(z);
      if (f.rank() == 0) return Matrix::Zero(z.rows(), z.cols());
      return f.singulars.sum() * f.left * f.right.transpose();
    }
    case Formulation::HolderPrimal: {
      const CompactSvd f = svd_compact(z);
      if (f.rank() == 0) return Matrix::Zero(z.rows(), z.cols());
      return f.left * f.singulars.array().pow(1.0 / 3.0).matrix().asDiagonal() *
             f.right.transpose();
    }
    default:
      throw InvalidInput("primal_from_dual: expected a coefficient-space formulation");
  }
}

// -- Single iterate updates ----------------------------------------------

Matrix dca_variance_step(const Matrix& m, const Matrix& v) { return polar_factor(m * v); }

Matrix dca_holder_primal_step(const Matrix& xtx, const Matrix& w) {
  const CompactSvd f = svd_compact(xtx * w);
  if (f.rank() == 0) return Matrix::Zero(w.rows(), w.cols());
  return f.left * f.singulars.array().pow(1.0 / 3.0).matrix().asDiagonal() * f.right.transpose();
}

Matrix dca_holder_dual_step(const Matrix& k, const Matrix& h) {
  const Matrix inner = h.transpose() * k * h;
  const CompactEig eig = eig_compact(0.5 * (inner + inner.transpose()));
  if (eig.rank() < h.cols()) {
    throw SingularInnerMatrix("dca_holder_dual_step: H^T K H is singular");
  }
  return k * h * eig.vectors *
         eig.eigenvalues.array().pow(-1.0 / 3.0).matrix().asDiagonal() *
         eig.vectors.transpose();
}

Matrix kernel_dual_step(Formulation form, const Matrix& k, const Matrix& h) {
  const auto eig_whitened = [&]() {  // K H V Lambda^(-1/2) V^T
    const Matrix inner = h.transpose() * k * h;
    const CompactEig eig = eig_compact(0.5 * (inner + inner.transpose()));
    if (eig.rank() < h.cols()) {
      throw SingularInnerMatrix("kernel_dual_step: H^T K H is singular");
    }
    Matrix whitened = k * h * eig.vectors *
                      eig.eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal() *
                      eig.vectors.transpose();
    return std::make_pair(std::move(whitened), eig.eigenvalues);
  };

  switch (form) {
    case Formulation::L:
      return eig_whitened().first;
    case Formulation::M:
      return polar_factor(k * h);
    case Formulation::N: {
      Matrix next = eig_whitened().first;
      return next / next.norm();
    }
    case Formulation::O: {
      const double tr = rayleigh_trace(k * h, h);
      if (!(tr > 0.0)) throw SingularInnerMatrix("kernel_dual_step: trace(H^T K H) vanished");
      return polar_factor(std::pow(tr, -0.5) * (k * h));
    }
    case Formulation::P: {
      auto [next, lambda] = eig_whitened();
      next *= lambda.cwiseSqrt().sum();
      return next / next.norm();
    }
    case Formulation::Q: {
      const Matrix kh = k * h;
      const double tr = rayleigh_trace(kh, h);
      if (!(tr > 0.0)) throw SingularInnerMatrix("kernel_dual_step: trace(H^T K H) vanished");
      const CompactSvd f = svd_compact(kh);
      if (f.rank() == 0) return Matrix::Zero(h.rows(), h.cols());
      return std::pow(tr, -0.5) * f.singulars.sum() * f.left * f.right.transpose();
    }
    default:
      throw InvalidInput("kernel_dual_step: formulation must be L through Q");
  }
}

// -- Solvers -------------------------------------------------------------

SolverReport solve_dca_variance_primal(const Matrix& x, const SolverConfig& cfg,
                                       const std::optional<Matrix>& init) {
  require_finite(x, "solve_dca_variance_primal");
  validate_config(cfg, std::min(x.rows(), x.cols()), "solve_dca_variance_primal");
  const Matrix c = x.transpose() * x;
  Matrix w0 = unit_spectral(
      resolve_init(init, x.cols(), cfg.components, cfg.seed, "solve_dca_variance_primal"),
      "solve_dca_variance_primal");
  return run_loop(
      std::move(w0), cfg, [&c](const Matrix& w) { return dca_variance_step(c, w); },
      [&c](const Matrix& w) { return -0.5 * rayleigh_trace(c * w, w); });
}

SolverReport solve_dca_variance_dual(const Matrix& k, const SolverConfig& cfg,
                                     const std::optional<Matrix>& init) {
  require_finite(k, "solve_dca_variance_dual");
  if (k.rows() != k.cols()) throw InvalidInput("solve_dca_variance_dual: kernel must be square");
  validate_config(cfg, k.rows(), "solve_dca_variance_dual");
  Matrix h0 = unit_spectral(
      resolve_init(init, k.rows(), cfg.components, cfg.seed, "solve_dca_variance_dual"),
      "solve_dca_variance_dual");
  return run_loop(
      std::move(h0), cfg, [&k](const Matrix& h) { return dca_variance_step(k, h); },
      [&k](const Matrix& h) { return -0.5 * rayleigh_trace(k * h, h); });
}

SolverReport solve_dca_holder_primal(const Matrix& x, const SolverConfig& cfg,
                                     const std::optional<Matrix>& init) {
  require_finite(x, "solve_dca_holder_primal");
  validate_config(cfg, std::min(x.rows(), x.cols()), "solve_dca_holder_primal");
  const Matrix c = x.transpose() * x;
  Matrix w0 = resolve_init(init, x.cols(), cfg.components, cfg.seed, "solve_dca_holder_primal");
  if ((c * w0).norm() == 0.0) {
    throw InvalidInput("solve_dca_holder_primal: X^T X W0 must be nonzero");
  }
  return run_loop(
      std::move(w0), cfg, [&c](const Matrix& w) { return dca_holder_primal_step(c, w); },
      [&c](const Matrix& w) {
        const Matrix gram = w.transpose() * w;
        return 0.25 * gram.squaredNorm() - 0.5 * rayleigh_trace(c * w, w);
      });
}

SolverReport solve_dca_holder_dual(const Matrix& k, const SolverConfig& cfg,
                                   const std::optional<Matrix>& init) {
  require_finite(k, "solve_dca_holder_dual");
  if (k.rows() != k.cols()) throw InvalidInput("solve_dca_holder_dual: kernel must be square");
  validate_config(cfg, k.rows(), "solve_dca_holder_dual");
  Matrix h0 = resolve_init(init, k.rows(), cfg.components, cfg.seed, "solve_dca_holder_dual");
  return run_loop(
      std::move(h0), cfg, [&k](const Matrix& h) { return dca_holder_dual_step(k, h); },
      [&k](const Matrix& h) { return objective_kernel(Formulation::HolderDual, k, h); });
}

SolverReport kernel_dual_iteration(Formulation form, const Matrix& k, const SolverConfig& cfg,
                                   const std::optional<Matrix>& init) {
  require_finite(k, "kernel_dual_iteration");
  if (k.rows() != k.cols()) throw InvalidInput("kernel_dual_iteration: kernel must be square");
  validate_config(cfg, k.rows(), "kernel_dual_iteration");

  // Objective each update provably descends: the sample-space DC problem the
  // iteration is the DCA for. L, N, P target the duals (M, O, Q); M, O, Q
  // target the transposed variants, whose values match at the optimum.
  const auto trace_objective = [&k, form](const Matrix& h) -> double {
    switch (form) {
      case Formulation::L:
        return objective_kernel(Formulation::M, k, h);
      case Formulation::M: {
        if (indicator_spectral(h) == kInf) return kInf;
        return -0.5 * rayleigh_trace(k * h, h);
      }
      case Formulation::N:
        return objective_kernel(Formulation::O, k, h);
      case Formulation::O: {
        if (indicator_spectral(h) == kInf) return kInf;
        return -std::sqrt(std::max(rayleigh_trace(k * h, h), 0.0));
      }
      case Formulation::P:
        return objective_kernel(Formulation::Q, k, h);
      case Formulation::Q: {
        const double top = schatten_norm(h, kInf);
        return 0.5 * top * top - std::sqrt(std::max(rayleigh_trace(k * h, h), 0.0));
      }
      default:
        throw InvalidInput("kernel_dual_iteration: formulation must be L through Q");
    }
  };

  Matrix h0 = unit_frobenius(
      resolve_init(init, k.rows(), cfg.components, cfg.seed, "kernel_dual_iteration"),
      "kernel_dual_iteration");
  return run_loop(
      std::move(h0), cfg, [&k, form](const Matrix& h) { return kernel_dual_step(form, k, h); },
      trace_objective);
}

SolverReport simultaneous_iteration(const SymmetricMap& apply, Index dim, const SolverConfig& cfg,
                                    const std::optional<Matrix>& init) {
  validate_config(cfg, dim, "simultaneous_iteration");
  Matrix w0 = resolve_init(init, dim, cfg.components, cfg.seed, "simultaneous_iteration");
  Matrix q0 = qr_compact(w0).first;
  return run_loop(
      std::move(q0), cfg, [&apply](const Matrix& q) { return qr_compact(apply(q)).first; },
      [&apply](const Matrix& q) { return -0.5 * rayleigh_trace(apply(q), q); });
}

SolverReport proximal_gradient(Formulation form, const Matrix& x, const SolverConfig& cfg,
                               const std::optional<Matrix>& init) {
  require_finite(x, "proximal_gradient");
  validate_config(cfg, std::min(x.rows(), x.cols()), "proximal_gradient");
  if (!(cfg.stepsize > 0.0)) throw InvalidInput("proximal_gradient: stepsize must be positive");
  const double step = cfg.stepsize;

  if (form == Formulation::L || form == Formulation::N) {
    const Matrix c = x.transpose() * x;
    Matrix w0 = project_spectral_ball(
        resolve_init(init, x.cols(), cfg.components, cfg.seed, "proximal_gradient"));
    auto advance = [&c, step, form](const Matrix& w) {
      Matrix g = c * w;
      if (form == Formulation::N) {
        const double n = std::sqrt(std::max(rayleigh_trace(g, w), 0.0));
        if (n == 0.0) {
          g.setZero();
        } else {
          g /= n;
        }
      }
      return project_spectral_ball(w + step * g);
    };
    auto obj = [&c, form](const Matrix& w) {
      const double t = rayleigh_trace(c * w, w);
      return form == Formulation::L ? -0.5 * t : -std::sqrt(std::max(t, 0.0));
    };
    return run_loop(std::move(w0), cfg, advance, obj);
  }

  if (form == Formulation::O || form == Formulation::Q) {
    Matrix h0 = project_frobenius_ball(
        resolve_init(init, x.rows(), cfg.components, cfg.seed, "proximal_gradient"));
    auto advance = [&x, step, form](const Matrix& h) {
      const Matrix z = x.transpose() * h;
      const CompactSvd f = svd_compact(z);
      Matrix g;
      if (f.rank() == 0) {
        g = Matrix::Zero(h.rows(), h.cols());
      } else {
        g = x * (f.left * f.right.transpose());
        if (form == Formulation::Q) g *= f.singulars.sum();
      }
      return project_frobenius_ball(h + step * g);
    };
    auto obj = [&x, form](const Matrix& h) {
      const double nuc = schatten_norm(x.transpose() * h, 1.0);
      return form == Formulation::O ? -nuc : -0.5 * nuc * nuc;
    };
    return run_loop(std::move(h0), cfg, advance, obj);
  }

  throw InvalidInput("proximal_gradient: formulation must be L, N, O or Q");
}

SolverReport proximal_gradient_kernel(Formulation form, const Matrix& k, const SolverConfig& cfg,
                                      const std::optional<Matrix>& init) {
  require_finite(k, "proximal_gradient_kernel");
  if (k.rows() != k.cols()) throw InvalidInput("proximal_gradient_kernel: kernel must be square");
  validate_config(cfg, k.rows(), "proximal_gradient_kernel");
  if (form != Formulation::O && form != Formulation::Q) {
    throw InvalidInput("proximal_gradient_kernel: formulation must be O or Q");
  }
  if (!(cfg.stepsize > 0.0)) {
    throw InvalidInput("proximal_gradient_kernel: stepsize must be positive");
  }
  const double step = cfg.stepsize;

  Matrix h0 = project_frobenius_ball(
      resolve_init(init, k.rows(), cfg.components, cfg.seed, "proximal_gradient_kernel"));
  auto advance = [&k, step, form](const Matrix& h) {
    const Matrix inner = h.transpose() * k * h;
    const CompactEig eig = eig_compact(0.5 * (inner + inner.transpose()));
    Matrix g;
    if (eig.rank() == 0) {
      g = Matrix::Zero(h.rows(), h.cols());
    } else {
      g = k * h * eig.vectors * eig.eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal() *
          eig.vectors.transpose();
      if (form == Formulation::Q) g *= eig.eigenvalues.cwiseSqrt().sum();
    }
    return project_frobenius_ball(h + step * g);
  };
  auto obj = [&k, form](const Matrix& h) { return objective_kernel(form, k, h); };
  return run_loop(std::move(h0), cfg, advance, obj);
}

// -- Projections and postprocessing --------------------------------------

Matrix project_spectral_ball(const Matrix& w) {
  require_finite(w, "project_spectral_ball");
  if (schatten_norm(w, kInf) <= 1.0) return w;
  const CompactSvd f = svd_compact(w);
  return f.left * f.singulars.cwiseMin(1.0).asDiagonal() * f.right.transpose();
}

Matrix project_frobenius_ball(const Matrix& h) {
  require_finite(h, "project_frobenius_ball");
  const double n = h.norm();
  return n <= 1.0 ? h : Matrix(h / n);
}

Matrix rotate_to_eigenbasis(const Matrix& x, const Matrix& w) {
  const Matrix b = x * w;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(b.transpose() * b);
  const Index s = w.cols();
  Matrix rot(s, s);
  for (Index i = 0; i < s; ++i) rot.col(i) = eig.eigenvectors().col(s - 1 - i);
  return w * rot;
}

}  // namespace pcadc
