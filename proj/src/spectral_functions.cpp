#include "pcadc/spectral_functions.hpp"

#include <cmath>
#include <limits>

namespace pcadc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDomainTol = 1e-9;

void require_rowwise_match(const SpectralFunction& fn, const Matrix& a, const char* who) {
  if (a.rows() != fn.row_norms.size()) {
    throw InvalidInput(std::string(who) + ": row count does not match row_norms");
  }
}

// Regularized row radius squared: c_i^2 + eps^2.
double row_radius_sq(const SpectralFunction& fn, Index i) {
  const double c = fn.row_norms(i);
  return c * c + fn.epsilon * fn.epsilon;
}

const char* kind_name(SpectralKind k) {
  switch (k) {
    case SpectralKind::IndicatorSpectralBall: return "IndicatorSpectralBall";
    case SpectralKind::SchattenNorm: return "SchattenNorm";
    case SpectralKind::SchattenPowerScaled: return "SchattenPowerScaled";
    case SpectralKind::SpectralNormSqHalf: return "SpectralNormSqHalf";
    case SpectralKind::NuclearNormSqHalf: return "NuclearNormSqHalf";
    case SpectralKind::FrobeniusSqHalf: return "FrobeniusSqHalf";
    case SpectralKind::FrobeniusNorm: return "FrobeniusNorm";
    case SpectralKind::IndicatorFrobeniusBall: return "IndicatorFrobeniusBall";
    case SpectralKind::RowwiseBallPenalty: return "RowwiseBallPenalty";
    case SpectralKind::RowwiseHyperbolicPenalty: return "RowwiseHyperbolicPenalty";
    case SpectralKind::RowwiseSqrtPenalty: return "RowwiseSqrtPenalty";
  }
  return "?";
}


SpectralFunction of_kind(SpectralKind kind) {
  SpectralFunction fn;
  fn.kind = kind;
  return fn;
}

}  // namespace

SpectralFunction SpectralFunction::indicator_spectral_ball() {
  return of_kind(SpectralKind::IndicatorSpectralBall);
}

SpectralFunction SpectralFunction::schatten_norm(double p) {
  if (p < 1.0 || std::isnan(p)) throw InvalidInput("SchattenNorm: p must be in [1, inf]");
  SpectralFunction fn = of_kind(SpectralKind::SchattenNorm);
  fn.p = p;
  return fn;
}

SpectralFunction SpectralFunction::schatten_power_scaled(double p) {
  if (!(p > 1.0) || std::isinf(p)) throw InvalidInput("SchattenPowerScaled: p must be in (1, inf)");
  SpectralFunction fn = of_kind(SpectralKind::SchattenPowerScaled);
  fn.p = p;
  fn.coefficient = 1.0 / p;
  return fn;
}

SpectralFunction SpectralFunction::spectral_norm_sq_half() {
  return of_kind(SpectralKind::SpectralNormSqHalf);
}

SpectralFunction SpectralFunction::nuclear_norm_sq_half() {
  return of_kind(SpectralKind::NuclearNormSqHalf);
}

SpectralFunction SpectralFunction::frobenius_sq_half() {
  return of_kind(SpectralKind::FrobeniusSqHalf);
}

SpectralFunction SpectralFunction::frobenius_norm() {
  return of_kind(SpectralKind::FrobeniusNorm);
}

SpectralFunction SpectralFunction::indicator_frobenius_ball() {
  return of_kind(SpectralKind::IndicatorFrobeniusBall);
}

SpectralFunction SpectralFunction::rowwise_ball_penalty(Vector row_norms, double epsilon) {
  if (row_norms.size() < 1 || (row_norms.array() <= 0.0).any()) {
    throw InvalidInput("RowwiseBallPenalty: row_norms must all be positive");
  }
  if (epsilon < 0.0 || !std::isfinite(epsilon)) {
    throw InvalidInput("RowwiseBallPenalty: epsilon must be nonnegative");
  }
  SpectralFunction fn = of_kind(SpectralKind::RowwiseBallPenalty);
  fn.row_norms = std::move(row_norms);
  fn.epsilon = epsilon;
  return fn;
}

SpectralFunction SpectralFunction::rowwise_hyperbolic_penalty(Vector row_norms, double epsilon) {
  SpectralFunction fn = rowwise_ball_penalty(std::move(row_norms), epsilon);
  fn.kind = SpectralKind::RowwiseHyperbolicPenalty;
  return fn;
}

SpectralFunction SpectralFunction::rowwise_sqrt_penalty(Vector row_norms) {
  SpectralFunction fn = rowwise_ball_penalty(std::move(row_norms), 0.0);
  fn.kind = SpectralKind::RowwiseSqrtPenalty;
  return fn;
}

bool SpectralFunction::operator==(const SpectralFunction& other) const {
  const auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
  };
  if (kind != other.kind || !close(p, other.p) || !close(coefficient, other.coefficient) ||
      !close(epsilon, other.epsilon) || row_norms.size() != other.row_norms.size()) {
    return false;
  }
  return row_norms.size() == 0 || row_norms == other.row_norms;
}

double evaluate(const SpectralFunction& fn, const Matrix& a) {
  require_finite(a, "evaluate");
  switch (fn.kind) {
    case SpectralKind::IndicatorSpectralBall: {
      const double top = schatten_norm(a, kInf);
      return top <= 1.0 + kDomainTol ? 0.0 : kInf;
    }
    case SpectralKind::SchattenNorm:
      return schatten_norm(a, fn.p);
    case SpectralKind::SchattenPowerScaled: {
      const CompactSvd f = svd_compact(a);
      double acc = 0.0;
      for (Index i = 0; i < f.rank(); ++i) acc += std::pow(f.singulars(i), fn.p);
      return fn.coefficient * acc;
    }
    case SpectralKind::SpectralNormSqHalf: {
      const double top = schatten_norm(a, kInf);
      return 0.5 * top * top;
    }
    case SpectralKind::NuclearNormSqHalf: {
      const double nuc = schatten_norm(a, 1.0);
      return 0.5 * nuc * nuc;
    }
    case SpectralKind::FrobeniusSqHalf:
      return 0.5 * a.squaredNorm();
    case SpectralKind::FrobeniusNorm:
      return a.norm();
    case SpectralKind::IndicatorFrobeniusBall:
      return a.norm() <= 1.0 + kDomainTol ? 0.0 : kInf;
    case SpectralKind::RowwiseBallPenalty: {
      require_rowwise_match(fn, a, "evaluate");
      double acc = 0.0;
      for (Index i = 0; i < a.rows(); ++i) {
        const double r2 = row_radius_sq(fn, i);
        const double n2 = a.row(i).squaredNorm();
        if (n2 > r2 * (1.0 + kDomainTol)) return kInf;
        acc -= std::sqrt(std::max(r2 - n2, 0.0));
      }
      return acc;
    }
    case SpectralKind::RowwiseHyperbolicPenalty: {
      require_rowwise_match(fn, a, "evaluate");
      double acc = 0.0;
      for (Index i = 0; i < a.rows(); ++i) {
        acc += std::sqrt(row_radius_sq(fn, i)) * std::sqrt(1.0 + a.row(i).squaredNorm());
      }
      return acc;
    }
    case SpectralKind::RowwiseSqrtPenalty: {
      require_rowwise_match(fn, a, "evaluate");
      double acc = 0.0;
      for (Index i = 0; i < a.rows(); ++i) {
        const double c = fn.row_norms(i);
        acc += std::sqrt(std::max(c * c - a.row(i).squaredNorm(), 0.0));
      }
      return acc;
    }
  }
  throw InvalidInput("evaluate: unknown kind");
}

SpectralFunction conjugate(const SpectralFunction& fn) {
  switch (fn.kind) {
    case SpectralKind::IndicatorSpectralBall:
      return SpectralFunction::schatten_norm(1.0);
    case SpectralKind::SchattenNorm:
      if (fn.p == 1.0) return SpectralFunction::indicator_spectral_ball();
      if (fn.p == 2.0) return SpectralFunction::indicator_frobenius_ball();
      throw NotInTable("conjugate: no indicator kind for the dual Schatten ball of p != 1, 2");
    case SpectralKind::SchattenPowerScaled:
      return SpectralFunction::schatten_power_scaled(fn.p / (fn.p - 1.0));
    case SpectralKind::SpectralNormSqHalf:
      return SpectralFunction::nuclear_norm_sq_half();
    case SpectralKind::NuclearNormSqHalf:
      return SpectralFunction::spectral_norm_sq_half();
    case SpectralKind::FrobeniusSqHalf:
      return SpectralFunction::frobenius_sq_half();
    case SpectralKind::FrobeniusNorm:
      return SpectralFunction::indicator_frobenius_ball();
    case SpectralKind::IndicatorFrobeniusBall:
      return SpectralFunction::frobenius_norm();
    case SpectralKind::RowwiseBallPenalty:
      return SpectralFunction::rowwise_hyperbolic_penalty(fn.row_norms, fn.epsilon);
    case SpectralKind::RowwiseHyperbolicPenalty:
      return SpectralFunction::rowwise_ball_penalty(fn.row_norms, fn.epsilon);
    case SpectralKind::RowwiseSqrtPenalty:
      break;
  }
  throw NotInTable(std::string("conjugate: ") + kind_name(fn.kind) + " has no closed form in the table");
}

Matrix subgradient(const SpectralFunction& fn, const Matrix& a, double rank_tol) {
  require_finite(a, "subgradient");
  switch (fn.kind) {
    case SpectralKind::IndicatorSpectralBall: {
      if (schatten_norm(a, kInf) > 1.0 + kDomainTol) {
        throw OutOfDomain("subgradient: point outside the spectral unit ball");
      }
      return Matrix::Zero(a.rows(), a.cols());
    }
    case SpectralKind::IndicatorFrobeniusBall: {
      if (a.norm() > 1.0 + kDomainTol) {
        throw OutOfDomain("subgradient: point outside the Frobenius unit ball");
      }
      return Matrix::Zero(a.rows(), a.cols());
    }
    case SpectralKind::SchattenNorm: {
      const CompactSvd f = svd_compact(a, rank_tol);
      if (f.rank() == 0) return Matrix::Zero(a.rows(), a.cols());
      if (fn.p == 1.0) return f.left * f.right.transpose();
      if (fn.p == 2.0) return a / a.norm();
      if (std::isinf(fn.p)) return f.left.col(0) * f.right.col(0).transpose();
      // mu_i = (sigma_i / ||sigma||_p)^(p-1)
      const double norm_p = schatten_norm(a, fn.p);
      Vector mu(f.rank());
      for (Index i = 0; i < f.rank(); ++i) mu(i) = std::pow(f.singulars(i) / norm_p, fn.p - 1.0);
      return f.left * mu.asDiagonal() * f.right.transpose();
    }
    case SpectralKind::SchattenPowerScaled: {
      const CompactSvd f = svd_compact(a, rank_tol);
      if (f.rank() == 0) return Matrix::Zero(a.rows(), a.cols());
      Vector mu(f.rank());
      for (Index i = 0; i < f.rank(); ++i) mu(i) = std::pow(f.singulars(i), fn.p - 1.0);
      return f.left * mu.asDiagonal() * f.right.transpose();
    }
    case SpectralKind::SpectralNormSqHalf: {
      const CompactSvd f = svd_compact(a, rank_tol);
      if (f.rank() == 0) return Matrix::Zero(a.rows(), a.cols());
      return f.singulars(0) * f.left.col(0) * f.right.col(0).transpose();
    }
    case SpectralKind::NuclearNormSqHalf: {
      const CompactSvd f = svd_compact(a, rank_tol);
      if (f.rank() == 0) return Matrix::Zero(a.rows(), a.cols());
      return f.singulars.sum() * f.left * f.right.transpose();
    }
    case SpectralKind::FrobeniusSqHalf:
      return a;
    case SpectralKind::FrobeniusNorm: {
      const double n = a.norm();
      if (n == 0.0) return Matrix::Zero(a.rows(), a.cols());
      return a / n;
    }
    case SpectralKind::RowwiseBallPenalty: {
      require_rowwise_match(fn, a, "subgradient");
      Matrix g(a.rows(), a.cols());
      for (Index i = 0; i < a.rows(); ++i) {
        const double r2 = row_radius_sq(fn, i);
        const double n2 = a.row(i).squaredNorm();
        if (n2 > r2 * (1.0 + kDomainTol)) {
          throw OutOfDomain("subgradient: row outside the regularized ball");
        }
        g.row(i) = a.row(i) / std::sqrt(std::max(r2 - n2, r2 * 1e-30));
      }
      return g;
    }
    case SpectralKind::RowwiseHyperbolicPenalty: {
      require_rowwise_match(fn, a, "subgradient");
      Matrix g(a.rows(), a.cols());
      for (Index i = 0; i < a.rows(); ++i) {
        g.row(i) = std::sqrt(row_radius_sq(fn, i)) * a.row(i) /
                   std::sqrt(1.0 + a.row(i).squaredNorm());
      }
      return g;
    }
    case SpectralKind::RowwiseSqrtPenalty:
      break;
  }
  throw NotInTable(std::string("subgradient: no selection rule for ") + kind_name(fn.kind));
}

double fenchel_young_gap(const SpectralFunction& fn, const Matrix& a, const Matrix& h) {
  require_finite(a, "fenchel_young_gap");
  require_finite(h, "fenchel_young_gap");
  if (a.rows() != h.rows() || a.cols() != h.cols()) {
    throw InvalidInput("fenchel_young_gap: shapes must match");
  }
  return evaluate(fn, a) + evaluate(conjugate(fn), h) - (a.array() * h.array()).sum();
}

Matrix dca_step(const SpectralFunction& g_fn, const SpectralFunction& f_fn,
                const LinearMap& apply_x, const LinearMap& apply_xt, const Matrix& w,
                double rank_tol) {
  const Matrix h = subgradient(f_fn, apply_x(w), rank_tol);
  return subgradient(conjugate(g_fn), apply_xt(h), rank_tol);
}

}  // namespace pcadc
