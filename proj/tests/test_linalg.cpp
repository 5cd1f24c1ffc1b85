#include "pcadc/linalg.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "oracles.hpp"

using namespace pcadc;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void expect_compact_svd_invariants(const Matrix& a, const CompactSvd& f) {
  const Index r = f.rank();
  EXPECT_LE((f.left.transpose() * f.left - Matrix::Identity(r, r)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((f.right.transpose() * f.right - Matrix::Identity(r, r)).cwiseAbs().maxCoeff(), 1e-10);
  for (Index i = 0; i < r; ++i) {
    EXPECT_GT(f.singulars(i), 0.0);
    if (i > 0) EXPECT_LE(f.singulars(i), f.singulars(i - 1));
  }
  const double denom = std::max(a.norm(), 1e-300);
  EXPECT_LE((f.reconstruct() - a).norm() / denom, 1e-8);
}

}  // namespace

TEST(SvdCompact, Identity) {
  const CompactSvd f = svd_compact(Matrix::Identity(3, 3));
  ASSERT_EQ(f.rank(), 3);
  EXPECT_LE((f.singulars - Vector::Ones(3)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((f.reconstruct() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SvdCompact, RankOneDiagonal) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 3.0;
  const CompactSvd f = svd_compact(a);
  ASSERT_EQ(f.rank(), 1);
  EXPECT_NEAR(f.singulars(0), 3.0, 1e-14);
  EXPECT_NEAR(std::abs(f.left(0, 0)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(f.right(0, 0)), 1.0, 1e-14);
}

TEST(SvdCompact, MatchesJacobiOracle) {
  const Matrix a = oracle::random_matrix(5, 3, 7);
  const CompactSvd f = svd_compact(a);
  const oracle::SvdResult ref = oracle::jacobi_svd(a);
  ASSERT_EQ(f.rank(), 3);
  for (Index i = 0; i < 3; ++i) {
    EXPECT_NEAR(f.singulars(i), ref.sigma(i), 1e-8);
    // singular vectors agree up to sign, column by column
    EXPECT_NEAR(std::abs(f.left.col(i).dot(ref.u.col(i))), 1.0, 1e-8);
    EXPECT_NEAR(std::abs(f.right.col(i).dot(ref.v.col(i))), 1.0, 1e-8);
  }
}

TEST(SvdCompact, InvariantsOnRandomInputs) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Index m = 3 + static_cast<Index>(seed % 5);
    const Index n = 2 + static_cast<Index>(seed % 4);
    const Matrix a = oracle::random_matrix(m, n, 100 + seed);
    expect_compact_svd_invariants(a, svd_compact(a));
  }
}

TEST(SvdCompact, DropsTinySingularValues) {
  // rank-2 matrix built from two outer products
  const Matrix a = oracle::random_matrix(6, 1, 1) * oracle::random_matrix(1, 4, 2) +
                   oracle::random_matrix(6, 1, 3) * oracle::random_matrix(1, 4, 4);
  const CompactSvd f = svd_compact(a, 1e-10);
  EXPECT_EQ(f.rank(), 2);
  expect_compact_svd_invariants(a, f);
}

TEST(SvdCompact, RejectsNonFinite) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = std::nan("");
  EXPECT_THROW(svd_compact(a), InvalidInput);
}

TEST(EigCompact, RankOneDiagonal) {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 0) = 4.0;
  const CompactEig e = eig_compact(s);
  ASSERT_EQ(e.rank(), 1);
  EXPECT_NEAR(e.eigenvalues(0), 4.0, 1e-14);
  EXPECT_NEAR(std::abs(e.vectors(0, 0)), 1.0, 1e-14);
}

TEST(EigCompact, IdentityKeepsBothEigenvalues) {
  const CompactEig e = eig_compact(Matrix::Identity(2, 2));
  ASSERT_EQ(e.rank(), 2);
  EXPECT_LE((e.eigenvalues - Vector::Ones(2)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((e.vectors.transpose() * e.vectors - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(),
            1e-10);
}

TEST(EigCompact, MatchesJacobiOracle) {
  const Matrix g = oracle::random_matrix(5, 5, 3);
  const Matrix k = g.transpose() * g;
  const Matrix h = oracle::random_matrix(5, 3, 31);
  const Matrix s = h.transpose() * k * h;
  const CompactEig e = eig_compact(0.5 * (s + s.transpose()));
  const oracle::EigResult ref = oracle::jacobi_eig(0.5 * (s + s.transpose()));
  ASSERT_EQ(e.rank(), 3);
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(e.eigenvalues(i), ref.values(i), 1e-9 * ref.values(0));
  EXPECT_LE((e.reconstruct() - s).norm() / s.norm(), 1e-8);
}

TEST(EigCompact, ToleratesRoundoffNegativeEigenvalues) {
  // eigenvalues 1 and -1e-12: inside the -1e-10 relative tolerance, dropped
  const Matrix v = oracle::random_orthogonal(2, 71);
  Vector lambda(2);
  lambda << 1.0, -1e-12;
  const Matrix s = v * lambda.asDiagonal() * v.transpose();
  const CompactEig e = eig_compact(0.5 * (s + s.transpose()));
  EXPECT_EQ(e.rank(), 1);
  EXPECT_NEAR(e.eigenvalues(0), 1.0, 1e-10);
}

TEST(EigCompact, RejectsAsymmetric) {
  Matrix s(2, 2);
  s << 1.0, 0.5, 0.0, 1.0;
  EXPECT_THROW(eig_compact(s), InvalidInput);
}

TEST(EigCompact, RejectsSignificantNegativeEigenvalue) {
  Matrix s = Matrix::Identity(2, 2);
  s(1, 1) = -1.0;
  EXPECT_THROW(eig_compact(s), InvalidInput);
}

TEST(QrCompact, OrthonormalInputIsFixedPoint) {
  const Matrix a = oracle::random_orthonormal(6, 3, 11);
  const auto [q, r] = qr_compact(a);
  EXPECT_LE((q - a).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((r - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(QrCompact, SingleScaledColumn) {
  Matrix a = Matrix::Zero(3, 1);
  a(0, 0) = 2.0;
  const auto [q, r] = qr_compact(a);
  EXPECT_NEAR(q(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(r(0, 0), 2.0, 1e-14);
}

TEST(QrCompact, MatchesGramSchmidtOracle) {
  const Matrix a = oracle::random_matrix(6, 3, 11);
  const auto [q, r] = qr_compact(a);
  EXPECT_LE((q * r - a).norm(), 1e-10 * a.norm());
  EXPECT_LE((q.transpose() * q - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-10);
  for (Index i = 0; i < 3; ++i) EXPECT_GT(r(i, i), 0.0);

  const auto [q_ref, r_ref] = oracle::mgs_qr(a);
  EXPECT_LE((q - q_ref).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((r - r_ref).cwiseAbs().maxCoeff(), 1e-10 * a.norm());
}

TEST(QrCompact, DetectsRankDeficiency) {
  Matrix a(4, 2);
  a.col(0) = oracle::random_matrix(4, 1, 5);
  a.col(1) = 2.0 * a.col(0);
  EXPECT_THROW(qr_compact(a), RankDeficient);
}

TEST(SchattenNorm, DiagonalCases) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 3.0;
  a(1, 1) = 4.0;
  EXPECT_NEAR(schatten_norm(a, 2.0), 5.0, 1e-12);
  EXPECT_NEAR(schatten_norm(a, 1.0), 7.0, 1e-12);
  EXPECT_NEAR(schatten_norm(a, kInf), 4.0, 1e-12);
}

TEST(SchattenNorm, NuclearMatchesJacobiOracle) {
  const Matrix a = oracle::random_matrix(4, 4, 5);
  const double nuclear = schatten_norm(a, 1.0);
  // trace of sqrt(A^T A) through the independent eigensolver
  const oracle::EigResult e = oracle::jacobi_eig(a.transpose() * a);
  double expected = 0.0;
  for (Index i = 0; i < 4; ++i) expected += std::sqrt(std::max(e.values(i), 0.0));
  EXPECT_NEAR(nuclear, expected, 1e-9);
}

TEST(SchattenNorm, FrobeniusIdentity) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Matrix a = oracle::random_matrix(4, 3, 200 + seed);
    EXPECT_NEAR(schatten_norm(a, 2.0) * schatten_norm(a, 2.0), a.squaredNorm(),
                1e-10 * a.squaredNorm());
  }
}

TEST(SchattenNorm, UnitaryInvariance) {
  const Matrix a = oracle::random_matrix(4, 3, 21);
  const Matrix u = oracle::random_orthogonal(3, 22);
  const Matrix v = oracle::random_orthogonal(4, 23);
  for (const double p : {1.0, 1.5, 2.0, 3.0, kInf}) {
    EXPECT_NEAR(schatten_norm(v * a * u, p), schatten_norm(a, p), 1e-10);
  }
}

TEST(SchattenNorm, RejectsBadP) {
  EXPECT_THROW(schatten_norm(Matrix::Identity(2, 2), 0.5), InvalidInput);
}

TEST(PrincipalAngles, IdenticalBasesGiveZero) {
  const Matrix u = oracle::random_orthonormal(5, 2, 31);
  EXPECT_LE(principal_angles(u, u).maxCoeff(), 1e-12);
}

TEST(PrincipalAngles, OrthogonalDirections) {
  Matrix e1 = Matrix::Zero(2, 1), e2 = Matrix::Zero(2, 1);
  e1(0, 0) = 1.0;
  e2(1, 0) = 1.0;
  EXPECT_NEAR(principal_angles(e1, e2)(0), M_PI / 2.0, 1e-12);
}

TEST(PrincipalAngles, RotationInvariance) {
  const Matrix u = oracle::random_orthonormal(6, 3, 41);
  const Matrix rot = oracle::random_orthogonal(3, 42);
  EXPECT_LE(principal_angles(u, u * rot).maxCoeff(), 1e-10);
}

TEST(PrincipalAngles, SymmetricInArguments) {
  const Matrix u1 = oracle::random_orthonormal(6, 2, 51);
  const Matrix u2 = oracle::random_orthonormal(6, 2, 52);
  EXPECT_LE((principal_angles(u1, u2) - principal_angles(u2, u1)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PrincipalAngles, RejectsNonOrthonormal) {
  const Matrix u = oracle::random_orthonormal(5, 2, 61);
  EXPECT_THROW(principal_angles(2.0 * u, u), InvalidInput);
}

TEST(PolarFactor, ZeroMapsToZero) {
  EXPECT_EQ(polar_factor(Matrix::Zero(3, 2)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Concurrency, PureOperationsRunFromManyThreads) {
  // all operations are pure functions over immutable inputs
  const Matrix a = oracle::random_matrix(12, 6, 81);
  const CompactSvd reference = svd_compact(a);
  const double reference_nuclear = schatten_norm(a, 1.0);
  std::vector<std::thread> workers;
  std::atomic<int> mismatches{0};
  for (int t = 0; t < 8; ++t) {
    workers.emplace_back([&]() {
      for (int i = 0; i < 50; ++i) {
        const CompactSvd f = svd_compact(a);
        if ((f.singulars - reference.singulars).cwiseAbs().maxCoeff() != 0.0 ||
            schatten_norm(a, 1.0) != reference_nuclear) {
          ++mismatches;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  EXPECT_EQ(mismatches.load(), 0);
}

TEST(DataMatrix, RejectsNonFinite) {
  Matrix bad = Matrix::Ones(2, 2);
  bad(1, 1) = kInf;
  EXPECT_THROW(DataMatrix::make(bad), InvalidInput);
  EXPECT_THROW(DataMatrix::make(Matrix()), InvalidInput);
}
