#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "projrip/grassmann.hpp"
#include "projrip/matops.hpp"
#include "projrip/random.hpp"

using namespace projrip;

TEST(QrOrthonormalize, ScaledIdentityColumns) {
  Matrix a(3, 2);
  a << 2, 0, 0, 3, 0, 0;
  Matrix expected(3, 2);
  expected << 1, 0, 0, 1, 0, 0;
  EXPECT_LE((qr_orthonormalize(a) - expected).norm(), 1e-15);
}

TEST(QrOrthonormalize, NormalizesSingleColumn) {
  Matrix a(2, 1);
  a << 1, 1;
  const Matrix q = qr_orthonormalize(a);
  EXPECT_NEAR(q(0, 0), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(q(1, 0), 1 / std::sqrt(2.0), 1e-15);
}

TEST(QrOrthonormalize, GaussianSampleIsOrthonormal) {
  Rng rng(Seed::from_u64(11));
  const Matrix a = rng.gaussian(6, 2);
  const Matrix q = qr_orthonormalize(a);
  EXPECT_LE((q.transpose() * q - Matrix::Identity(2, 2)).norm(), 1e-12);
  // span(Q) = span(A): A has no component outside span(Q)
  EXPECT_LE((a - q * (q.transpose() * a)).norm(), 1e-12 * a.norm());
}

TEST(QrOrthonormalize, RejectsRankDeficientInput) {
  Matrix a(3, 2);
  a << 1, 2, 2, 4, 3, 6;
  try {
    qr_orthonormalize(a);
    FAIL() << "expected RankDeficient";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankDeficient);
  }
}

TEST(QrOrthonormalize, RejectsNonFinite) {
  Matrix a = Matrix::Identity(3, 2);
  a(1, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    qr_orthonormalize(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFinite);
  }
}

TEST(QrOrthonormalize, PositiveDiagonalMakesOutputDeterministic) {
  Rng rng(Seed::from_u64(3));
  const Matrix a = rng.gaussian(5, 3);
  const Matrix q = qr_orthonormalize(a);
  const Matrix r = q.transpose() * a;
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_GT(r(i, i), 0.0);
}

TEST(QrOrthonormalize, ProjectionFromQMatchesProjectionFromA) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(Seed::from_u64(seed));
    const Matrix a = rng.gaussian(7, 3);
    const Matrix q = qr_orthonormalize(a);
    // X (X^T X)^{-1} X^T computed directly from the raw columns
    const Matrix pa = a * (a.transpose() * a).inverse() * a.transpose();
    EXPECT_LE((q * q.transpose() - pa).norm(), 1e-10);
    EXPECT_LE((qr_orthonormalize(q) - q).norm(), 1e-10);
  }
}

TEST(SymEig, DiagonalInput) {
  Matrix d = Matrix::Zero(2, 2);
  d(1, 1) = 1.0;
  const auto e = sym_eig(d);
  EXPECT_DOUBLE_EQ(e.values(0), 1.0);
  EXPECT_DOUBLE_EQ(e.values(1), 0.0);
}

TEST(SymEig, SwapMatrix) {
  Matrix a(2, 2);
  a << 0, 1, 1, 0;
  const auto e = sym_eig(a);
  EXPECT_NEAR(e.values(0), 1.0, 1e-15);
  EXPECT_NEAR(e.values(1), -1.0, 1e-15);
}

TEST(SymEig, ProjectionEigenvaluesAreOnesThenZeros) {
  for (Eigen::Index n = 2; n <= 10; ++n) {
    for (Eigen::Index s = 1; s < n; ++s) {
      const ProjectionMatrix p(sample_uniform_subspace(n, s, Seed::from_u64(static_cast<std::uint64_t>(n * 100 + s))));
      const auto e = sym_eig(p.mat());
      for (Eigen::Index k = 0; k < n; ++k) EXPECT_NEAR(e.values(k), k < s ? 1.0 : 0.0, tol::eig);
    }
  }
}

TEST(SymEig, ReconstructsRandomSymmetricMatrices) {
  for (Eigen::Index n : {1, 2, 5, 17, 64}) {
    Rng rng(Seed::from_u64(static_cast<std::uint64_t>(n)));
    const Matrix s = sym_part(rng.gaussian(n, n));
    const auto e = sym_eig(s);
    const Matrix rebuilt = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    EXPECT_LE((s - rebuilt).norm(), 1e-10 * std::max(1.0, s.norm()));
    EXPECT_LE((e.vectors.transpose() * e.vectors - Matrix::Identity(n, n)).norm(), tol::ortho);
    for (Eigen::Index k = 1; k < n; ++k) EXPECT_GE(e.values(k - 1), e.values(k));
  }
}

TEST(SymEig, RejectsAsymmetricInput) {
  Matrix a(2, 2);
  a << 0, 1, 0, 0;
  try {
    sym_eig(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSymmetric);
  }
}

TEST(Frobenius, IdentityNorm) { EXPECT_DOUBLE_EQ(frobenius_norm(Matrix::Identity(3, 3)), std::sqrt(3.0)); }

TEST(Frobenius, SymmetricIsOrthogonalToSkew) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(Seed::from_u64(seed));
    const Matrix a = rng.gaussian(6, 6);
    const Matrix b = rng.gaussian(6, 6);
    const Matrix sym = a + a.transpose();
    const Matrix skew = b - b.transpose();
    EXPECT_LE(std::abs(frobenius_inner(sym, skew)), 1e-12 * sym.norm() * skew.norm());
  }
}

TEST(Frobenius, ProjectionNormIsSqrtRank) {
  for (Eigen::Index s = 1; s < 9; ++s) {
    const ProjectionMatrix p(sample_uniform_subspace(9, s, Seed::from_u64(static_cast<std::uint64_t>(s))));
    EXPECT_NEAR(frobenius_norm(p.mat()), std::sqrt(static_cast<double>(s)), 1e-12);
  }
}

TEST(Frobenius, InnerProductIsSymmetricBilinear) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(Seed::from_u64(seed));
    const Matrix a = rng.gaussian(4, 5), b = rng.gaussian(4, 5), c = rng.gaussian(4, 5);
    const double alpha = rng.normal(), beta = rng.normal();
    EXPECT_DOUBLE_EQ(frobenius_inner(a, b), frobenius_inner(b, a));
    EXPECT_NEAR(frobenius_inner(alpha * a + beta * b, c),
                alpha * frobenius_inner(a, c) + beta * frobenius_inner(b, c), 1e-12 * (1 + a.norm() * c.norm() + b.norm() * c.norm()));
    EXPECT_NEAR(frobenius_inner(a, a), frobenius_norm(a) * frobenius_norm(a), 1e-12 * a.squaredNorm());
  }
}

TEST(Frobenius, ShapeMismatch) {
  try {
    frobenius_inner(Matrix::Zero(2, 3), Matrix::Zero(3, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
}

TEST(SeedDerivation, DeterministicAndDistinct) {
  const Seed a = Seed::from_u64(42);
  EXPECT_EQ(a, Seed::from_u64(42));
  EXPECT_EQ(a.derive(3), a.derive(3));
  EXPECT_FALSE(a.derive(3) == a.derive(4));
  EXPECT_FALSE(a == Seed::from_u64(43));
  EXPECT_EQ(a.hex().size(), 64u);
}
