#include <gtest/gtest.h>

#include <random>

#include "qfmin/dense_core.hpp"
#include "qfmin/random_instances.hpp"

namespace qfmin {
namespace {

using namespace std::complex_literals;

Matrix diag(std::initializer_list<double> values) {
  Matrix out = Matrix::Zero(static_cast<Index>(values.size()), static_cast<Index>(values.size()));
  Index i = 0;
  for (double v : values) out(i, i) = v, ++i;
  return out;
}

// Real symmetric PSD of rank 2.
Matrix rank2_q() {
  Matrix q(3, 3);
  q << 14, 20, 28, 20, 83, 40, 28, 40, 56;
  return q;
}

Matrix triple_loop(const Matrix& a, const Matrix& b) {
  Matrix c = Matrix::Zero(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < b.cols(); ++j)
      for (Index k = 0; k < a.cols(); ++k) c(i, j) += a(i, k) * b(k, j);
  return c;
}

TEST(Matmul, IdentityAndDiagonal) {
  std::mt19937_64 rng(1);
  const Matrix m = random::gaussian(rng, 3, 4, true);
  EXPECT_EQ(matmul(identity(3), m), m);
  EXPECT_EQ(matmul(diag({1, 2}), diag({3, 4})), diag({3, 8}));
}

TEST(Matmul, AgreesWithTripleLoop) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random::gaussian(rng, 4, 3, trial % 2 == 1);
    const Matrix b = random::gaussian(rng, 3, 2, trial % 2 == 1);
    const Matrix ref = triple_loop(a, b);
    EXPECT_LE((matmul(a, b) - ref).norm(), 1e-13 * ref.norm());
  }
}

TEST(Matmul, DimensionMismatchThrows) {
  try {
    matmul(Matrix::Zero(2, 3), Matrix::Zero(2, 3));
    FAIL() << "expected DimensionMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(Adjoint, Examples) {
  Matrix sym(2, 2);
  sym << 1, 2, 2, 5;
  EXPECT_EQ(adjoint(sym), sym);

  Matrix shift(2, 2);
  shift << 0, 1, 0, 0;
  Matrix expected(2, 2);
  expected << 0, 0, 1, 0;
  EXPECT_EQ(adjoint(shift), expected);

  Matrix i1(1, 1);
  i1(0, 0) = 1i;
  EXPECT_EQ(adjoint(i1)(0, 0), Scalar(0, -1));
}

TEST(Adjoint, InvolutionIsExact) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = random::gaussian(rng, 5, 3, true);
    EXPECT_EQ(adjoint(adjoint(a)), a);
  }
}

TEST(Svd, DiagonalAndZero) {
  const SvdResult d = svd(diag({3, 1}));
  EXPECT_NEAR(d.sigma(0), 3.0, 1e-15);
  EXPECT_NEAR(d.sigma(1), 1.0, 1e-15);

  const SvdResult z = svd(Matrix::Zero(3, 2));
  EXPECT_EQ(z.sigma.size(), 2);
  EXPECT_EQ(z.sigma.maxCoeff(), 0.0);
}

TEST(Svd, RejectsNonFinite) {
  Matrix a = Matrix::Ones(2, 2);
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(svd(a), Error);
}

TEST(Svd, PropertyUnitaryFactorsAndReconstruction) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> dim(1, 50);
  for (int trial = 0; trial < 40; ++trial) {
    const Index m = dim(rng);
    const Index n = dim(rng);
    const Matrix a = random::gaussian(rng, m, n, trial % 2 == 0);
    const SvdResult dec = svd(a);
    EXPECT_LE((dec.u.adjoint() * dec.u - identity(m)).norm(), 1e-12 * static_cast<double>(m));
    EXPECT_LE((dec.v.adjoint() * dec.v - identity(n)).norm(), 1e-12 * static_cast<double>(n));
    Matrix sigma = Matrix::Zero(m, n);
    for (Index i = 0; i < dec.sigma.size(); ++i) sigma(i, i) = dec.sigma(i);
    EXPECT_LE((dec.u * sigma * dec.v.adjoint() - a).norm(), 1e-12 * a.norm());
    for (Index i = 0; i + 1 < dec.sigma.size(); ++i) EXPECT_GE(dec.sigma(i), dec.sigma(i + 1));
    EXPECT_GE(dec.sigma.minCoeff(), 0.0);
  }
}

TEST(Eigh, KnownSpectra) {
  const EigResult d = eigh(diag({2, 1}));
  EXPECT_NEAR(d.lambda(0), 1.0, 1e-15);
  EXPECT_NEAR(d.lambda(1), 2.0, 1e-15);

  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const EigResult s = eigh(swap);
  EXPECT_NEAR(s.lambda(0), -1.0, 1e-15);
  EXPECT_NEAR(s.lambda(1), 1.0, 1e-15);
}

TEST(Eigh, RankTwoHasOneNullDirection) {
  const Matrix q = rank2_q();
  Vector w(3);
  w << 2, 0, -1;
  // Hand arithmetic: rows of Q dotted with (2, 0, -1) are 28-28, 40-40, 56-56.
  EXPECT_EQ((q * w).norm(), 0.0);

  const EigResult d = eigh(q);
  EXPECT_NEAR(d.lambda(0), 0.0, 1e-12);
  EXPECT_GT(d.lambda(1), 1.0);
  const Vector null_vec = d.q.col(0);
  const double cosine = std::abs(null_vec.dot(w)) / w.norm();
  EXPECT_NEAR(cosine, 1.0, 1e-12);
}

TEST(Eigh, NotHermitianThrows) {
  Matrix a(2, 2);
  a << 0, 1, 0, 0;
  try {
    eigh(a);
    FAIL() << "expected NotHermitian";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
  }
}

TEST(Eigh, PropertyReconstructionAscending) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dim(1, 40);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = dim(rng);
    const Matrix g = random::gaussian(rng, n, n, trial % 2 == 1);
    const Matrix a = g + g.adjoint();
    const EigResult dec = eigh(a);
    const Matrix rebuilt = dec.q * dec.lambda.cast<Scalar>().asDiagonal() * dec.q.adjoint();
    EXPECT_LE((rebuilt - a).norm(), 1e-12 * a.norm());
    EXPECT_LE((dec.q.adjoint() * dec.q - identity(n)).norm(), 1e-12 * static_cast<double>(n));
    for (Index i = 0; i + 1 < n; ++i) EXPECT_LE(dec.lambda(i), dec.lambda(i + 1));
  }
}

}  // namespace
}  // namespace qfmin
