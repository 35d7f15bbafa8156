#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "hierhmc/linalg.hpp"
#include "hierhmc/random.hpp"

using namespace hierhmc;

namespace {

SymMatrix random_symmetric(Eigen::Index d, RngStream& rng) {
  Matrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = rng.normal();
  return SymMatrix(Matrix(a + a.transpose()));
}

}  // namespace

TEST(SymMatrix, MirrorsUpperTriangle) {
  Matrix m(2, 2);
  m << 1.0, 2.0, 99.0, 3.0;
  const SymMatrix s(m);
  EXPECT_EQ(s(1, 0), 2.0);
  EXPECT_EQ(s(0, 1), 2.0);
  EXPECT_THROW(SymMatrix(Matrix(2, 3)), std::invalid_argument);
}

TEST(SymMatrix, SetWritesBothTriangles) {
  SymMatrix s(3);
  s.set(0, 2, 4.0);
  s.add(2, 0, 1.0);
  EXPECT_EQ(s(0, 2), 5.0);
  EXPECT_EQ(s(2, 0), 5.0);
}

// Oracle: Eigen's SelfAdjointEigenSolver.
TEST(Eigh, MatchesEigenSolverOnRandomMatrices) {
  RngStream rng(11, 0);
  for (Eigen::Index d : {1, 2, 3, 5, 8, 20}) {
    for (int rep = 0; rep < 5; ++rep) {
      const SymMatrix m = random_symmetric(d, rng);
      const EigenPair pair = eigh(m);
      Eigen::SelfAdjointEigenSolver<Matrix> oracle(m.matrix());
      const Vec expected = oracle.eigenvalues().reverse();
      const double scale = std::max(1.0, expected.cwiseAbs().maxCoeff());
      EXPECT_LT((pair.values - expected).cwiseAbs().maxCoeff(), 1e-12 * scale) << "d=" << d;
      EXPECT_LT(max_abs(pair.reconstruct() - m.matrix()), 1e-11 * scale);
      EXPECT_LT(max_abs(pair.vectors.transpose() * pair.vectors - Matrix::Identity(d, d)), 1e-12);
    }
  }
}

TEST(Eigh, DescendingOrder) {
  const SymMatrix m = SymMatrix::diagonal((Vec(4) << -3.0, 7.0, 0.0, 2.0).finished());
  const EigenPair pair = eigh(m);
  EXPECT_EQ(pair.values(0), 7.0);
  EXPECT_EQ(pair.values(1), 2.0);
  EXPECT_EQ(pair.values(2), 0.0);
  EXPECT_EQ(pair.values(3), -3.0);
  EXPECT_NEAR(std::abs(pair.vectors(1, 0)), 1.0, 1e-15);
}

TEST(Eigh, RepeatedEigenvalues) {
  const EigenPair pair = eigh(SymMatrix::identity(6));
  EXPECT_LT((pair.values - Vec::Ones(6)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT(max_abs(pair.reconstruct() - Matrix::Identity(6, 6)), 1e-15);
}

TEST(Eigh, NonFiniteInputThrowsNumericalError) {
  SymMatrix m(2);
  m.set(0, 1, std::numeric_limits<double>::quiet_NaN());
  try {
    eigh(m, "test matrix");
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("test matrix"), std::string::npos);
  }
}

TEST(Cholesky, FactorsPositiveDefinite) {
  Matrix a(3, 3);
  a << 4.0, 2.0, 0.4, 2.0, 3.0, 0.5, 0.4, 0.5, 2.0;
  const auto l = cholesky(SymMatrix(a));
  ASSERT_TRUE(l.has_value());
  EXPECT_LT(max_abs(*l * l->transpose() - a), 1e-14);
  EXPECT_EQ((*l)(0, 1), 0.0);
}

TEST(Cholesky, RejectsIndefinite) {
  const SymMatrix m = SymMatrix::diagonal((Vec(2) << 1.0, -1.0).finished());
  EXPECT_FALSE(cholesky(m).has_value());
  EXPECT_FALSE(cholesky(SymMatrix(2)).has_value());
}
