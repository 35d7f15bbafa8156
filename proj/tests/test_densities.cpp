#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hierhmc/densities.hpp"

using namespace hierhmc;

TEST(NormalLogpdf, ClosedForm) {
  EXPECT_NEAR(normal_logpdf(0.0, 0.0, 1.0), -0.5 * std::log(2.0 * std::numbers::pi), 1e-15);
  const double x = 1.3, mu = -0.4, sd = 2.5;
  const double expected =
      -0.5 * ((x - mu) / sd) * ((x - mu) / sd) - std::log(sd) - 0.5 * std::log(2.0 * std::numbers::pi);
  EXPECT_NEAR(normal_logpdf(x, mu, sd), expected, 1e-14);
  EXPECT_THROW(normal_logpdf(0.0, 0.0, 0.0), std::domain_error);
}

TEST(HalfCauchyLogpdf, ClosedForm) {
  const double x = 1.7, s = 2.5;
  const double expected = std::log(2.0 / (std::numbers::pi * s * (1.0 + (x / s) * (x / s))));
  EXPECT_NEAR(half_cauchy_logpdf(x, s), expected, 1e-14);
  EXPECT_NEAR(half_cauchy_logpdf(0.0, 1.0), std::log(2.0 / std::numbers::pi), 1e-15);
  EXPECT_THROW(half_cauchy_logpdf(-1.0, 1.0), std::domain_error);
  EXPECT_THROW(half_cauchy_logpdf(1.0, -1.0), std::domain_error);
}

TEST(HalfCauchyLogpdf, IntegratesToOne) {
  // Substitution x = s tan(u) maps [0, inf) to [0, pi/2).
  const double s = 2.5;
  const int n = 20000;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = (i + 0.5) * (std::numbers::pi / 2.0) / n;
    const double x = s * std::tan(u);
    total += std::exp(half_cauchy_logpdf(x, s)) * s / (std::cos(u) * std::cos(u));
  }
  EXPECT_NEAR(total * (std::numbers::pi / 2.0) / n, 1.0, 1e-8);
}

TEST(FiniteDiff, GradientOfQuadratic) {
  const ScalarField f = [](const Vec& q) { return q(0) * q(0) + 3.0 * q(0) * q(1) - std::sin(q(1)); };
  Vec q(2);
  q << 0.7, -1.2;
  const Vec g = finite_diff_gradient(f, q, 1e-5);
  EXPECT_NEAR(g(0), 2.0 * q(0) + 3.0 * q(1), 1e-8);
  EXPECT_NEAR(g(1), 3.0 * q(0) - std::cos(q(1)), 1e-8);
  EXPECT_THROW(finite_diff_gradient(f, q, 0.0), std::invalid_argument);
}

TEST(FiniteDiff, JacobianColumns) {
  const VectorField f = [](const Vec& q) {
    Vec out(2);
    out << q(0) * q(1), std::exp(q(0));
    return out;
  };
  Vec q(2);
  q << 0.3, 2.0;
  const Matrix j = finite_diff_jacobian(f, q, 1e-5);
  EXPECT_NEAR(j(0, 0), q(1), 1e-8);
  EXPECT_NEAR(j(0, 1), q(0), 1e-8);
  EXPECT_NEAR(j(1, 0), std::exp(q(0)), 1e-8);
  EXPECT_NEAR(j(1, 1), 0.0, 1e-8);
}

TEST(FiniteDiff, NonFiniteProbeNamesCoordinate) {
  const ScalarField f = [](const Vec& q) { return std::log(q(1)); };
  Vec q(2);
  q << 1.0, 0.0;
  try {
    finite_diff_gradient(f, q, 1e-3);
    FAIL();
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("coordinate"), std::string::npos);
  }
}
