#pragma once

#include <functional>
#include <numbers>

#include "hierhmc/linalg.hpp"

namespace hierhmc {

inline constexpr double kHalfLog2Pi = 0.91893853320467274178;

/// Log density of N(mu, sd^2) at x. Throws std::domain_error for sd <= 0.
double normal_logpdf(double x, double mu, double sd);

/// Log density of the half-Cauchy(0, scale) distribution on x >= 0.
/// Throws std::domain_error for x < 0 or scale <= 0.
double half_cauchy_logpdf(double x, double scale);

using ScalarField = std::function<double(const Vec&)>;
using VectorField = std::function<Vec(const Vec&)>;

/// Central-difference gradient. Throws std::domain_error naming the
/// coordinate when f is not finite at a probe point.
Vec finite_diff_gradient(const ScalarField& f, const Vec& q, double h);

/// Central-difference Jacobian of a vector field, column i holding
/// d field / d q_i.
Matrix finite_diff_jacobian(const VectorField& f, const Vec& q, double h);

}  // namespace hierhmc
