#include "hierhmc/densities.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hierhmc {

double normal_logpdf(double x, double mu, double sd) {
  if (!(sd > 0.0)) throw std::domain_error("normal_logpdf: sd must be positive");
  const double z = (x - mu) / sd;
  return -std::log(sd) - kHalfLog2Pi - 0.5 * z * z;
}

double half_cauchy_logpdf(double x, double scale) {
  if (!(scale > 0.0)) throw std::domain_error("half_cauchy_logpdf: scale must be positive");
  if (x < 0.0) throw std::domain_error("half_cauchy_logpdf: x must be non-negative");
  const double r = x / scale;
  return std::numbers::ln2 - std::log(std::numbers::pi * scale) - std::log1p(r * r);
}

Vec finite_diff_gradient(const ScalarField& f, const Vec& q, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_gradient: h must be positive");
  Vec grad(q.size());
  Vec probe = q;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    probe(i) = q(i) + h;
    const double up = f(probe);
    probe(i) = q(i) - h;
    const double down = f(probe);
    probe(i) = q(i);
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw std::domain_error("finite_diff_gradient: non-finite value probing coordinate " +
                              std::to_string(i));
    }
    grad(i) = (up - down) / (2.0 * h);
  }
  return grad;
}

Matrix finite_diff_jacobian(const VectorField& f, const Vec& q, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_jacobian: h must be positive");
  Vec probe = q;
  Matrix jac;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    probe(i) = q(i) + h;
    const Vec up = f(probe);
    probe(i) = q(i) - h;
    const Vec down = f(probe);
    probe(i) = q(i);
    if (i == 0) jac.resize(up.size(), q.size());
    if (!up.allFinite() || !down.allFinite()) {
      throw std::domain_error("finite_diff_jacobian: non-finite value probing coordinate " +
                              std::to_string(i));
    }
    jac.col(i) = (up - down) / (2.0 * h);
  }
  return jac;
}

}  // namespace hierhmc
