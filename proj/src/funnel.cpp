#include <cmath>

#include "hierhmc/densities.hpp"
#include "hierhmc/models.hpp"

namespace hierhmc {

namespace {
constexpr double kVSd = 3.0;
constexpr double kVPrecision = 1.0 / (kVSd * kVSd);
}  // namespace

FunnelModel::FunnelModel(int n) : n_(n) {
  if (n < 1) throw ModelError("funnel: n must be at least 1");
}

std::vector<std::string> FunnelModel::parameter_names() const {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(n_) + 1);
  for (int i = 1; i <= n_; ++i) names.push_back("theta." + std::to_string(i));
  names.emplace_back("v");
  return names;
}

double FunnelModel::log_density(const Vec& q) const {
  check_dim(q);
  const double v = q(n_);
  const double sum_sq = q.head(n_).squaredNorm();
  return -0.5 * n_ * v - n_ * kHalfLog2Pi - 0.5 * sum_sq * std::exp(-v) +
         normal_logpdf(v, 0.0, kVSd);
}

double FunnelModel::log_density_gradient(const Vec& q, Vec& grad) const {
  check_dim(q);
  const double v = q(n_);
  const double w = std::exp(-v);
  const double sum_sq = q.head(n_).squaredNorm();
  grad.resize(dim());
  grad.head(n_) = -w * q.head(n_);
  grad(n_) = -0.5 * n_ + 0.5 * sum_sq * w - v * kVPrecision;
  return -0.5 * n_ * v - n_ * kHalfLog2Pi - 0.5 * sum_sq * w + normal_logpdf(v, 0.0, kVSd);
}

SymMatrix FunnelModel::hessian(const Vec& q) const {
  check_dim(q);
  const double v = q(n_);
  const double w = std::exp(-v);
  SymMatrix h(dim());
  for (int i = 0; i < n_; ++i) {
    h.set(i, i, -w);
    h.set(i, n_, q(i) * w);
  }
  h.set(n_, n_, -0.5 * q.head(n_).squaredNorm() * w - kVPrecision);
  return h;
}

Tensor3 FunnelModel::third_derivatives(const Vec& q) const {
  check_dim(q);
  const double v = q(n_);
  const double w = std::exp(-v);
  Tensor3 t(dim());
  for (int i = 0; i < n_; ++i) {
    t.set_symmetric(i, i, n_, w);
    t.set_symmetric(i, n_, n_, -q(i) * w);
  }
  t.set_symmetric(n_, n_, n_, 0.5 * q.head(n_).squaredNorm() * w);
  return t;
}

}  // namespace hierhmc
