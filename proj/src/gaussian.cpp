#include <cmath>

#include "hierhmc/densities.hpp"
#include "hierhmc/models.hpp"

namespace hierhmc {

GaussianModel::GaussianModel(Vec mean, const SymMatrix& covariance) : mean_(std::move(mean)) {
  if (covariance.dim() != mean_.size() || mean_.size() < 1) {
    throw ModelError("gaussian: mean and covariance dimensions disagree");
  }
  const auto chol = cholesky(covariance);
  if (!chol) throw ModelError("gaussian: covariance is not positive-definite");
  precision_ = covariance.matrix().llt().solve(Matrix::Identity(mean_.size(), mean_.size()));
  precision_ = 0.5 * (precision_ + precision_.transpose()).eval();
  const double log_det = 2.0 * chol->diagonal().array().log().sum();
  log_norm_ = -static_cast<double>(mean_.size()) * kHalfLog2Pi - 0.5 * log_det;
}

GaussianModel GaussianModel::standard(Eigen::Index dim) {
  return GaussianModel(Vec::Zero(dim), SymMatrix::identity(dim));
}

std::vector<std::string> GaussianModel::parameter_names() const {
  std::vector<std::string> names;
  for (Eigen::Index i = 1; i <= mean_.size(); ++i) names.push_back("x." + std::to_string(i));
  return names;
}

double GaussianModel::log_density(const Vec& q) const {
  check_dim(q);
  const Vec r = q - mean_;
  return log_norm_ - 0.5 * r.dot(precision_ * r);
}

double GaussianModel::log_density_gradient(const Vec& q, Vec& grad) const {
  check_dim(q);
  const Vec r = q - mean_;
  grad = -(precision_ * r);
  return log_norm_ + 0.5 * r.dot(grad);
}

SymMatrix GaussianModel::hessian(const Vec& q) const {
  check_dim(q);
  return SymMatrix(Matrix(-precision_));
}

Tensor3 GaussianModel::third_derivatives(const Vec& q) const {
  check_dim(q);
  return Tensor3(dim());
}

}  // namespace hierhmc
