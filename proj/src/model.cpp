#include "hierhmc/model.hpp"

#include <cmath>
#include <optional>

namespace hierhmc {

void Tensor3::set_symmetric(Eigen::Index i, Eigen::Index j, Eigen::Index k, double value) {
  data_[index(i, j, k)] = value;
  data_[index(i, k, j)] = value;
  data_[index(j, i, k)] = value;
  data_[index(j, k, i)] = value;
  data_[index(k, i, j)] = value;
  data_[index(k, j, i)] = value;
}

Tensor3 Tensor3::operator-() const {
  Tensor3 out(*this);
  for (double& x : out.data_) x = -x;
  return out;
}

Tensor3 TargetModel::third_derivatives(const Vec&) const {
  throw ModelError("model '" + name() + "' does not provide third derivatives");
}

void TargetModel::check_dim(const Vec& q) const {
  if (q.size() != dim()) {
    throw ModelError("model '" + name() + "' expects dimension " + std::to_string(dim()) +
                     ", got " + std::to_string(q.size()));
  }
}

Derivatives evaluate_all(const TargetModel& model, const Vec& q) {
  Derivatives out;
  out.logp = model.log_density_gradient(q, out.grad);
  out.hessian = model.hessian(q);
  if (model.has_third_derivatives()) out.third = model.third_derivatives(q);
  return out;
}

PositiveTransform positive_unconstrain(double tau) {
  if (!(tau > 0.0)) throw std::domain_error("positive_unconstrain: tau must be positive");
  const double lambda = std::log(tau);
  return {lambda, lambda};
}

double positive_constrain(double lambda) { return std::exp(lambda); }

}  // namespace hierhmc
