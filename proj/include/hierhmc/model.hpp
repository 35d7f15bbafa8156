#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hierhmc/linalg.hpp"

namespace hierhmc {

/// Dense symmetric third-order tensor, stored slice-major so that
/// `slice(i)` is the d x d matrix of d^3 f / dq_i dq_j dq_k over (j, k).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(Eigen::Index dim)
      : dim_(dim), data_(static_cast<std::size_t>(dim * dim * dim), 0.0) {}

  Eigen::Index dim() const { return dim_; }

  double operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k) const {
    return data_[index(i, j, k)];
  }

  /// Writes the value to every permutation of (i, j, k).
  void set_symmetric(Eigen::Index i, Eigen::Index j, Eigen::Index k, double value);

  Eigen::Map<const Matrix> slice(Eigen::Index i) const {
    return {data_.data() + static_cast<std::size_t>(i * dim_ * dim_), dim_, dim_};
  }

  Tensor3 operator-() const;

  /// Raw storage; entry (i, j, k) lives at (i * dim + j) * dim + k.
  const double* data() const { return data_.data(); }

 private:
  std::size_t index(Eigen::Index i, Eigen::Index j, Eigen::Index k) const {
    return static_cast<std::size_t>((i * dim_ + j) * dim_ + k);
  }

  Eigen::Index dim_ = 0;
  std::vector<double> data_;
};

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A differentiable log density on an unconstrained space. Implementations
/// are immutable once built and may be shared read-only between chains.
class TargetModel {
 public:
  virtual ~TargetModel() = default;

  virtual std::string name() const = 0;
  virtual Eigen::Index dim() const = 0;

  /// Unconstrained parameter names, in position order.
  virtual std::vector<std::string> parameter_names() const = 0;

  /// Log density including every log-Jacobian term.
  virtual double log_density(const Vec& q) const = 0;

  /// Log density; writes the gradient into `grad`.
  virtual double log_density_gradient(const Vec& q, Vec& grad) const = 0;

  /// Hessian of the log density.
  virtual SymMatrix hessian(const Vec& q) const = 0;

  /// Models that supply analytic third derivatives can drive the
  /// Riemannian sampler.
  virtual bool has_third_derivatives() const { return false; }
  virtual Tensor3 third_derivatives(const Vec& q) const;

  /// Names of the values written to output, in declaration order.
  virtual std::vector<std::string> output_names() const { return parameter_names(); }
  virtual Vec constrain(const Vec& q) const { return q; }

  /// Output column used when ranking sampler efficiency.
  virtual std::string slowest_parameter() const { return output_names().front(); }

 protected:
  void check_dim(const Vec& q) const;
};

/// Value, gradient, Hessian and (when available) third derivatives at a
/// single point.
struct Derivatives {
  double logp = 0.0;
  Vec grad;
  SymMatrix hessian;
  std::optional<Tensor3> third;
};

Derivatives evaluate_all(const TargetModel& model, const Vec& q);

/// Unconstraining map for a positive scalar: lambda = log tau, whose
/// inverse tau = exp(lambda) carries log-Jacobian lambda.
struct PositiveTransform {
  double lambda;
  double log_jacobian;
};

PositiveTransform positive_unconstrain(double tau);
double positive_constrain(double lambda);

}  // namespace hierhmc
