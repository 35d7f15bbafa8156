#pragma once

#include "hierhmc/linalg.hpp"
#include "hierhmc/random.hpp"

namespace hierhmc {

/// Constant momentum covariance Sigma for Euclidean HMC, kinetic energy
/// T(p) = p' Sigma^{-1} p / 2.
///
/// Diagonal and dense metrics are specified through Sigma^{-1}, which plays
/// the role of a position covariance estimate: the velocity is
/// Sigma^{-1} p and momenta are drawn from N(0, Sigma).
class EuclideanMetric {
 public:
  enum class Kind { unit, diagonal, dense };

  static EuclideanMetric unit(Eigen::Index dim);
  static EuclideanMetric diagonal(Vec inverse_diagonal);
  static EuclideanMetric dense(const SymMatrix& inverse);

  Kind kind() const { return kind_; }
  Eigen::Index dim() const { return dim_; }

  Vec velocity(const Vec& p) const;
  double kinetic(const Vec& p) const;
  Vec sample_momentum(RngStream& rng) const;

  /// Sigma^{-1}.
  SymMatrix inverse() const;
  /// Diagonal of Sigma^{-1}.
  Vec inverse_diagonal() const;

 private:
  EuclideanMetric(Kind kind, Eigen::Index dim) : kind_(kind), dim_(dim) {}

  Kind kind_;
  Eigen::Index dim_;
  Vec inv_diag_;
  Vec sqrt_diag_;       // diagonal of Sigma^{1/2}
  Matrix inv_dense_;
  Matrix chol_;         // lower Cholesky factor of Sigma
};

}  // namespace hierhmc
