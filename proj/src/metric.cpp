#include "hierhmc/metric.hpp"

#include <stdexcept>

namespace hierhmc {

EuclideanMetric EuclideanMetric::unit(Eigen::Index dim) { return EuclideanMetric(Kind::unit, dim); }

EuclideanMetric EuclideanMetric::diagonal(Vec inverse_diagonal) {
  if ((inverse_diagonal.array() <= 0.0).any() || !inverse_diagonal.allFinite()) {
    throw std::invalid_argument("EuclideanMetric: diagonal entries must be positive and finite");
  }
  EuclideanMetric m(Kind::diagonal, inverse_diagonal.size());
  m.sqrt_diag_ = inverse_diagonal.cwiseInverse().cwiseSqrt();
  m.inv_diag_ = std::move(inverse_diagonal);
  return m;
}

EuclideanMetric EuclideanMetric::dense(const SymMatrix& inverse) {
  if (!cholesky(inverse)) throw std::invalid_argument("EuclideanMetric: dense metric is not SPD");
  EuclideanMetric m(Kind::dense, inverse.dim());
  m.inv_dense_ = inverse.matrix();
  const Matrix sigma = inverse.matrix().llt().solve(Matrix::Identity(inverse.dim(), inverse.dim()));
  const auto chol = cholesky(SymMatrix(sigma));
  if (!chol) throw std::invalid_argument("EuclideanMetric: dense metric inverse is not SPD");
  m.chol_ = *chol;
  return m;
}

Vec EuclideanMetric::velocity(const Vec& p) const {
  switch (kind_) {
    case Kind::unit:
      return p;
    case Kind::diagonal:
      return inv_diag_.cwiseProduct(p);
    case Kind::dense:
      return inv_dense_ * p;
  }
  return p;
}

double EuclideanMetric::kinetic(const Vec& p) const {
  switch (kind_) {
    case Kind::unit:
      return 0.5 * p.squaredNorm();
    case Kind::diagonal:
      return 0.5 * p.dot(inv_diag_.cwiseProduct(p));
    case Kind::dense:
      return 0.5 * p.dot(inv_dense_ * p);
  }
  return 0.0;
}

Vec EuclideanMetric::sample_momentum(RngStream& rng) const {
  Vec z = rng.normal_vector(dim_);
  switch (kind_) {
    case Kind::unit:
      return z;
    case Kind::diagonal:
      return sqrt_diag_.cwiseProduct(z);
    case Kind::dense:
      return chol_ * z;
  }
  return z;
}

SymMatrix EuclideanMetric::inverse() const {
  switch (kind_) {
    case Kind::unit:
      return SymMatrix::identity(dim_);
    case Kind::diagonal:
      return SymMatrix::diagonal(inv_diag_);
    case Kind::dense:
      return SymMatrix(inv_dense_);
  }
  return SymMatrix::identity(dim_);
}

Vec EuclideanMetric::inverse_diagonal() const {
  switch (kind_) {
    case Kind::unit:
      return Vec::Ones(dim_);
    case Kind::diagonal:
      return inv_diag_;
    case Kind::dense:
      return inv_dense_.diagonal();
  }
  return Vec::Ones(dim_);
}

}  // namespace hierhmc
