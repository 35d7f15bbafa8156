#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace hierhmc {

using Vec = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when an iterative numerical routine fails to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense symmetric matrix. Symmetry is exact: every write goes to both
/// triangles and construction from a general matrix mirrors the upper
/// triangle into the lower one.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(Eigen::Index dim) : m_(Matrix::Zero(dim, dim)) {}
  explicit SymMatrix(const Matrix& m);

  static SymMatrix identity(Eigen::Index dim);
  static SymMatrix diagonal(const Vec& diag);

  Eigen::Index dim() const { return m_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  void set(Eigen::Index i, Eigen::Index j, double value) {
    m_(i, j) = value;
    m_(j, i) = value;
  }
  void add(Eigen::Index i, Eigen::Index j, double value) {
    m_(i, j) += value;
    if (i != j) m_(j, i) += value;
  }

  const Matrix& matrix() const { return m_; }

  SymMatrix operator-() const;
  SymMatrix& operator*=(double c) {
    m_ *= c;
    return *this;
  }

 private:
  Matrix m_;
};

/// Eigendecomposition of a symmetric matrix. Eigenvalues are sorted in
/// descending order and the columns of `vectors` are the matching
/// orthonormal eigenvectors.
struct EigenPair {
  Vec values;
  Matrix vectors;

  Matrix reconstruct() const;
};

/// Cyclic Jacobi eigendecomposition. Throws NumericalError naming `context`
/// when the sweep cap is hit before the off-diagonal mass vanishes.
EigenPair eigh(const SymMatrix& m, std::string_view context = "matrix");

/// Lower-triangular Cholesky factor, or nullopt when a pivot is not
/// strictly positive (the matrix is not positive-definite).
std::optional<Matrix> cholesky(const SymMatrix& m);

/// Max-abs entry norm.
double max_abs(const Matrix& m);

}  // namespace hierhmc
