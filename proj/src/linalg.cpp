#include "hierhmc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace hierhmc {

SymMatrix::SymMatrix(const Matrix& m) : m_(m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("SymMatrix: input is not square");
  }
  m_.triangularView<Eigen::StrictlyLower>() = m_.transpose();
}

SymMatrix SymMatrix::identity(Eigen::Index dim) {
  SymMatrix out(dim);
  out.m_.setIdentity();
  return out;
}

SymMatrix SymMatrix::diagonal(const Vec& diag) {
  SymMatrix out(diag.size());
  out.m_.diagonal() = diag;
  return out;
}

SymMatrix SymMatrix::operator-() const {
  SymMatrix out(*this);
  out.m_ = -out.m_;
  return out;
}

Matrix EigenPair::reconstruct() const {
  return vectors * values.asDiagonal() * vectors.transpose();
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

namespace {

constexpr int kMaxSweeps = 100;

// Applies the rotation that annihilates a(p, q) to both a and the
// accumulated eigenvector matrix v.
void jacobi_rotate(Matrix& a, Matrix& v, Eigen::Index p, Eigen::Index q) {
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const Eigen::Index d = a.rows();

  for (Eigen::Index k = 0; k < d; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (Eigen::Index k = 0; k < d; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

double off_diagonal_sq(const Matrix& a) {
  double off = 0.0;
  for (Eigen::Index j = 1; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) off += a(i, j) * a(i, j);
  }
  return off;
}

}  // namespace

EigenPair eigh(const SymMatrix& m, std::string_view context) {
  const Eigen::Index d = m.dim();
  if (d < 1) throw std::invalid_argument("eigh: empty matrix (" + std::string(context) + ")");
  if (!m.matrix().allFinite()) {
    throw NumericalError("eigh: non-finite entries in " + std::string(context));
  }

  Matrix a = m.matrix();
  Matrix v = Matrix::Identity(d, d);
  const double scale = a.norm();
  const double tol = std::numeric_limits<double>::epsilon() * scale;

  bool converged = scale == 0.0;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    if (std::sqrt(off_diagonal_sq(a)) <= tol) {
      converged = true;
      break;
    }
    for (Eigen::Index p = 0; p < d - 1; ++p) {
      for (Eigen::Index q = p + 1; q < d; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Entries below the rounding level of both diagonals are dropped.
        const double floor = 1e-3 * std::numeric_limits<double>::epsilon() *
                             (std::abs(a(p, p)) + std::abs(a(q, q)));
        if (std::abs(apq) <= floor) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        jacobi_rotate(a, v, p, q);
      }
    }
  }
  if (!converged && std::sqrt(off_diagonal_sq(a)) > tol) {
    throw NumericalError("eigh: Jacobi sweeps did not converge for " + std::string(context));
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });

  EigenPair out{Vec(d), Matrix(d, d)};
  for (Eigen::Index k = 0; k < d; ++k) {
    out.values(k) = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

std::optional<Matrix> cholesky(const SymMatrix& m) {
  Eigen::LLT<Matrix> llt(m.matrix());
  if (llt.info() != Eigen::Success) return std::nullopt;
  Matrix l = llt.matrixL();
  if ((l.diagonal().array() <= 0.0).any()) return std::nullopt;
  return l;
}

}  // namespace hierhmc
