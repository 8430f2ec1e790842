#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/AutoDiff>

#include "immersion/error.hpp"

namespace immersion {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Forward-mode first derivatives with respect to the chart coordinates.
inline constexpr int kMaxJetDim = 6;
using Gradient = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxJetDim, 1>;
using Dual = Eigen::AutoDiffScalar<Gradient>;

template <class T>
using MatrixT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using VectorT = Eigen::Matrix<T, Eigen::Dynamic, 1>;

inline double value_of(double v) { return v; }
inline double value_of(const Dual& v) { return v.value(); }

inline Dual make_dual(double value, const Gradient& gradient) { return Dual(value, gradient); }

/// Lifts a value and its per-coordinate derivatives (derivatives[l] = ∂_l m)
/// into a matrix of duals.
inline MatrixT<Dual> lift(const Matrix& m, const std::vector<Matrix>& derivatives) {
  const auto n = static_cast<Eigen::Index>(derivatives.size());
  MatrixT<Dual> out(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      Gradient g(n);
      for (Eigen::Index l = 0; l < n; ++l) g(l) = derivatives[static_cast<std::size_t>(l)](r, c);
      out(r, c) = Dual(m(r, c), g);
    }
  }
  return out;
}

inline Matrix values(const MatrixT<Dual>& m) {
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out(r, c) = m(r, c).value();
  }
  return out;
}

/// ∂_l of a dual matrix; zero where an entry carries no derivative.
inline Matrix derivative(const MatrixT<Dual>& m, Eigen::Index l) {
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const auto& d = m(r, c).derivatives();
      out(r, c) = l < d.size() ? d(l) : 0.0;
    }
  }
  return out;
}

inline double derivative(const Dual& v, Eigen::Index l) {
  return l < v.derivatives().size() ? v.derivatives()(l) : 0.0;
}

/// Gauss-Jordan inverse with partial pivoting on the value part; works for
/// double and Dual alike.
template <class T>
MatrixT<T> inverse(const MatrixT<T>& m) {
  const Eigen::Index n = m.rows();
  MatrixT<T> a = m;
  MatrixT<T> inv = MatrixT<T>::Identity(n, n);
  double scale = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) scale = std::max(scale, std::abs(value_of(a(r, c))));
  }
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    for (Eigen::Index r = col + 1; r < n; ++r) {
      if (std::abs(value_of(a(r, col))) > std::abs(value_of(a(pivot, col)))) pivot = r;
    }
    if (!(std::abs(value_of(a(pivot, col))) > 1e-14 * std::max(scale, 1e-300))) {
      throw SingularMetricError("singular matrix in inverse");
    }
    a.row(col).swap(a.row(pivot));
    inv.row(col).swap(inv.row(pivot));
    const T p = a(col, col);
    for (Eigen::Index c = 0; c < n; ++c) {
      a(col, c) = a(col, c) / p;
      inv(col, c) = inv(col, c) / p;
    }
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == col) continue;
      const T factor = a(r, col);
      for (Eigen::Index c = 0; c < n; ++c) {
        a(r, c) = a(r, c) - factor * a(col, c);
        inv(r, c) = inv(r, c) - factor * inv(col, c);
      }
    }
  }
  return inv;
}

/// diag(1, …, 1, −1) of size `dim`.
inline Matrix lorentz_signature(Eigen::Index dim) {
  Matrix j = Matrix::Identity(dim, dim);
  j(dim - 1, dim - 1) = -1.0;
  return j;
}

/// ⟨x, y⟩ = Σ_{i<dim−1} x_i y_i − x_last y_last.
template <class T>
T minkowski_dot(const VectorT<T>& x, const VectorT<T>& y) {
  const Eigen::Index last = x.size() - 1;
  T sum = -(x(last) * y(last));
  for (Eigen::Index i = 0; i < last; ++i) sum = sum + x(i) * y(i);
  return sum;
}

inline double minkowski_dot(const Vector& x, const Vector& y) { return minkowski_dot<double>(x, y); }

/// Maximum absolute entry.
inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Signature-aware Gram–Schmidt: makes the columns of `frame` orthonormal with
/// respect to `gram` with self-products `signs` (±1), in column order.
Matrix signature_gram_schmidt(const Matrix& frame, const Matrix& gram, const std::vector<int>& signs);

}  // namespace immersion
