#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "immersion/expr.hpp"
#include "immersion/linalg.hpp"

namespace immersion {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

// A single coordinate chart: a convex box with a base point in its interior.
struct Chart {
  std::vector<std::string> coords;
  std::vector<Interval> box;
  Vector base_point;

  std::size_t dim() const { return coords.size(); }
  bool contains(const Vector& p, double slack = 1e-12) const;
  bool interior(const Vector& p) const;
  /// Throws SchemaError when the box is empty, n < 1 or p0 is not interior.
  void validate() const;
};

// Tensor-product sample grid; point index runs with the last axis fastest.
struct SampleGrid {
  std::vector<std::vector<double>> axes;

  std::size_t dim() const { return axes.size(); }
  std::size_t size() const;
  Vector point(std::size_t index) const;
  std::vector<std::size_t> multi_index(std::size_t index) const;
  std::size_t flat_index(const std::vector<std::size_t>& multi) const;
};

/// `per_axis` uniform points per coordinate, shrunk by `shrink` of the width
/// away from each face of the box.
SampleGrid uniform_grid(const Chart& chart, std::size_t per_axis, double shrink = 0.01);

// Index convention used throughout: Γ(m, i, j) = Γ^m_ij (first index upper),
// curvature(l, k, i, j) = ∂_l-component of R(∂_i, ∂_j)∂_k with
// R(X, Y) = [∇_X, ∇_Y] − ∇_[X,Y].
class Christoffel {
 public:
  Christoffel() = default;
  explicit Christoffel(std::size_t n) : n_(n), data_(n * n * n, 0.0) {}
  std::size_t dim() const { return n_; }
  double& operator()(std::size_t m, std::size_t i, std::size_t j) { return data_[(m * n_ + i) * n_ + j]; }
  double operator()(std::size_t m, std::size_t i, std::size_t j) const { return data_[(m * n_ + i) * n_ + j]; }
  /// (Γ_i)^m_j = Γ^m_ij, the connection matrix of direction i.
  Matrix direction(std::size_t i) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

class Curvature {
 public:
  Curvature() = default;
  explicit Curvature(std::size_t n) : n_(n), data_(n * n * n * n, 0.0) {}
  std::size_t dim() const { return n_; }
  double& operator()(std::size_t l, std::size_t k, std::size_t i, std::size_t j) {
    return data_[((l * n_ + k) * n_ + i) * n_ + j];
  }
  double operator()(std::size_t l, std::size_t k, std::size_t i, std::size_t j) const {
    return data_[((l * n_ + k) * n_ + i) * n_ + j];
  }
  /// Matrix of the endomorphism R(∂_i, ∂_j).
  Matrix endomorphism(std::size_t i, std::size_t j) const;
  /// R_ijkl = g_lm R^m_kij.
  double lowered(const Matrix& g, std::size_t i, std::size_t j, std::size_t k, std::size_t l) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

// Metric with its exact first and (optionally) second partial derivatives.
struct MetricJet {
  Matrix g;
  std::vector<Matrix> dg;   // dg[k] = ∂_k g
  std::vector<Matrix> ddg;  // ddg[k * n + l] = ∂_k ∂_l g; empty when not needed
};

struct PointCalculus {
  Matrix g;
  Matrix g_inv;
  std::vector<Matrix> dg;
  Christoffel gamma;
  std::vector<Christoffel> dgamma;  // dgamma[k](m, i, j) = ∂_k Γ^m_ij; empty without ddg
  Curvature riemann;                // zero-sized without ddg
  bool has_curvature() const { return !dgamma.empty(); }
};

/// Levi-Civita data from a metric jet. Throws SingularMetricError unless g is
/// symmetric positive definite.
PointCalculus point_calculus(const MetricJet& jet);

Christoffel christoffels_from_jet(const Matrix& g_inv, const std::vector<Matrix>& dg);

// Chart metric as expressions, with its derivative expressions built once.
class MetricField {
 public:
  explicit MetricField(ExpressionMatrix g);
  std::size_t dim() const { return g_.rows(); }
  const ExpressionMatrix& components() const { return g_; }
  MetricJet jet(const Vector& point, bool second_derivatives = true) const;

 private:
  ExpressionMatrix g_;
  std::vector<ExpressionMatrix> dg_;
  std::vector<ExpressionMatrix> ddg_;
};

Christoffel christoffels(const MetricField& metric, const Vector& point);
Curvature riemann(const MetricField& metric, const Vector& point);

/// (∇_i T)^a_b = ∂_i T^a_b + Γ^a_im T^m_b − Γ^m_ib T^a_m.
Matrix covariant_derivative(const Matrix& t, const Matrix& dt_i, const Christoffel& gamma, std::size_t i);

Matrix covariant_derivative_operator_field(const ExpressionMatrix& t, const MetricField& metric,
                                           const Vector& point, std::size_t i);

/// (∇_k g)_ij = ∂_k g_ij − Γ^m_ki g_mj − Γ^m_kj g_im; vanishes for Levi-Civita.
Matrix metric_covariant_derivative(const PointCalculus& calc, std::size_t k);

/// (v ∧ w) z = g(w, z) v − g(v, z) w.
Vector wedge(const Vector& v, const Vector& w, const Vector& z, const Matrix& g);

/// sqrt(vᵀ g v).
double g_norm(const Vector& v, const Matrix& g);

/// g(R(X,Y)Y, X) / (g(X,X) g(Y,Y) − g(X,Y)²).
double sectional_curvature(const Curvature& r, const Matrix& g, const Vector& x, const Vector& y);

// L^dim with ⟨x, y⟩ = Σ_{i<dim} x_i y_i − x_dim y_dim.
struct MinkowskiSpace {
  std::size_t dim = 0;
  double inner(const Vector& x, const Vector& y) const { return minkowski_dot(x, y); }
  Matrix metric() const { return lorentz_signature(static_cast<Eigen::Index>(dim)); }
};

}  // namespace immersion
