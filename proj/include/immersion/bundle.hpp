#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "immersion/fields.hpp"

namespace immersion {

// Frame of B = TM ⊕ ℝ³ used everywhere: e = (∂_1, …, ∂_n, ξ, ξ₁, ξ₂).
// Slot helpers for the three appended directions.
inline Eigen::Index xi_slot(std::size_t n) { return static_cast<Eigen::Index>(n); }
inline Eigen::Index xi1_slot(std::size_t n) { return static_cast<Eigen::Index>(n + 1); }
inline Eigen::Index xi2_slot(std::size_t n) { return static_cast<Eigen::Index>(n + 2); }

// Connection matrices, fiber Gram and bundle map at one point.
// D_{∂i} e_b = (A[i])^a_b e_a.
struct ConnectionPoint {
  std::vector<Matrix> A;
  Matrix gram;  // blockdiag(g, 1, 1, −1)
  Matrix map;   // F: FX = fX + u(X)ξ, Fξ = U + λξ, Fξ₁ = ξ₁, Fξ₂ = −ξ₂
};

// Adds exact first derivatives; dA[j][i] = ∂_j A_i.
struct ConnectionJet : ConnectionPoint {
  std::vector<std::vector<Matrix>> dA;
  std::vector<Matrix> dgram;
  std::vector<Matrix> dmap;
};

class ConnectionField {
 public:
  explicit ConnectionField(StructureSpec spec);

  std::size_t dim() const { return spec_.dim(); }
  std::size_t rank() const { return dim() + 3; }
  const StructureSpec& spec() const { return spec_; }
  const Chart& chart() const { return spec_.chart; }

  ConnectionPoint at(const Vector& point) const;
  ConnectionJet jet(const Vector& point) const;

  /// Σ_i A_i v^i, the connection form applied to a chart direction.
  Matrix contract(const Vector& point, const Vector& direction) const;

 private:
  StructureSpec spec_;
};

inline ConnectionField build_connection(const StructureSpec& spec) { return ConnectionField(spec); }

/// max over i<j of ‖∂_i A_j − ∂_j A_i + [A_i, A_j]‖_∞.
double flatness_residual(const ConnectionField& conn, const Vector& point);
double flatness_residual(const ConnectionJet& jet);

/// max over i of ‖∂_i G̃ − A_iᵀ G̃ − G̃ A_i‖_∞.
double metric_compatibility_residual(const ConnectionJet& jet);

struct BundleMapResiduals {
  double involution = 0.0;  // F² − I
  double symmetry = 0.0;    // FᵀG̃ − G̃F
  double parallel = 0.0;    // ∂_i F − (F A_i − A_i F)
};
BundleMapResiduals bundle_map_residuals(const ConnectionJet& jet);

// A piecewise path in the chart. Each piece is traversed with parameter
// t ∈ [0, duration]; for straight pieces the parameter is Euclidean chart length.
struct PathPiece {
  std::function<Vector(double)> position;
  std::function<Vector(double)> velocity;
  double duration = 0.0;
};

class Path {
 public:
  Path() = default;

  static Path polyline(const std::vector<Vector>& vertices);
  static Path curve(std::function<Vector(double)> position, std::function<Vector(double)> velocity,
                    double duration);
  /// Moves one coordinate at a time, in `axis_order`.
  static Path staircase(const Vector& from, const Vector& to, const std::vector<std::size_t>& axis_order);
  /// Counter-clockwise loop around the rectangle spanned by axes a and b.
  static Path rectangle(const Vector& corner, std::size_t a, std::size_t b, double side_a, double side_b);

  Path reversed() const;
  Path then(const Path& next) const;
  const std::vector<PathPiece>& pieces() const { return pieces_; }
  double length() const;

 private:
  std::vector<PathPiece> pieces_;
};

/// Axis order 0, 1, …, n−1 (or reversed).
std::vector<std::size_t> axis_order(std::size_t n, bool reverse = false);

struct TransportOptions {
  double step = 1e-3;
  // Optional per-step observer (path parameter accumulated over pieces, point, sections).
  std::function<void(double, const Vector&, const Matrix&)> observer;
};

/// Solves dη/dt = −(A_i u̇^i) η along the path with fixed-step RK4.
/// Throws TransportError when the path leaves the chart box or the step is unusable.
Vector transport(const ConnectionField& conn, const Path& path, const Vector& initial,
                 const TransportOptions& options = {});
Matrix transport_frame(const ConnectionField& conn, const Path& path, const Matrix& initial,
                       const TransportOptions& options = {});

struct RichardsonEstimate {
  Matrix value;   // step h/2 result
  double error;   // ‖η_{h/2} − η_h‖_∞ / 15
};
RichardsonEstimate transport_with_error(const ConnectionField& conn, const Path& path, const Matrix& initial,
                                        const TransportOptions& options = {});

/// Transports `initial` (given at `start`) to every grid point along
/// staircase paths with the given axis order. Paths sharing a prefix share
/// its transport, so this is exactly the per-point staircase transport.
std::vector<Matrix> staircase_sweep(const ConnectionField& conn, const SampleGrid& grid, const Vector& start,
                                    const Matrix& initial, const std::vector<std::size_t>& order,
                                    const TransportOptions& options = {});

/// Signature-aware re-orthonormalization of a transported frame at a point.
/// Only applied when the caller asks for it.
Matrix reorthonormalize(const ConnectionField& conn, const Vector& point, const Matrix& frame,
                        const std::vector<int>& signs);

}  // namespace immersion
