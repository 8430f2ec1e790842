#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "immersion/fields.hpp"
#include "immersion/geometry.hpp"

namespace immersion {

// S^k × H^(n−k+1) ⊂ L^(n+3): the unit sphere in the first k+1 coordinates
// times the upper sheet of the hyperboloid in the remaining n−k+2.
struct AmbientModel {
  std::size_t n = 0;
  std::size_t k = 0;

  AmbientModel(std::size_t n_, std::size_t k_);

  Eigen::Index dim() const { return static_cast<Eigen::Index>(n + 3); }
  Eigen::Index sphere_size() const { return static_cast<Eigen::Index>(k + 1); }

  double c1(const Vector& x) const;  // Σ_{i≤k+1} x_i² − 1
  double c2(const Vector& x) const;  // Σ_{k+2≤i≤n+2} x_i² − x_{n+3}² + 1
  Vector xi1(const Vector& x) const;  // (x_1 … x_{k+1}, 0 … 0)
  Vector xi2(const Vector& x) const;  // (0 … 0, x_{k+2} … x_{n+3})
  Matrix product_structure() const;   // F̂ = blockdiag(I_{k+1}, −I_{n−k+2})
  Matrix lorentz() const { return lorentz_signature(dim()); }

  bool on_model(const Vector& x, double tolerance = 1e-10) const;
  /// Throws ModelError unless ⟨X, ξ̂₁⟩ and ⟨X, ξ̂₂⟩ are below `tolerance`.
  void require_tangent(const Vector& x, const Vector& v, double tolerance = 1e-10) const;
};

/// ∇̃_X Y = D_X Y + ½⟨X + F̂X, Y⟩ξ̂₁ − ½⟨X − F̂X, Y⟩ξ̂₂, where `flat_derivative`
/// is D_X Y, the derivative of the extension of Y in L^(n+3).
Vector ambient_connection(const AmbientModel& model, const Vector& x, const Vector& X, const Vector& Y,
                          const Vector& flat_derivative);

/// R̃(X, Y)Z = ½(F̂((X∧Y)Z) + (X∧Y)F̂Z), wedge taken with the Minkowski product.
Vector ambient_curvature(const AmbientModel& model, const Vector& x, const Vector& X, const Vector& Y,
                         const Vector& Z);

// An explicit hypersurface x: chart → S^k × H^(n−k+1).
struct ParametrizedHypersurface {
  std::string name;
  Chart chart;
  std::size_t k = 1;
  std::vector<Expression> x;

  std::size_t dim() const { return chart.dim(); }
  AmbientModel model() const { return AmbientModel(dim(), k); }
  /// Throws ModelError ("not on model", rank defect) at the first bad grid point.
  void validate(const SampleGrid& grid) const;
};

// Position, tangent frame and oriented unit normal of the hypersurface.
struct HypersurfacePoint {
  Vector position;
  Matrix tangent;  // columns ∂_i x
  Vector normal;
};

// Structure induced on a parametrized hypersurface, computed on demand at any
// chart point. Full jets come from forward-mode AD through the extraction.
class HypersurfaceFields final : public StructureFields {
 public:
  explicit HypersurfaceFields(ParametrizedHypersurface h);

  std::size_t dim() const override { return h_.dim(); }
  FieldJet jet(const Vector& point, JetOrder order) const override;
  HypersurfacePoint geometry(const Vector& point) const;
  const ParametrizedHypersurface& hypersurface() const { return h_; }

 private:
  ParametrizedHypersurface h_;
  AmbientModel model_;
  std::vector<std::vector<Expression>> dx_;                 // [i]
  std::vector<std::vector<std::vector<Expression>>> ddx_;   // [i][j]
  std::vector<std::vector<std::vector<Expression>>> dddx_;  // [i][j*n + l]
};

/// Validates `h` on `grid` and returns its induced structure (declared k = h.k).
StructureSpec extract_structure(const ParametrizedHypersurface& h, const SampleGrid& grid);
StructureSpec extract_structure(const ParametrizedHypersurface& h);

struct SampleResiduals {
  double sphere = 0.0;         // |Σ_{i≤k+1} ψ_i² − 1|
  double hyperboloid = 0.0;    // |Σ ε ψ² + 1| over the hyperbolic block
  double isometry = 0.0;       // ‖⟨dψ, dψ⟩ − g‖_∞
  double normal_tangent = 0.0; // max |⟨N, ψ*∂_i⟩|, |⟨N, ξ̂₁⟩|, |⟨N, ξ̂₂⟩|
  double normal_unit = 0.0;    // |⟨N, N⟩ − 1|
};

struct ImmersionSample {
  Vector point;
  Vector position;     // ψ(p)
  Vector normal;       // N(p)
  Matrix pushforward;  // columns ψ*∂_i
  SampleResiduals residuals;
};

SampleResiduals sample_residuals(const AmbientModel& model, const ImmersionSample& sample, const Matrix& g);

/// Samples of the explicit hypersurface itself (ψ = x, N = ν, dψ = ∂x).
std::vector<ImmersionSample> hypersurface_samples(const ParametrizedHypersurface& h, const SampleGrid& grid);

// Block isometry Φ = diag(A, B), A ∈ O(k+1), B ∈ O(n−k+1, 1) preserving the upper sheet.
struct Congruence {
  Matrix phi;
  std::size_t base_index = 0;
  double block_defect = 0.0;  // off-diagonal blocks of Φ
  double orthogonality = 0.0; // ‖AᵀA − I‖_∞
  double lorentz = 0.0;       // ‖BᵀJB − J‖_∞
  bool upper_sheet = false;
  double sup_distance = 0.0;  // sup_p ‖Φψ₁(p) − ψ₂(p)‖
  double tolerance = 1e-6;
  bool congruent = false;
  std::string diagnostic;
};

inline constexpr double kGroupTolerance = 1e-8;

/// Φ = M₂M₁⁻¹ with M_j = [ψ*_j∂, N_j, ξ̂₁(ψ_j), ξ̂₂(ψ_j)] at samples[base_index],
/// then verified on all samples. Throws ModelError when M₁ is singular.
Congruence solve_congruence(const AmbientModel& model, const std::vector<ImmersionSample>& samples1,
                            const std::vector<ImmersionSample>& samples2, std::size_t base_index,
                            double tolerance = 1e-6);

/// Grid index closest to `point`.
std::size_t nearest_sample(const SampleGrid& grid, const Vector& point);

struct AuditVariant {
  std::string label;
  std::string formula;
  double residual = 0.0;
  bool holds = false;
};

struct AuditReport {
  double tolerance = 1e-8;
  AuditVariant gauss_composed;  // (i)
  AuditVariant gauss_wedged;    // (ii)
  AuditVariant codazzi_plus;    // (iii)
  AuditVariant codazzi_minus;   // (iv)
  bool gauss_distinguished = false;
  bool codazzi_distinguished = false;
  std::vector<std::string> statements;
};

/// Evaluates both Gauss forms and both Codazzi signs on the extracted structure.
AuditReport audit_equations(const ParametrizedHypersurface& h, const SampleGrid& grid, double tolerance = 1e-8);

}  // namespace immersion
