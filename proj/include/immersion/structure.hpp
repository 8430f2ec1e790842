#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "immersion/fields.hpp"
#include "immersion/geometry.hpp"

namespace immersion {

// Pointwise defects of the algebraic identities satisfied by (g, f, U, λ)
// on any hypersurface of a Riemannian product, plus g-symmetry of S.
struct AlgebraicResiduals {
  double f_symmetry = 0.0;      // g(fX, Y) − g(X, fY)
  double shape_symmetry = 0.0;  // g(SX, Y) − g(X, SY)
  double f_squared = 0.0;       // f²X − X + g(U, X) U
  double f_on_U = 0.0;          // fU + λU
  double unit_norm = 0.0;       // g(U, U) + λ² − 1
  double max() const;
};

struct GradientResiduals {
  double grad_f = 0.0;       // (∇_X f)Y − u(Y) SX − g(SX, Y) U
  double grad_U = 0.0;       // ∇_X U − λ SX + f SX
  double grad_lambda = 0.0;  // X[λ] + 2 g(SX, U)
};

enum class GaussForm {
  kComposed,  // ½(f((X∧Y)Z) + (X∧Y) fZ)
  kWedged,    // ½((fX∧fY)Z + (X∧Y) fZ)
};

AlgebraicResiduals check_algebraic(const FieldJet& jet);

/// sup over basis triples of ‖R(∂i,∂j)∂k − (S∂i∧S∂j)∂k − curvature term‖_g.
double check_gauss(const FieldJet& jet, const PointCalculus& calc, GaussForm form = GaussForm::kComposed);

/// sup over basis pairs of ‖(∇_i S)∂j − (∇_j S)∂i − sign·½(u_i ∂j − u_j ∂i)‖_g.
double check_codazzi(const FieldJet& jet, const PointCalculus& calc, double rhs_sign = 1.0);

GradientResiduals check_gradients(const FieldJet& jet, const PointCalculus& calc);

AlgebraicResiduals check_algebraic(const StructureSpec& spec, const Vector& point);
double check_gauss(const StructureSpec& spec, const Vector& point);
double check_codazzi(const StructureSpec& spec, const Vector& point);
GradientResiduals check_gradients(const StructureSpec& spec, const Vector& point);

/// tr f + λ, which equals 2k − n − 1 on admissible structures.
double trace_invariant(const FieldJet& jet);

/// (tr f + λ + n + 1) / 2 before rounding.
double k_estimate(const FieldJet& jet);

/// Sphere-factor dimension k. Throws AdmissionError when the estimate is not
/// within 1e−8 of an integer in [1, n] or disagrees with the declared k.
int determine_k(const StructureSpec& spec, const Vector& point);

/// f = Id or f = −Id at this point (to `tolerance`).
bool is_excluded_point(const FieldJet& jet, double tolerance);

enum class Equation : std::size_t {
  kAlgebraic,
  kGauss,
  kCodazzi,
  kGradF,
  kGradU,
  kGradLambda,
  kKConsistency,
};
inline constexpr std::size_t kEquationCount = 7;

std::string_view equation_name(Equation e);

struct PointReport {
  Vector point;
  bool evaluated = false;
  std::string diagnostic;  // set when the point was aborted
  AlgebraicResiduals algebraic;
  double gauss = 0.0;
  double codazzi = 0.0;
  GradientResiduals gradients;
  double k_estimate = 0.0;
  bool excluded = false;

  double residual(Equation e) const;  // kKConsistency is not pointwise; returns 0
};

struct EquationSummary {
  double sup = 0.0;
  std::size_t worst_index = 0;
};

struct CompatibilityReport {
  double tolerance = 1e-8;
  std::array<EquationSummary, kEquationCount> equations{};
  bool admissible = false;
  std::vector<std::string> reasons;
  std::optional<int> k;
  double trace_spread = 0.0;  // max − min of tr f + λ over the grid
  std::vector<PointReport> points;

  const EquationSummary& operator[](Equation e) const { return equations[static_cast<std::size_t>(e)]; }
  double worst() const;
};

inline constexpr double kDefaultTolerance = 1e-8;
inline constexpr std::size_t kDefaultGridDensity = 8;

/// Verifies every compatibility equation on the grid and decides admission.
CompatibilityReport admit(const StructureSpec& spec, const SampleGrid& grid,
                          double tolerance = kDefaultTolerance);

}  // namespace immersion
