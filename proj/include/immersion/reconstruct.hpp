#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "immersion/ambient.hpp"
#include "immersion/bundle.hpp"
#include "immersion/structure.hpp"

namespace immersion {

// Orthonormal sections of B at the base point, columns in frame e:
// k+1 spacelike sections with F = +1, then n−k+2 with F = −1, the last timelike.
struct AdaptedFrame {
  Vector base_point;
  std::size_t k = 0;
  Matrix sections;
  std::vector<int> signs;  // G̃-norms of the columns: +1 … +1, −1
  double gram_defect = 0.0;
  double eigen_defect = 0.0;

  std::size_t plus_count() const { return k + 1; }
  std::size_t rank() const { return static_cast<std::size_t>(sections.cols()); }
  /// ±1 eigenvalue of F carried by column c.
  double eigenvalue(std::size_t c) const { return c < plus_count() ? 1.0 : -1.0; }
};

/// Eigen-split of F at p0 (whitened symmetric eigenproblem on span(∂, ξ)),
/// canonical bases inside each eigenspace, ξ₁ and ξ₂ appended, time
/// orientation fixed so that ψ_{n+3}(p0) > 0. Throws AdmissionError when f(p0)
/// = ±Id or the +1 multiplicity on span(∂, ξ) is not k.
AdaptedFrame synthesize_frame(const ConnectionField& conn, const Vector& p0, std::size_t k);

/// Same frame with each eigen-family recombined: plus columns by Q ∈ O(k+1),
/// minus columns by L ∈ O(n−k+1, 1) (L must keep the last column future-pointing).
AdaptedFrame remix_frame(const AdaptedFrame& frame, const Matrix& plus_rotation, const Matrix& minus_transform);

/// Reads ψ, N and ψ* from sections transported to `point`.
ImmersionSample read_immersion(const AdaptedFrame& frame, const ConnectionPoint& at, const Matrix& sections,
                               const Vector& point);

/// Transports the frame from its base point along the axis-ordered staircase.
ImmersionSample immerse(const AdaptedFrame& frame, const ConnectionField& conn, const Vector& point,
                        const TransportOptions& options = {});

struct GridImmersion {
  std::vector<ImmersionSample> samples;
  std::vector<Matrix> sections;  // transported frames, per grid point
};

GridImmersion immerse_grid(const AdaptedFrame& frame, const ConnectionField& conn, const SampleGrid& grid,
                           const TransportOptions& options = {});

struct TheoremTolerances {
  double quadric = 1e-7;
  double isometry = 1e-6;
  double normal = 1e-7;
  double shape = 1e-4;
  double product = 1e-6;
  double pushforward_fd = 1e-4;
  double frame_drift = 1e-7;
};

// Per-point defects of the theorem's conclusions.
struct PointValidation {
  double quadric = 0.0;         // (a)
  double isometry = 0.0;        // (b)
  double normal = 0.0;          // (c)
  double shape = 0.0;           // (d), finite differences of N
  double product = 0.0;         // (e), F̂ψ*X = ψ*fX + u(X)N and F̂N = ψ*U + λN
  double pushforward_fd = 0.0;  // closed-form ψ* vs finite differences of ψ
  double gram_drift = 0.0;      // transported frame Gram vs diag(ε)
  double eigen_drift = 0.0;     // F η − (±η)
  double time_component = 0.0;  // ψ_{n+3}
};

struct CheckSummary {
  std::string name;
  double sup = 0.0;
  double tolerance = 0.0;
  std::size_t worst_index = 0;
  bool passed = true;
};

struct TheoremReport {
  std::size_t k = 0;
  std::vector<ImmersionSample> samples;
  std::vector<PointValidation> points;
  std::vector<CheckSummary> checks;
  bool passed = false;
  std::vector<std::string> failures;

  const CheckSummary& check(const std::string& name) const;
};

struct ValidationOptions {
  TheoremTolerances tolerances;
  TransportOptions transport;
  double admission_tolerance = kDefaultTolerance;
};

/// Checks (a)–(e) of the theorem plus frame drift and time orientation at
/// every grid point. Refuses (AdmissionError) to run on a structure that
/// admit() rejects on the same grid.
TheoremReport validate_theorem(const StructureSpec& spec, const AdaptedFrame& frame, const SampleGrid& grid,
                               const ValidationOptions& options = {});

/// Convenience pipeline: admit, determine k, synthesize at the chart base point, validate.
TheoremReport reconstruct(const StructureSpec& spec, const SampleGrid& grid, const ValidationOptions& options = {});

}  // namespace immersion
