#include "immersion/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "immersion/error.hpp"
#include "immersion/parallel.hpp"

namespace immersion {

namespace {

constexpr double kEigenTolerance = 1e-6;

// Gram-orthonormal basis of the column span of `basis` (already orthonormal),
// rebuilt from coordinate axes taken in order of descending overlap so that
// the choice inside a degenerate eigenspace is reproducible.
Matrix canonical_basis(const Matrix& basis, const Matrix& gram) {
  const Eigen::Index dim = gram.rows();
  const Eigen::Index m = basis.cols();
  if (m == 0) return Matrix(dim, 0);
  const Matrix projector = basis * basis.transpose() * gram;
  std::vector<double> overlap(static_cast<std::size_t>(dim));
  for (Eigen::Index c = 0; c < dim; ++c) {
    const Vector p = projector.col(c);
    overlap[static_cast<std::size_t>(c)] = std::sqrt(std::max(0.0, p.dot(gram * p)));
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return overlap[static_cast<std::size_t>(a)] > overlap[static_cast<std::size_t>(b)] + 1e-12;
  });

  Matrix out(dim, m);
  Eigen::Index filled = 0;
  for (const Eigen::Index c : order) {
    if (filled == m) break;
    Vector v = projector.col(c);
    for (Eigen::Index q = 0; q < filled; ++q) v -= out.col(q).dot(gram * v) * out.col(q);
    const double norm = std::sqrt(std::max(0.0, v.dot(gram * v)));
    if (norm < 1e-6) continue;
    out.col(filled++) = v / norm;
  }
  if (filled < m) throw ModelError("could not build a basis of an eigenspace");
  return out;
}

Path segment(const Vector& a, const Vector& b) { return Path::polyline({a, b}); }

PointValidation validate_point(const AdaptedFrame& frame, const ConnectionField& conn, const AmbientModel& model,
                               const ImmersionSample& sample, const Matrix& sections,
                               const TransportOptions& transport) {
  const std::size_t n = conn.dim();
  const auto nn = static_cast<Eigen::Index>(n);
  const Vector& p = sample.point;
  const FieldJet jet = conn.spec().jet(p, JetOrder::kValues);
  const ConnectionPoint at = conn.at(p);
  PointValidation v;

  v.quadric = std::max(sample.residuals.sphere, sample.residuals.hyperboloid);
  v.isometry = sample.residuals.isometry;
  v.normal = std::max(sample.residuals.normal_tangent, sample.residuals.normal_unit);
  v.time_component = sample.position(model.dim() - 1);

  Vector signs(static_cast<Eigen::Index>(frame.rank()));
  Vector eigen(signs.size());
  for (std::size_t c = 0; c < frame.rank(); ++c) {
    signs(static_cast<Eigen::Index>(c)) = frame.signs[c];
    eigen(static_cast<Eigen::Index>(c)) = frame.eigenvalue(c);
  }
  v.gram_drift = max_abs(sections.transpose() * at.gram * sections - Matrix(signs.asDiagonal()));
  v.eigen_drift = max_abs(at.map * sections - sections * eigen.asDiagonal());

  // (e) product-structure relations
  const Matrix fhat = model.product_structure();
  const Vector u = jet.u();
  const Matrix& dpsi = sample.pushforward;
  for (Eigen::Index i = 0; i < nn; ++i) {
    const Vector defect = fhat * dpsi.col(i) - dpsi * jet.f.col(i) - u(i) * sample.normal;
    v.product = std::max(v.product, max_abs(defect));
  }
  v.product = std::max(v.product, max_abs(fhat * sample.normal - dpsi * jet.U - jet.lambda * sample.normal));

  // (d) and the pushforward cross-check, by differences of transported frames
  const Chart& chart = conn.chart();
  auto sample_at = [&](const Vector& q) {
    const Matrix moved = transport_frame(conn, segment(p, q), sections, transport);
    return read_immersion(frame, conn.at(q), moved, q);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double h = std::min(1e-3, 0.005 * chart.box[i].width());
    Vector ahead = p, behind = p, ahead2 = p, behind2 = p;
    ahead(ii) += h;
    behind(ii) -= h;
    ahead2(ii) += 2 * h;
    behind2(ii) -= 2 * h;
    Vector dn, dp;
    if (chart.contains(ahead, 0.0) && chart.contains(behind, 0.0)) {
      const ImmersionSample a = sample_at(ahead), b = sample_at(behind);
      dn = (a.normal - b.normal) / (2 * h);
      dp = (a.position - b.position) / (2 * h);
    } else if (chart.contains(ahead2, 0.0)) {
      const ImmersionSample a = sample_at(ahead), a2 = sample_at(ahead2);
      dn = (-3 * sample.normal + 4 * a.normal - a2.normal) / (2 * h);
      dp = (-3 * sample.position + 4 * a.position - a2.position) / (2 * h);
    } else {
      const ImmersionSample b = sample_at(behind), b2 = sample_at(behind2);
      dn = (3 * sample.normal - 4 * b.normal + b2.normal) / (2 * h);
      dp = (3 * sample.position - 4 * b.position + b2.position) / (2 * h);
    }
    Vector d = dn + dpsi * jet.S.col(ii);
    const Vector x1 = model.xi1(sample.position);
    const Vector x2 = model.xi2(sample.position);
    d -= minkowski_dot(d, x1) * x1;
    d += minkowski_dot(d, x2) * x2;  // ⟨ξ̂₂, ξ̂₂⟩ = −1
    v.shape = std::max(v.shape, max_abs(d));
    v.pushforward_fd = std::max(v.pushforward_fd, max_abs(dp - dpsi.col(ii)));
  }
  return v;
}

CheckSummary summarize(const std::string& name, const std::vector<PointValidation>& points, double tolerance,
                       double PointValidation::*field) {
  CheckSummary s{name, 0.0, tolerance, 0, true};
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const double value = points[idx].*field;
    if (value > s.sup || !std::isfinite(value)) {
      s.sup = value;
      s.worst_index = idx;
    }
  }
  s.passed = s.sup < tolerance;
  return s;
}

TheoremReport validate_admitted(const StructureSpec& spec, const AdaptedFrame& frame, const SampleGrid& grid,
                                const ValidationOptions& options) {
  const ConnectionField conn(spec);
  const AmbientModel model(spec.dim(), frame.k);
  TheoremReport report;
  report.k = frame.k;
  GridImmersion gi = immerse_grid(frame, conn, grid, options.transport);
  report.points.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t idx) {
    report.points[idx] = validate_point(frame, conn, model, gi.samples[idx], gi.sections[idx], options.transport);
  });
  report.samples = std::move(gi.samples);

  const TheoremTolerances& tol = options.tolerances;
  report.checks = {
      summarize("quadric", report.points, tol.quadric, &PointValidation::quadric),
      summarize("isometry", report.points, tol.isometry, &PointValidation::isometry),
      summarize("normal", report.points, tol.normal, &PointValidation::normal),
      summarize("shape_operator", report.points, tol.shape, &PointValidation::shape),
      summarize("product_structure", report.points, tol.product, &PointValidation::product),
      summarize("pushforward_fd", report.points, tol.pushforward_fd, &PointValidation::pushforward_fd),
      summarize("frame_gram_drift", report.points, tol.frame_drift, &PointValidation::gram_drift),
      summarize("frame_eigen_drift", report.points, tol.frame_drift, &PointValidation::eigen_drift),
  };
  CheckSummary time{"time_orientation", std::numeric_limits<double>::infinity(), 0.0, 0, true};
  for (std::size_t idx = 0; idx < report.points.size(); ++idx) {
    if (report.points[idx].time_component < time.sup) {
      time.sup = report.points[idx].time_component;
      time.worst_index = idx;
    }
  }
  time.passed = time.sup > 0.0;
  report.checks.push_back(time);

  for (const auto& c : report.checks) {
    if (!c.passed) report.failures.push_back(c.name);
  }
  report.passed = report.failures.empty();
  return report;
}

CompatibilityReport require_admissible(const StructureSpec& spec, const SampleGrid& grid, double tolerance) {
  CompatibilityReport admission = admit(spec, grid, tolerance);
  if (!admission.admissible) {
    std::string why;
    for (const auto& r : admission.reasons) why += (why.empty() ? "" : "; ") + r;
    throw AdmissionError("refusing to reconstruct an inadmissible structure: " + why);
  }
  return admission;
}

}  // namespace

AdaptedFrame synthesize_frame(const ConnectionField& conn, const Vector& p0, std::size_t k) {
  const std::size_t n = conn.dim();
  const auto nn = static_cast<Eigen::Index>(n);
  const auto rank = static_cast<Eigen::Index>(conn.rank());
  if (k < 1 || k > n) throw AdmissionError("k out of range: k = " + std::to_string(k));
  const FieldJet jet = conn.spec().jet(p0, JetOrder::kValues);
  if (is_excluded_point(jet, 1e-8)) throw AdmissionError("excluded case f = ±Id at the base point");

  const ConnectionPoint at = conn.at(p0);
  const Matrix gv = at.gram.topLeftCorner(nn + 1, nn + 1);
  const Matrix fv = at.map.topLeftCorner(nn + 1, nn + 1);
  // whiten: with gv = L Lᵀ, W = Lᵀ F L⁻ᵀ is symmetric because F is gv-symmetric
  const Eigen::LLT<Matrix> llt(gv);
  const Matrix lt = llt.matrixU();
  const Matrix lt_inv = lt.triangularView<Eigen::Upper>().solve(Matrix::Identity(nn + 1, nn + 1));
  Matrix w = lt * fv * lt_inv;
  w = 0.5 * (w + w.transpose()).eval();
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(w);
  const Vector& values = eig.eigenvalues();
  std::vector<Eigen::Index> plus, minus;
  for (Eigen::Index c = 0; c < values.size(); ++c) {
    if (std::abs(std::abs(values(c)) - 1.0) > kEigenTolerance) {
      throw AdmissionError("bundle map is not an involution at the base point (eigenvalue " +
                           std::to_string(values(c)) + ")");
    }
    (values(c) > 0 ? plus : minus).push_back(c);
  }
  if (plus.size() != k) {
    throw AdmissionError("eigen-multiplicity (" + std::to_string(plus.size()) + ", " + std::to_string(minus.size()) +
                         ") does not match (k, n+1-k) = (" + std::to_string(k) + ", " + std::to_string(n + 1 - k) +
                         ")");
  }
  auto family = [&](const std::vector<Eigen::Index>& cols) {
    Matrix b(nn + 1, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) b.col(static_cast<Eigen::Index>(c)) = lt_inv * eig.eigenvectors().col(cols[c]);
    return canonical_basis(b, gv);
  };
  const Matrix plus_basis = family(plus);
  const Matrix minus_basis = family(minus);

  AdaptedFrame frame;
  frame.base_point = p0;
  frame.k = k;
  frame.sections = Matrix::Zero(rank, rank);
  const auto kk = static_cast<Eigen::Index>(k);
  frame.sections.block(0, 0, nn + 1, kk) = plus_basis;
  frame.sections(xi1_slot(n), kk) = 1.0;
  frame.sections.block(0, kk + 1, nn + 1, minus_basis.cols()) = minus_basis;
  frame.sections(xi2_slot(n), rank - 1) = 1.0;
  // time orientation: ψ_{n+3}(p0) = g̃(η_last, ξ₂) must be positive
  if (frame.sections.col(rank - 1).dot(at.gram.col(xi2_slot(n))) < 0.0) frame.sections.col(rank - 1) *= -1.0;

  frame.signs.assign(static_cast<std::size_t>(rank), 1);
  frame.signs.back() = -1;
  Vector signs(rank), eigen(rank);
  for (Eigen::Index c = 0; c < rank; ++c) {
    signs(c) = frame.signs[static_cast<std::size_t>(c)];
    eigen(c) = frame.eigenvalue(static_cast<std::size_t>(c));
  }
  frame.gram_defect = max_abs(frame.sections.transpose() * at.gram * frame.sections - Matrix(signs.asDiagonal()));
  frame.eigen_defect = max_abs(at.map * frame.sections - frame.sections * eigen.asDiagonal());
  return frame;
}

AdaptedFrame remix_frame(const AdaptedFrame& frame, const Matrix& plus_rotation, const Matrix& minus_transform) {
  const auto p = static_cast<Eigen::Index>(frame.plus_count());
  const auto rank = static_cast<Eigen::Index>(frame.rank());
  if (plus_rotation.rows() != p || plus_rotation.cols() != p || minus_transform.rows() != rank - p ||
      minus_transform.cols() != rank - p) {
    throw ModelError("remix blocks have the wrong size");
  }
  Matrix block = Matrix::Zero(rank, rank);
  block.topLeftCorner(p, p) = plus_rotation;
  block.bottomRightCorner(rank - p, rank - p) = minus_transform;
  AdaptedFrame out = frame;
  out.sections = frame.sections * block;
  return out;
}

ImmersionSample read_immersion(const AdaptedFrame& frame, const ConnectionPoint& at, const Matrix& sections,
                               const Vector& point) {
  const auto rank = sections.rows();
  const Eigen::Index n = rank - 3;
  const auto plus = static_cast<Eigen::Index>(frame.plus_count());
  // row c of `pairing` is g̃(η_c, ·)
  const Matrix pairing = sections.transpose() * at.gram;
  ImmersionSample s;
  s.point = point;
  s.position.resize(rank);
  for (Eigen::Index c = 0; c < rank; ++c) s.position(c) = pairing(c, c < plus ? n + 1 : n + 2);
  s.normal = pairing.col(n);
  s.pushforward.resize(rank, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector ei = Vector::Unit(rank, i);
    const Vector fe = at.map * ei;  // F∂_i = f∂_i + u(∂_i)ξ
    const Vector up = 0.5 * (ei + fe);
    const Vector down = 0.5 * (ei - fe);
    for (Eigen::Index c = 0; c < rank; ++c) s.pushforward(c, i) = pairing.row(c).dot(c < plus ? up : down);
  }
  const AmbientModel model(static_cast<std::size_t>(n), frame.k);
  s.residuals = sample_residuals(model, s, at.gram.topLeftCorner(n, n));
  return s;
}

ImmersionSample immerse(const AdaptedFrame& frame, const ConnectionField& conn, const Vector& point,
                        const TransportOptions& options) {
  const Path path = Path::staircase(frame.base_point, point, axis_order(conn.dim()));
  const Matrix sections = transport_frame(conn, path, frame.sections, options);
  return read_immersion(frame, conn.at(point), sections, point);
}

GridImmersion immerse_grid(const AdaptedFrame& frame, const ConnectionField& conn, const SampleGrid& grid,
                           const TransportOptions& options) {
  GridImmersion out;
  out.sections = staircase_sweep(conn, grid, frame.base_point, frame.sections, axis_order(conn.dim()), options);
  out.samples.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t idx) {
    const Vector p = grid.point(idx);
    out.samples[idx] = read_immersion(frame, conn.at(p), out.sections[idx], p);
  });
  return out;
}

const CheckSummary& TheoremReport::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw Error("unknown theorem check '" + name + "'");
}

TheoremReport validate_theorem(const StructureSpec& spec, const AdaptedFrame& frame, const SampleGrid& grid,
                               const ValidationOptions& options) {
  require_admissible(spec, grid, options.admission_tolerance);
  return validate_admitted(spec, frame, grid, options);
}

TheoremReport reconstruct(const StructureSpec& spec, const SampleGrid& grid, const ValidationOptions& options) {
  const CompatibilityReport admission = require_admissible(spec, grid, options.admission_tolerance);
  const ConnectionField conn(spec);
  const AdaptedFrame frame = synthesize_frame(conn, spec.chart.base_point, static_cast<std::size_t>(*admission.k));
  return validate_admitted(spec, frame, grid, options);
}

}  // namespace immersion
