#include <cmath>
#include <string>

#include "doctest.h"
#include "immersion/reconstruct.hpp"
#include "support/fixtures.hpp"

using namespace immersion;

namespace {

StructureSpec product() {
  return fixtures::flat_structure(R"([["0", "0"], ["0", "0"]])", R"([["1", "0"], ["0", "-1"]])", R"(["0", "0"])",
                                  "-1");
}

Vector unit(Eigen::Index size, Eigen::Index i) { return Vector::Unit(size, i); }

bool parallel_to(const Vector& v, const Vector& w) { return std::abs(std::abs(v.dot(w)) - v.norm() * w.norm()) < 1e-12; }

}  // namespace

TEST_CASE("adapted frame of the flat product") {
  const StructureSpec spec = product();
  const ConnectionField conn(spec);
  const AdaptedFrame frame = synthesize_frame(conn, spec.chart.base_point, 1);
  REQUIRE(frame.rank() == 5);
  CHECK(frame.plus_count() == 2);
  CHECK(frame.signs == std::vector<int>{1, 1, 1, 1, -1});
  // +1 family {∂₁, ξ₁}; −1 family {∂₂, ξ} followed by the timelike ξ₂.
  CHECK(parallel_to(frame.sections.col(0), unit(5, 0)));
  CHECK(parallel_to(frame.sections.col(1), unit(5, xi1_slot(2))));
  CHECK(parallel_to(frame.sections.col(2), unit(5, 1)));
  CHECK(parallel_to(frame.sections.col(3), unit(5, xi_slot(2))));
  CHECK(parallel_to(frame.sections.col(4), unit(5, xi2_slot(2))));
  CHECK(frame.gram_defect < 1e-12);
  CHECK(frame.eigen_defect < 1e-12);
}

TEST_CASE("adapted frame of the diagonal geodesic") {
  const StructureSpec spec = fixtures::catalog_structure("diagonal_geodesic");
  const ConnectionField conn(spec);
  const AdaptedFrame frame = synthesize_frame(conn, spec.chart.base_point, 1);
  // F on span(T, ξ) swaps T and ξ (λ = 0, U = T): eigenvectors (T ± ξ)/√2.
  const double r = std::sqrt(0.5);
  const Vector plus = (Vector(4) << r, r, 0, 0).finished();
  const Vector minus = (Vector(4) << r, -r, 0, 0).finished();
  CHECK(parallel_to(frame.sections.col(0), plus));
  CHECK(parallel_to(frame.sections.col(2), minus));
  CHECK(frame.sections.col(0).norm() == doctest::Approx(1.0));

  const ConnectionPoint cp = conn.at(spec.chart.base_point);
  const Matrix gram = frame.sections.transpose() * cp.gram * frame.sections;
  CHECK(max_abs(gram - lorentz_signature(4)) < 1e-12);
}

TEST_CASE("frame synthesis preconditions") {
  const StructureSpec identity_f =
      fixtures::flat_structure(R"([["0", "0"], ["0", "0"]])", R"([["1", "0"], ["0", "1"]])", R"(["0", "0"])", "1", 2);
  const ConnectionField conn(identity_f);
  CHECK_THROWS_WITH_AS(synthesize_frame(conn, identity_f.chart.base_point, 2), doctest::Contains("excluded case"),
                       AdmissionError);
  const ConnectionField flat(product());
  CHECK_THROWS_WITH_AS(synthesize_frame(flat, product().chart.base_point, 2), doctest::Contains("eigen-multiplicity"),
                       AdmissionError);
}

TEST_CASE("immersion at the base point needs no transport") {
  const StructureSpec spec = fixtures::catalog_structure("tilted_slice");
  const ConnectionField conn(spec);
  const AdaptedFrame frame = synthesize_frame(conn, spec.chart.base_point, 1);
  const ImmersionSample s = immerse(frame, conn, spec.chart.base_point);
  CHECK(s.residuals.sphere < 1e-14);
  CHECK(s.residuals.hyperboloid < 1e-14);
  CHECK(s.residuals.isometry < 1e-14);
  CHECK(s.residuals.normal_unit < 1e-14);
  CHECK(s.position(4) > 0.0);
  const ImmersionSample again = read_immersion(frame, conn.at(spec.chart.base_point), frame.sections,
                                               spec.chart.base_point);
  CHECK(max_abs(again.position - s.position) == 0.0);
}

TEST_CASE("theorem checks on the catalog") {
  for (const char* name : {"totally_geodesic", "diagonal_geodesic", "diagonal_cylinder", "tilted_slice"}) {
    const StructureSpec spec = fixtures::catalog_structure(name);
    const TheoremReport report = reconstruct(spec, uniform_grid(spec.chart, 5));
    INFO(name);
    CHECK(report.passed);
    CHECK(report.failures.empty());
    CHECK(report.check("quadric").sup < 1e-7);
    CHECK(report.check("isometry").sup < 1e-6);
    CHECK(report.check("normal").sup < 1e-7);
    CHECK(report.check("shape_operator").sup < 1e-4);
    CHECK(report.check("product_structure").sup < 1e-6);
    CHECK(report.check("frame_gram_drift").sup < 1e-7);
    CHECK(report.check("frame_eigen_drift").sup < 1e-7);
    for (const ImmersionSample& s : report.samples) CHECK(s.position(s.position.size() - 1) > 0.0);
  }
}

TEST_CASE("diagonal geodesic normal under the product structure") {
  // F̂N = ψ*U + λN with λ = 0 and U = T, so F̂N = ψ*∂_t.
  const StructureSpec spec = fixtures::catalog_structure("diagonal_geodesic");
  const TheoremReport report = reconstruct(spec, uniform_grid(spec.chart, 6));
  const Matrix fhat = AmbientModel(1, 1).product_structure();
  for (const ImmersionSample& s : report.samples) {
    CHECK(max_abs(fhat * s.normal - s.pushforward.col(0)) < 1e-6);
  }
}

TEST_CASE("inadmissible structures are refused") {
  const StructureSpec tilted = fixtures::catalog_structure("tilted_slice");
  const StructureSpec doubled = with_scaled_shape(tilted, 2.0);
  const ConnectionField conn(doubled);
  const AdaptedFrame frame = synthesize_frame(conn, doubled.chart.base_point, 1);
  CHECK_THROWS_WITH_AS(validate_theorem(doubled, frame, uniform_grid(doubled.chart, 4)),
                       doctest::Contains("refusing to reconstruct"), AdmissionError);
  CHECK_THROWS_AS(reconstruct(doubled, uniform_grid(doubled.chart, 4)), AdmissionError);
}

TEST_CASE("different base points and eigenbases give congruent immersions") {
  const StructureSpec spec = fixtures::catalog_structure("diagonal_cylinder");
  const ConnectionField conn(spec);
  const SampleGrid grid = uniform_grid(spec.chart, 5);
  const AmbientModel model(2, 2);

  const AdaptedFrame a = synthesize_frame(conn, spec.chart.base_point, 2);
  const Vector other = (Vector(2) << -0.5, 0.4).finished();
  const AdaptedFrame b = synthesize_frame(conn, other, 2);
  const GridImmersion ia = immerse_grid(a, conn, grid);
  const GridImmersion ib = immerse_grid(b, conn, grid);
  const std::size_t base = nearest_sample(grid, spec.chart.base_point);
  const Congruence c = solve_congruence(model, ia.samples, ib.samples, base);
  CHECK(c.congruent);
  CHECK(c.sup_distance < 1e-6);
  CHECK(c.orthogonality < 1e-8);
  CHECK(c.lorentz < 1e-8);
  CHECK(c.block_defect < 1e-8);

  // Rotate the plus family, boost the minus family.
  const double t = 0.7, s = 0.3;
  Matrix q = Matrix::Identity(3, 3);
  q.block(0, 0, 2, 2) << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  Matrix l = Matrix::Identity(2, 2);
  l << std::cosh(s), std::sinh(s), std::sinh(s), std::cosh(s);
  const AdaptedFrame mixed = remix_frame(a, q, l);
  CHECK(mixed.gram_defect < 1e-12);
  const GridImmersion im = immerse_grid(mixed, conn, grid);
  const Congruence cm = solve_congruence(model, ia.samples, im.samples, base);
  CHECK(cm.congruent);
  CHECK(cm.sup_distance < 1e-6);
  CHECK(cm.lorentz < 1e-8);
}
