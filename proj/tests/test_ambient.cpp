#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "immersion/ambient.hpp"
#include "support/fixtures.hpp"

using namespace immersion;

namespace {

const std::vector<std::string> kCoords{"a", "b", "c"};

// Chart of S¹ × H² ⊂ L⁵ (n = 2, k = 1).
std::vector<Expression> model_chart() {
  return parse_expressions({"cos(a)", "sin(a)", "sinh(b)", "cosh(b)*sinh(c)", "cosh(b)*cosh(c)"}, kCoords);
}

Vector column(const std::vector<Expression>& e, const Vector& u) { return evaluate_all(e, u); }

Vector minkowski_wedge(const Vector& x, const Vector& y, const Vector& z) {
  return minkowski_dot(y, z) * x - minkowski_dot(x, z) * y;
}

ParametrizedHypersurface hypersurface(const std::string& fields, const std::string& domain = "[[-1, 1], [-1, 1]]",
                                      int k = 1) {
  const std::string doc = R"({"kind": "hypersurface", "n": 2, "k": )" + std::to_string(k) +
                          R"(, "coords": ["u1", "u2"], "domain": )" + domain +
                          R"(, "base_point": [0, 0], "fields": {"x": )" + fields + "}}";
  return *parse_document(doc).hypersurface;
}

}  // namespace

TEST_CASE("model basics") {
  const AmbientModel m(2, 1);
  const Vector x = column(model_chart(), (Vector(3) << 0.3, 0.5, -0.2).finished());
  CHECK(m.on_model(x));
  CHECK(std::abs(m.c1(x)) < 1e-15);
  CHECK(std::abs(m.c2(x)) < 1e-14);
  CHECK(minkowski_dot(m.xi1(x), m.xi1(x)) == doctest::Approx(1.0));
  CHECK(minkowski_dot(m.xi2(x), m.xi2(x)) == doctest::Approx(-1.0));
  CHECK(minkowski_dot(m.xi1(x), m.xi2(x)) == 0.0);
  const Matrix f = m.product_structure();
  CHECK((f * f).isIdentity());
  CHECK(f.trace() == -1.0);

  Vector off = x;
  off(4) = -off(4);
  CHECK_FALSE(m.on_model(off));
  CHECK_THROWS_AS(m.require_tangent(x, x), ModelError);
}

TEST_CASE("ambient connection") {
  const AmbientModel m(2, 1);
  const double t = 0.8;
  const Vector x = (Vector(5) << std::cos(t), std::sin(t), 0, 0, 1).finished();
  const Vector T = (Vector(5) << -std::sin(t), std::cos(t), 0, 0, 0).finished();
  const Vector dT = (Vector(5) << -std::cos(t), -std::sin(t), 0, 0, 0).finished();
  CHECK(ambient_connection(m, x, T, T, dT).norm() < 1e-15);

  // Constant extensions across the factors: no correction.
  const Vector H = (Vector(5) << 0, 0, 1, 0, 0).finished();
  CHECK(ambient_connection(m, x, T, H, Vector::Zero(5)).norm() < 1e-15);
  CHECK(ambient_connection(m, x, H, T, Vector::Zero(5)).norm() < 1e-15);

  // Metric compatibility on random combinations of coordinate fields.
  const auto chart = model_chart();
  std::vector<std::vector<Expression>> d(3), dd(9);
  for (std::size_t i = 0; i < 3; ++i) d[i] = differentiate_all(chart, i);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) dd[i * 3 + j] = differentiate_all(d[j], i);
  std::mt19937_64 rng(23);
  std::normal_distribution<double> dist;
  for (int sample = 0; sample < 20; ++sample) {
    const Vector u = (Vector(3) << 0.5 * dist(rng), 0.5 * dist(rng), 0.5 * dist(rng)).finished();
    const Vector p = column(chart, u);
    const Vector cx = Vector::NullaryExpr(3, [&] { return dist(rng); });
    const Vector cy = Vector::NullaryExpr(3, [&] { return dist(rng); });
    const Vector cz = Vector::NullaryExpr(3, [&] { return dist(rng); });
    Matrix e(5, 3);
    for (std::size_t i = 0; i < 3; ++i) e.col(static_cast<Eigen::Index>(i)) = column(d[i], u);
    auto flat = [&](const Vector& cv, const Vector& cw) {  // D_V W for constant-coefficient fields
      Vector out = Vector::Zero(5);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
          out += cv(static_cast<Eigen::Index>(i)) * cw(static_cast<Eigen::Index>(j)) * column(dd[i * 3 + j], u);
      return out;
    };
    const Vector X = e * cx, Y = e * cy, Z = e * cz;
    const Vector nyz = ambient_connection(m, p, X, Y, flat(cx, cy));
    const Vector nzy = ambient_connection(m, p, X, Z, flat(cx, cz));
    CHECK(std::abs(minkowski_dot(nyz, m.xi1(p))) < 1e-12);
    CHECK(std::abs(minkowski_dot(nyz, m.xi2(p))) < 1e-12);
    const double lhs = minkowski_dot(nyz, Z) + minkowski_dot(Y, nzy);
    const double rhs = minkowski_dot(flat(cx, cy), Z) + minkowski_dot(Y, flat(cx, cz));
    CHECK(std::abs(lhs - rhs) < 1e-8);
  }
}

TEST_CASE("ambient curvature") {
  const AmbientModel m(2, 1);
  const Vector x = (Vector(5) << 1, 0, 0, 0, 1).finished();
  const Vector s = (Vector(5) << 0, 1, 0, 0, 0).finished();
  const Vector h1 = (Vector(5) << 0, 0, 1, 0, 0).finished();
  const Vector h2 = (Vector(5) << 0, 0, 0, 1, 0).finished();
  CHECK(ambient_curvature(m, x, s, s, s).norm() == 0.0);
  CHECK((ambient_curvature(m, x, h1, h2, h2) + minkowski_wedge(h1, h2, h2)).norm() < 1e-15);
  CHECK(ambient_curvature(m, x, s, h1, h1).norm() < 1e-15);

  const AmbientModel sphere_side(2, 2);  // S² × H¹
  const Vector y = (Vector(5) << 1, 0, 0, 0, 1).finished();
  const Vector s1 = (Vector(5) << 0, 1, 0, 0, 0).finished();
  const Vector s2 = (Vector(5) << 0, 0, 1, 0, 0).finished();
  CHECK((ambient_curvature(sphere_side, y, s1, s2, s2) - minkowski_wedge(s1, s2, s2)).norm() < 1e-15);
}

TEST_CASE("ambient curvature against differences of the connection") {
  const AmbientModel m(2, 1);
  const auto chart = model_chart();
  std::vector<std::vector<Expression>> d(3), dd(9);
  for (std::size_t i = 0; i < 3; ++i) d[i] = differentiate_all(chart, i);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) dd[i * 3 + j] = differentiate_all(d[j], i);

  // V_jk(u) = ∇̃_{E_j} E_k with exact flat derivatives.
  auto inner = [&](const Vector& u, std::size_t j, std::size_t k) {
    return ambient_connection(m, column(chart, u), column(d[j], u), column(d[k], u), column(dd[j * 3 + k], u));
  };
  const double h = 1e-5;
  const Vector u = (Vector(3) << 0.4, -0.3, 0.6).finished();
  const Vector p = column(chart, u);
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) {
        auto outer = [&](std::size_t a, std::size_t b) {
          Vector plus = u, minus = u;
          plus(static_cast<Eigen::Index>(a)) += h;
          minus(static_cast<Eigen::Index>(a)) -= h;
          const Vector dv = (inner(plus, b, k) - inner(minus, b, k)) / (2 * h);
          return ambient_connection(m, p, column(d[a], u), inner(u, b, k), dv);
        };
        const Vector fd = outer(i, j) - outer(j, i);
        const Vector exact = ambient_curvature(m, p, column(d[i], u), column(d[j], u), column(d[k], u));
        worst = std::max(worst, (fd - exact).cwiseAbs().maxCoeff());
      }
  CHECK(worst < 1e-5);
}

TEST_CASE("extraction of the totally geodesic slice") {
  const ParametrizedHypersurface h = fixtures::catalog_hypersurface("totally_geodesic");
  const HypersurfaceFields fields(h);
  const Vector p = (Vector(2) << 0.3, -0.6).finished();
  const FieldJet jet = fields.jet(p, JetOrder::kFull);
  CHECK(max_abs(jet.S) < 1e-14);
  CHECK(jet.U.norm() < 1e-14);
  CHECK(jet.lambda == doctest::Approx(-1.0));
  CHECK(max_abs(jet.f - (Matrix(2, 2) << 1, 0, 0, -1).finished()) < 1e-14);
  CHECK(max_abs(jet.metric.g - Matrix::Identity(2, 2)) < 1e-14);
  // ν is the H²-direction orthogonal to ∂₂x.
  const HypersurfacePoint g = fields.geometry(p);
  CHECK(std::abs(std::abs(g.normal(2)) - 1.0) < 1e-14);
}

TEST_CASE("extraction of diagonal geodesics") {
  for (auto [a, b] : {std::pair{std::sqrt(0.5), std::sqrt(0.5)}, std::pair{0.6, 0.8}, std::pair{0.8, 0.6}}) {
    const std::string A = std::to_string(a), B = std::to_string(b);
    const std::string at = A + "*t)\", \"", bt = B + "*t)\", \"";
    const std::string doc = R"({"kind": "hypersurface", "n": 1, "k": 1, "coords": ["t"], "domain": [[-1, 1]],
        "base_point": [0], "fields": {"x": [")" + ("cos(" + at + "sin(" + at + "sinh(" + bt + "cosh(" + B) +
                            "*t)\"]}}";
    const ParametrizedHypersurface h = *parse_document(doc).hypersurface;
    const HypersurfaceFields fields(h);
    const double as = std::stod(A), bs = std::stod(B);
    const double norm = as * as + bs * bs;  // to_string rounding: T = ∂_t/√norm
    for (double t : {-0.5, 0.0, 0.7}) {
      const FieldJet jet = fields.jet((Vector(1) << t).finished(), JetOrder::kFull);
      INFO("a = " << a << ", t = " << t);
      CHECK(jet.lambda == doctest::Approx((bs * bs - as * as) / norm).epsilon(1e-12));
      CHECK(jet.u()(0) / std::sqrt(jet.metric.g(0, 0)) == doctest::Approx(2 * as * bs / norm).epsilon(1e-12));
      CHECK(std::abs(jet.S(0, 0)) < 1e-12);
      CHECK(jet.f(0, 0) == doctest::Approx(-jet.lambda).epsilon(1e-12));
    }
  }
}

TEST_CASE("invalid parametrizations") {
  const ParametrizedHypersurface off = hypersurface(R"json(["1.1*cos(u1)", "sin(u1)", "0", "sinh(u2)", "cosh(u2)"])json");
  CHECK_THROWS_WITH_AS(extract_structure(off), doctest::Contains("not on model"), ModelError);

  const ParametrizedHypersurface flat = hypersurface(R"json(["cos(u1)", "sin(u1)", "0", "0", "1"])json");
  CHECK_THROWS_WITH_AS(extract_structure(flat), doctest::Contains("degenerate"), ModelError);

  CHECK_THROWS_AS(hypersurface(R"json(["cos(u1)", "sin(u1)", "sinh(u2)", "cosh(u2)"])json"), SchemaError);
}

TEST_CASE("extraction is parametrization covariant") {
  // u1 = v1 + 0.1 v1² is a diffeomorphism of [−1, 1].
  const ParametrizedHypersurface h = hypersurface(
      R"json(["cos(sqrt(0.5)*(u1 + 0.1*u1^2))", "sin(sqrt(0.5)*(u1 + 0.1*u1^2))", "sinh(u2)",
          "cosh(u2)*sinh(sqrt(0.5)*(u1 + 0.1*u1^2))", "cosh(u2)*cosh(sqrt(0.5)*(u1 + 0.1*u1^2))"])json",
      "[[-1, 1], [-0.8, 0.8]]");
  const SampleGrid grid = uniform_grid(h.chart, 8);
  const CompatibilityReport r = admit(extract_structure(h, grid), grid);
  CHECK(r.admissible);
  CHECK(r.worst() < 1e-8);
}

TEST_CASE("congruence solver") {
  const ParametrizedHypersurface h = fixtures::catalog_hypersurface("tilted_slice");
  const SampleGrid grid = uniform_grid(h.chart, 5);
  const std::vector<ImmersionSample> samples = hypersurface_samples(h, grid);
  const AmbientModel m = h.model();
  const std::size_t base = nearest_sample(grid, h.chart.base_point);
  CHECK(grid.point(base).isApprox(h.chart.base_point, 1e-12) == false);  // 5 points: no sample at 0.1

  const Congruence same = solve_congruence(m, samples, samples, base);
  CHECK(same.congruent);
  CHECK(max_abs(same.phi - Matrix::Identity(5, 5)) < 1e-12);

  Matrix r = Matrix::Identity(5, 5);
  const double t = 1.1, s = 0.4;
  r.block(0, 0, 2, 2) << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  r.block(2, 2, 3, 3) << 1, 0, 0, 0, std::cosh(s), std::sinh(s), 0, std::sinh(s), std::cosh(s);
  std::vector<ImmersionSample> moved = samples;
  for (ImmersionSample& x : moved) {
    x.position = r * x.position;
    x.normal = r * x.normal;
    x.pushforward = r * x.pushforward;
  }
  const Congruence c = solve_congruence(m, samples, moved, base);
  CHECK(c.congruent);
  CHECK(max_abs(c.phi - r) < 1e-10);
  CHECK(c.upper_sheet);

  // A reflection of time is not an isometry of the model.
  std::vector<ImmersionSample> flipped = samples;
  for (ImmersionSample& x : flipped) x.position(4) = -x.position(4);
  const Congruence bad = solve_congruence(m, samples, flipped, base);
  CHECK_FALSE(bad.congruent);
  CHECK(bad.diagnostic.find("not congruent") == 0);
}

TEST_CASE("hypersurface samples satisfy their own residuals") {
  const ParametrizedHypersurface h = fixtures::catalog_hypersurface("diagonal_slab");
  const std::vector<ImmersionSample> samples = hypersurface_samples(h, uniform_grid(h.chart, 3));
  for (const ImmersionSample& s : samples) {
    CHECK(s.residuals.sphere < 1e-14);
    CHECK(s.residuals.hyperboloid < 1e-13);
    CHECK(s.residuals.normal_tangent < 1e-13);
    CHECK(s.residuals.normal_unit < 1e-13);
    CHECK(s.residuals.isometry == 0.0);
  }
}

TEST_CASE("equation audit") {
  const ParametrizedHypersurface flat = fixtures::catalog_hypersurface("totally_geodesic");
  const AuditReport a = audit_equations(flat, uniform_grid(flat.chart, 6));
  CHECK(a.gauss_composed.residual < 1e-8);
  CHECK(a.gauss_wedged.residual >= 0.5);
  CHECK(a.gauss_distinguished);
  CHECK_FALSE(a.codazzi_distinguished);
  CHECK(a.statements.at(0) == "Gauss variant (i) passes; (ii) fails");
  CHECK(a.statements.at(1).find("indistinguishable here") != std::string::npos);

  const ParametrizedHypersurface tilted = fixtures::catalog_hypersurface("tilted_slice");
  const AuditReport b = audit_equations(tilted, uniform_grid(tilted.chart, 6));
  CHECK(b.codazzi_plus.holds);
  CHECK(b.codazzi_plus.residual < 1e-8);
  CHECK_FALSE(b.codazzi_minus.holds);
  CHECK(b.statements.at(1) == "Codazzi variant (iii) passes; (iv) fails");
}
