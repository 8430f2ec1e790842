#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "immersion/geometry.hpp"

using namespace immersion;

namespace {

const std::vector<std::string> kCoords2{"u1", "u2"};
const std::vector<std::string> kCoords3{"u1", "u2", "u3"};

MetricField metric2(const std::vector<std::vector<std::string>>& rows) {
  return MetricField(ExpressionMatrix::parse(rows, kCoords2));
}

// A deliberately unstructured 3-metric, positive definite near the origin.
MetricField generic_metric() {
  return MetricField(ExpressionMatrix::parse({{"1 + u1^2", "0.3*sin(u2)", "0"},
                                              {"0.3*sin(u2)", "2 + cos(u1*u3)", "0.1*u2"},
                                              {"0", "0.1*u2", "1.5 + u3^2"}},
                                             kCoords3));
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("charts and grids") {
  Chart chart{{"u1", "u2"}, {{-1, 1}, {0, 2}}, vec({0, 1})};
  CHECK_NOTHROW(chart.validate());
  CHECK(chart.contains(vec({1, 2})));
  CHECK_FALSE(chart.interior(vec({1, 1})));
  CHECK_FALSE(chart.contains(vec({1.1, 1})));

  Chart boundary_base = chart;
  boundary_base.base_point = vec({1, 1});
  CHECK_THROWS_AS(boundary_base.validate(), SchemaError);
  Chart empty = chart;
  empty.box[0] = {1, 1};
  CHECK_THROWS_AS(empty.validate(), SchemaError);

  const SampleGrid grid = uniform_grid(chart, 4);
  CHECK(grid.size() == 16);
  CHECK(grid.point(0)(0) == doctest::Approx(-0.98));
  CHECK(grid.point(0)(1) == doctest::Approx(0.02));
  CHECK(grid.point(1)(0) == doctest::Approx(-0.98));  // last axis runs fastest
  CHECK(grid.point(15)(1) == doctest::Approx(1.98));
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(grid.flat_index(grid.multi_index(i)) == i);
}

TEST_CASE("Christoffel symbols") {
  SUBCASE("flat metric") {
    const Christoffel gamma = christoffels(metric2({{"1", "0"}, {"0", "1"}}), vec({0.3, -0.2}));
    for (std::size_t m = 0; m < 2; ++m)
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(gamma(m, i, j) == 0.0);
  }
  SUBCASE("round sphere") {
    const Christoffel gamma = christoffels(metric2({{"1", "0"}, {"0", "sin(u1)^2"}}), vec({std::numbers::pi / 4, 0.5}));
    CHECK(gamma(0, 1, 1) == doctest::Approx(-0.5));
    CHECK(gamma(1, 0, 1) == doctest::Approx(1.0));  // cot(π/4)
    CHECK(gamma(1, 1, 0) == gamma(1, 0, 1));
  }
  SUBCASE("conformal metric") {
    const Christoffel gamma = christoffels(metric2({{"exp(2*u1)", "0"}, {"0", "exp(2*u1)"}}), vec({0.4, 0.1}));
    CHECK(gamma(0, 0, 0) == doctest::Approx(1.0));
    CHECK(gamma(0, 1, 1) == doctest::Approx(-1.0));
    CHECK(gamma(1, 0, 1) == doctest::Approx(1.0));
  }
  SUBCASE("symmetric in the lower indices") {
    const Christoffel gamma = christoffels(generic_metric(), vec({0.3, 0.2, -0.4}));
    for (std::size_t m = 0; m < 3; ++m)
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(gamma(m, i, j) == doctest::Approx(gamma(m, j, i)));
  }
}

TEST_CASE("constant curvature charts") {
  const Vector x = vec({1, 0}), y = vec({0, 1});
  {
    const MetricField m = metric2({{"1", "0"}, {"0", "sin(u1)^2"}});
    const Vector p = vec({0.9, 0.3});
    const Curvature r = riemann(m, p);
    CHECK(std::abs(sectional_curvature(r, m.jet(p).g, x, y) - 1.0) < 1e-10);
  }
  {
    const MetricField m = metric2({{"1", "0"}, {"0", "cosh(u1)^2"}});
    const Vector p = vec({0.7, -0.2});
    const Curvature r = riemann(m, p);
    CHECK(std::abs(sectional_curvature(r, m.jet(p).g, x, y) + 1.0) < 1e-10);
  }
  {
    const MetricField m = metric2({{"1", "0"}, {"0", "1"}});
    const Curvature r = riemann(m, vec({0.1, 0.2}));
    CHECK(max_abs(r.endomorphism(0, 1)) == 0.0);
  }
}

TEST_CASE("curvature symmetries") {
  const MetricField m = generic_metric();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  for (int sample = 0; sample < 10; ++sample) {
    const Vector p = vec({dist(rng), dist(rng), dist(rng)});
    const PointCalculus calc = point_calculus(m.jet(p));
    const Curvature& r = calc.riemann;
    double scale = 0.0, antisym = 0.0, bianchi = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k)
          for (std::size_t l = 0; l < 3; ++l) {
            const double v = r.lowered(calc.g, i, j, k, l);
            scale = std::max(scale, std::abs(v));
            antisym = std::max(antisym, std::abs(v + r.lowered(calc.g, j, i, k, l)));
            antisym = std::max(antisym, std::abs(v + r.lowered(calc.g, i, j, l, k)));
            bianchi = std::max(bianchi, std::abs(r(l, k, i, j) + r(l, i, j, k) + r(l, j, k, i)));
          }
    CHECK(antisym < 1e-10 * scale);
    CHECK(bianchi < 1e-10 * scale);
    for (std::size_t k = 0; k < 3; ++k) CHECK(max_abs(metric_covariant_derivative(calc, k)) < 1e-12);
  }
}

TEST_CASE("curvature agrees with Richardson differences of the Christoffel symbols") {
  const MetricField m = generic_metric();
  const Vector p = vec({0.25, -0.1, 0.35});
  const Curvature exact = riemann(m, p);
  const Christoffel gamma = christoffels(m, p);
  const std::size_t n = 3;

  // dgamma[i](l, j, k) ≈ ∂_i Γ^l_jk
  auto central = [&](double h) {
    std::vector<Christoffel> out;
    for (std::size_t i = 0; i < n; ++i) {
      Vector plus = p, minus = p;
      plus(static_cast<Eigen::Index>(i)) += h;
      minus(static_cast<Eigen::Index>(i)) -= h;
      const Christoffel gp = christoffels(m, plus), gm = christoffels(m, minus);
      Christoffel d(n);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t c = 0; c < n; ++c) d(a, b, c) = (gp(a, b, c) - gm(a, b, c)) / (2 * h);
      out.push_back(d);
    }
    return out;
  };
  const auto coarse = central(1e-3);
  const auto fine = central(5e-4);

  double worst = 0.0;
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          auto d = [&](std::size_t dir, std::size_t a, std::size_t b, std::size_t c) {
            return (4 * fine[dir](a, b, c) - coarse[dir](a, b, c)) / 3;
          };
          double value = d(i, l, j, k) - d(j, l, i, k);
          for (std::size_t q = 0; q < n; ++q) value += gamma(l, i, q) * gamma(q, j, k) - gamma(l, j, q) * gamma(q, i, k);
          worst = std::max(worst, std::abs(value - exact(l, k, i, j)));
        }
  CHECK(worst < 1e-6);
}

TEST_CASE("covariant derivative of operator fields") {
  const MetricField sphere = metric2({{"1", "0"}, {"0", "sin(u1)^2"}});
  const Vector p = vec({0.8, 0.2});
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(max_abs(covariant_derivative_operator_field(ExpressionMatrix::identity(2), sphere, p, i)) < 1e-15);
  }
  const MetricField flat = metric2({{"1", "0"}, {"0", "1"}});
  const ExpressionMatrix t = ExpressionMatrix::parse({{"u1", "u1"}, {"u1", "u1"}}, kCoords2);
  CHECK(covariant_derivative_operator_field(t, flat, p, 0).isApprox(Matrix::Ones(2, 2)));
  CHECK(max_abs(covariant_derivative_operator_field(t, flat, p, 1)) == 0.0);

  // On the sphere, T = diag(0, 1) is not parallel: (∇_2 T)^1_2 = Γ^1_22 − Γ^1_22·0 = −sin cos.
  const ExpressionMatrix proj = ExpressionMatrix::parse({{"0", "0"}, {"0", "1"}}, kCoords2);
  const Matrix d = covariant_derivative_operator_field(proj, sphere, p, 1);
  CHECK(d(0, 1) == doctest::Approx(-std::sin(0.8) * std::cos(0.8)));
  CHECK(d(1, 0) == doctest::Approx(-std::cos(0.8) / std::sin(0.8)));
}

TEST_CASE("wedge endomorphism") {
  const Matrix g = Matrix::Identity(2, 2);
  CHECK(wedge(vec({1, 0}), vec({0, 1}), vec({0, 1}), g).isApprox(vec({1, 0})));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> dist;
  Matrix h(3, 3);
  for (Eigen::Index r = 0; r < 3; ++r)
    for (Eigen::Index c = 0; c < 3; ++c) h(r, c) = dist(rng);
  const Matrix spd = h * h.transpose() + Matrix::Identity(3, 3);
  for (int sample = 0; sample < 20; ++sample) {
    const Vector v = Vector::NullaryExpr(3, [&] { return dist(rng); });
    const Vector w = Vector::NullaryExpr(3, [&] { return dist(rng); });
    const Vector z = Vector::NullaryExpr(3, [&] { return dist(rng); });
    CHECK(wedge(v, v, z, spd).norm() < 1e-14);
    CHECK((wedge(v, w, z, spd) + wedge(w, v, z, spd)).norm() < 1e-13);
    // g((v∧w)z, z) = 0: the wedge is g-skew.
    CHECK(std::abs(z.dot(spd * wedge(v, w, z, spd))) < 1e-12);
  }
}

TEST_CASE("singular metrics are reported") {
  const MetricField m = metric2({{"1", "0"}, {"0", "u1"}});
  CHECK_THROWS_AS(point_calculus(m.jet(vec({0.0, 0.0}))), SingularMetricError);
  CHECK_THROWS_AS(point_calculus(m.jet(vec({-0.5, 0.0}))), SingularMetricError);
  CHECK_NOTHROW(point_calculus(m.jet(vec({0.5, 0.0}))));
}

TEST_CASE("Minkowski products and signature Gram-Schmidt") {
  const MinkowskiSpace l5{5};
  const Vector t = vec({0, 0, 0, 0, 1});
  CHECK(l5.inner(t, t) == -1.0);
  CHECK(l5.metric().diagonal().sum() == 3.0);

  std::mt19937_64 rng(5);
  std::normal_distribution<double> dist;
  const Matrix frame = Matrix::Identity(4, 4) + 0.2 * Matrix::NullaryExpr(4, 4, [&] { return dist(rng); });
  const Matrix j = lorentz_signature(4);
  const Matrix q = signature_gram_schmidt(frame, j, {1, 1, 1, -1});
  CHECK(max_abs(q.transpose() * j * q - j) < 1e-12);
}
