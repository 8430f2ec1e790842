#include "immersion/geometry.hpp"

#include <cmath>
#include <sstream>

#include "immersion/error.hpp"

namespace immersion {

bool Chart::contains(const Vector& p, double slack) const {
  if (static_cast<std::size_t>(p.size()) != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    const double tol = slack * std::max(1.0, box[i].width());
    if (p(static_cast<Eigen::Index>(i)) < box[i].lo - tol || p(static_cast<Eigen::Index>(i)) > box[i].hi + tol) {
      return false;
    }
  }
  return true;
}

bool Chart::interior(const Vector& p) const {
  if (static_cast<std::size_t>(p.size()) != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    const double v = p(static_cast<Eigen::Index>(i));
    if (!(v > box[i].lo && v < box[i].hi)) return false;
  }
  return true;
}

void Chart::validate() const {
  if (dim() < 1) throw SchemaError("chart dimension must be at least 1");
  if (box.size() != dim()) throw SchemaError("domain box has " + std::to_string(box.size()) +
                                             " intervals for " + std::to_string(dim()) + " coordinates");
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!(box[i].lo < box[i].hi)) throw SchemaError("empty domain interval for '" + coords[i] + "'");
  }
  if (!interior(base_point)) throw SchemaError("base point is not interior to the domain box");
}

std::size_t SampleGrid::size() const {
  std::size_t count = axes.empty() ? 0 : 1;
  for (const auto& axis : axes) count *= axis.size();
  return count;
}

std::vector<std::size_t> SampleGrid::multi_index(std::size_t index) const {
  std::vector<std::size_t> multi(axes.size());
  for (std::size_t a = axes.size(); a-- > 0;) {
    multi[a] = index % axes[a].size();
    index /= axes[a].size();
  }
  return multi;
}

std::size_t SampleGrid::flat_index(const std::vector<std::size_t>& multi) const {
  std::size_t index = 0;
  for (std::size_t a = 0; a < axes.size(); ++a) index = index * axes[a].size() + multi[a];
  return index;
}

Vector SampleGrid::point(std::size_t index) const {
  const auto multi = multi_index(index);
  Vector p(static_cast<Eigen::Index>(axes.size()));
  for (std::size_t a = 0; a < axes.size(); ++a) p(static_cast<Eigen::Index>(a)) = axes[a][multi[a]];
  return p;
}

SampleGrid uniform_grid(const Chart& chart, std::size_t per_axis, double shrink) {
  if (per_axis < 1) throw SchemaError("grid density must be positive");
  SampleGrid grid;
  for (const auto& interval : chart.box) {
    const double lo = interval.lo + shrink * interval.width();
    const double hi = interval.hi - shrink * interval.width();
    std::vector<double> axis(per_axis);
    if (per_axis == 1) {
      axis[0] = 0.5 * (lo + hi);
    } else {
      for (std::size_t j = 0; j < per_axis; ++j) {
        axis[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(per_axis - 1);
      }
      axis.back() = hi;
    }
    grid.axes.push_back(std::move(axis));
  }
  return grid;
}

Matrix Christoffel::direction(std::size_t i) const {
  Matrix m(n_, n_);
  for (std::size_t a = 0; a < n_; ++a) {
    for (std::size_t b = 0; b < n_; ++b) m(a, b) = (*this)(a, i, b);
  }
  return m;
}

Matrix Curvature::endomorphism(std::size_t i, std::size_t j) const {
  Matrix m(n_, n_);
  for (std::size_t l = 0; l < n_; ++l) {
    for (std::size_t k = 0; k < n_; ++k) m(l, k) = (*this)(l, k, i, j);
  }
  return m;
}

double Curvature::lowered(const Matrix& g, std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
  double sum = 0.0;
  for (std::size_t m = 0; m < n_; ++m) sum += g(l, m) * (*this)(m, k, i, j);
  return sum;
}

Christoffel christoffels_from_jet(const Matrix& g_inv, const std::vector<Matrix>& dg) {
  const std::size_t n = static_cast<std::size_t>(g_inv.rows());
  Christoffel gamma(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      for (std::size_t m = 0; m < n; ++m) {
        double sum = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
          sum += g_inv(m, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        }
        gamma(m, i, j) = 0.5 * sum;
        gamma(m, j, i) = 0.5 * sum;
      }
    }
  }
  return gamma;
}

PointCalculus point_calculus(const MetricJet& jet) {
  const Matrix& g = jet.g;
  const std::size_t n = static_cast<std::size_t>(g.rows());
  const double scale = std::max(1.0, max_abs(g));
  if (max_abs(g - g.transpose()) > 1e-10 * scale) throw SingularMetricError("metric is not symmetric");
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) throw SingularMetricError("metric is not positive definite");
  for (std::size_t m = 1; m <= n; ++m) {
    if (!(g.topLeftCorner(m, m).determinant() > 1e-14 * std::pow(scale, static_cast<double>(m)))) {
      throw SingularMetricError("metric is degenerate");
    }
  }

  PointCalculus calc;
  calc.g = g;
  calc.g_inv = llt.solve(Matrix::Identity(n, n));
  calc.g_inv = 0.5 * (calc.g_inv + calc.g_inv.transpose()).eval();
  calc.dg = jet.dg;
  calc.gamma = christoffels_from_jet(calc.g_inv, jet.dg);
  if (jet.ddg.empty()) return calc;

  auto ddg = [&](std::size_t k, std::size_t l) -> const Matrix& { return jet.ddg[k * n + l]; };
  calc.dgamma.assign(n, Christoffel(n));
  for (std::size_t k = 0; k < n; ++k) {
    const Matrix dginv = -calc.g_inv * jet.dg[k] * calc.g_inv;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t m = 0; m < n; ++m) {
          double sum = 0.0;
          for (std::size_t l = 0; l < n; ++l) {
            const double lowered = jet.dg[i](j, l) + jet.dg[j](i, l) - jet.dg[l](i, j);
            const double dlowered = ddg(k, i)(j, l) + ddg(k, j)(i, l) - ddg(k, l)(i, j);
            sum += dginv(m, l) * lowered + calc.g_inv(m, l) * dlowered;
          }
          calc.dgamma[k](m, i, j) = 0.5 * sum;
        }
      }
    }
  }

  calc.riemann = Curvature(n);
  const Christoffel& gm = calc.gamma;
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          double value = calc.dgamma[i](l, j, k) - calc.dgamma[j](l, i, k);
          for (std::size_t m = 0; m < n; ++m) value += gm(l, i, m) * gm(m, j, k) - gm(l, j, m) * gm(m, i, k);
          calc.riemann(l, k, i, j) = value;
        }
      }
    }
  }
  return calc;
}

MetricField::MetricField(ExpressionMatrix g) : g_(std::move(g)) {
  const std::size_t n = g_.rows();
  if (g_.cols() != n) throw SchemaError("metric must be square");
  for (std::size_t k = 0; k < n; ++k) dg_.push_back(g_.derivative(k));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      // ∂_k∂_l g, reusing ∂_l∂_k for l < k
      if (l < k) {
        ddg_.push_back(ddg_[l * n + k]);
      } else {
        ddg_.push_back(dg_[l].derivative(k));
      }
    }
  }
}

MetricJet MetricField::jet(const Vector& point, bool second_derivatives) const {
  MetricJet jet;
  jet.g = g_.evaluate(point);
  for (const auto& d : dg_) jet.dg.push_back(d.evaluate(point));
  if (second_derivatives) {
    for (const auto& d : ddg_) jet.ddg.push_back(d.evaluate(point));
  }
  return jet;
}

Christoffel christoffels(const MetricField& metric, const Vector& point) {
  return point_calculus(metric.jet(point, false)).gamma;
}

Curvature riemann(const MetricField& metric, const Vector& point) {
  return point_calculus(metric.jet(point, true)).riemann;
}

Matrix covariant_derivative(const Matrix& t, const Matrix& dt_i, const Christoffel& gamma, std::size_t i) {
  const Matrix gi = gamma.direction(i);
  return dt_i + gi * t - t * gi;
}

Matrix covariant_derivative_operator_field(const ExpressionMatrix& t, const MetricField& metric,
                                           const Vector& point, std::size_t i) {
  const Christoffel gamma = christoffels(metric, point);
  return covariant_derivative(t.evaluate(point), t.derivative(i).evaluate(point), gamma, i);
}

Matrix metric_covariant_derivative(const PointCalculus& calc, std::size_t k) {
  const Matrix gk = calc.gamma.direction(k);
  return calc.dg[k] - gk.transpose() * calc.g - calc.g * gk;
}

Vector wedge(const Vector& v, const Vector& w, const Vector& z, const Matrix& g) {
  return w.dot(g * z) * v - v.dot(g * z) * w;
}

double g_norm(const Vector& v, const Matrix& g) { return std::sqrt(std::max(0.0, v.dot(g * v))); }

double sectional_curvature(const Curvature& r, const Matrix& g, const Vector& x, const Vector& y) {
  const std::size_t n = r.dim();
  Vector ry = Vector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) ry += x(i) * y(j) * (r.endomorphism(i, j) * y);
  }
  const double area = x.dot(g * x) * y.dot(g * y) - std::pow(x.dot(g * y), 2);
  return ry.dot(g * x) / area;
}

}  // namespace immersion
