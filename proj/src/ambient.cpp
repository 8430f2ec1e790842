#include "immersion/ambient.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "immersion/error.hpp"
#include "immersion/parallel.hpp"
#include "immersion/structure.hpp"

namespace immersion {

namespace {

template <class T>
VectorT<T> apply_product(const VectorT<T>& v, Eigen::Index sphere) {
  VectorT<T> out = v;
  for (Eigen::Index i = sphere; i < v.size(); ++i) out(i) = -out(i);
  return out;
}

// Oriented unit normal from first-column cofactors of `columns`
// ([∂_1x … ∂_nx, ξ̂₁, ξ̂₂]): with c_a the cofactor of row a, ⟨Jc, m⟩ =
// det[m, columns] vanishes for every column m, and det[Jc, columns] =
// ⟨Jc, Jc⟩ > 0 for a spacelike normal.
Vector unit_normal(const Matrix& columns) {
  const Eigen::Index d = columns.rows();
  Vector nu(d);
  for (Eigen::Index a = 0; a < d; ++a) {
    Matrix minor(d - 1, d - 1);
    for (Eigen::Index r = 0, m = 0; r < d; ++r) {
      if (r != a) minor.row(m++) = columns.row(r);
    }
    const double cofactor = (a % 2 == 0 ? 1.0 : -1.0) * minor.determinant();
    nu(a) = a == d - 1 ? -cofactor : cofactor;
  }
  const double norm2 = minkowski_dot(nu, nu);
  if (!(norm2 > 0.0)) throw ModelError("normal direction not unique (rank defect)");
  return nu / std::sqrt(norm2);
}

// Differentiating the cofactors directly loses all accuracy when a minor is
// singular up to roundoff, so the derivative comes from the defining
// conditions instead: ⟨∂ν, ν⟩ = 0 and ⟨∂ν, w⟩ = −⟨ν, ∂w⟩ for every column w.
VectorT<Dual> unit_normal(const MatrixT<Dual>& columns) {
  const Matrix w = values(columns);
  const Vector nu = unit_normal(w);
  const Eigen::Index d = w.rows();
  const Matrix j = lorentz_signature(d);
  const Matrix gram_inv = (w.transpose() * j * w).inverse();
  Eigen::Index dirs = 0;
  for (Eigen::Index r = 0; r < columns.rows(); ++r) {
    for (Eigen::Index c = 0; c < columns.cols(); ++c) dirs = std::max(dirs, columns(r, c).derivatives().size());
  }
  Matrix dnu(d, dirs);
  for (Eigen::Index l = 0; l < dirs; ++l) {
    const Vector rhs = -(derivative(columns, l).transpose() * j * nu);
    dnu.col(l) = w * (gram_inv * rhs);
  }
  VectorT<Dual> out(d);
  for (Eigen::Index a = 0; a < d; ++a) out(a) = Dual(nu(a), Gradient(dnu.row(a).transpose()));
  return out;
}

template <class T>
struct Extracted {
  MatrixT<T> g;
  MatrixT<T> S;
  MatrixT<T> f;
  VectorT<T> U;
  T lambda;
  VectorT<T> nu;
};

// Induced structure at one point from x, ∂x and ∂²x.
//
// Because ν ⊥ ξ̂₁, ξ̂₂ the correction terms of the ambient connection drop out
// of ⟨∇̃_{∂i}∂_j x, ν⟩, so h_ij = ⟨∂_ij x, ν⟩ is the second fundamental form.
template <class T>
Extracted<T> extract_point(const AmbientModel& model, const VectorT<T>& x, const std::vector<VectorT<T>>& dx,
                           const std::vector<std::vector<VectorT<T>>>& ddx) {
  const auto n = static_cast<Eigen::Index>(model.n);
  const Eigen::Index d = model.dim();
  const Eigen::Index sphere = model.sphere_size();

  VectorT<T> xi1 = VectorT<T>::Zero(d);
  VectorT<T> xi2 = VectorT<T>::Zero(d);
  for (Eigen::Index a = 0; a < d; ++a) (a < sphere ? xi1 : xi2)(a) = x(a);

  MatrixT<T> columns(d, d - 1);
  for (Eigen::Index i = 0; i < n; ++i) columns.col(i) = dx[static_cast<std::size_t>(i)];
  columns.col(n) = xi1;
  columns.col(n + 1) = xi2;

  const VectorT<T> nu = unit_normal(columns);

  const double leak = std::max(std::abs(value_of(minkowski_dot<T>(nu, xi1))),
                               std::abs(value_of(minkowski_dot<T>(nu, xi2))));
  if (leak > 1e-9) throw ModelError("normal is not orthogonal to the position normals");

  Extracted<T> out;
  out.nu = nu;
  out.g.resize(n, n);
  MatrixT<T> h(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out.g(i, j) = minkowski_dot<T>(dx[static_cast<std::size_t>(i)], dx[static_cast<std::size_t>(j)]);
      h(i, j) = minkowski_dot<T>(ddx[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], nu);
    }
  }
  const MatrixT<T> g_inv = immersion::inverse<T>(out.g);
  out.S = g_inv * h;

  const VectorT<T> f_nu = apply_product<T>(nu, sphere);
  out.lambda = minkowski_dot<T>(f_nu, nu);
  VectorT<T> tangential_nu(n);
  MatrixT<T> tangential_dx(n, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    const auto& db = dx[static_cast<std::size_t>(b)];
    tangential_nu(b) = minkowski_dot<T>(f_nu, db);
    for (Eigen::Index i = 0; i < n; ++i) {
      tangential_dx(b, i) = minkowski_dot<T>(apply_product<T>(dx[static_cast<std::size_t>(i)], sphere), db);
    }
  }
  out.U = g_inv * tangential_nu;
  out.f = g_inv * tangential_dx;
  return out;
}

std::string describe_point(const Vector& p) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (Eigen::Index i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p(i);
  os << ")";
  return os.str();
}

}  // namespace

AmbientModel::AmbientModel(std::size_t n_, std::size_t k_) : n(n_), k(k_) {
  if (n < 1) throw ModelError("model dimension n must be at least 1");
  if (k < 1 || k > n) throw ModelError("sphere dimension k must lie in [1, n]");
}

double AmbientModel::c1(const Vector& x) const { return x.head(sphere_size()).squaredNorm() - 1.0; }

double AmbientModel::c2(const Vector& x) const {
  const Eigen::Index rest = dim() - sphere_size();
  const Vector tail = x.tail(rest);
  return tail.head(rest - 1).squaredNorm() - tail(rest - 1) * tail(rest - 1) + 1.0;
}

Vector AmbientModel::xi1(const Vector& x) const {
  Vector out = Vector::Zero(dim());
  out.head(sphere_size()) = x.head(sphere_size());
  return out;
}

Vector AmbientModel::xi2(const Vector& x) const {
  Vector out = Vector::Zero(dim());
  out.tail(dim() - sphere_size()) = x.tail(dim() - sphere_size());
  return out;
}

Matrix AmbientModel::product_structure() const {
  Matrix out = Matrix::Identity(dim(), dim());
  for (Eigen::Index i = sphere_size(); i < dim(); ++i) out(i, i) = -1.0;
  return out;
}

bool AmbientModel::on_model(const Vector& x, double tolerance) const {
  return x.size() == dim() && std::abs(c1(x)) < tolerance && std::abs(c2(x)) < tolerance && x(dim() - 1) > 0.0;
}

void AmbientModel::require_tangent(const Vector& x, const Vector& v, double tolerance) const {
  const double a = std::abs(minkowski_dot(v, xi1(x)));
  const double b = std::abs(minkowski_dot(v, xi2(x)));
  if (a > tolerance || b > tolerance) throw ModelError("vector is not tangent to the model");
}

Vector ambient_connection(const AmbientModel& model, const Vector& x, const Vector& X, const Vector& Y,
                          const Vector& flat_derivative) {
  model.require_tangent(x, X);
  model.require_tangent(x, Y);
  const Matrix fhat = model.product_structure();
  const Vector fx = fhat * X;
  return flat_derivative + 0.5 * minkowski_dot(X + fx, Y) * model.xi1(x) -
         0.5 * minkowski_dot(X - fx, Y) * model.xi2(x);
}

Vector ambient_curvature(const AmbientModel& model, const Vector& x, const Vector& X, const Vector& Y,
                         const Vector& Z) {
  model.require_tangent(x, X);
  model.require_tangent(x, Y);
  model.require_tangent(x, Z);
  const Matrix fhat = model.product_structure();
  const Matrix j = model.lorentz();
  const Vector fz = fhat * Z;
  return 0.5 * (fhat * wedge(X, Y, Z, j) + wedge(X, Y, fz, j));
}

void ParametrizedHypersurface::validate(const SampleGrid& grid) const {
  chart.validate();
  if (x.size() != dim() + 3) {
    throw SchemaError("hypersurface needs n + 3 = " + std::to_string(dim() + 3) + " components, got " +
                      std::to_string(x.size()));
  }
  const AmbientModel m = model();
  HypersurfaceFields fields(*this);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const Vector p = grid.point(idx);
    const Vector pos = evaluate_all(x, p);
    if (!m.on_model(pos, 1e-10)) {
      std::ostringstream os;
      os << "not on model at " << describe_point(p) << ": c1 = " << m.c1(pos) << ", c2 = " << m.c2(pos)
         << ", x_" << m.dim() << " = " << pos(m.dim() - 1);
      throw ModelError(os.str());
    }
    HypersurfacePoint hp;
    try {
      hp = fields.geometry(p);
    } catch (const SingularMetricError&) {
      throw ModelError("degenerate tangent frame at " + describe_point(p));
    } catch (const ModelError&) {
      throw ModelError("degenerate tangent frame at " + describe_point(p));
    }
    Matrix frame(m.dim(), m.dim() - 1);
    frame << hp.tangent, m.xi1(pos), m.xi2(pos);
    Eigen::JacobiSVD<Matrix> svd(frame);
    const auto& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > 1e-10 * std::max(1.0, sv(0)))) {
      throw ModelError("degenerate tangent frame at " + describe_point(p));
    }
  }
}

HypersurfaceFields::HypersurfaceFields(ParametrizedHypersurface h) : h_(std::move(h)), model_(h_.dim(), h_.k) {
  const std::size_t n = h_.dim();
  if (n > static_cast<std::size_t>(kMaxJetDim)) throw SchemaError("dimension exceeds the supported maximum");
  if (h_.x.size() != n + 3) throw SchemaError("hypersurface needs n + 3 components");
  for (std::size_t i = 0; i < n; ++i) dx_.push_back(differentiate_all(h_.x, i));
  ddx_.assign(n, std::vector<std::vector<Expression>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) ddx_[i][j] = j < i ? ddx_[j][i] : differentiate_all(dx_[i], j);
  }
  dddx_.assign(n, std::vector<std::vector<Expression>>(n * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      for (std::size_t l = j; l < n; ++l) {
        const auto third = differentiate_all(ddx_[i][j], l);
        // all permutations of (i, j, l) share one expression list
        const std::size_t idx[3] = {i, j, l};
        const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        for (const auto& p : perms) dddx_[idx[p[0]]][idx[p[1]] * n + idx[p[2]]] = third;
      }
    }
  }
}

HypersurfacePoint HypersurfaceFields::geometry(const Vector& point) const {
  const std::size_t n = dim();
  HypersurfacePoint out;
  out.position = evaluate_all(h_.x, point);
  out.tangent.resize(model_.dim(), static_cast<Eigen::Index>(n));
  std::vector<Vector> dx(n);
  std::vector<std::vector<Vector>> ddx(n, std::vector<Vector>(n));
  for (std::size_t i = 0; i < n; ++i) {
    dx[i] = evaluate_all(dx_[i], point);
    out.tangent.col(static_cast<Eigen::Index>(i)) = dx[i];
    for (std::size_t j = 0; j < n; ++j) ddx[i][j] = Vector::Zero(model_.dim());
  }
  out.normal = extract_point<double>(model_, out.position, dx, ddx).nu;
  return out;
}

FieldJet HypersurfaceFields::jet(const Vector& point, JetOrder order) const {
  const std::size_t n = dim();
  const auto nn = static_cast<Eigen::Index>(n);
  const Vector x = evaluate_all(h_.x, point);
  std::vector<Vector> dx(n);
  std::vector<std::vector<Vector>> ddx(n, std::vector<Vector>(n));
  for (std::size_t i = 0; i < n; ++i) dx[i] = evaluate_all(dx_[i], point);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) ddx[i][j] = j < i ? ddx[j][i] : evaluate_all(ddx_[i][j], point);
  }

  FieldJet jet;
  if (order == JetOrder::kValues) {
    const Extracted<double> e = extract_point<double>(model_, x, dx, ddx);
    jet.metric.g = e.g;
    for (std::size_t l = 0; l < n; ++l) {
      Matrix dg(nn, nn);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          dg(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
              minkowski_dot(ddx[l][i], dx[j]) + minkowski_dot(dx[i], ddx[l][j]);
        }
      }
      jet.metric.dg.push_back(dg);
    }
    jet.S = e.S;
    jet.f = e.f;
    jet.U = e.U;
    jet.lambda = e.lambda;
    return jet;
  }

  std::vector<std::vector<Vector>> dddx(n, std::vector<Vector>(n * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t jl = 0; jl < n * n; ++jl) dddx[i][jl] = evaluate_all(dddx_[i][jl], point);
  }
  // Seed each quantity with its derivative along every chart direction.
  auto seed = [&](const Vector& value, auto&& derivative_of) {
    VectorT<Dual> out(value.size());
    for (Eigen::Index c = 0; c < value.size(); ++c) {
      Gradient grad(nn);
      for (std::size_t l = 0; l < n; ++l) grad(static_cast<Eigen::Index>(l)) = derivative_of(l)(c);
      out(c) = Dual(value(c), grad);
    }
    return out;
  };
  const VectorT<Dual> xd = seed(x, [&](std::size_t l) -> const Vector& { return dx[l]; });
  std::vector<VectorT<Dual>> dxd(n);
  std::vector<std::vector<VectorT<Dual>>> ddxd(n, std::vector<VectorT<Dual>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    dxd[i] = seed(dx[i], [&](std::size_t l) -> const Vector& { return ddx[l][i]; });
    for (std::size_t j = 0; j < n; ++j) {
      ddxd[i][j] = seed(ddx[i][j], [&](std::size_t l) -> const Vector& { return dddx[l][i * n + j]; });
    }
  }
  const Extracted<Dual> e = extract_point<Dual>(model_, xd, dxd, ddxd);

  jet.metric.g = values(e.g);
  jet.S = values(e.S);
  jet.f = values(e.f);
  jet.U = values(MatrixT<Dual>(e.U)).col(0);
  jet.lambda = e.lambda.value();
  jet.dU.resize(nn, nn);
  jet.dlambda.resize(nn);
  for (std::size_t l = 0; l < n; ++l) {
    const auto ll = static_cast<Eigen::Index>(l);
    jet.metric.dg.push_back(derivative(e.g, ll));
    jet.dS.push_back(derivative(e.S, ll));
    jet.df.push_back(derivative(e.f, ll));
    jet.dU.col(ll) = derivative(MatrixT<Dual>(e.U), ll).col(0);
    jet.dlambda(ll) = derivative(e.lambda, ll);
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      Matrix ddg(nn, nn);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          ddg(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
              minkowski_dot(dddx[a][b * n + i], dx[j]) + minkowski_dot(ddx[b][i], ddx[a][j]) +
              minkowski_dot(ddx[a][i], ddx[b][j]) + minkowski_dot(dx[i], dddx[a][b * n + j]);
        }
      }
      jet.metric.ddg.push_back(ddg);
    }
  }
  return jet;
}

StructureSpec extract_structure(const ParametrizedHypersurface& h, const SampleGrid& grid) {
  h.validate(grid);
  StructureSpec spec;
  spec.name = h.name;
  spec.chart = h.chart;
  spec.fields = std::make_shared<HypersurfaceFields>(h);
  spec.declared_k = static_cast<int>(h.k);
  return spec;
}

StructureSpec extract_structure(const ParametrizedHypersurface& h) {
  return extract_structure(h, uniform_grid(h.chart, kDefaultGridDensity));
}

SampleResiduals sample_residuals(const AmbientModel& model, const ImmersionSample& sample, const Matrix& g) {
  SampleResiduals r;
  const Vector& psi = sample.position;
  r.sphere = std::abs(model.c1(psi));
  r.hyperboloid = std::abs(model.c2(psi));
  const Matrix j = model.lorentz();
  r.isometry = max_abs(sample.pushforward.transpose() * j * sample.pushforward - g);
  const Vector jn = j * sample.normal;
  r.normal_tangent = sample.pushforward.cols() ? (sample.pushforward.transpose() * jn).cwiseAbs().maxCoeff() : 0.0;
  r.normal_tangent = std::max({r.normal_tangent, std::abs(model.xi1(psi).dot(jn)), std::abs(model.xi2(psi).dot(jn))});
  r.normal_unit = std::abs(sample.normal.dot(jn) - 1.0);
  return r;
}

std::vector<ImmersionSample> hypersurface_samples(const ParametrizedHypersurface& h, const SampleGrid& grid) {
  const HypersurfaceFields fields(h);
  const AmbientModel model = h.model();
  std::vector<ImmersionSample> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t idx) {
    ImmersionSample& s = out[idx];
    s.point = grid.point(idx);
    const HypersurfacePoint hp = fields.geometry(s.point);
    s.position = hp.position;
    s.normal = hp.normal;
    s.pushforward = hp.tangent;
    s.residuals = sample_residuals(model, s, hp.tangent.transpose() * model.lorentz() * hp.tangent);
  });
  return out;
}

Congruence solve_congruence(const AmbientModel& model, const std::vector<ImmersionSample>& samples1,
                            const std::vector<ImmersionSample>& samples2, std::size_t base_index, double tolerance) {
  if (samples1.size() != samples2.size() || samples1.empty()) throw ModelError("sample sets do not match");
  if (base_index >= samples1.size()) throw ModelError("base sample index out of range");
  auto frame = [&](const ImmersionSample& s) {
    Matrix m(model.dim(), model.dim());
    m << s.pushforward, s.normal, model.xi1(s.position), model.xi2(s.position);
    return m;
  };
  const Matrix m1 = frame(samples1[base_index]);
  const Matrix m2 = frame(samples2[base_index]);
  Eigen::FullPivLU<Matrix> lu(m1);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw ModelError("base frame of the first sample set is singular");

  Congruence c;
  c.base_index = base_index;
  c.tolerance = tolerance;
  c.phi = m2 * lu.inverse();
  const Eigen::Index s = model.sphere_size();
  const Eigen::Index t = model.dim() - s;
  c.block_defect = std::max(max_abs(c.phi.topRightCorner(s, t)), max_abs(c.phi.bottomLeftCorner(t, s)));
  const Matrix a = c.phi.topLeftCorner(s, s);
  const Matrix b = c.phi.bottomRightCorner(t, t);
  const Matrix jt = lorentz_signature(t);
  c.orthogonality = max_abs(a.transpose() * a - Matrix::Identity(s, s));
  c.lorentz = max_abs(b.transpose() * jt * b - jt);
  c.upper_sheet = b(t - 1, t - 1) > 0.0;
  for (std::size_t idx = 0; idx < samples1.size(); ++idx) {
    const Vector mapped = c.phi * samples1[idx].position;
    if (!(mapped(model.dim() - 1) > 0.0)) c.upper_sheet = false;
    c.sup_distance = std::max(c.sup_distance, (mapped - samples2[idx].position).norm());
  }

  std::ostringstream why;
  if (!(c.block_defect < kGroupTolerance)) why << " block defect " << c.block_defect << ";";
  if (!(c.orthogonality < kGroupTolerance)) why << " A not orthogonal (" << c.orthogonality << ");";
  if (!(c.lorentz < kGroupTolerance)) why << " B not Lorentzian (" << c.lorentz << ");";
  if (!c.upper_sheet) why << " upper sheet not preserved;";
  if (!(c.sup_distance < tolerance)) why << " sup distance " << c.sup_distance << " exceeds " << tolerance << ";";
  c.congruent = why.str().empty();
  c.diagnostic = c.congruent ? "congruent" : "not congruent:" + why.str();
  return c;
}

std::size_t nearest_sample(const SampleGrid& grid, const Vector& point) {
  std::size_t best = 0;
  double best_distance = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double d = (grid.point(idx) - point).norm();
    if (d < best_distance) {
      best_distance = d;
      best = idx;
    }
  }
  return best;
}

namespace {

std::string verdict(const AuditVariant& first, const AuditVariant& second, const std::string& family) {
  if (first.holds && second.holds) {
    return family + " variants " + first.label + " and " + second.label + " indistinguishable here";
  }
  if (first.holds) return family + " variant " + first.label + " passes; " + second.label + " fails";
  if (second.holds) return family + " variant " + second.label + " passes; " + first.label + " fails";
  return family + " variants " + first.label + " and " + second.label + " both fail";
}

}  // namespace

AuditReport audit_equations(const ParametrizedHypersurface& h, const SampleGrid& grid, double tolerance) {
  const StructureSpec spec = extract_structure(h, grid);
  AuditReport report;
  report.tolerance = tolerance;
  report.gauss_composed = {"(i)", "R(X,Y)Z = (SX^SY)Z + 1/2 (f((X^Y)Z) + (X^Y)fZ)", 0.0, false};
  report.gauss_wedged = {"(ii)", "R(X,Y)Z = (SX^SY)Z + 1/2 ((fX^fY)Z + (X^Y)fZ)", 0.0, false};
  report.codazzi_plus = {"(iii)", "(nabla_X S)Y - (nabla_Y S)X = 1/2 (u(X)Y - u(Y)X)", 0.0, false};
  report.codazzi_minus = {"(iv)", "(nabla_X S)Y - (nabla_Y S)X = -1/2 (u(X)Y - u(Y)X)", 0.0, false};

  std::vector<std::array<double, 4>> per_point(grid.size());
  parallel_for(grid.size(), [&](std::size_t idx) {
    const FieldJet jet = spec.jet(grid.point(idx), JetOrder::kFull);
    const PointCalculus calc = point_calculus(jet.metric);
    per_point[idx] = {check_gauss(jet, calc, GaussForm::kComposed), check_gauss(jet, calc, GaussForm::kWedged),
                      check_codazzi(jet, calc, 1.0), check_codazzi(jet, calc, -1.0)};
  });
  for (const auto& r : per_point) {
    report.gauss_composed.residual = std::max(report.gauss_composed.residual, r[0]);
    report.gauss_wedged.residual = std::max(report.gauss_wedged.residual, r[1]);
    report.codazzi_plus.residual = std::max(report.codazzi_plus.residual, r[2]);
    report.codazzi_minus.residual = std::max(report.codazzi_minus.residual, r[3]);
  }
  for (AuditVariant* v : {&report.gauss_composed, &report.gauss_wedged, &report.codazzi_plus, &report.codazzi_minus}) {
    v->holds = v->residual < tolerance;
  }
  report.gauss_distinguished = report.gauss_composed.holds != report.gauss_wedged.holds;
  report.codazzi_distinguished = report.codazzi_plus.holds != report.codazzi_minus.holds;
  report.statements.push_back(verdict(report.gauss_composed, report.gauss_wedged, "Gauss"));
  report.statements.push_back(verdict(report.codazzi_plus, report.codazzi_minus, "Codazzi"));
  return report;
}

}  // namespace immersion
