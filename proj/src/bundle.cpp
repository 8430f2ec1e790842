#include "immersion/bundle.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "immersion/error.hpp"
#include "immersion/parallel.hpp"

namespace immersion {

namespace {

template <class T>
struct BundleInputs {
  MatrixT<T> g;
  MatrixT<T> S;
  MatrixT<T> f;
  VectorT<T> U;
  T lambda;
  std::vector<MatrixT<T>> gamma;  // gamma[i](a, b) = Γ^a_ib
};

// The four defining formulas of D, read off column by column:
//   D_X Y  = ∇_X Y + g(SX, Y)ξ − ½g(X + fX, Y)ξ₁ + ½g(X − fX, Y)ξ₂
//   D_X ξ  = −SX − ½u(X)(ξ₁ + ξ₂)
//   D_X ξ₁ = ½(X + fX + u(X)ξ)
//   D_X ξ₂ = ½(X − fX − u(X)ξ)
template <class T>
MatrixT<T> connection_matrix(const BundleInputs<T>& in, std::size_t i) {
  const auto n = in.g.rows();
  const auto ii = static_cast<Eigen::Index>(i);
  const Eigen::Index x = n, x1 = n + 1, x2 = n + 2;
  const MatrixT<T> gs = in.g * in.S;
  const MatrixT<T> gf = in.g * in.f;
  const VectorT<T> u = in.g * in.U;
  const double half = 0.5;
  MatrixT<T> a = MatrixT<T>::Zero(n + 3, n + 3);
  a.topLeftCorner(n, n) = in.gamma[i];
  for (Eigen::Index j = 0; j < n; ++j) {
    a(x, j) = gs(j, ii);
    a(x1, j) = -half * (in.g(ii, j) + gf(j, ii));
    a(x2, j) = half * (in.g(ii, j) - gf(j, ii));
  }
  for (Eigen::Index r = 0; r < n; ++r) {
    const double delta = r == ii ? 1.0 : 0.0;
    a(r, x) = -in.S(r, ii);
    a(r, x1) = half * (delta + in.f(r, ii));
    a(r, x2) = half * (delta - in.f(r, ii));
  }
  a(x1, x) = -half * u(ii);
  a(x2, x) = -half * u(ii);
  a(x, x1) = half * u(ii);
  a(x, x2) = -half * u(ii);
  return a;
}

template <class T>
MatrixT<T> gram_matrix(const MatrixT<T>& g) {
  const auto n = g.rows();
  MatrixT<T> gram = MatrixT<T>::Zero(n + 3, n + 3);
  gram.topLeftCorner(n, n) = g;
  gram(n, n) = T(1.0);
  gram(n + 1, n + 1) = T(1.0);
  gram(n + 2, n + 2) = T(-1.0);
  return gram;
}

template <class T>
MatrixT<T> bundle_map(const BundleInputs<T>& in) {
  const auto n = in.g.rows();
  const VectorT<T> u = in.g * in.U;
  MatrixT<T> m = MatrixT<T>::Zero(n + 3, n + 3);
  m.topLeftCorner(n, n) = in.f;
  m.block(n, 0, 1, n) = u.transpose();
  m.block(0, n, n, 1) = in.U;
  m(n, n) = in.lambda;
  m(n + 1, n + 1) = T(1.0);
  m(n + 2, n + 2) = T(-1.0);
  return m;
}

BundleInputs<double> value_inputs(const FieldJet& jet, const PointCalculus& calc) {
  BundleInputs<double> in{jet.metric.g, jet.S, jet.f, jet.U, jet.lambda, {}};
  for (std::size_t i = 0; i < jet.dim(); ++i) in.gamma.push_back(calc.gamma.direction(i));
  return in;
}

BundleInputs<Dual> dual_inputs(const FieldJet& jet, const PointCalculus& calc) {
  const std::size_t n = jet.dim();
  BundleInputs<Dual> in;
  in.g = lift(jet.metric.g, jet.metric.dg);
  in.S = lift(jet.S, jet.dS);
  in.f = lift(jet.f, jet.df);
  std::vector<Matrix> dU;
  for (std::size_t l = 0; l < n; ++l) dU.emplace_back(jet.dU.col(static_cast<Eigen::Index>(l)));
  in.U = lift(jet.U, dU);
  in.lambda = Dual(jet.lambda, Gradient(jet.dlambda));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Matrix> dgamma;
    for (std::size_t l = 0; l < n; ++l) dgamma.push_back(calc.dgamma[l].direction(i));
    in.gamma.push_back(lift(calc.gamma.direction(i), dgamma));
  }
  return in;
}

void require_inside(const Chart& chart, const Vector& p) {
  if (!chart.contains(p, 1e-9)) {
    std::ostringstream os;
    os << "path exits box at (";
    for (Eigen::Index i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p(i);
    os << ")";
    throw TransportError(os.str());
  }
}

Path straight(const Vector& a, const Vector& b) { return Path::polyline({a, b}); }

}  // namespace

ConnectionField::ConnectionField(StructureSpec spec) : spec_(std::move(spec)) {
  if (!spec_.fields) throw SchemaError("structure has no fields");
}

ConnectionPoint ConnectionField::at(const Vector& point) const {
  const FieldJet jet = spec_.jet(point, JetOrder::kValues);
  const PointCalculus calc = point_calculus(jet.metric);
  const BundleInputs<double> in = value_inputs(jet, calc);
  ConnectionPoint out;
  for (std::size_t i = 0; i < dim(); ++i) out.A.push_back(connection_matrix(in, i));
  out.gram = gram_matrix(in.g);
  out.map = bundle_map(in);
  return out;
}

ConnectionJet ConnectionField::jet(const Vector& point) const {
  const std::size_t n = dim();
  const FieldJet fj = spec_.jet(point, JetOrder::kFull);
  const PointCalculus calc = point_calculus(fj.metric);
  const BundleInputs<Dual> in = dual_inputs(fj, calc);
  ConnectionJet out;
  std::vector<MatrixT<Dual>> a;
  for (std::size_t i = 0; i < n; ++i) {
    a.push_back(connection_matrix(in, i));
    out.A.push_back(values(a.back()));
  }
  const MatrixT<Dual> gram = gram_matrix(in.g);
  const MatrixT<Dual> map = bundle_map(in);
  out.gram = values(gram);
  out.map = values(map);
  out.dA.assign(n, {});
  for (std::size_t j = 0; j < n; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    for (std::size_t i = 0; i < n; ++i) out.dA[j].push_back(derivative(a[i], jj));
    out.dgram.push_back(derivative(gram, jj));
    out.dmap.push_back(derivative(map, jj));
  }
  return out;
}

Matrix ConnectionField::contract(const Vector& point, const Vector& direction) const {
  const ConnectionPoint cp = at(point);
  Matrix omega = Matrix::Zero(static_cast<Eigen::Index>(rank()), static_cast<Eigen::Index>(rank()));
  for (std::size_t i = 0; i < dim(); ++i) omega += direction(static_cast<Eigen::Index>(i)) * cp.A[i];
  return omega;
}

double flatness_residual(const ConnectionJet& jet) {
  const std::size_t n = jet.A.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Matrix curvature = jet.dA[i][j] - jet.dA[j][i] + jet.A[i] * jet.A[j] - jet.A[j] * jet.A[i];
      worst = std::max(worst, max_abs(curvature));
    }
  }
  return worst;
}

double flatness_residual(const ConnectionField& conn, const Vector& point) {
  if (conn.dim() < 2) return 0.0;
  return flatness_residual(conn.jet(point));
}

double metric_compatibility_residual(const ConnectionJet& jet) {
  double worst = 0.0;
  for (std::size_t i = 0; i < jet.A.size(); ++i) {
    worst = std::max(worst, max_abs(jet.dgram[i] - jet.A[i].transpose() * jet.gram - jet.gram * jet.A[i]));
  }
  return worst;
}

BundleMapResiduals bundle_map_residuals(const ConnectionJet& jet) {
  BundleMapResiduals r;
  const Matrix& m = jet.map;
  r.involution = max_abs(m * m - Matrix::Identity(m.rows(), m.cols()));
  r.symmetry = max_abs(m.transpose() * jet.gram - jet.gram * m);
  for (std::size_t i = 0; i < jet.A.size(); ++i) {
    r.parallel = std::max(r.parallel, max_abs(jet.dmap[i] - (m * jet.A[i] - jet.A[i] * m)));
  }
  return r;
}

Path Path::polyline(const std::vector<Vector>& vertices) {
  Path path;
  for (std::size_t v = 1; v < vertices.size(); ++v) {
    const Vector a = vertices[v - 1];
    const Vector delta = vertices[v] - a;
    const double length = delta.norm();
    if (length == 0.0) continue;
    const Vector velocity = delta / length;
    path.pieces_.push_back(PathPiece{[a, velocity](double t) -> Vector { return a + t * velocity; },
                                     [velocity](double) -> Vector { return velocity; }, length});
  }
  return path;
}

Path Path::curve(std::function<Vector(double)> position, std::function<Vector(double)> velocity, double duration) {
  Path path;
  if (duration > 0.0) path.pieces_.push_back(PathPiece{std::move(position), std::move(velocity), duration});
  return path;
}

Path Path::staircase(const Vector& from, const Vector& to, const std::vector<std::size_t>& axis_order) {
  std::vector<Vector> vertices{from};
  Vector p = from;
  for (const std::size_t axis : axis_order) {
    p(static_cast<Eigen::Index>(axis)) = to(static_cast<Eigen::Index>(axis));
    vertices.push_back(p);
  }
  return polyline(vertices);
}

Path Path::rectangle(const Vector& corner, std::size_t a, std::size_t b, double side_a, double side_b) {
  Vector p1 = corner;
  p1(static_cast<Eigen::Index>(a)) += side_a;
  Vector p2 = p1;
  p2(static_cast<Eigen::Index>(b)) += side_b;
  Vector p3 = corner;
  p3(static_cast<Eigen::Index>(b)) += side_b;
  return polyline({corner, p1, p2, p3, corner});
}

Path Path::reversed() const {
  Path out;
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
    const PathPiece piece = *it;
    const double d = piece.duration;
    out.pieces_.push_back(PathPiece{[piece, d](double t) { return piece.position(d - t); },
                                    [piece, d](double t) -> Vector { return -piece.velocity(d - t); }, d});
  }
  return out;
}

Path Path::then(const Path& next) const {
  Path out = *this;
  out.pieces_.insert(out.pieces_.end(), next.pieces_.begin(), next.pieces_.end());
  return out;
}

double Path::length() const {
  double total = 0.0;
  for (const auto& piece : pieces_) total += piece.duration;
  return total;
}

std::vector<std::size_t> axis_order(std::size_t n, bool reverse) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = reverse ? n - 1 - i : i;
  return order;
}

Matrix transport_frame(const ConnectionField& conn, const Path& path, const Matrix& initial,
                       const TransportOptions& options) {
  if (initial.rows() != static_cast<Eigen::Index>(conn.rank())) {
    throw TransportError("section has " + std::to_string(initial.rows()) + " components, bundle rank is " +
                         std::to_string(conn.rank()));
  }
  const double h = options.step;
  if (!(h > 1e-12) || !std::isfinite(h)) throw TransportError("step underflow: step must be a positive number");
  Matrix y = initial;
  double elapsed = 0.0;
  for (const auto& piece : path.pieces()) {
    const double raw = std::ceil(piece.duration / h - 1e-9);
    if (raw > 1e9) throw TransportError("step underflow: too many steps for piece of length " +
                                        std::to_string(piece.duration));
    const auto steps = static_cast<std::size_t>(std::max(1.0, raw));
    const double dt = piece.duration / static_cast<double>(steps);
    auto rhs = [&](double t, const Matrix& state) -> Matrix {
      const Vector p = piece.position(t);
      require_inside(conn.chart(), p);
      return -conn.contract(p, piece.velocity(t)) * state;
    };
    for (std::size_t s = 0; s < steps; ++s) {
      const double t = static_cast<double>(s) * dt;
      const Matrix k1 = rhs(t, y);
      const Matrix k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1);
      const Matrix k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2);
      const Matrix k4 = rhs(t + dt, y + dt * k3);
      y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (options.observer) options.observer(elapsed + t + dt, piece.position(t + dt), y);
    }
    elapsed += piece.duration;
  }
  return y;
}

Vector transport(const ConnectionField& conn, const Path& path, const Vector& initial,
                 const TransportOptions& options) {
  return transport_frame(conn, path, Matrix(initial), options).col(0);
}

RichardsonEstimate transport_with_error(const ConnectionField& conn, const Path& path, const Matrix& initial,
                                        const TransportOptions& options) {
  TransportOptions half = options;
  half.step = 0.5 * options.step;
  TransportOptions full = options;
  full.observer = nullptr;
  const Matrix coarse = transport_frame(conn, path, initial, full);
  RichardsonEstimate out;
  out.value = transport_frame(conn, path, initial, half);
  out.error = max_abs(out.value - coarse) / 15.0;
  return out;
}

std::vector<Matrix> staircase_sweep(const ConnectionField& conn, const SampleGrid& grid, const Vector& start,
                                    const Matrix& initial, const std::vector<std::size_t>& order,
                                    const TransportOptions& options) {
  const std::size_t n = grid.dim();
  if (order.size() != n) throw TransportError("axis order must list every axis once");
  TransportOptions quiet = options;
  quiet.observer = nullptr;

  // Stage s holds one frame per distinct prefix (i_{order[0]}, …, i_{order[s]}),
  // encoded in mixed radix with order[0] slowest.
  std::vector<Matrix> previous{initial};
  std::vector<Vector> previous_points{start};
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t axis = order[s];
    const std::size_t count = grid.axes[axis].size();
    std::vector<Matrix> frames(previous.size() * count);
    std::vector<Vector> points(frames.size());
    parallel_for(frames.size(), [&](std::size_t node) {
      const std::size_t parent = node / count;
      Vector target = previous_points[parent];
      target(static_cast<Eigen::Index>(axis)) = grid.axes[axis][node % count];
      points[node] = target;
      frames[node] = transport_frame(conn, straight(previous_points[parent], target), previous[parent], quiet);
    });
    previous = std::move(frames);
    previous_points = std::move(points);
  }

  std::vector<Matrix> out(grid.size());
  for (std::size_t node = 0; node < previous.size(); ++node) {
    std::vector<std::size_t> multi(n);
    std::size_t rest = node;
    for (std::size_t s = n; s-- > 0;) {
      multi[order[s]] = rest % grid.axes[order[s]].size();
      rest /= grid.axes[order[s]].size();
    }
    out[grid.flat_index(multi)] = std::move(previous[node]);
  }
  return out;
}

Matrix reorthonormalize(const ConnectionField& conn, const Vector& point, const Matrix& frame,
                        const std::vector<int>& signs) {
  return signature_gram_schmidt(frame, conn.at(point).gram, signs);
}

}  // namespace immersion
