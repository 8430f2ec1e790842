#include "immersion/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "immersion/error.hpp"
#include "immersion/parallel.hpp"

namespace immersion {

namespace {

constexpr double kIntegralTolerance = 1e-8;

Vector basis(std::size_t n, std::size_t i) {
  return Vector::Unit(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(i));
}

std::string format_point(const Vector& p) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (Eigen::Index i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p(i);
  os << ")";
  return os.str();
}

}  // namespace

double AlgebraicResiduals::max() const {
  return std::max({f_symmetry, shape_symmetry, f_squared, f_on_U, unit_norm});
}

AlgebraicResiduals check_algebraic(const FieldJet& jet) {
  const std::size_t n = jet.dim();
  const Matrix& g = jet.metric.g;
  const Vector u = jet.u();
  AlgebraicResiduals r;
  const Matrix gf = g * jet.f;
  const Matrix gs = g * jet.S;
  r.f_symmetry = max_abs(gf - gf.transpose());
  r.shape_symmetry = max_abs(gs - gs.transpose());
  const Matrix f2 = jet.f * jet.f;
  for (std::size_t j = 0; j < n; ++j) {
    const Vector defect = f2.col(static_cast<Eigen::Index>(j)) - basis(n, j) + u(static_cast<Eigen::Index>(j)) * jet.U;
    r.f_squared = std::max(r.f_squared, g_norm(defect, g));
  }
  r.f_on_U = g_norm(jet.f * jet.U + jet.lambda * jet.U, g);
  r.unit_norm = std::abs(jet.U.dot(u) + jet.lambda * jet.lambda - 1.0);
  return r;
}

double check_gauss(const FieldJet& jet, const PointCalculus& calc, GaussForm form) {
  const std::size_t n = jet.dim();
  const Matrix& g = calc.g;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Matrix r = calc.riemann.endomorphism(i, j);
      const Vector ei = basis(n, i);
      const Vector ej = basis(n, j);
      const Vector sei = jet.S * ei;
      const Vector sej = jet.S * ej;
      for (std::size_t k = 0; k < n; ++k) {
        const Vector ek = basis(n, k);
        Vector rhs = wedge(sei, sej, ek, g);
        const Vector fek = jet.f * ek;
        if (form == GaussForm::kComposed) {
          rhs += 0.5 * (jet.f * wedge(ei, ej, ek, g) + wedge(ei, ej, fek, g));
        } else {
          rhs += 0.5 * (wedge(jet.f * ei, jet.f * ej, ek, g) + wedge(ei, ej, fek, g));
        }
        worst = std::max(worst, g_norm(r.col(static_cast<Eigen::Index>(k)) - rhs, g));
      }
    }
  }
  return worst;
}

double check_codazzi(const FieldJet& jet, const PointCalculus& calc, double rhs_sign) {
  const std::size_t n = jet.dim();
  const Vector u = jet.u();
  std::vector<Matrix> nabla_s;
  for (std::size_t i = 0; i < n; ++i) nabla_s.push_back(covariant_derivative(jet.S, jet.dS[i], calc.gamma, i));
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vector lhs = nabla_s[i].col(static_cast<Eigen::Index>(j)) - nabla_s[j].col(static_cast<Eigen::Index>(i));
      const Vector rhs = rhs_sign * 0.5 *
                         (u(static_cast<Eigen::Index>(i)) * basis(n, j) - u(static_cast<Eigen::Index>(j)) * basis(n, i));
      worst = std::max(worst, g_norm(lhs - rhs, calc.g));
    }
  }
  return worst;
}

GradientResiduals check_gradients(const FieldJet& jet, const PointCalculus& calc) {
  const std::size_t n = jet.dim();
  const Matrix& g = calc.g;
  const Vector u = jet.u();
  GradientResiduals r;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const Vector sei = jet.S.col(ii);
    const Matrix nabla_f = covariant_derivative(jet.f, jet.df[i], calc.gamma, i);
    for (std::size_t j = 0; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const Vector defect = nabla_f.col(jj) - u(jj) * sei - sei.dot(g.col(jj)) * jet.U;
      r.grad_f = std::max(r.grad_f, g_norm(defect, g));
    }
    const Vector nabla_u = jet.dU.col(ii) + calc.gamma.direction(i) * jet.U;
    r.grad_U = std::max(r.grad_U, g_norm(nabla_u - jet.lambda * sei + jet.f * sei, g));
    r.grad_lambda = std::max(r.grad_lambda, std::abs(jet.dlambda(ii) + 2.0 * sei.dot(u)));
  }
  return r;
}

AlgebraicResiduals check_algebraic(const StructureSpec& spec, const Vector& point) {
  const FieldJet jet = spec.jet(point, JetOrder::kValues);
  point_calculus(jet.metric);  // rejects a singular metric
  return check_algebraic(jet);
}

double check_gauss(const StructureSpec& spec, const Vector& point) {
  const FieldJet jet = spec.jet(point, JetOrder::kFull);
  return check_gauss(jet, point_calculus(jet.metric));
}

double check_codazzi(const StructureSpec& spec, const Vector& point) {
  const FieldJet jet = spec.jet(point, JetOrder::kFull);
  return check_codazzi(jet, point_calculus(jet.metric));
}

GradientResiduals check_gradients(const StructureSpec& spec, const Vector& point) {
  const FieldJet jet = spec.jet(point, JetOrder::kFull);
  return check_gradients(jet, point_calculus(jet.metric));
}

double trace_invariant(const FieldJet& jet) { return jet.f.trace() + jet.lambda; }

double k_estimate(const FieldJet& jet) {
  return 0.5 * (trace_invariant(jet) + static_cast<double>(jet.dim()) + 1.0);
}

int determine_k(const StructureSpec& spec, const Vector& point) {
  const FieldJet jet = spec.jet(point, JetOrder::kValues);
  const double estimate = k_estimate(jet);
  const double rounded = std::round(estimate);
  if (std::abs(estimate - rounded) > kIntegralTolerance) {
    throw AdmissionError("non-integer k: (tr f + lambda + n + 1)/2 = " + std::to_string(estimate));
  }
  const int k = static_cast<int>(rounded);
  if (k < 1 || k > static_cast<int>(spec.dim())) {
    throw AdmissionError("k out of range: k = " + std::to_string(k) + " not in [1, " + std::to_string(spec.dim()) + "]");
  }
  if (spec.declared_k && *spec.declared_k != k) {
    throw AdmissionError("k mismatch: declared k = " + std::to_string(*spec.declared_k) + ", determined k = " +
                         std::to_string(k));
  }
  return k;
}

bool is_excluded_point(const FieldJet& jet, double tolerance) {
  const Matrix id = Matrix::Identity(jet.f.rows(), jet.f.cols());
  return max_abs(jet.f - id) < tolerance || max_abs(jet.f + id) < tolerance;
}

std::string_view equation_name(Equation e) {
  switch (e) {
    case Equation::kAlgebraic: return "C1_algebraic";
    case Equation::kGauss: return "C2_gauss";
    case Equation::kCodazzi: return "C3_codazzi";
    case Equation::kGradF: return "C4_grad_f";
    case Equation::kGradU: return "C5_grad_U";
    case Equation::kGradLambda: return "C6_grad_lambda";
    case Equation::kKConsistency: return "k_consistency";
  }
  return "unknown";
}

double PointReport::residual(Equation e) const {
  switch (e) {
    case Equation::kAlgebraic: return algebraic.max();
    case Equation::kGauss: return gauss;
    case Equation::kCodazzi: return codazzi;
    case Equation::kGradF: return gradients.grad_f;
    case Equation::kGradU: return gradients.grad_U;
    case Equation::kGradLambda: return gradients.grad_lambda;
    case Equation::kKConsistency: return 0.0;
  }
  return 0.0;
}

double CompatibilityReport::worst() const {
  double w = 0.0;
  for (const auto& e : equations) w = std::max(w, e.sup);
  return w;
}

CompatibilityReport admit(const StructureSpec& spec, const SampleGrid& grid, double tolerance) {
  if (!(tolerance > 0.0)) throw SchemaError("tolerance must be positive");
  CompatibilityReport report;
  report.tolerance = tolerance;
  report.points.resize(grid.size());

  parallel_for(grid.size(), [&](std::size_t idx) {
    PointReport& pr = report.points[idx];
    pr.point = grid.point(idx);
    try {
      const FieldJet jet = spec.jet(pr.point, JetOrder::kFull);
      const PointCalculus calc = point_calculus(jet.metric);
      pr.algebraic = check_algebraic(jet);
      pr.gauss = check_gauss(jet, calc);
      pr.codazzi = check_codazzi(jet, calc);
      pr.gradients = check_gradients(jet, calc);
      pr.k_estimate = k_estimate(jet);
      pr.excluded = is_excluded_point(jet, tolerance);
      pr.evaluated = true;
    } catch (const SingularMetricError& e) {
      pr.diagnostic = std::string("singular metric: ") + e.what();
    } catch (const DomainError& e) {
      pr.diagnostic = std::string("domain error: ") + e.what();
    }
  });

  std::size_t evaluated = 0;
  std::size_t excluded = 0;
  std::optional<std::size_t> first;
  double trace_min = std::numeric_limits<double>::infinity();
  double trace_max = -trace_min;
  for (std::size_t idx = 0; idx < report.points.size(); ++idx) {
    const PointReport& pr = report.points[idx];
    if (!pr.evaluated) {
      report.reasons.push_back("point " + std::to_string(idx) + " " + format_point(pr.point) + " aborted: " +
                               pr.diagnostic);
      continue;
    }
    ++evaluated;
    if (pr.excluded) ++excluded;
    if (!first) first = idx;
    for (std::size_t e = 0; e + 1 < kEquationCount; ++e) {
      const double value = pr.residual(static_cast<Equation>(e));
      if (value > report.equations[e].sup || !std::isfinite(value)) {
        report.equations[e].sup = value;
        report.equations[e].worst_index = idx;
      }
    }
    const double trace = 2.0 * pr.k_estimate - static_cast<double>(spec.dim()) - 1.0;
    trace_min = std::min(trace_min, trace);
    trace_max = std::max(trace_max, trace);
  }

  if (first) {
    report.trace_spread = trace_max - trace_min;
    const double reference = std::round(report.points[*first].k_estimate);
    auto& kc = report.equations[static_cast<std::size_t>(Equation::kKConsistency)];
    for (std::size_t idx = 0; idx < report.points.size(); ++idx) {
      const PointReport& pr = report.points[idx];
      if (!pr.evaluated) continue;
      const double defect = std::abs(pr.k_estimate - reference);
      if (defect > kc.sup) {
        kc.sup = defect;
        kc.worst_index = idx;
      }
    }
    const int k = static_cast<int>(reference);
    if (kc.sup >= tolerance) {
      const bool integral_everywhere = std::all_of(report.points.begin(), report.points.end(), [](const PointReport& p) {
        return !p.evaluated || std::abs(p.k_estimate - std::round(p.k_estimate)) < kIntegralTolerance;
      });
      report.reasons.push_back(integral_everywhere ? "k varies across sample points"
                                                   : "non-integer k (tr f + lambda + n + 1)/2");
    } else if (k < 1 || k > static_cast<int>(spec.dim())) {
      report.reasons.push_back("k out of range: k = " + std::to_string(k));
    } else if (spec.declared_k && *spec.declared_k != k) {
      report.reasons.push_back("k mismatch: declared k = " + std::to_string(*spec.declared_k) +
                               ", determined k = " + std::to_string(k));
    } else {
      report.k = k;
    }
  } else {
    report.reasons.push_back("no grid point could be evaluated");
  }

  if (evaluated > 0 && excluded == evaluated) report.reasons.push_back("excluded case f = ±Id");

  for (std::size_t e = 0; e + 1 < kEquationCount; ++e) {
    if (!(report.equations[e].sup < tolerance)) {
      std::ostringstream os;
      os << equation_name(static_cast<Equation>(e)) << " residual " << report.equations[e].sup
         << " exceeds tolerance " << tolerance << " at " << format_point(report.points[report.equations[e].worst_index].point);
      report.reasons.push_back(os.str());
    }
  }
  report.admissible = report.reasons.empty();
  return report;
}

}  // namespace immersion
