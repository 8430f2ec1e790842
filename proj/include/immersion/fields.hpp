#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "immersion/expr.hpp"
#include "immersion/geometry.hpp"

namespace immersion {

enum class JetOrder {
  kValues,  // g, ∂g, S, f, U, λ: enough for the connection D and the map F
  kFull,    // additionally ∂²g, ∂S, ∂f, ∂U, ∂λ
};

// The quintuple (g, S, f, U, λ) at one chart point. S and f are mixed (1,1)
// components, S(r, c) = S^r_c.
struct FieldJet {
  MetricJet metric;
  Matrix S;
  Matrix f;
  Vector U;
  double lambda = 0.0;

  // kFull only; index l is the differentiation direction.
  std::vector<Matrix> dS;
  std::vector<Matrix> df;
  Matrix dU;  // column l = ∂_l U
  Vector dlambda;

  std::size_t dim() const { return static_cast<std::size_t>(S.rows()); }
  bool full() const { return !dS.empty(); }
  /// u = g(U, ·) as a covector.
  Vector u() const { return metric.g * U; }
};

// Source of structure data over a chart. Implementations are immutable and
// safe to query concurrently.
class StructureFields {
 public:
  virtual ~StructureFields() = default;
  virtual std::size_t dim() const = 0;
  virtual FieldJet jet(const Vector& point, JetOrder order) const = 0;
};

// Structure given by coordinate expressions; all derivatives are exact.
class ExpressionFields final : public StructureFields {
 public:
  ExpressionFields(ExpressionMatrix g, ExpressionMatrix S, ExpressionMatrix f, std::vector<Expression> U,
                   Expression lambda);

  std::size_t dim() const override { return metric_.dim(); }
  FieldJet jet(const Vector& point, JetOrder order) const override;

  const MetricField& metric() const { return metric_; }
  const ExpressionMatrix& shape() const { return S_; }
  const ExpressionMatrix& f() const { return f_; }
  const std::vector<Expression>& U() const { return U_; }
  const Expression& lambda() const { return lambda_; }

 private:
  MetricField metric_;
  ExpressionMatrix S_;
  ExpressionMatrix f_;
  std::vector<Expression> U_;
  Expression lambda_;
  std::vector<ExpressionMatrix> dS_;
  std::vector<ExpressionMatrix> df_;
  std::vector<std::vector<Expression>> dU_;
  std::vector<Expression> dlambda_;
};

// Wraps another provider and multiplies S (and ∂S) by a constant.
class ScaledShapeFields final : public StructureFields {
 public:
  ScaledShapeFields(std::shared_ptr<const StructureFields> inner, double factor)
      : inner_(std::move(inner)), factor_(factor) {}
  std::size_t dim() const override { return inner_->dim(); }
  FieldJet jet(const Vector& point, JetOrder order) const override;

 private:
  std::shared_ptr<const StructureFields> inner_;
  double factor_;
};

struct StructureSpec {
  std::string name;
  Chart chart;
  std::shared_ptr<const StructureFields> fields;
  std::optional<int> declared_k;

  std::size_t dim() const { return chart.dim(); }
  FieldJet jet(const Vector& point, JetOrder order = JetOrder::kFull) const { return fields->jet(point, order); }
};

/// Copy of `spec` with its shape operator multiplied by `factor`.
StructureSpec with_scaled_shape(const StructureSpec& spec, double factor);

}  // namespace immersion
