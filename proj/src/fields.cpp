#include "immersion/fields.hpp"

#include "immersion/error.hpp"

namespace immersion {

ExpressionFields::ExpressionFields(ExpressionMatrix g, ExpressionMatrix S, ExpressionMatrix f,
                                   std::vector<Expression> U, Expression lambda)
    : metric_(std::move(g)), S_(std::move(S)), f_(std::move(f)), U_(std::move(U)), lambda_(std::move(lambda)) {
  const std::size_t n = metric_.dim();
  if (S_.rows() != n || S_.cols() != n) throw SchemaError("S must be n x n");
  if (f_.rows() != n || f_.cols() != n) throw SchemaError("f must be n x n");
  if (U_.size() != n) throw SchemaError("U must have n components");
  if (n > static_cast<std::size_t>(kMaxJetDim)) {
    throw SchemaError("dimension " + std::to_string(n) + " exceeds the supported maximum");
  }
  for (std::size_t l = 0; l < n; ++l) {
    dS_.push_back(S_.derivative(l));
    df_.push_back(f_.derivative(l));
    dU_.push_back(differentiate_all(U_, l));
    dlambda_.push_back(lambda_.derivative(l));
  }
}

FieldJet ExpressionFields::jet(const Vector& point, JetOrder order) const {
  const std::size_t n = dim();
  FieldJet jet;
  jet.metric = metric_.jet(point, order == JetOrder::kFull);
  jet.S = S_.evaluate(point);
  jet.f = f_.evaluate(point);
  jet.U = evaluate_all(U_, point);
  jet.lambda = lambda_.evaluate(point);
  if (order == JetOrder::kFull) {
    jet.dU.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    jet.dlambda.resize(static_cast<Eigen::Index>(n));
    for (std::size_t l = 0; l < n; ++l) {
      jet.dS.push_back(dS_[l].evaluate(point));
      jet.df.push_back(df_[l].evaluate(point));
      jet.dU.col(static_cast<Eigen::Index>(l)) = evaluate_all(dU_[l], point);
      jet.dlambda(static_cast<Eigen::Index>(l)) = dlambda_[l].evaluate(point);
    }
  }
  return jet;
}

FieldJet ScaledShapeFields::jet(const Vector& point, JetOrder order) const {
  FieldJet jet = inner_->jet(point, order);
  jet.S *= factor_;
  for (auto& d : jet.dS) d *= factor_;
  return jet;
}

StructureSpec with_scaled_shape(const StructureSpec& spec, double factor) {
  StructureSpec out = spec;
  out.fields = std::make_shared<ScaledShapeFields>(spec.fields, factor);
  return out;
}

}  // namespace immersion
