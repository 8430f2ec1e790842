#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace immersion {

enum class UnaryOp { kNeg, kSin, kCos, kTan, kSinh, kCosh, kTanh, kExp, kLog, kSqrt };
enum class BinaryOp { kAdd, kSub, kMul, kDiv, kPow };

// Immutable scalar expression over chart coordinates u[0..n).
//
// Expressions are cheap to copy (shared, immutable tree) and safe to evaluate
// from several threads at once. Arithmetic on Expressions folds constants and
// drops additive zeros and multiplicative ones, which keeps repeated
// derivatives small; no further simplification is attempted.
class Expression {
 public:
  Expression();  // the constant 0

  static Expression constant(double value);
  static Expression variable(std::size_t index, std::string name);
  static Expression unary(UnaryOp op, const Expression& arg);
  static Expression binary(BinaryOp op, const Expression& lhs, const Expression& rhs);

  /// Parses `text` with the coordinate names `coords` (index = position).
  /// Throws ParseError carrying the byte offset of the problem.
  static Expression parse(std::string_view text, std::span<const std::string> coords);

  /// Throws DomainError for log/sqrt/pow/division outside their domain and
  /// for non-finite results.
  double evaluate(std::span<const double> point) const;
  double evaluate(const Eigen::VectorXd& point) const {
    return evaluate(std::span<const double>(point.data(), static_cast<std::size_t>(point.size())));
  }

  /// Exact derivative with respect to coordinate `index`.
  Expression derivative(std::size_t index) const;

  /// Fully parenthesized source text; parse(to_string()) evaluates identically.
  std::string to_string() const;

  std::optional<double> constant_value() const;
  bool is_zero() const;
  std::size_t node_count() const;

  struct Node;  // opaque tree node

 private:
  explicit Expression(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

Expression operator-(const Expression& a);
Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression pow(const Expression& base, const Expression& exponent);
Expression sin(const Expression& a);
Expression cos(const Expression& a);
Expression tan(const Expression& a);
Expression sinh(const Expression& a);
Expression cosh(const Expression& a);
Expression tanh(const Expression& a);
Expression exp(const Expression& a);
Expression log(const Expression& a);
Expression sqrt(const Expression& a);

// Dense matrix of expressions with cached evaluation helpers.
class ExpressionMatrix {
 public:
  ExpressionMatrix() = default;
  ExpressionMatrix(std::size_t rows, std::size_t cols);

  static ExpressionMatrix parse(const std::vector<std::vector<std::string>>& rows,
                                std::span<const std::string> coords);
  static ExpressionMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Expression& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Expression& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  Eigen::MatrixXd evaluate(const Eigen::VectorXd& point) const;
  ExpressionMatrix derivative(std::size_t index) const;
  ExpressionMatrix scaled(double factor) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Expression> entries_;
};

std::vector<Expression> parse_expressions(const std::vector<std::string>& texts,
                                          std::span<const std::string> coords);
Eigen::VectorXd evaluate_all(const std::vector<Expression>& exprs, const Eigen::VectorXd& point);
std::vector<Expression> differentiate_all(const std::vector<Expression>& exprs, std::size_t index);

}  // namespace immersion
