#include "immersion/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

#include "immersion/error.hpp"

namespace immersion {

struct Expression::Node {
  enum class Kind { kConstant, kVariable, kUnary, kBinary };

  Kind kind = Kind::kConstant;
  double value = 0.0;
  std::size_t index = 0;
  std::string name;
  UnaryOp unary_op = UnaryOp::kNeg;
  BinaryOp binary_op = BinaryOp::kAdd;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

constexpr std::string_view kFunctionNames[] = {"sin",  "cos",  "tan", "sinh", "cosh",
                                               "tanh", "exp",  "log", "sqrt"};
constexpr UnaryOp kFunctionOps[] = {UnaryOp::kSin,  UnaryOp::kCos, UnaryOp::kTan,
                                    UnaryOp::kSinh, UnaryOp::kCosh, UnaryOp::kTanh,
                                    UnaryOp::kExp,  UnaryOp::kLog, UnaryOp::kSqrt};

std::string_view function_name(UnaryOp op) {
  for (std::size_t i = 0; i < std::size(kFunctionOps); ++i) {
    if (kFunctionOps[i] == op) return kFunctionNames[i];
  }
  return "neg";
}

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string("non-finite result in ") + what);
  return v;
}

double apply_unary(UnaryOp op, double a) {
  switch (op) {
    case UnaryOp::kNeg: return -a;
    case UnaryOp::kSin: return std::sin(a);
    case UnaryOp::kCos: return std::cos(a);
    case UnaryOp::kTan: return checked(std::tan(a), "tan");
    case UnaryOp::kSinh: return checked(std::sinh(a), "sinh");
    case UnaryOp::kCosh: return checked(std::cosh(a), "cosh");
    case UnaryOp::kTanh: return std::tanh(a);
    case UnaryOp::kExp: return checked(std::exp(a), "exp");
    case UnaryOp::kLog:
      if (!(a > 0.0)) throw DomainError("log of nonpositive value " + std::to_string(a));
      return std::log(a);
    case UnaryOp::kSqrt:
      if (a < 0.0) throw DomainError("sqrt of negative value " + std::to_string(a));
      return std::sqrt(a);
  }
  return 0.0;
}

double apply_pow(double base, double exponent) {
  const bool integral = std::nearbyint(exponent) == exponent && std::abs(exponent) < 2147483648.0;
  if (integral) {
    if (base == 0.0 && exponent < 0.0) throw DomainError("division by zero in power");
    return checked(std::pow(base, exponent), "power");
  }
  // non-integer exponent: base^b = exp(b log base)
  if (!(base > 0.0)) throw DomainError("non-integer power of nonpositive base " + std::to_string(base));
  return checked(std::exp(exponent * std::log(base)), "power");
}

double apply_binary(BinaryOp op, double a, double b) {
  switch (op) {
    case BinaryOp::kAdd: return checked(a + b, "addition");
    case BinaryOp::kSub: return checked(a - b, "subtraction");
    case BinaryOp::kMul: return checked(a * b, "multiplication");
    case BinaryOp::kDiv:
      if (b == 0.0) throw DomainError("division by zero");
      return checked(a / b, "division");
    case BinaryOp::kPow: return apply_pow(a, b);
  }
  return 0.0;
}

double eval_node(const Expression::Node& node, std::span<const double> point) {
  using Kind = Expression::Node::Kind;
  switch (node.kind) {
    case Kind::kConstant: return node.value;
    case Kind::kVariable:
      if (node.index >= point.size()) {
        throw DomainError("coordinate '" + node.name + "' not present in evaluation point");
      }
      return point[node.index];
    case Kind::kUnary: return apply_unary(node.unary_op, eval_node(*node.lhs, point));
    case Kind::kBinary:
      return apply_binary(node.binary_op, eval_node(*node.lhs, point), eval_node(*node.rhs, point));
  }
  return 0.0;
}

std::string format_number(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  std::string text(buffer);
  if (v < 0.0) return "(" + text + ")";
  return text;
}

void print_node(const Expression::Node& node, std::string& out) {
  using Kind = Expression::Node::Kind;
  switch (node.kind) {
    case Kind::kConstant: out += format_number(node.value); return;
    case Kind::kVariable: out += node.name; return;
    case Kind::kUnary:
      if (node.unary_op == UnaryOp::kNeg) {
        out += "(-";
        print_node(*node.lhs, out);
        out += ")";
      } else {
        out += function_name(node.unary_op);
        out += "(";
        print_node(*node.lhs, out);
        out += ")";
      }
      return;
    case Kind::kBinary: {
      static constexpr const char* kSymbols[] = {" + ", " - ", " * ", " / ", " ^ "};
      out += "(";
      print_node(*node.lhs, out);
      out += kSymbols[static_cast<int>(node.binary_op)];
      print_node(*node.rhs, out);
      out += ")";
      return;
    }
  }
}

std::size_t count_nodes(const Expression::Node& node) {
  std::size_t count = 1;
  if (node.lhs) count += count_nodes(*node.lhs);
  if (node.rhs) count += count_nodes(*node.rhs);
  return count;
}

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> coords) : text_(text), coords_(coords) {}

  Expression parse() {
    Expression e = expr();
    skip_space();
    if (pos_ < text_.size()) {
      if (text_[pos_] == ')') throw ParseError("syntax error: unbalanced ')'", pos_);
      throw ParseError(std::string("syntax error: unexpected '") + text_[pos_] + "'", pos_);
    }
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                   text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expression expr() {
    Expression lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = Expression::binary(BinaryOp::kAdd, lhs, term());
      } else if (accept('-')) {
        lhs = Expression::binary(BinaryOp::kSub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  Expression term() {
    Expression lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = Expression::binary(BinaryOp::kMul, lhs, factor());
      } else if (accept('/')) {
        lhs = Expression::binary(BinaryOp::kDiv, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  // '^' binds tighter than unary minus and is right-associative.
  Expression factor() {
    if (accept('-')) return Expression::unary(UnaryOp::kNeg, factor());
    Expression base = atom();
    if (accept('^')) return Expression::binary(BinaryOp::kPow, base, factor());
    return base;
  }

  Expression atom() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("syntax error: unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expression inner = expr();
      if (!accept(')')) throw ParseError("syntax error: expected ')'", pos_);
      return inner;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) return identifier();
    throw ParseError(std::string("syntax error: unexpected '") + c + "'", pos_);
  }

  Expression number() {
    const std::size_t start = pos_;
    auto is_digit = [&](std::size_t i) { return i < text_.size() && text_[i] >= '0' && text_[i] <= '9'; };
    while (is_digit(pos_)) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (is_digit(pos_)) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (is_digit(look)) {
        pos_ = look;
        while (is_digit(pos_)) ++pos_;
      }
    }
    double value = 0.0;
    const auto result = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (result.ec != std::errc() || result.ptr != text_.data() + pos_) {
      throw ParseError("syntax error: malformed number", start);
    }
    return Expression::constant(value);
  }

  Expression identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
      if (!ok) break;
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    skip_space();
    const bool call = pos_ < text_.size() && text_[pos_] == '(';

    for (std::size_t i = 0; i < std::size(kFunctionNames); ++i) {
      if (name != kFunctionNames[i]) continue;
      if (!call) {
        throw ParseError("arity mismatch: function '" + std::string(name) + "' expects 1 argument", start);
      }
      ++pos_;
      Expression arg = expr();
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        throw ParseError("arity mismatch: function '" + std::string(name) + "' expects 1 argument", pos_);
      }
      if (!accept(')')) throw ParseError("syntax error: expected ')'", pos_);
      return Expression::unary(kFunctionOps[i], arg);
    }

    std::optional<Expression> value;
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (coords_[i] == name) {
        value = Expression::variable(i, std::string(name));
        break;
      }
    }
    if (!value && name == "pi") value = Expression::constant(3.141592653589793);
    if (!value && name == "e") value = Expression::constant(2.718281828459045);
    if (!value) throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    if (call) throw ParseError("arity mismatch: '" + std::string(name) + "' is not a function", pos_);
    return *value;
  }

  std::string_view text_;
  std::span<const std::string> coords_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression() : Expression(constant(0.0)) {}

Expression::Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expression Expression::constant(double value) {
  auto node = std::make_shared<Node>();
  node->kind = Node::Kind::kConstant;
  node->value = value;
  return Expression(std::move(node));
}

Expression Expression::variable(std::size_t index, std::string name) {
  auto node = std::make_shared<Node>();
  node->kind = Node::Kind::kVariable;
  node->index = index;
  node->name = std::move(name);
  return Expression(std::move(node));
}

Expression Expression::unary(UnaryOp op, const Expression& arg) {
  auto node = std::make_shared<Node>();
  node->kind = Node::Kind::kUnary;
  node->unary_op = op;
  node->lhs = arg.node_;
  return Expression(std::move(node));
}

Expression Expression::binary(BinaryOp op, const Expression& lhs, const Expression& rhs) {
  auto node = std::make_shared<Node>();
  node->kind = Node::Kind::kBinary;
  node->binary_op = op;
  node->lhs = lhs.node_;
  node->rhs = rhs.node_;
  return Expression(std::move(node));
}

Expression Expression::parse(std::string_view text, std::span<const std::string> coords) {
  return Parser(text, coords).parse();
}

double Expression::evaluate(std::span<const double> point) const { return eval_node(*node_, point); }

std::optional<double> Expression::constant_value() const {
  if (node_->kind == Node::Kind::kConstant) return node_->value;
  return std::nullopt;
}

bool Expression::is_zero() const {
  const auto c = constant_value();
  return c && *c == 0.0;
}

std::size_t Expression::node_count() const { return count_nodes(*node_); }

std::string Expression::to_string() const {
  std::string out;
  print_node(*node_, out);
  return out;
}

Expression Expression::derivative(std::size_t index) const {
  const Node& node = *node_;
  switch (node.kind) {
    case Node::Kind::kConstant: return constant(0.0);
    case Node::Kind::kVariable: return constant(node.index == index ? 1.0 : 0.0);
    case Node::Kind::kUnary: {
      const Expression a(node.lhs);
      const Expression da = a.derivative(index);
      if (da.is_zero()) return constant(0.0);
      switch (node.unary_op) {
        case UnaryOp::kNeg: return -da;
        case UnaryOp::kSin: return cos(a) * da;
        case UnaryOp::kCos: return -(sin(a) * da);
        case UnaryOp::kTan: return (constant(1.0) + pow(tan(a), constant(2.0))) * da;
        case UnaryOp::kSinh: return cosh(a) * da;
        case UnaryOp::kCosh: return sinh(a) * da;
        case UnaryOp::kTanh: return (constant(1.0) - pow(tanh(a), constant(2.0))) * da;
        case UnaryOp::kExp: return exp(a) * da;
        case UnaryOp::kLog: return da / a;
        case UnaryOp::kSqrt: return da / (constant(2.0) * sqrt(a));
      }
      break;
    }
    case Node::Kind::kBinary: {
      const Expression a(node.lhs);
      const Expression b(node.rhs);
      const Expression da = a.derivative(index);
      const Expression db = b.derivative(index);
      switch (node.binary_op) {
        case BinaryOp::kAdd: return da + db;
        case BinaryOp::kSub: return da - db;
        case BinaryOp::kMul: return da * b + a * db;
        case BinaryOp::kDiv: return (da * b - a * db) / pow(b, constant(2.0));
        case BinaryOp::kPow: {
          if (const auto c = b.constant_value()) {
            return constant(*c) * pow(a, constant(*c - 1.0)) * da;
          }
          // d(a^b) = a^b (b' log a + b a'/a)
          return *this * (db * log(a) + b * da / a);
        }
      }
      break;
    }
  }
  return constant(0.0);
}

namespace {

// Folds constant operands when the result is finite and well defined.
std::optional<double> fold_unary(UnaryOp op, const Expression& a) {
  const auto c = a.constant_value();
  if (!c) return std::nullopt;
  try {
    return apply_unary(op, *c);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

std::optional<double> fold_binary(BinaryOp op, const Expression& a, const Expression& b) {
  const auto ca = a.constant_value();
  const auto cb = b.constant_value();
  if (!ca || !cb) return std::nullopt;
  try {
    return apply_binary(op, *ca, *cb);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

bool is_constant(const Expression& e, double v) {
  const auto c = e.constant_value();
  return c && *c == v;
}

Expression make_unary(UnaryOp op, const Expression& a) {
  if (auto folded = fold_unary(op, a)) return Expression::constant(*folded);
  return Expression::unary(op, a);
}

}  // namespace

Expression operator-(const Expression& a) { return make_unary(UnaryOp::kNeg, a); }

Expression operator+(const Expression& a, const Expression& b) {
  if (auto folded = fold_binary(BinaryOp::kAdd, a, b)) return Expression::constant(*folded);
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Expression::binary(BinaryOp::kAdd, a, b);
}

Expression operator-(const Expression& a, const Expression& b) {
  if (auto folded = fold_binary(BinaryOp::kSub, a, b)) return Expression::constant(*folded);
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return Expression::binary(BinaryOp::kSub, a, b);
}

Expression operator*(const Expression& a, const Expression& b) {
  if (auto folded = fold_binary(BinaryOp::kMul, a, b)) return Expression::constant(*folded);
  if (a.is_zero() || b.is_zero()) return Expression::constant(0.0);
  if (is_constant(a, 1.0)) return b;
  if (is_constant(b, 1.0)) return a;
  if (is_constant(a, -1.0)) return -b;
  if (is_constant(b, -1.0)) return -a;
  return Expression::binary(BinaryOp::kMul, a, b);
}

Expression operator/(const Expression& a, const Expression& b) {
  if (auto folded = fold_binary(BinaryOp::kDiv, a, b)) return Expression::constant(*folded);
  if (is_constant(b, 1.0)) return a;
  return Expression::binary(BinaryOp::kDiv, a, b);
}

Expression pow(const Expression& base, const Expression& exponent) {
  if (auto folded = fold_binary(BinaryOp::kPow, base, exponent)) return Expression::constant(*folded);
  if (is_constant(exponent, 1.0)) return base;
  if (is_constant(exponent, 0.0)) return Expression::constant(1.0);
  return Expression::binary(BinaryOp::kPow, base, exponent);
}

Expression sin(const Expression& a) { return make_unary(UnaryOp::kSin, a); }
Expression cos(const Expression& a) { return make_unary(UnaryOp::kCos, a); }
Expression tan(const Expression& a) { return make_unary(UnaryOp::kTan, a); }
Expression sinh(const Expression& a) { return make_unary(UnaryOp::kSinh, a); }
Expression cosh(const Expression& a) { return make_unary(UnaryOp::kCosh, a); }
Expression tanh(const Expression& a) { return make_unary(UnaryOp::kTanh, a); }
Expression exp(const Expression& a) { return make_unary(UnaryOp::kExp, a); }
Expression log(const Expression& a) { return make_unary(UnaryOp::kLog, a); }
Expression sqrt(const Expression& a) { return make_unary(UnaryOp::kSqrt, a); }

ExpressionMatrix::ExpressionMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

ExpressionMatrix ExpressionMatrix::parse(const std::vector<std::vector<std::string>>& rows,
                                         std::span<const std::string> coords) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  ExpressionMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw SchemaError("ragged expression matrix");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = Expression::parse(rows[i][j], coords);
  }
  return m;
}

ExpressionMatrix ExpressionMatrix::identity(std::size_t n) {
  ExpressionMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Expression::constant(1.0);
  return m;
}

Eigen::MatrixXd ExpressionMatrix::evaluate(const Eigen::VectorXd& point) const {
  Eigen::MatrixXd out(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j).evaluate(point);
  }
  return out;
}

ExpressionMatrix ExpressionMatrix::derivative(std::size_t index) const {
  ExpressionMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i].derivative(index);
  return out;
}

ExpressionMatrix ExpressionMatrix::scaled(double factor) const {
  ExpressionMatrix out(rows_, cols_);
  const Expression c = Expression::constant(factor);
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = c * entries_[i];
  return out;
}

std::vector<Expression> parse_expressions(const std::vector<std::string>& texts,
                                          std::span<const std::string> coords) {
  std::vector<Expression> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(Expression::parse(t, coords));
  return out;
}

Eigen::VectorXd evaluate_all(const std::vector<Expression>& exprs, const Eigen::VectorXd& point) {
  Eigen::VectorXd out(exprs.size());
  for (std::size_t i = 0; i < exprs.size(); ++i) out(static_cast<Eigen::Index>(i)) = exprs[i].evaluate(point);
  return out;
}

std::vector<Expression> differentiate_all(const std::vector<Expression>& exprs, std::size_t index) {
  std::vector<Expression> out;
  out.reserve(exprs.size());
  for (const auto& e : exprs) out.push_back(e.derivative(index));
  return out;
}

}  // namespace immersion
