#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "smoothset/errors.hpp"
#include "smoothset/types.hpp"

namespace smoothset {

enum class ExprKind {
  kConstant,
  kVarX,
  kVarY,
  kNeg,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,
  kExp,
  kLn,
  kSin,
  kCos,
  kAbs,
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprKind kind;
  double value = 0.0;  // kConstant only
  ExprPtr a;           // unary child / binary left
  ExprPtr b;           // binary right
};

// Immutable expression tree over the two variables x and y.
//
// Evaluation follows IEEE semantics with one deliberate twist: operations
// that leave the real domain (ln of a non-positive value, division by zero,
// zero raised to a negative power, a negative base raised to a non-integer
// exponent) yield NaN instead of throwing or producing infinities. Composed
// regions are routinely sampled far outside their component domains, and a
// NaN sample simply classifies as "outside" downstream.
class ScalarExpr {
 public:
  ScalarExpr() = default;
  explicit ScalarExpr(ExprPtr node) : node_(std::move(node)) {}

  static ScalarExpr constant(double v);
  static ScalarExpr var_x();
  static ScalarExpr var_y();

  bool valid() const { return node_ != nullptr; }
  const ExprPtr& node() const { return node_; }

  double eval(Point p) const;

  // Value plus exact forward-mode partials d/dx, d/dy. NaN propagates to
  // all three components.
  Dual eval_dual(Point p) const;

  // True when no sub-expression evaluates within `margin` of a point where
  // it stops being differentiable (abs corner, log or fractional-power
  // domain edge, vanishing denominator). Used to pick test points for
  // derivative checks.
  bool smooth_at(Point p, double margin) const;

 private:
  ExprPtr node_;
};

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator-(const ScalarExpr& a);
ScalarExpr pow(const ScalarExpr& base, const ScalarExpr& exponent);
ScalarExpr exp(const ScalarExpr& a);
ScalarExpr ln(const ScalarExpr& a);
ScalarExpr sin(const ScalarExpr& a);
ScalarExpr cos(const ScalarExpr& a);
ScalarExpr abs(const ScalarExpr& a);

// Parses ASCII math over x and y: `+ - * / ^`, parentheses, numeric
// literals, exp( ) ln( ) sin( ) cos( ) abs( ), and unary minus. `^` is
// right-associative and binds tighter than unary minus, so -x^2 is -(x^2).
//
// The LaTeX produced by emit_latex is accepted as well: \left( \right)
// group like plain parentheses, \cdot multiplies, {...} braces group an
// exponent, e^{...} is the exponential, \ln \sin \cos \exp name functions
// and \operatorname{abs} is the absolute value.
//
// Throws SyntaxError on malformed input; never returns a partial tree.
ScalarExpr parse_scalar(std::string_view text);

// Deterministic LaTeX fragment (no math delimiters): \left( \right) for
// grouping, ^{...} for exponents, shortest round-trip decimals. The output
// re-parses with parse_scalar to an expression with identical values.
std::string emit_latex(const ScalarExpr& expr);

// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

// Structural identity (same tree shape, kinds and literal values).
bool structurally_equal(const ScalarExpr& a, const ScalarExpr& b);

// Domain-failure aware scalar helpers shared by eval and eval_dual.
double pow_value(double base, double exponent);
double div_value(double numerator, double denominator);
double ln_value(double v);

}  // namespace smoothset
