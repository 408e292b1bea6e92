#include "smoothset/scalar_expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <utility>
#include <vector>

namespace smoothset {

namespace {

ExprPtr make_node(ExprKind kind, ExprPtr a = nullptr, ExprPtr b = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

ExprPtr make_constant(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::kConstant;
  n->value = v;
  return n;
}

constexpr double kIntegerExponentTol = 1e-9;

bool near_integer(double v, double* rounded) {
  const double r = std::rint(v);
  if (std::abs(v - r) <= kIntegerExponentTol) {
    *rounded = r;
    return true;
  }
  return false;
}

}  // namespace

double pow_value(double base, double exponent) {
  if (std::isnan(base) || std::isnan(exponent)) return std::nan("");
  if (base == 0.0 && exponent < 0.0) return std::nan("");
  if (base < 0.0) {
    double n;
    if (!near_integer(exponent, &n)) return std::nan("");
    return std::pow(base, n);
  }
  return std::pow(base, exponent);
}

double div_value(double numerator, double denominator) {
  if (denominator == 0.0) return std::nan("");
  return numerator / denominator;
}

double ln_value(double v) {
  if (!(v > 0.0)) return std::nan("");  // non-positive and NaN both fail
  return std::log(v);
}

ScalarExpr ScalarExpr::constant(double v) { return ScalarExpr(make_constant(v)); }
ScalarExpr ScalarExpr::var_x() { return ScalarExpr(make_node(ExprKind::kVarX)); }
ScalarExpr ScalarExpr::var_y() { return ScalarExpr(make_node(ExprKind::kVarY)); }

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
  return ScalarExpr(make_node(ExprKind::kAdd, a.node(), b.node()));
}
ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) {
  return ScalarExpr(make_node(ExprKind::kSub, a.node(), b.node()));
}
ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
  return ScalarExpr(make_node(ExprKind::kMul, a.node(), b.node()));
}
ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
  return ScalarExpr(make_node(ExprKind::kDiv, a.node(), b.node()));
}
ScalarExpr operator-(const ScalarExpr& a) {
  return ScalarExpr(make_node(ExprKind::kNeg, a.node()));
}
ScalarExpr pow(const ScalarExpr& base, const ScalarExpr& exponent) {
  return ScalarExpr(make_node(ExprKind::kPow, base.node(), exponent.node()));
}
ScalarExpr exp(const ScalarExpr& a) { return ScalarExpr(make_node(ExprKind::kExp, a.node())); }
ScalarExpr ln(const ScalarExpr& a) { return ScalarExpr(make_node(ExprKind::kLn, a.node())); }
ScalarExpr sin(const ScalarExpr& a) { return ScalarExpr(make_node(ExprKind::kSin, a.node())); }
ScalarExpr cos(const ScalarExpr& a) { return ScalarExpr(make_node(ExprKind::kCos, a.node())); }
ScalarExpr abs(const ScalarExpr& a) { return ScalarExpr(make_node(ExprKind::kAbs, a.node())); }

namespace {

double eval_node(const ExprNode& n, Point p) {
  switch (n.kind) {
    case ExprKind::kConstant: return n.value;
    case ExprKind::kVarX: return p.x;
    case ExprKind::kVarY: return p.y;
    case ExprKind::kNeg: return -eval_node(*n.a, p);
    case ExprKind::kAdd: return eval_node(*n.a, p) + eval_node(*n.b, p);
    case ExprKind::kSub: return eval_node(*n.a, p) - eval_node(*n.b, p);
    case ExprKind::kMul: return eval_node(*n.a, p) * eval_node(*n.b, p);
    case ExprKind::kDiv: return div_value(eval_node(*n.a, p), eval_node(*n.b, p));
    case ExprKind::kPow: return pow_value(eval_node(*n.a, p), eval_node(*n.b, p));
    case ExprKind::kExp: return std::exp(eval_node(*n.a, p));
    case ExprKind::kLn: return ln_value(eval_node(*n.a, p));
    case ExprKind::kSin: return std::sin(eval_node(*n.a, p));
    case ExprKind::kCos: return std::cos(eval_node(*n.a, p));
    case ExprKind::kAbs: return std::abs(eval_node(*n.a, p));
  }
  return std::nan("");
}

Dual dual_div(const Dual& a, const Dual& b) {
  const double v = div_value(a.value, b.value);
  if (std::isnan(v)) return dual_nan();
  const double inv = 1.0 / b.value;
  return {v, (a.dx - v * b.dx) * inv, (a.dy - v * b.dy) * inv};
}

Dual dual_pow(const Dual& base, const Dual& expo) {
  const double v = pow_value(base.value, expo.value);
  if (std::isnan(v)) return dual_nan();
  if (expo.dx == 0.0 && expo.dy == 0.0) {
    // Constant exponent: d b^n = n b^(n-1) db. Valid for negative bases
    // too, where pow_value already restricted n to an integer.
    const double n = expo.value;
    if (n == 0.0) return Dual::constant(v);
    const double s = n * pow_value(base.value, n - 1.0);
    return {v, s * base.dx, s * base.dy};
  }
  // Variable exponent requires a positive base: b^e = exp(e ln b).
  if (!(base.value > 0.0)) return dual_nan();
  const double lnb = std::log(base.value);
  const double db = expo.value * v / base.value;
  const double de = v * lnb;
  return {v, db * base.dx + de * expo.dx, db * base.dy + de * expo.dy};
}

Dual dual_node(const ExprNode& n, Point p) {
  switch (n.kind) {
    case ExprKind::kConstant: return Dual::constant(n.value);
    case ExprKind::kVarX: return Dual::var_x(p.x);
    case ExprKind::kVarY: return Dual::var_y(p.y);
    case ExprKind::kNeg: return -dual_node(*n.a, p);
    case ExprKind::kAdd: return dual_node(*n.a, p) + dual_node(*n.b, p);
    case ExprKind::kSub: return dual_node(*n.a, p) - dual_node(*n.b, p);
    case ExprKind::kMul: return dual_node(*n.a, p) * dual_node(*n.b, p);
    case ExprKind::kDiv: return dual_div(dual_node(*n.a, p), dual_node(*n.b, p));
    case ExprKind::kPow: return dual_pow(dual_node(*n.a, p), dual_node(*n.b, p));
    case ExprKind::kExp: {
      const Dual a = dual_node(*n.a, p);
      const double e = std::exp(a.value);
      return {e, e * a.dx, e * a.dy};
    }
    case ExprKind::kLn: {
      const Dual a = dual_node(*n.a, p);
      const double v = ln_value(a.value);
      if (std::isnan(v)) return dual_nan();
      return {v, a.dx / a.value, a.dy / a.value};
    }
    case ExprKind::kSin: {
      const Dual a = dual_node(*n.a, p);
      const double c = std::cos(a.value);
      return {std::sin(a.value), c * a.dx, c * a.dy};
    }
    case ExprKind::kCos: {
      const Dual a = dual_node(*n.a, p);
      const double s = -std::sin(a.value);
      return {std::cos(a.value), s * a.dx, s * a.dy};
    }
    case ExprKind::kAbs: {
      const Dual a = dual_node(*n.a, p);
      if (std::isnan(a.value)) return dual_nan();
      const double s = a.value < 0.0 ? -1.0 : 1.0;
      return {std::abs(a.value), s * a.dx, s * a.dy};
    }
  }
  return dual_nan();
}

// Returns the node value; sets *smooth to false when a sub-expression comes
// within `margin` of a differentiability edge.
double smooth_node(const ExprNode& n, Point p, double margin, bool* smooth) {
  switch (n.kind) {
    case ExprKind::kConstant: return n.value;
    case ExprKind::kVarX: return p.x;
    case ExprKind::kVarY: return p.y;
    case ExprKind::kNeg: return -smooth_node(*n.a, p, margin, smooth);
    case ExprKind::kAdd:
      return smooth_node(*n.a, p, margin, smooth) + smooth_node(*n.b, p, margin, smooth);
    case ExprKind::kSub:
      return smooth_node(*n.a, p, margin, smooth) - smooth_node(*n.b, p, margin, smooth);
    case ExprKind::kMul:
      return smooth_node(*n.a, p, margin, smooth) * smooth_node(*n.b, p, margin, smooth);
    case ExprKind::kDiv: {
      const double a = smooth_node(*n.a, p, margin, smooth);
      const double b = smooth_node(*n.b, p, margin, smooth);
      if (std::abs(b) < margin) *smooth = false;
      return div_value(a, b);
    }
    case ExprKind::kPow: {
      const double a = smooth_node(*n.a, p, margin, smooth);
      const double b = smooth_node(*n.b, p, margin, smooth);
      double n_int;
      if (near_integer(b, &n_int) && n.b->kind == ExprKind::kConstant) {
        // Integer power is smooth except where a negative exponent hits a
        // vanishing base.
        if (n_int < 0.0 && std::abs(a) < margin) *smooth = false;
      } else {
        // Fractional or variable exponent: domain edge at base <= 0.
        if (a < margin) *smooth = false;
      }
      return pow_value(a, b);
    }
    case ExprKind::kExp: return std::exp(smooth_node(*n.a, p, margin, smooth));
    case ExprKind::kLn: {
      const double a = smooth_node(*n.a, p, margin, smooth);
      if (a < margin) *smooth = false;
      return ln_value(a);
    }
    case ExprKind::kSin: return std::sin(smooth_node(*n.a, p, margin, smooth));
    case ExprKind::kCos: return std::cos(smooth_node(*n.a, p, margin, smooth));
    case ExprKind::kAbs: {
      const double a = smooth_node(*n.a, p, margin, smooth);
      if (std::abs(a) < margin) *smooth = false;
      return std::abs(a);
    }
  }
  return std::nan("");
}

}  // namespace

double ScalarExpr::eval(Point p) const { return eval_node(*node_, p); }

Dual ScalarExpr::eval_dual(Point p) const { return dual_node(*node_, p); }

bool ScalarExpr::smooth_at(Point p, double margin) const {
  bool smooth = true;
  const double v = smooth_node(*node_, p, margin, &smooth);
  return smooth && !std::isnan(v);
}

bool structurally_equal(const ScalarExpr& a, const ScalarExpr& b) {
  const ExprNode* na = a.node().get();
  const ExprNode* nb = b.node().get();
  if (na == nullptr || nb == nullptr) return na == nb;
  if (na->kind != nb->kind) return false;
  if (na->kind == ExprKind::kConstant) {
    // Bitwise identity, so that NaN literals (never produced by the
    // parser) still compare consistently.
    return na->value == nb->value ||
           (std::isnan(na->value) && std::isnan(nb->value));
  }
  const bool left = na->a == nullptr
                        ? nb->a == nullptr
                        : nb->a != nullptr &&
                              structurally_equal(ScalarExpr(na->a), ScalarExpr(nb->a));
  if (!left) return false;
  return na->b == nullptr
             ? nb->b == nullptr
             : nb->b != nullptr &&
                   structurally_equal(ScalarExpr(na->b), ScalarExpr(nb->b));
}

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

enum class TokenKind {
  kNumber,
  kVarX,
  kVarY,
  kFunc,   // exp ln sin cos abs
  kEulerE, // bare 'e', only valid as e^{...}
  kLParen,
  kRParen,
  kLBrace,
  kRBrace,
  kPlus,
  kMinus,
  kStar,
  kSlash,
  kCaret,
  kEnd,
};

struct Token {
  TokenKind kind;
  std::size_t position;
  double number = 0.0;
  ExprKind func = ExprKind::kExp;  // kFunc only
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= text_.size()) return {TokenKind::kEnd, start};
    const char c = text_[pos_];
    switch (c) {
      case '(': ++pos_; return {TokenKind::kLParen, start};
      case ')': ++pos_; return {TokenKind::kRParen, start};
      case '{': ++pos_; return {TokenKind::kLBrace, start};
      case '}': ++pos_; return {TokenKind::kRBrace, start};
      case '+': ++pos_; return {TokenKind::kPlus, start};
      case '-': ++pos_; return {TokenKind::kMinus, start};
      case '*': ++pos_; return {TokenKind::kStar, start};
      case '/': ++pos_; return {TokenKind::kSlash, start};
      case '^': ++pos_; return {TokenKind::kCaret, start};
      case '\\': return latex_command(start);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(start);
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier(start);
    throw SyntaxError(start, std::string("unexpected character '") + c + "'");
  }

 private:
  Token number(std::size_t start) {
    std::size_t end = pos_;
    while (end < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.'))
      ++end;
    // Exponent part only when followed by a digit (optionally signed), so
    // that "2e^{x}" lexes as the number 2 and the identifier e.
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t cursor = end + 1;
      if (cursor < text_.size() && (text_[cursor] == '+' || text_[cursor] == '-')) ++cursor;
      if (cursor < text_.size() && std::isdigit(static_cast<unsigned char>(text_[cursor]))) {
        ++cursor;
        while (cursor < text_.size() && std::isdigit(static_cast<unsigned char>(text_[cursor])))
          ++cursor;
        end = cursor;
      }
    }
    double value = 0.0;
    const auto r = std::from_chars(text_.data() + start, text_.data() + end, value);
    if (r.ec != std::errc() || r.ptr != text_.data() + end)
      throw SyntaxError(start, "malformed number");
    pos_ = end;
    return {TokenKind::kNumber, start, value};
  }

  Token identifier(std::size_t start) {
    std::size_t end = pos_;
    while (end < text_.size() && std::isalpha(static_cast<unsigned char>(text_[end]))) ++end;
    const std::string_view name = text_.substr(start, end - start);
    pos_ = end;
    return identifier_token(start, name);
  }

  Token identifier_token(std::size_t start, std::string_view name) {
    if (name == "x") return {TokenKind::kVarX, start};
    if (name == "y") return {TokenKind::kVarY, start};
    if (name == "e") return {TokenKind::kEulerE, start};
    Token t{TokenKind::kFunc, start};
    if (name == "exp") { t.func = ExprKind::kExp; return t; }
    if (name == "ln") { t.func = ExprKind::kLn; return t; }
    if (name == "sin") { t.func = ExprKind::kSin; return t; }
    if (name == "cos") { t.func = ExprKind::kCos; return t; }
    if (name == "abs") { t.func = ExprKind::kAbs; return t; }
    throw SyntaxError(start, "unknown identifier '" + std::string(name) + "'");
  }

  Token latex_command(std::size_t start) {
    std::size_t end = pos_ + 1;
    while (end < text_.size() && std::isalpha(static_cast<unsigned char>(text_[end]))) ++end;
    const std::string_view cmd = text_.substr(pos_ + 1, end - pos_ - 1);
    pos_ = end;
    if (cmd == "left") {
      if (pos_ < text_.size() && text_[pos_] == '(') { ++pos_; return {TokenKind::kLParen, start}; }
      throw SyntaxError(start, "\\left must be followed by '('");
    }
    if (cmd == "right") {
      if (pos_ < text_.size() && text_[pos_] == ')') { ++pos_; return {TokenKind::kRParen, start}; }
      throw SyntaxError(start, "\\right must be followed by ')'");
    }
    if (cmd == "cdot") return {TokenKind::kStar, start};
    if (cmd == "operatorname") {
      // \operatorname{abs}
      if (text_.substr(pos_).rfind("{abs}", 0) == 0) {
        pos_ += 5;
        Token t{TokenKind::kFunc, start};
        t.func = ExprKind::kAbs;
        return t;
      }
      throw SyntaxError(start, "unsupported \\operatorname");
    }
    if (cmd == "exp" || cmd == "ln" || cmd == "sin" || cmd == "cos")
      return identifier_token(start, cmd);
    throw SyntaxError(start, "unknown LaTeX command '\\" + std::string(cmd) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Recursive descent:
//   expr     := term (('+'|'-') term)*
//   term     := factor (('*'|'/') factor)*
//   factor   := '-' factor | power
//   power    := atom ('^' factor)?
//   atom     := number | x | y | func '(' expr ')' | '(' expr ')'
//             | '{' expr '}' | e '^' factor
class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { advance(); }

  ScalarExpr parse() {
    ExprPtr e = expr();
    expect(TokenKind::kEnd, "unexpected trailing input");
    return ScalarExpr(std::move(e));
  }

 private:
  void advance() { current_ = lexer_.next(); }

  void expect(TokenKind kind, const char* message) {
    if (current_.kind != kind) throw SyntaxError(current_.position, message);
    if (kind != TokenKind::kEnd) advance();
  }

  ExprPtr expr() {
    ExprPtr left = term();
    while (current_.kind == TokenKind::kPlus || current_.kind == TokenKind::kMinus) {
      const ExprKind op =
          current_.kind == TokenKind::kPlus ? ExprKind::kAdd : ExprKind::kSub;
      advance();
      left = make_node(op, std::move(left), term());
    }
    return left;
  }

  ExprPtr term() {
    ExprPtr left = factor();
    while (current_.kind == TokenKind::kStar || current_.kind == TokenKind::kSlash) {
      const ExprKind op =
          current_.kind == TokenKind::kStar ? ExprKind::kMul : ExprKind::kDiv;
      advance();
      left = make_node(op, std::move(left), factor());
    }
    return left;
  }

  ExprPtr factor() {
    if (current_.kind == TokenKind::kMinus) {
      advance();
      return make_node(ExprKind::kNeg, factor());
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    if (current_.kind == TokenKind::kCaret) {
      advance();
      return make_node(ExprKind::kPow, std::move(base), factor());
    }
    return base;
  }

  ExprPtr atom() {
    const Token t = current_;
    switch (t.kind) {
      case TokenKind::kNumber:
        advance();
        return make_constant(t.number);
      case TokenKind::kVarX:
        advance();
        return make_node(ExprKind::kVarX);
      case TokenKind::kVarY:
        advance();
        return make_node(ExprKind::kVarY);
      case TokenKind::kFunc: {
        advance();
        expect(TokenKind::kLParen, "expected '(' after function name");
        ExprPtr arg = expr();
        expect(TokenKind::kRParen, "expected ')'");
        return make_node(t.func, std::move(arg));
      }
      case TokenKind::kEulerE: {
        advance();
        expect(TokenKind::kCaret, "expected '^' after 'e'");
        return make_node(ExprKind::kExp, factor());
      }
      case TokenKind::kLParen: {
        advance();
        ExprPtr inner = expr();
        expect(TokenKind::kRParen, "expected ')'");
        return inner;
      }
      case TokenKind::kLBrace: {
        advance();
        ExprPtr inner = expr();
        expect(TokenKind::kRBrace, "expected '}'");
        return inner;
      }
      default:
        throw SyntaxError(t.position, "expected a value");
    }
  }

  Lexer lexer_;
  Token current_{TokenKind::kEnd, 0};
};

}  // namespace

ScalarExpr parse_scalar(std::string_view text) {
  if (text.empty()) throw SyntaxError(0, "empty expression");
  return Parser(text).parse();
}

// ---------------------------------------------------------------------------
// LaTeX emitter
// ---------------------------------------------------------------------------

namespace {

// Binding strength used for parenthesization: additive < multiplicative <
// unary minus < power < atom.
int precedence(const ExprNode& n) {
  switch (n.kind) {
    case ExprKind::kAdd:
    case ExprKind::kSub: return 1;
    case ExprKind::kMul:
    case ExprKind::kDiv: return 2;
    case ExprKind::kNeg: return 3;
    case ExprKind::kPow: return 4;
    case ExprKind::kConstant: return n.value < 0.0 ? 3 : 5;
    default: return 5;
  }
}

void emit(const ExprNode& n, std::string* out);

void emit_grouped(const ExprNode& n, int min_prec, std::string* out) {
  if (precedence(n) < min_prec) {
    out->append("\\left(");
    emit(n, out);
    out->append("\\right)");
  } else {
    emit(n, out);
  }
}

void emit_call(const char* name, const ExprNode& arg, std::string* out) {
  out->append(name);
  out->append("\\left(");
  emit(arg, out);
  out->append("\\right)");
}

void emit(const ExprNode& n, std::string* out) {
  switch (n.kind) {
    case ExprKind::kConstant:
      out->append(format_double(n.value));
      return;
    case ExprKind::kVarX: out->push_back('x'); return;
    case ExprKind::kVarY: out->push_back('y'); return;
    case ExprKind::kNeg:
      out->push_back('-');
      emit_grouped(*n.a, 3, out);
      return;
    case ExprKind::kAdd:
      emit_grouped(*n.a, 1, out);
      out->push_back('+');
      emit_grouped(*n.b, 1, out);
      return;
    case ExprKind::kSub:
      emit_grouped(*n.a, 1, out);
      out->push_back('-');
      emit_grouped(*n.b, 2, out);
      return;
    case ExprKind::kMul:
      emit_grouped(*n.a, 2, out);
      out->append("\\cdot ");
      emit_grouped(*n.b, 2, out);
      return;
    case ExprKind::kDiv:
      emit_grouped(*n.a, 2, out);
      out->push_back('/');
      emit_grouped(*n.b, 3, out);
      return;
    case ExprKind::kPow:
      emit_grouped(*n.a, 5, out);
      out->append("^{");
      emit(*n.b, out);
      out->push_back('}');
      return;
    case ExprKind::kExp:
      out->append("e^{");
      emit(*n.a, out);
      out->push_back('}');
      return;
    case ExprKind::kLn: emit_call("\\ln", *n.a, out); return;
    case ExprKind::kSin: emit_call("\\sin", *n.a, out); return;
    case ExprKind::kCos: emit_call("\\cos", *n.a, out); return;
    case ExprKind::kAbs: emit_call("\\operatorname{abs}", *n.a, out); return;
  }
}

}  // namespace

std::string emit_latex(const ScalarExpr& expr) {
  std::string out;
  emit(*expr.node(), &out);
  return out;
}

}  // namespace smoothset
