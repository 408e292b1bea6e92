#include "smoothset/set_program.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <utility>

namespace smoothset {

namespace {

bool is_set_name(char c) { return c >= 'a' && c <= 'y'; }

SetNodePtr make_var(char name) {
  auto n = std::make_shared<SetNode>();
  n->op = SetOp::kVar;
  n->name = name;
  return n;
}

SetNodePtr make_unary(SetOp op, SetNodePtr child) {
  auto n = std::make_shared<SetNode>();
  n->op = op;
  n->left = std::move(child);
  return n;
}

SetNodePtr make_binary(SetOp op, SetNodePtr left, SetNodePtr right) {
  auto n = std::make_shared<SetNode>();
  n->op = op;
  n->left = std::move(left);
  n->right = std::move(right);
  return n;
}

}  // namespace

SetExpr parse_postfix(std::string_view text) {
  std::vector<SetNodePtr> stack;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (is_set_name(c)) {
      stack.push_back(make_var(c));
    } else if (c == '&' || c == '|') {
      if (stack.size() < 2) throw StackUnderflow(i);
      SetNodePtr right = std::move(stack.back());  // first pop
      stack.pop_back();
      SetNodePtr left = std::move(stack.back());  // second pop
      stack.pop_back();
      stack.push_back(make_binary(c == '&' ? SetOp::kAnd : SetOp::kOr,
                                  std::move(left), std::move(right)));
    } else if (c == '!') {
      if (stack.empty()) throw StackUnderflow(i);
      SetNodePtr child = std::move(stack.back());
      stack.pop_back();
      stack.push_back(make_unary(SetOp::kNot, std::move(child)));
    } else {
      throw InvalidSymbol(i, c);
    }
  }
  if (stack.empty()) throw StackUnderflow(text.size());
  if (stack.size() > 1) throw LeftoverOperands(stack.size());
  return SetExpr(std::move(stack.front()));
}

namespace {

class InfixParser {
 public:
  explicit InfixParser(std::string_view text) : text_(text) {}

  SetExpr parse() {
    SetNodePtr e = or_expr();
    skip_space();
    if (pos_ != text_.size())
      throw SyntaxError(pos_, "unexpected trailing input");
    return SetExpr(std::move(e));
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  SetNodePtr or_expr() {
    SetNodePtr left = and_expr();
    while (eat('|')) left = make_binary(SetOp::kOr, std::move(left), and_expr());
    return left;
  }

  SetNodePtr and_expr() {
    SetNodePtr left = unary();
    while (eat('&')) left = make_binary(SetOp::kAnd, std::move(left), unary());
    return left;
  }

  SetNodePtr unary() {
    if (eat('!')) return make_unary(SetOp::kNot, unary());
    return primary();
  }

  SetNodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) throw SyntaxError(pos_, "expected a set variable");
    const char c = text_[pos_];
    if (is_set_name(c)) {
      ++pos_;
      return make_var(c);
    }
    if (c == '(') {
      ++pos_;
      SetNodePtr inner = or_expr();
      if (!eat(')')) throw SyntaxError(pos_, "expected ')'");
      return inner;
    }
    throw SyntaxError(pos_, std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

Region compile_node(const SetNode& s, const SetProgram& program) {
  switch (s.op) {
    case SetOp::kVar: {
      const auto it = program.definitions.find(s.name);
      if (it == program.definitions.end()) throw UnresolvedName(s.name);
      const Definition& def = it->second;
      const double a = def.sharpness.value_or(program.global_sharpness);
      return from_inequality(def.body, Sharpness(a), def.source);
    }
    case SetOp::kNot:
      return negate(compile_node(*s.left, program));
    case SetOp::kAnd:
      return intersect({compile_node(*s.left, program), compile_node(*s.right, program)});
    case SetOp::kOr:
      return unite({compile_node(*s.left, program), compile_node(*s.right, program)});
  }
  throw Error("corrupt set expression");
}

}  // namespace

SetExpr parse_infix(std::string_view text) { return InfixParser(text).parse(); }

Region compile(const SetProgram& program) {
  if (!program.expression.valid()) throw Error("program has no expression");
  return compile_node(*program.expression.node(), program);
}

// ---------------------------------------------------------------------------
// Desmos export
// ---------------------------------------------------------------------------

namespace {

std::string leaf_body(const RegionNode& n, bool use_source) {
  if (use_source && !n.source.empty()) return n.source;
  return emit_latex(n.expr);
}

std::string emit_node(const RegionNode& n, bool use_source) {
  switch (n.kind) {
    case RegionKind::kLeaf:
      return "e^{" + format_double(n.sharpness) + "*(" + leaf_body(n, use_source) + ")}";
    case RegionKind::kEvenPowerLeaf:
      throw UnsupportedNode("even-power leaves have no exponential export form");
    case RegionKind::kNegate: {
      const RegionNode& child = *n.children[0].node();
      if (child.kind == RegionKind::kLeaf)
        return "e^{-" + format_double(child.sharpness) + "*(" +
               leaf_body(child, use_source) + ")}";
      return "(" + emit_node(child, use_source) + ")^{ -1}";
    }
    case RegionKind::kIntersect: {
      std::string out;
      for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) {
        if (!out.empty()) out += "+";
        out += emit_node(*it->node(), use_source);
      }
      return out;
    }
    case RegionKind::kUnion: {
      std::string out = "(";
      bool first = true;
      for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) {
        if (!first) out += "+";
        first = false;
        out += "(" + emit_node(*it->node(), use_source) + ")^{ -1}";
      }
      out += " )^{ -1}";
      return out;
    }
  }
  throw Error("corrupt region tree");
}

}  // namespace

std::string emit_desmos(const Region& r, bool use_source) {
  return emit_node(*r.node(), use_source) + "\\le1";
}

// ---------------------------------------------------------------------------
// Program files
// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool is_definition_name(char c) {
  // x and y would shadow the coordinate variables inside bodies.
  return c >= 'a' && c <= 'w';
}

double parse_positive_real(const std::string& text, int line, const char* what) {
  std::size_t consumed = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &consumed);
  } catch (const std::exception&) {
    throw FileFormatError(line, std::string("malformed ") + what);
  }
  if (consumed != text.size() || !(v > 0.0) || !std::isfinite(v))
    throw FileFormatError(line, std::string(what) + " must be a positive real");
  return v;
}

void parse_def_line(const std::string& rest, int line, SetProgram* program) {
  std::istringstream in(rest);
  std::string name_tok;
  in >> name_tok;
  if (name_tok.size() != 1 || !is_definition_name(name_tok[0]))
    throw FileFormatError(line, "definition name must be a single letter a-w");
  const char name = name_tok[0];
  if (program->definitions.count(name))
    throw FileFormatError(line, std::string("duplicate definition '") + name + "'");

  Definition def;
  def.name = name;

  std::string tok;
  in >> tok;
  if (tok.rfind("a=", 0) == 0) {
    def.sharpness = parse_positive_real(tok.substr(2), line, "sharpness");
    in >> tok;
  }
  if (tok != ":")
    throw FileFormatError(line, "expected ':' before the inequality body");

  std::string body;
  std::getline(in, body);
  body = trim(body);
  if (body.empty()) throw FileFormatError(line, "missing inequality body");
  try {
    def.body = parse_scalar(body);
  } catch (const SyntaxError& e) {
    throw FileFormatError(line, std::string("bad inequality body: ") + e.what());
  }
  def.source = body;
  program->definitions.emplace(name, std::move(def));
}

}  // namespace

SetProgram load_program(std::istream& in) {
  SetProgram program;
  bool have_expr = false;
  bool have_sharpness = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;

    std::istringstream ls(text);
    std::string directive;
    ls >> directive;
    std::string rest;
    std::getline(ls, rest);
    rest = trim(rest);

    if (directive == "sharpness") {
      if (have_sharpness) throw FileFormatError(line_no, "duplicate sharpness directive");
      program.global_sharpness = parse_positive_real(rest, line_no, "sharpness");
      have_sharpness = true;
    } else if (directive == "def") {
      parse_def_line(rest, line_no, &program);
    } else if (directive == "expr") {
      if (have_expr) throw FileFormatError(line_no, "duplicate expr directive");
      std::istringstream es(rest);
      std::string dialect;
      es >> dialect;
      std::string body;
      std::getline(es, body);
      body = trim(body);
      if (body.empty()) throw FileFormatError(line_no, "empty expression");
      try {
        if (dialect == "postfix")
          program.expression = parse_postfix(body);
        else if (dialect == "infix")
          program.expression = parse_infix(body);
        else
          throw FileFormatError(line_no, "expr dialect must be postfix or infix");
      } catch (const FileFormatError&) {
        throw;
      } catch (const Error& e) {
        throw FileFormatError(line_no, std::string("bad expression: ") + e.what());
      }
      have_expr = true;
    } else {
      throw FileFormatError(line_no, "unknown directive '" + directive + "'");
    }
  }
  if (!have_expr) throw FileFormatError(line_no, "missing expr directive");
  return program;
}

SetProgram load_program_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open program file: " + path);
  return load_program(in);
}

// ---------------------------------------------------------------------------
// Session replay
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kSharpnessPrompt = "Enter the sharpness factor:";
constexpr const char* kDefsPrompt = "Enter the expressions:";
constexpr const char* kExprPrompt = "Enter the expression:";

// Python-repr of a list of strings: ['a', 'e^{...}'] with backslashes doubled.
std::string python_list_repr(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += '\'';
    for (char c : items[i]) {
      if (c == '\\') out += "\\\\";
      else out += c;
    }
    out += '\'';
  }
  out += "]";
  return out;
}

}  // namespace

ReplayResult replay_session(std::istream& transcript) {
  std::string sharpness_factor;
  std::map<char, std::string> encoded;
  std::string expression;
  bool have_sharpness = false, have_expression = false, in_defs = false;

  std::string line;
  int line_no = 0;
  while (std::getline(transcript, line)) {
    ++line_no;
    if (line.rfind(kSharpnessPrompt, 0) == 0) {
      sharpness_factor = trim(line.substr(std::string(kSharpnessPrompt).size()));
      have_sharpness = true;
    } else if (line.rfind(kDefsPrompt, 0) == 0) {
      in_defs = true;
    } else if (line.rfind(kExprPrompt, 0) == 0) {
      expression = trim(line.substr(std::string(kExprPrompt).size()));
      have_expression = true;
      in_defs = false;
    } else if (in_defs) {
      const std::string text = trim(line);
      if (text.empty()) {
        in_defs = false;
        continue;
      }
      if (text.size() < 3 || !is_set_name(text[0]) || text[1] != ' ')
        throw FileFormatError(line_no, "definition line must be '<letter> <body>'");
      encoded[text[0]] =
          "e^{" + sharpness_factor + "*(" + trim(text.substr(2)) + ")}";
    }
    // Anything else is the session's own echoed output; ignore it.
  }
  if (!have_sharpness) throw FileFormatError(line_no, "transcript has no sharpness line");
  if (!have_expression) throw FileFormatError(line_no, "transcript has no expression line");

  const auto substitute = [&encoded](std::string s) {
    if (s.size() == 1) {
      const auto it = encoded.find(s[0]);
      if (it != encoded.end()) return it->second;
    }
    return s;
  };

  ReplayResult result;
  std::vector<std::string> stack;
  for (std::size_t i = 0; i < expression.size(); ++i) {
    result.trace.push_back(std::to_string(i) + " " + python_list_repr(stack));
    const char c = expression[i];
    if (is_set_name(c)) {
      stack.emplace_back(1, c);
    } else if (c == '&' || c == '|') {
      if (stack.size() < 2) throw StackUnderflow(i);
      const std::string first = substitute(std::move(stack.back()));
      stack.pop_back();
      const std::string second = substitute(std::move(stack.back()));
      stack.pop_back();
      if (c == '&') {
        stack.push_back(first + "+" + second);
      } else {
        stack.push_back("((" + first + ")^{ -1}+(" + second + ")^{ -1} )^{ -1}");
      }
    } else {
      // The session prints a diagnostic for unknown symbols and keeps going.
      result.trace.push_back("Error at  " + std::to_string(i) +
                             "  Invalid symbol  " + std::string(1, c));
    }
  }
  if (stack.empty()) throw StackUnderflow(expression.size());
  result.final_line = stack.front() + "\\le1";
  return result;
}

}  // namespace smoothset
