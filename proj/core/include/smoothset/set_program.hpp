#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smoothset/region.hpp"
#include "smoothset/scalar_expr.hpp"

namespace smoothset {

// One named inequality f(x,y) <= 0. `source` preserves the body exactly as
// written so exported strings can reproduce it byte for byte; `sharpness`,
// when set, overrides the program's global value for this leaf.
struct Definition {
  char name = 0;
  ScalarExpr body;
  std::string source;
  std::optional<double> sharpness;
};

enum class SetOp { kVar, kNot, kAnd, kOr };

struct SetNode;
using SetNodePtr = std::shared_ptr<const SetNode>;

struct SetNode {
  SetOp op;
  char name = 0;  // kVar
  SetNodePtr left;
  SetNodePtr right;  // binary ops only
};

class SetExpr {
 public:
  SetExpr() = default;
  explicit SetExpr(SetNodePtr node) : node_(std::move(node)) {}
  bool valid() const { return node_ != nullptr; }
  const SetNodePtr& node() const { return node_; }

 private:
  SetNodePtr node_;
};

// Postfix dialect: letters a-y push operands, '&' and '|' pop two, '!' pops
// one. The second-popped operand becomes the left child. Exactly one
// operand must remain. Throws StackUnderflow, InvalidSymbol,
// LeftoverOperands.
SetExpr parse_postfix(std::string_view text);

// Infix dialect: '!' binds tightest, then '&', then '|'; both binary
// operators are left-associative; parentheses group. Throws SyntaxError.
SetExpr parse_infix(std::string_view text);

struct SetProgram {
  std::map<char, Definition> definitions;
  SetExpr expression;
  double global_sharpness = 50.0;
};

// Compiles the set expression over its definition table: variables become
// inequality leaves, '!' negates, '&' intersects, '|' unites. Throws
// UnresolvedName for a variable without a definition.
Region compile(const SetProgram& program);

// Builds the Desmos-ready inequality string for a region:
//   leaf              e^{A*(BODY)}
//   negated leaf      e^{-A*(BODY)}
//   intersection      children joined by '+'
//   union             ( (c1)^{ -1}+(c2)^{ -1} )^{ -1}
// suffixed with "\le1". Children of n-ary nodes are emitted right to left,
// matching the stack pop order of the postfix dialect, so golden strings
// are stable. With use_source, leaf bodies are reproduced exactly as
// written; otherwise they are re-emitted as normalized LaTeX.
// Throws UnsupportedNode for even-power leaves.
std::string emit_desmos(const Region& r, bool use_source = true);

// Program file format, one directive per line:
//   # comment
//   sharpness <positive real>
//   def <letter a-w> [a=<positive real>] : <scalar expression>
//   expr postfix <text>   |   expr infix <text>
// Exactly one expr directive. Definition names exclude x and y so bodies
// can use the coordinate variables freely. Throws FileFormatError.
SetProgram load_program(std::istream& in);
SetProgram load_program_file(const std::string& path);  // IoError on open failure

// Re-enacts the interactive postfix session protocol: the transcript
// supplies a sharpness factor, "name body" definition lines (full alphabet
// a-y) up to a blank line, and one postfix expression. Definitions are kept
// as raw strings and concatenated exactly like the original session, and
// the per-step stack trace is reproduced in Python list repr (backslashes
// doubled). `final_line` carries the Desmos string with its "\le1" suffix.
struct ReplayResult {
  std::vector<std::string> trace;
  std::string final_line;
};

ReplayResult replay_session(std::istream& transcript);

}  // namespace smoothset
