#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "smoothset/errors.hpp"
#include "smoothset/scalar_expr.hpp"
#include "smoothset/types.hpp"

namespace smoothset {

// Positive, finite sharpness parameter. Larger values tighten the smooth
// region around the exact set it approximates.
class Sharpness {
 public:
  explicit Sharpness(double value) : value_(value) {
    if (!(value > 0.0) || !std::isfinite(value))
      throw InvalidSharpness("sharpness must be positive and finite");
  }
  double value() const { return value_; }

 private:
  double value_;
};

enum class RegionKind { kLeaf, kEvenPowerLeaf, kNegate, kIntersect, kUnion };

enum class Membership { kInside, kOutside, kBoundary, kUndefined };

struct RegionNode;
using RegionPtr = std::shared_ptr<const RegionNode>;

// Immutable tree of smooth set operations over sharpened inequality leaves.
//
// Every node evaluates to a scalar field F with the membership contract
// "inside iff F <= 1". All computation happens on the log-field L = ln F,
// which stays representable where F itself would overflow: a single leaf at
// sharpness 50 already exceeds the double range a few units outside its
// boundary. Membership is decided exclusively on L <= 0.
class Region {
 public:
  Region() = default;
  explicit Region(RegionPtr node) : node_(std::move(node)) {}

  bool valid() const { return node_ != nullptr; }
  const RegionPtr& node() const { return node_; }

 private:
  RegionPtr node_;
};

struct RegionNode {
  RegionKind kind;
  ScalarExpr expr;       // leaves only
  double sharpness = 0;  // kLeaf
  int even_power = 0;    // kEvenPowerLeaf
  std::string source;    // original inequality text, kept for export; may be empty
  std::vector<Region> children;
};

// f(x,y) <= 0 encoded as the leaf field e^{a f}; log-field a*f.
// `source`, when given, is the original body text and is preferred verbatim
// by the Desmos exporter.
Region from_inequality(ScalarExpr f, Sharpness a, std::string source = {});

// f(x,y)^(2a) <= 1 with integer a >= 1; log-field 2a*ln|f|. Keeps the
// even-power encoding's known artifact: -1 <= f < 0 also counts inside.
Region from_even_power(ScalarExpr f, int a, std::string source = {});

// Complement. Log-field is exactly negated; double negation restores the
// field bit for bit. Boundaries stay included on both sides.
Region negate(Region r);

// Sum of child fields; log-field is a stabilized log-sum-exp of the child
// log-fields. Throws EmptyOperandList.
Region intersect(std::vector<Region> children);

// Harmonic-mean union (reciprocal of the sum of reciprocal fields);
// log-field is -logsumexp(-L_i). Throws EmptyOperandList.
Region unite(std::vector<Region> children);

// Log-field L = ln F. Finite, +-infinity, or NaN; NaN anywhere in the
// subtree propagates. Never overflows for representable inputs.
double log_field(const Region& r, Point p);

// F itself, i.e. exp(log_field). May underflow to 0 or overflow to +inf;
// membership decisions never go through this path.
double field(const Region& r, Point p);

// Log-field with exact forward-mode partials.
Dual log_field_dual(const Region& r, Point p);

// Gradient of the log-field: (dL/dx, dL/dy).
Point grad_log_field(const Region& r, Point p);

// Inside if L < -boundary_tol, Outside if L > boundary_tol, Boundary when
// |L| <= boundary_tol, Undefined when L is NaN.
Membership membership(const Region& r, Point p, double boundary_tol = 1e-9);

const char* to_string(Membership m);

// Monotone squashing g(F) = 1 - 2^-F of the final field into [0, 1), with
// the boundary mapped to exactly 0.5 (inside iff g <= 0.5). `doubled`
// selects the [0, 2) variant 2(1 - 2^-F). Export-only: the result does not
// compose with further set operations.
double bounded_field(const Region& r, Point p, bool doubled = false);

// Two inequalities combined multiplicatively: inside iff
// (f1 - 1)(f2 - 1) <= 0. Not composable with Region trees.
struct RawProductRegion {
  ScalarExpr f1;
  ScalarExpr f2;
};

Membership xor_product_membership(const RawProductRegion& r, Point p);

// Differentiable min/max of single-variable functions g_i(x) (evaluated with
// y = 0): smooth_min = -(1/a) ln sum_i e^{-a g_i(x)}, and dually for max.
// Bracket guarantees: min - ln(n)/a <= smooth_min <= min, and
// max <= smooth_max <= max + ln(n)/a.
double smooth_min(std::span<const ScalarExpr> gs, Sharpness a, double x);
double smooth_max(std::span<const ScalarExpr> gs, Sharpness a, double x);

// Boundary of the smooth union of y <= 0 and y - x <= 0, solved for y:
// ln(1 + e^{ax})/a, computed in overflow-free form. At a = 1 this is the
// softplus activation; as a grows it approaches max(x, 0).
double softplus_boundary(Sharpness a, double x);

// sum_i min(F(p_i), clip) - N, floored at 0. Each per-point field is
// computed as e^{min(L, ln clip)} so deep-outside points saturate at `clip`
// instead of overflowing. Throws EmptyOperandList on an empty point list.
double membership_loss(const Region& r, std::span<const Point> points,
                       double clip = 1e6);

// Bisection root of L(x, .) on [y_lo, y_hi] to within tol. Throws
// NoSignChange when the endpoints do not straddle the boundary.
double boundary_solve_y(const Region& r, double x, double y_lo, double y_hi,
                        double tol);

// True when every leaf expression is smooth at p (see
// ScalarExpr::smooth_at) and no even-power leaf is within `margin` of its
// log singularity. Test-point filter for gradient checks.
bool region_smooth_at(const Region& r, Point p, double margin);

// Stabilized ln(sum_i e^{v_i}); NaN if any input is NaN.
double log_sum_exp(std::span<const double> values);

}  // namespace smoothset
