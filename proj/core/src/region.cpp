#include "smoothset/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace smoothset {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double log_sum_exp(std::span<const double> values) {
  double m = -kInf;
  for (double v : values) {
    if (std::isnan(v)) return std::nan("");
    m = std::max(m, v);
  }
  if (m == -kInf || m == kInf) return m;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - m);
  return m + std::log(sum);
}

Region from_inequality(ScalarExpr f, Sharpness a, std::string source) {
  auto n = std::make_shared<RegionNode>();
  n->kind = RegionKind::kLeaf;
  n->expr = std::move(f);
  n->sharpness = a.value();
  n->source = std::move(source);
  return Region(std::move(n));
}

Region from_even_power(ScalarExpr f, int a, std::string source) {
  if (a < 1) throw InvalidSharpness("even-power exponent must be >= 1");
  auto n = std::make_shared<RegionNode>();
  n->kind = RegionKind::kEvenPowerLeaf;
  n->expr = std::move(f);
  n->even_power = a;
  n->source = std::move(source);
  return Region(std::move(n));
}

Region negate(Region r) {
  auto n = std::make_shared<RegionNode>();
  n->kind = RegionKind::kNegate;
  n->children.push_back(std::move(r));
  return Region(std::move(n));
}

Region intersect(std::vector<Region> children) {
  if (children.empty()) throw EmptyOperandList("intersect of no regions");
  auto n = std::make_shared<RegionNode>();
  n->kind = RegionKind::kIntersect;
  n->children = std::move(children);
  return Region(std::move(n));
}

Region unite(std::vector<Region> children) {
  if (children.empty()) throw EmptyOperandList("union of no regions");
  auto n = std::make_shared<RegionNode>();
  n->kind = RegionKind::kUnion;
  n->children = std::move(children);
  return Region(std::move(n));
}

namespace {

double log_field_node(const RegionNode& n, Point p) {
  switch (n.kind) {
    case RegionKind::kLeaf:
      return n.sharpness * n.expr.eval(p);
    case RegionKind::kEvenPowerLeaf: {
      const double f = n.expr.eval(p);
      if (std::isnan(f)) return std::nan("");
      if (f == 0.0) return -kInf;
      return 2.0 * n.even_power * std::log(std::abs(f));
    }
    case RegionKind::kNegate:
      return -log_field_node(*n.children[0].node(), p);
    case RegionKind::kIntersect: {
      std::vector<double> ls;
      ls.reserve(n.children.size());
      for (const Region& c : n.children) ls.push_back(log_field_node(*c.node(), p));
      return log_sum_exp(ls);
    }
    case RegionKind::kUnion: {
      std::vector<double> ls;
      ls.reserve(n.children.size());
      for (const Region& c : n.children) ls.push_back(-log_field_node(*c.node(), p));
      return -log_sum_exp(ls);
    }
  }
  return std::nan("");
}

// log-sum-exp over dual numbers. The value is the stabilized LSE of the
// child values; the partials are the softmax-weighted child partials, with
// weights e^{L_i - L}.
Dual dual_log_sum_exp(const std::vector<Dual>& ls) {
  double m = -kInf;
  for (const Dual& d : ls) {
    if (d.is_nan()) return dual_nan();
    m = std::max(m, d.value);
  }
  if (m == -kInf) return {-kInf, 0.0, 0.0};
  if (m == kInf) return {kInf, 0.0, 0.0};
  double sum = 0.0, dx = 0.0, dy = 0.0;
  for (const Dual& d : ls) {
    const double w = std::exp(d.value - m);
    sum += w;
    dx += w * d.dx;
    dy += w * d.dy;
  }
  return {m + std::log(sum), dx / sum, dy / sum};
}

Dual dual_log_field_node(const RegionNode& n, Point p) {
  switch (n.kind) {
    case RegionKind::kLeaf: {
      const Dual f = n.expr.eval_dual(p);
      if (f.is_nan()) return dual_nan();
      return n.sharpness * f;
    }
    case RegionKind::kEvenPowerLeaf: {
      const Dual f = n.expr.eval_dual(p);
      if (f.is_nan()) return dual_nan();
      if (f.value == 0.0) return {-kInf, 0.0, 0.0};
      const double s = 2.0 * n.even_power;
      // d/dx s*ln|f| = s * f'/f for f != 0
      return {s * std::log(std::abs(f.value)), s * f.dx / f.value,
              s * f.dy / f.value};
    }
    case RegionKind::kNegate:
      return -dual_log_field_node(*n.children[0].node(), p);
    case RegionKind::kIntersect: {
      std::vector<Dual> ls;
      ls.reserve(n.children.size());
      for (const Region& c : n.children) ls.push_back(dual_log_field_node(*c.node(), p));
      return dual_log_sum_exp(ls);
    }
    case RegionKind::kUnion: {
      std::vector<Dual> ls;
      ls.reserve(n.children.size());
      for (const Region& c : n.children) ls.push_back(-dual_log_field_node(*c.node(), p));
      return -dual_log_sum_exp(ls);
    }
  }
  return dual_nan();
}

}  // namespace

double log_field(const Region& r, Point p) { return log_field_node(*r.node(), p); }

double field(const Region& r, Point p) { return std::exp(log_field(r, p)); }

Dual log_field_dual(const Region& r, Point p) {
  return dual_log_field_node(*r.node(), p);
}

Point grad_log_field(const Region& r, Point p) {
  const Dual d = log_field_dual(r, p);
  return {d.dx, d.dy};
}

Membership membership(const Region& r, Point p, double boundary_tol) {
  const double l = log_field(r, p);
  if (std::isnan(l)) return Membership::kUndefined;
  if (l < -boundary_tol) return Membership::kInside;
  if (l > boundary_tol) return Membership::kOutside;
  return Membership::kBoundary;
}

const char* to_string(Membership m) {
  switch (m) {
    case Membership::kInside: return "inside";
    case Membership::kOutside: return "outside";
    case Membership::kBoundary: return "boundary";
    case Membership::kUndefined: return "undefined";
  }
  return "?";
}

double bounded_field(const Region& r, Point p, bool doubled) {
  const double l = log_field(r, p);
  if (std::isnan(l)) return std::nan("");
  // exp2 keeps the contract exact at the boundary: F = 1 gives
  // 1 - 2^-1 = 0.5 bit for bit. The cap on L only matters where g has
  // saturated anyway.
  const double f = std::exp(std::min(l, 700.0));
  double g = 1.0 - std::exp2(-f);
  if (g >= 1.0) g = std::nextafter(1.0, 0.0);  // keep the range open at 1
  return doubled ? 2.0 * g : g;
}

Membership xor_product_membership(const RawProductRegion& r, Point p) {
  const double a = r.f1.eval(p) - 1.0;
  const double b = r.f2.eval(p) - 1.0;
  const double prod = a * b;
  if (std::isnan(prod)) return Membership::kUndefined;
  return prod <= 0.0 ? Membership::kInside : Membership::kOutside;
}

namespace {

double smooth_extremum(std::span<const ScalarExpr> gs, double a, double x,
                       double sign) {
  if (gs.empty()) throw EmptyOperandList("smooth extremum of no functions");
  std::vector<double> scaled;
  scaled.reserve(gs.size());
  for (const ScalarExpr& g : gs) scaled.push_back(sign * a * g.eval({x, 0.0}));
  return sign * log_sum_exp(scaled) / a;
}

}  // namespace

double smooth_min(std::span<const ScalarExpr> gs, Sharpness a, double x) {
  return smooth_extremum(gs, a.value(), x, -1.0);
}

double smooth_max(std::span<const ScalarExpr> gs, Sharpness a, double x) {
  return smooth_extremum(gs, a.value(), x, +1.0);
}

double softplus_boundary(Sharpness a, double x) {
  const double av = a.value();
  return std::max(x, 0.0) + std::log1p(std::exp(-av * std::abs(x))) / av;
}

double membership_loss(const Region& r, std::span<const Point> points,
                       double clip) {
  if (points.empty()) throw EmptyOperandList("membership loss of no points");
  const double log_clip = std::log(clip);
  double sum = 0.0;
  for (const Point& p : points)
    sum += std::exp(std::min(log_field(r, p), log_clip));
  return std::max(sum - static_cast<double>(points.size()), 0.0);
}

double boundary_solve_y(const Region& r, double x, double y_lo, double y_hi,
                        double tol) {
  double lo = y_lo, hi = y_hi;
  double l_lo = log_field(r, {x, lo});
  double l_hi = log_field(r, {x, hi});
  if (std::isnan(l_lo) || std::isnan(l_hi))
    throw NoSignChange("bracket endpoint is undefined");
  if (l_lo == 0.0) return lo;
  if (l_hi == 0.0) return hi;
  if ((l_lo < 0.0) == (l_hi < 0.0))
    throw NoSignChange("no sign change across bracket");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;  // bracket collapsed to adjacent doubles
    const double l_mid = log_field(r, {x, mid});
    if (std::isnan(l_mid)) throw NoSignChange("field undefined inside bracket");
    if (l_mid == 0.0) return mid;
    if ((l_mid < 0.0) == (l_lo < 0.0)) {
      lo = mid;
      l_lo = l_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

bool region_smooth_at(const Region& r, Point p, double margin) {
  const RegionNode& n = *r.node();
  switch (n.kind) {
    case RegionKind::kLeaf:
      return n.expr.smooth_at(p, margin);
    case RegionKind::kEvenPowerLeaf:
      return n.expr.smooth_at(p, margin) &&
             std::abs(n.expr.eval(p)) >= margin;
    default:
      for (const Region& c : n.children)
        if (!region_smooth_at(c, p, margin)) return false;
      return true;
  }
}

}  // namespace smoothset
