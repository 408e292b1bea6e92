#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "smoothset/region.hpp"
#include "smoothset/scalar_expr.hpp"
#include "support.hpp"

using namespace smoothset;

namespace {

Region disk_a() {  // x^2+y^2 <= 4
  return from_inequality(parse_scalar("x^2+y^2-4"), Sharpness(50));
}

Region disk_b() {  // (x-2.5)^2+y^2 <= 4
  return from_inequality(parse_scalar("(x-2.5)^2+y^2-4"), Sharpness(50));
}

// Literal field arithmetic: products and sums of raw exponentials. Only
// valid while every intermediate stays inside double range, which makes it
// an independent check of the log-domain evaluation on moderate inputs.
double naive_field(const Region& r, Point p) {
  const RegionNode& n = *r.node();
  switch (n.kind) {
    case RegionKind::kLeaf:
      return std::exp(n.sharpness * n.expr.eval(p));
    case RegionKind::kEvenPowerLeaf:
      return std::pow(n.expr.eval(p), 2.0 * n.even_power);
    case RegionKind::kNegate:
      return 1.0 / naive_field(n.children[0], p);
    case RegionKind::kIntersect: {
      double s = 0.0;
      for (const Region& c : n.children) s += naive_field(c, p);
      return s;
    }
    case RegionKind::kUnion: {
      double s = 0.0;
      for (const Region& c : n.children) s += 1.0 / naive_field(c, p);
      return 1.0 / s;
    }
  }
  return std::nan("");
}

}  // namespace

TEST_CASE("leaf log-field is sharpness times the inequality") {
  const Region r = disk_a();
  CHECK(log_field(r, {0, 0}) == doctest::Approx(-200.0));
  CHECK(membership(r, {0, 0}) == Membership::kInside);
  CHECK(log_field(r, {2, 0}) == doctest::Approx(0.0));
  CHECK(membership(r, {2, 0}) == Membership::kBoundary);
  CHECK(log_field(r, {3, 0}) == doctest::Approx(250.0));
  CHECK(membership(r, {3, 0}) == Membership::kOutside);
}

TEST_CASE("sharpness must be positive and finite") {
  CHECK_THROWS_AS(Sharpness(0.0), InvalidSharpness);
  CHECK_THROWS_AS(Sharpness(-3.0), InvalidSharpness);
  CHECK_THROWS_AS(Sharpness(std::nan("")), InvalidSharpness);
  CHECK_THROWS_AS(from_even_power(parse_scalar("x"), 0), InvalidSharpness);
}

TEST_CASE("even-power leaf keeps the negative-solution artifact") {
  const Region r = from_even_power(parse_scalar("x"), 1);
  CHECK(membership(r, {0.5, 0}) == Membership::kInside);
  CHECK(log_field(r, {0.5, 0}) == doctest::Approx(2.0 * std::log(0.5)));
  CHECK(membership(r, {-0.5, 0}) == Membership::kInside);  // spurious but intended
  CHECK(membership(r, {2, 0}) == Membership::kOutside);
  CHECK(log_field(r, {0.0, 0}) == -std::numeric_limits<double>::infinity());
  CHECK(membership(r, {0.0, 0}) == Membership::kInside);
}

TEST_CASE("negation flips the log-field exactly") {
  const Region r = disk_a();
  const Region nr = negate(r);
  CHECK(log_field(nr, {0, 0}) == doctest::Approx(200.0));
  CHECK(membership(nr, {0, 0}) == Membership::kOutside);
  const auto pts = testutil::random_points({-3, 3, -3, 3}, 200, 11);
  for (const Point p : pts) {
    CHECK(log_field(nr, p) == -log_field(r, p));
    CHECK(log_field(negate(negate(r)), p) == log_field(r, p));  // involution
  }
}

TEST_CASE("intersection is a stabilized log-sum-exp") {
  const Region r = intersect({disk_a(), disk_b()});
  // At the origin: leaf log-fields are -200 and 50*((0-2.5)^2-4) = 112.5.
  CHECK(log_field(r, {0, 0}) ==
        doctest::Approx(112.5 + std::log1p(std::exp(-312.5))));
  CHECK(membership(r, {0, 0}) == Membership::kOutside);

  const Region single = intersect({disk_a()});
  const Region self3 = intersect({disk_a(), disk_a(), disk_a()});
  const auto pts = testutil::random_points({-3, 5, -4, 4}, 200, 12);
  for (const Point p : pts) {
    CHECK(log_field(single, p) == log_field(disk_a(), p));
    CHECK(log_field(self3, p) ==
          doctest::Approx(log_field(disk_a(), p) + std::log(3.0)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(intersect({}), EmptyOperandList);
}

TEST_CASE("union is the harmonic-mean combination") {
  const Region r = unite({disk_a(), disk_b()});
  CHECK(log_field(r, {0, 0}) == doctest::Approx(-200.0));
  CHECK(membership(r, {0, 0}) == Membership::kInside);
  // (5,0): both leaves positive, 1050 and 112.5; union tracks the smaller.
  CHECK(log_field(r, {5, 0}) == doctest::Approx(112.5));
  CHECK(membership(r, {5, 0}) == Membership::kOutside);

  const Region self2 = unite({disk_a(), disk_a()});
  const auto pts = testutil::random_points({-3, 5, -4, 4}, 500, 13);
  for (const Point p : pts) {
    // self-union shifts the log-field down by exactly ln 2
    CHECK(std::abs(log_field(self2, p) - (log_field(disk_a(), p) - std::log(2.0))) <=
          1e-12);
  }
  CHECK_THROWS_AS(unite({}), EmptyOperandList);
}

TEST_CASE("log-domain evaluation matches the literal field where it fits") {
  // sharpness small enough that raw exponentials stay finite
  const Region a = from_inequality(parse_scalar("x^2+y^2-4"), Sharpness(5));
  const Region b = from_inequality(parse_scalar("(x-1.5)^2+y^2-4"), Sharpness(5));
  const Region c = from_inequality(parse_scalar("(x-0.7)^2+(y-1.5)^2-4"), Sharpness(5));
  const Region composite = intersect({a, unite({b, negate(c)})});
  const auto pts = testutil::random_points({-3, 4, -3, 4}, 500, 14);
  for (const Point p : pts) {
    const double nf = naive_field(composite, p);
    if (!std::isfinite(nf) || nf == 0.0) continue;
    CHECK(log_field(composite, p) == doctest::Approx(std::log(nf)).epsilon(1e-10));
  }
}

TEST_CASE("composite example: intersection with a union, hand-evaluated") {
  const Region a = from_inequality(parse_scalar("x^2+y^2-4"), Sharpness(5));
  const Region b = from_inequality(parse_scalar("(x-1.5)^2+y^2-4"), Sharpness(5));
  const Region c = from_inequality(parse_scalar("(x-0.7)^2+(y-1.5)^2-4"), Sharpness(5));
  const Region r = intersect({a, unite({b, c})});
  // At (0.5, 0): leaf log-fields -18.75, -15, -8.55.
  const double lu = -std::log(std::exp(15.0 - 15.0) + std::exp(8.55 - 15.0)) - 15.0;
  const double expect = std::log(std::exp(-18.75 - lu) + 1.0) + lu;
  CHECK(log_field(r, {0.5, 0}) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(log_field(r, {0.5, 0}) < 0.0);  // deep inside
  CHECK(membership(r, {0.5, 0}) == Membership::kInside);
}

TEST_CASE("field is exp of the log-field, saturating at the double range") {
  const Region r = disk_a();
  CHECK(field(r, {2, 0}) == doctest::Approx(1.0));
  CHECK(field(r, {0, 0}) == 0.0);  // e^-200 underflows
  CHECK(field(r, {2.1, 0}) == doctest::Approx(std::exp(20.5)).epsilon(1e-12));
  CHECK(std::isinf(field(r, {5, 0})));  // e^1050 overflows
  CHECK(membership(r, {5, 0}) == Membership::kOutside);  // still decided on L
}

TEST_CASE("NaN propagates to Undefined membership") {
  const Region r = from_inequality(parse_scalar("ln(x)"), Sharpness(50));
  CHECK(std::isnan(log_field(r, {-1, 0})));
  CHECK(membership(r, {-1, 0}) == Membership::kUndefined);
  const Region mixed = intersect({disk_a(), r});
  CHECK(std::isnan(log_field(mixed, {-1, 0})));
  CHECK(membership(mixed, {-1, 0}) == Membership::kUndefined);
}

TEST_CASE("gradient: leaf is sharpness times the expression gradient") {
  const Region r = disk_a();
  const Point g = grad_log_field(r, {1, 1});
  CHECK(g.x == doctest::Approx(100.0));
  CHECK(g.y == doctest::Approx(100.0));
}

TEST_CASE("gradient: union of identical leaves keeps the single-leaf gradient") {
  const Region r = unite({disk_a(), disk_a()});
  const auto pts = testutil::random_points({-3, 3, -3, 3}, 100, 15);
  for (const Point p : pts) {
    const Point g = grad_log_field(r, p);
    const Point g1 = grad_log_field(disk_a(), p);
    CHECK(g.x == doctest::Approx(g1.x).epsilon(1e-12));
    CHECK(g.y == doctest::Approx(g1.y).epsilon(1e-12));
  }
}

TEST_CASE("gradient: matches central differences on the circle-pair union") {
  const Region r = unite({disk_a(), disk_b()});
  const double h = 1e-5;
  int checked = 0;
  std::uint64_t seed = 16;
  while (checked < 100) {
    for (const Point p : testutil::random_points({-3, 5, -4, 4}, 256, seed++)) {
      if (checked >= 100) break;
      const double l = log_field(r, p);
      if (std::isnan(l) || std::abs(l) <= 1e-3) continue;
      const Point fd = testutil::fd_grad_log_field(r, p, h);
      if (std::isnan(fd.x) || std::isnan(fd.y)) continue;
      const Point ad = grad_log_field(r, p);
      CHECK(std::abs(ad.x - fd.x) / std::max(1.0, std::abs(fd.x)) < 1e-5);
      CHECK(std::abs(ad.y - fd.y) / std::max(1.0, std::abs(fd.y)) < 1e-5);
      ++checked;
    }
  }
}

TEST_CASE("bounded transform: monotone squashing with an exact half at the boundary") {
  const Region boundary = from_inequality(parse_scalar("x-x"), Sharpness(50));
  CHECK(bounded_field(boundary, {1, 1}) == 0.5);  // L = 0 exactly

  const Region r = disk_a();
  CHECK(bounded_field(r, {0, 0}) == doctest::Approx(0.0));  // F ~ e^-200
  // F = 2 gives 1 - 2^-2 = 0.75: log-field ln 2 via an explicit constant leaf
  const Region f2 = from_inequality(parse_scalar("x"), Sharpness(1));
  CHECK(bounded_field(f2, {std::log(2.0), 0}) == doctest::Approx(0.75));
  CHECK(bounded_field(f2, {std::log(2.0), 0}, true) == doctest::Approx(1.5));

  // strictly increasing in L, range [0, 1)
  double prev = -1.0;
  for (double l = -30.0; l <= 30.0; l += 0.25) {
    const double g = bounded_field(f2, {l, 0});
    CHECK(g > prev);
    CHECK(g >= 0.0);
    CHECK(g < 1.0);
    prev = g;
  }
  // deep outside saturates below 1
  CHECK(bounded_field(f2, {1e6, 0}) < 1.0);
  CHECK(bounded_field(f2, {1e6, 0}, true) < 2.0);
}

TEST_CASE("raw product membership follows the literal inequality") {
  const RawProductRegion r{parse_scalar("x^2+y^2-4"),
                           parse_scalar("(x-2.5)^2+y^2-4")};
  CHECK(xor_product_membership(r, {0, 0}) == Membership::kInside);     // -5 * 1.25
  CHECK(xor_product_membership(r, {1.25, 0}) == Membership::kOutside); // lens of both
  CHECK(xor_product_membership(r, {10, 10}) == Membership::kOutside);  // outside both
  const RawProductRegion undef{parse_scalar("ln(x)"), parse_scalar("y")};
  CHECK(xor_product_membership(undef, {-1, 0}) == Membership::kUndefined);
}

TEST_CASE("smooth min/max: single function is exact, duplicates shift by ln(n)/a") {
  const std::vector<ScalarExpr> one = {parse_scalar("sin(x)")};
  CHECK(smooth_min(one, Sharpness(10), 1.3) == doctest::Approx(std::sin(1.3)));
  CHECK(smooth_max(one, Sharpness(10), 1.3) == doctest::Approx(std::sin(1.3)));

  const std::vector<ScalarExpr> two_zero = {parse_scalar("x-x"), parse_scalar("x-x")};
  CHECK(smooth_min(two_zero, Sharpness(10), 0.7) ==
        doctest::Approx(-std::log(2.0) / 10.0));
  CHECK(smooth_max(two_zero, Sharpness(10), 0.7) ==
        doctest::Approx(std::log(2.0) / 10.0));
  CHECK_THROWS_AS(smooth_min({}, Sharpness(10), 0.0), EmptyOperandList);
}

TEST_CASE("smooth min/max: bracketed by the exact extrema") {
  const std::vector<ScalarExpr> min_set = {
      parse_scalar("sin(x)"), parse_scalar("x+5"), parse_scalar("-x+5"),
      parse_scalar("-(x/3)^2+10")};
  const std::vector<ScalarExpr> max_set = {
      parse_scalar("x-5"), parse_scalar("-x-5"), parse_scalar("sin(x)")};
  const Sharpness a(10);
  const double slack = 1e-12;

  // hand value at x = 0: smooth min of {0, 5, 5, 10}
  const double expect0 =
      -std::log(1.0 + 2.0 * std::exp(-50.0) + std::exp(-100.0)) / 10.0;
  CHECK(smooth_min(min_set, a, 0.0) == doctest::Approx(expect0));
  CHECK(std::abs(smooth_min(min_set, a, 0.0)) < 1e-12);  // ~ -4e-23
  CHECK(std::abs(smooth_max(max_set, a, 0.0)) < 1e-12);

  for (int i = 0; i <= 1000; ++i) {
    const double x = -8.0 + 16.0 * i / 1000.0;
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& g : min_set) mn = std::min(mn, g.eval({x, 0}));
    const double sm = smooth_min(min_set, a, x);
    CHECK(mn - sm >= -slack);
    CHECK(mn - sm <= std::log(4.0) / 10.0 + slack);

    double mx = -std::numeric_limits<double>::infinity();
    for (const auto& g : max_set) mx = std::max(mx, g.eval({x, 0}));
    const double sM = smooth_max(max_set, a, x);
    CHECK(sM - mx >= -slack);
    CHECK(sM - mx <= std::log(3.0) / 10.0 + slack);
  }
}

TEST_CASE("smooth max is the dual of smooth min") {
  const std::vector<ScalarExpr> gs = {parse_scalar("x-5"), parse_scalar("-x-5"),
                                      parse_scalar("sin(x)")};
  std::vector<ScalarExpr> neg;
  for (const auto& g : gs) neg.push_back(-g);
  for (double x = -6.0; x <= 6.0; x += 0.37) {
    CHECK(smooth_max(gs, Sharpness(10), x) ==
          doctest::Approx(-smooth_min(neg, Sharpness(10), x)).epsilon(1e-14));
  }
}

TEST_CASE("softplus boundary: exact at zero, ReLU in the sharp limit") {
  CHECK(softplus_boundary(Sharpness(1), 0.0) == doctest::Approx(std::log(2.0)));
  CHECK(softplus_boundary(Sharpness(500), 1.0) == doctest::Approx(1.0));
  // equals the smooth max of {0, x}
  const std::vector<ScalarExpr> relu = {parse_scalar("x-x"), parse_scalar("x")};
  for (double a : {1.0, 5.0, 20.0}) {
    for (double x = -5.0; x <= 5.0; x += 0.173) {
      CHECK(std::abs(softplus_boundary(Sharpness(a), x) -
                     smooth_max(relu, Sharpness(a), x)) < 1e-12);
    }
  }
  // no overflow far out
  CHECK(softplus_boundary(Sharpness(50), 600.0) == doctest::Approx(600.0));
  CHECK(std::isfinite(softplus_boundary(Sharpness(50), -600.0)));
}

TEST_CASE("membership loss: clipped field sum minus the point count") {
  const Region r = disk_a();
  const std::vector<Point> inside = {{0, 0}, {0.5, 0.5}, {-1, 0}};
  CHECK(membership_loss(r, inside) == 0.0);

  const Region boundary = from_inequality(parse_scalar("x-x"), Sharpness(50));
  const std::vector<Point> anywhere = {{1, 2}, {3, 4}};
  CHECK(membership_loss(boundary, anywhere) == doctest::Approx(0.0));  // F = 1 each

  const std::vector<Point> far = {{10, 0}};
  CHECK(membership_loss(r, far, 1e6) == doctest::Approx(1e6 - 1.0));
  CHECK_THROWS_AS(membership_loss(r, {}, 1e6), EmptyOperandList);
}

TEST_CASE("boundary_solve_y: bisection on the vertical line") {
  const Region r = disk_a();
  CHECK(boundary_solve_y(r, 0.0, 0.0, 3.0, 1e-12) == doctest::Approx(2.0));
  CHECK_THROWS_AS(boundary_solve_y(r, 0.0, -1.0, 1.0, 1e-12), NoSignChange);

  // softplus region: union of y <= 0 and y - x <= 0 at a = 1
  const Region sp = unite({from_inequality(parse_scalar("y"), Sharpness(1)),
                           from_inequality(parse_scalar("y-x"), Sharpness(1))});
  CHECK(boundary_solve_y(sp, 0.0, -20.0, 20.0, 1e-12) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("region smoothness filter rejects domain edges") {
  const Region frac = from_inequality(parse_scalar("x^1.4-y"), Sharpness(50));
  CHECK(region_smooth_at(frac, {2.0, 0.0}, 1e-3));
  CHECK_FALSE(region_smooth_at(frac, {0.0, 0.0}, 1e-3));
  CHECK_FALSE(region_smooth_at(frac, {-1.0, 0.0}, 1e-3));
  const Region ep = from_even_power(parse_scalar("x"), 1);
  CHECK_FALSE(region_smooth_at(ep, {1e-6, 0.0}, 1e-3));
  CHECK(region_smooth_at(ep, {0.5, 0.0}, 1e-3));
}
