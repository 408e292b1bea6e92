#pragma once

#include <cmath>

namespace smoothset {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Forward-mode derivative value: a function value together with its two
// partial derivatives at the evaluation point. Arithmetic on Dual encodes
// the chain rule, so evaluating an expression tree in Dual arithmetic with
// seeds (1,0)/(0,1) on x/y yields exact partials.
struct Dual {
  double value = 0.0;
  double dx = 0.0;
  double dy = 0.0;

  static Dual constant(double v) { return {v, 0.0, 0.0}; }
  static Dual var_x(double v) { return {v, 1.0, 0.0}; }
  static Dual var_y(double v) { return {v, 0.0, 1.0}; }

  bool is_nan() const { return std::isnan(value); }
};

inline Dual dual_nan() {
  const double n = std::nan("");
  return {n, n, n};
}

inline Dual operator-(const Dual& a) { return {-a.value, -a.dx, -a.dy}; }

inline Dual operator+(const Dual& a, const Dual& b) {
  return {a.value + b.value, a.dx + b.dx, a.dy + b.dy};
}

inline Dual operator-(const Dual& a, const Dual& b) {
  return {a.value - b.value, a.dx - b.dx, a.dy - b.dy};
}

inline Dual operator*(const Dual& a, const Dual& b) {
  return {a.value * b.value, a.dx * b.value + a.value * b.dx,
          a.dy * b.value + a.value * b.dy};
}

inline Dual operator*(double s, const Dual& a) {
  return {s * a.value, s * a.dx, s * a.dy};
}

inline Dual operator+(const Dual& a, double s) {
  return {a.value + s, a.dx, a.dy};
}

}  // namespace smoothset
