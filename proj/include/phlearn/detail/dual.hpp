#pragma once

#include <cmath>

namespace phlearn::detail {

/// Forward-mode scalar carrying one derivative direction. Used to obtain
/// exact parameter Jacobians of the representation coefficients without
/// duplicating their formulas.
struct Dual {
  double v = 0.0;
  double g = 0.0;

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT(google-explicit-constructor)
  Dual(double value, double grad) : v(value), g(grad) {}

  Dual& operator+=(const Dual& o) {
    v += o.v;
    g += o.g;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    g -= o.g;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    g = g * o.v + v * o.g;
    v *= o.v;
    return *this;
  }
};

inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator-(const Dual& a) { return {-a.v, -a.g}; }
inline Dual operator/(const Dual& a, const Dual& b) {
  return {a.v / b.v, (a.g * b.v - a.v * b.g) / (b.v * b.v)};
}

inline Dual exp(const Dual& a) {
  const double e = std::exp(a.v);
  return {e, e * a.g};
}
inline Dual sqrt(const Dual& a) {
  const double s = std::sqrt(a.v);
  return {s, s > 0.0 ? a.g / (2.0 * s) : 0.0};
}

inline double value(double x) { return x; }
inline double value(const Dual& x) { return x.v; }
inline double grad(double) { return 0.0; }
inline double grad(const Dual& x) { return x.g; }

}  // namespace phlearn::detail
