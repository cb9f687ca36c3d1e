#pragma once

#include <cmath>

namespace funcrate::detail {

// Double-double accumulation. The integral sums and their difference must
// round from the same real number no matter which of the two algebraically
// equal routes computed them, so every sum is carried exactly (to ~1e-32
// relative) and rounded to double exactly once, at the end.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;
};

// Knuth two-sum: s + e == a + b exactly.
inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  double bv = s - a;
  e = (a - (s - bv)) + (b - bv);
}

// Requires |a| >= |b| or a == 0.
inline void fast_two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  e = b - (s - a);
}

inline DoubleDouble dd_add(DoubleDouble a, double b) {
  double s, e;
  two_sum(a.hi, b, s, e);
  e += a.lo;
  DoubleDouble r;
  fast_two_sum(s, e, r.hi, r.lo);
  return r;
}

inline DoubleDouble dd_add(DoubleDouble a, DoubleDouble b) {
  double s, e;
  two_sum(a.hi, b.hi, s, e);
  e += a.lo + b.lo;
  DoubleDouble r;
  fast_two_sum(s, e, r.hi, r.lo);
  return r;
}

inline DoubleDouble dd_neg(DoubleDouble a) { return {-a.hi, -a.lo}; }

inline DoubleDouble dd_sub(DoubleDouble a, DoubleDouble b) { return dd_add(a, dd_neg(b)); }

// Exact product of two doubles.
inline DoubleDouble dd_prod(double a, double b) {
  DoubleDouble r;
  r.hi = a * b;
  r.lo = std::fma(a, b, -r.hi);
  return r;
}

inline DoubleDouble dd_mul(DoubleDouble a, double b) {
  DoubleDouble p = dd_prod(a.hi, b);
  p.lo += a.lo * b;
  DoubleDouble r;
  fast_two_sum(p.hi, p.lo, r.hi, r.lo);
  return r;
}

inline double dd_round(DoubleDouble a) { return a.hi + a.lo; }

}  // namespace funcrate::detail
