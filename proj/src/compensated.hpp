#pragma once

// Error-free transform helpers shared by the summation-heavy paths.

namespace permlab::detail {

struct TwoDouble {
  double hi = 0.0;
  double lo = 0.0;
  double rounded() const { return hi + lo; }
};

inline TwoDouble two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

inline TwoDouble dd_add(TwoDouble a, double b) {
  TwoDouble s = two_sum(a.hi, b);
  double lo = s.lo + a.lo;
  return two_sum(s.hi, lo);
}

inline TwoDouble dd_add(TwoDouble a, TwoDouble b) {
  TwoDouble s = dd_add(a, b.hi);
  return dd_add(s, b.lo);
}

}  // namespace permlab::detail
