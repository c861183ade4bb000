#pragma once

#include <vector>

#include "partition.hpp"

namespace diagex {

namespace detail {

// log of a formal power series with constant term 1, via
// l_n = a_n - (1/n) sum_{k=1}^{n-1} k l_k a_{n-k}.
inline std::vector<Rational> formal_log(const std::vector<Rational>& a) {
  std::vector<Rational> l(a.size(), Rational(0));
  for (size_t n = 1; n < a.size(); ++n) {
    Rational s = 0;
    for (size_t k = 1; k < n; ++k) s += Rational(k) * l[k] * a[n - k];
    l[n] = a[n] - s / Rational(static_cast<int>(n));
  }
  return l;
}

}  // namespace detail

// Checks, in exact rational arithmetic, that through the given order
//   sum_n Cf_U(n) x^n / (n!)^2   equals  log sum_n x^n / (n!)^2
//   sum_n Cf_Pi(2n) y^n / (2n)!  equals  log sum_n y^n / (2n)!
inline bool verify_generating_functions(int order) {
  if (order < 1 || order > kSeriesOrderCap)
    throw std::invalid_argument("series order out of range");
  const size_t sz = static_cast<size_t>(order) + 1;

  std::vector<Rational> a(sz);
  for (size_t n = 0; n < sz; ++n) {
    Weight f = factorial(static_cast<int>(n));
    a[n] = Rational(Weight(1), f * f);
  }
  const auto la = detail::formal_log(a);
  for (int n = 1; n <= order; ++n) {
    Weight f = factorial(n);
    if (la[static_cast<size_t>(n)] != Rational(cf_u_single(n), f * f)) return false;
  }

  std::vector<Rational> b(sz);
  for (size_t n = 0; n < sz; ++n)
    b[n] = Rational(Weight(1), factorial(2 * static_cast<int>(n)));
  const auto lb = detail::formal_log(b);
  for (int n = 1; n <= order; ++n)
    if (lb[static_cast<size_t>(n)] != Rational(cf_pi_single(2 * n), factorial(2 * n))) return false;

  return true;
}

}  // namespace diagex
