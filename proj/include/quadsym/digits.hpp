#pragma once

// p-adic digit expansions and the matrices gamma_{a,p^n} built from them.

#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "quadsym/arith.hpp"
#include "quadsym/mat2.hpp"

namespace quadsym {

/// Digits a_0, ..., a_{n-1} of a; for negative a the digits of |a|, negated.
inline std::vector<long> signed_digits(long a, long p, int n) {
  std::vector<long> d(static_cast<std::size_t>(n), 0);
  long x = std::labs(a);
  for (int i = 0; i < n; ++i) {
    d[static_cast<std::size_t>(i)] = x % p;
    x /= p;
  }
  if (a < 0)
    for (auto& v : d) v = -v;
  return d;
}

inline long from_digits(const std::vector<long>& d, long p) {
  long a = 0;
  for (auto it = d.rbegin(); it != d.rend(); ++it) a = a * p + *it;
  return a;
}

/// gamma_{a,p^n} = gamma_{u_{n-1}} ... gamma_{u_1} gamma_{a_0,p}, gamma_u = [[1,u],[0,p]],
/// gamma_{a_0,p} = [[a_0, y],[p, x]] with a_0 x - p y = 1.
inline IntMat2 gamma_a_pn(long a, long p, int n) {
  if (!is_prime(p)) throw std::invalid_argument("gamma_a_pn: p must be prime");
  if (n < 1) throw std::invalid_argument("gamma_a_pn: level must be >= 1");
  if (mod(a, p) == 0) throw std::invalid_argument("gamma_a_pn: p divides a");
  if (std::labs(a) >= ipow(p, n)) throw std::invalid_argument("gamma_a_pn: |a| must be < p^n");
  auto d = signed_digits(a, p, n);
  auto [x, y] = extended_bezout(d[0], p);
  IntMat2 g{d[0], y, p, x};
  for (int i = 1; i < n; ++i) g = IntMat2{1, d[static_cast<std::size_t>(i)], 0, p} * g;
  return g;
}

}  // namespace quadsym
