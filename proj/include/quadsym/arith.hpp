#pragma once

// Integer and rational helpers plus the classical symbols (Legendre, Hilbert)
// used throughout the library.

#include <gmpxx.h>

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace quadsym {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Place of Q: a prime, or kInfinity for the real place.
inline constexpr long kInfinity = 0;

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("make_rational: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational make_rational(long num, long den = 1) {
  return make_rational(BigInt(std::to_string(num)), BigInt(std::to_string(den)));
}

inline BigInt to_big(long x) { return BigInt(std::to_string(x)); }

inline long to_ll(const BigInt& x) {
  if (!x.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits");
  return x.get_si();
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline std::string to_string(const Rational& r) { return r.get_str(); }

/// Least nonnegative residue.
inline long mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

inline BigInt mod(const BigInt& a, const BigInt& m) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline long gcd(long a, long b) { return std::gcd(a, b); }

inline BigInt ipow(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline long ipow(long base, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

inline BigInt powmod(const BigInt& base, const BigInt& e, const BigInt& m) {
  BigInt r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

/// Inverse of a modulo m; throws if not invertible.
inline BigInt inverse_mod(const BigInt& a, const BigInt& m) {
  BigInt r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw std::invalid_argument("inverse_mod: not invertible");
  return r;
}

inline long inverse_mod(long a, long m) {
  return to_ll(inverse_mod(to_big(mod(a, m)), to_big(m)));
}

inline bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<long> primes_up_to(long bound) {
  std::vector<long> out;
  if (bound < 2) return out;
  std::vector<bool> sieve(static_cast<std::size_t>(bound + 1), true);
  for (long i = 2; i <= bound; ++i) {
    if (!sieve[i]) continue;
    out.push_back(i);
    for (long j = i * i; j <= bound; j += i) sieve[j] = false;
  }
  return out;
}

/// Prime factorisation of |n| (n != 0) as (prime, exponent) pairs, ascending.
inline std::vector<std::pair<long, int>> factorize(long n) {
  if (n == 0) throw std::invalid_argument("factorize: zero");
  n = std::labs(n);
  std::vector<std::pair<long, int>> out;
  for (long d = 2; d * d <= n; ++d) {
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    if (e) out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline bool is_squarefree(long n) {
  if (n == 0) return false;
  for (auto [q, e] : factorize(n))
    if (e > 1) return false;
  return true;
}

/// Exponent of p in a nonzero integer.
inline int valuation(const BigInt& n, long p) {
  if (n == 0) throw std::invalid_argument("valuation of zero");
  BigInt m = abs(n);
  BigInt bp = to_big(p);
  int v = 0;
  while (mpz_divisible_p(m.get_mpz_t(), bp.get_mpz_t())) {
    m /= bp;
    ++v;
  }
  return v;
}

inline int valuation(long n, long p) { return valuation(to_big(n), p); }

/// v_p of a nonzero rational.
inline int valuation(const Rational& r, long p) {
  if (r == 0) throw std::invalid_argument("valuation of zero");
  return valuation(BigInt(r.get_num()), p) - valuation(BigInt(r.get_den()), p);
}

/// Sum of the base-p digits of n >= 0.
inline long digit_sum(long n, long p) {
  long s = 0;
  for (; n > 0; n /= p) s += n % p;
  return s;
}

/// v_p(n!) = (n - digit_sum(n)) / (p - 1).
inline long factorial_valuation(long n, long p) {
  return (n - digit_sum(n, p)) / (p - 1);
}

/// Legendre symbol (a/p) for an odd prime p, via Euler's criterion.
inline int legendre_symbol(long a, long p) {
  if (p <= 2 || !is_prime(p))
    throw std::invalid_argument("legendre_symbol: p must be an odd prime");
  long r = mod(a, p);
  if (r == 0) return 0;
  BigInt e = powmod(to_big(r), to_big((p - 1) / 2), to_big(p));
  return e == 1 ? 1 : -1;
}

/// Local Hilbert symbol (a,b)_place, place a prime or kInfinity.
/// At p = 2 the standard epsilon/omega exponent formula is used.
inline int hilbert_symbol(long a, long b, long place) {
  if (a == 0 || b == 0) throw std::invalid_argument("hilbert_symbol: arguments must be nonzero");
  if (place == kInfinity) return (a < 0 && b < 0) ? -1 : 1;
  const long p = place;
  if (!is_prime(p)) throw std::invalid_argument("hilbert_symbol: place must be prime or infinity");
  int alpha = 0, beta = 0;
  long u = a, v = b;
  while (u % p == 0) {
    u /= p;
    ++alpha;
  }
  while (v % p == 0) {
    v /= p;
    ++beta;
  }
  if (p != 2) {
    const long eps = (p - 1) / 2;
    int sign = ((static_cast<long>(alpha) * beta * eps) % 2 == 0) ? 1 : -1;
    if (beta % 2) sign *= legendre_symbol(u, p);
    if (alpha % 2) sign *= legendre_symbol(v, p);
    return sign;
  }
  auto eps2 = [](long w) { return mod((mod(w, 8) - 1) / 2, 2); };
  auto omega2 = [](long w) {
    long r = mod(w, 8);
    return mod((r * r - 1) / 8, 2);
  };
  long e = eps2(u) * eps2(v) + alpha * omega2(v) + beta * omega2(u);
  return (e % 2 == 0) ? 1 : -1;
}

/// The unique (x, y) with a*x - p*y = 1 and 0 <= x <= p-1.
inline std::pair<long, long> extended_bezout(long a, long p) {
  if (p <= 1) throw std::invalid_argument("extended_bezout: p must be > 1");
  if (mod(a, p) == 0 || gcd(std::labs(a), p) != 1)
    throw std::invalid_argument("extended_bezout: a must be coprime to p");
  long x = inverse_mod(a, p);
  // a*x - 1 is divisible by p
  long y = (a * x - 1) / p;
  return {x, y};
}

}  // namespace quadsym
