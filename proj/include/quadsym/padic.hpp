#pragma once

// Fixed-precision p-adic numbers over Q_p with pessimistic precision tracking,
// together with the Teichmuller lift and the p-adic logarithm/exponential.

#include <algorithm>
#include <climits>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "quadsym/arith.hpp"

namespace quadsym {

/// x = p^valuation * unit + O(p^(valuation + precision)).
///
/// `precision` is the number of known digits beyond the valuation. An exact
/// zero has valuation kInfiniteValuation; an inexact zero O(p^k) has
/// precision 0, unit 0 and valuation k.
class PAdicNum {
 public:
  static constexpr long kInfiniteValuation = LONG_MAX;

  PAdicNum() = default;

  static PAdicNum zero(long p) {
    PAdicNum x;
    x.p_ = p;
    return x;
  }

  /// O(p^k).
  static PAdicNum big_oh(long p, long k) {
    PAdicNum x;
    x.p_ = p;
    x.valuation_ = k;
    x.precision_ = 0;
    return x;
  }

  static PAdicNum from_rational(const Rational& r, long p, int precision) {
    check_prime(p);
    if (precision <= 0) throw std::invalid_argument("PAdicNum: precision must be positive");
    if (r == 0) return zero(p);
    BigInt num = r.get_num(), den = r.get_den();
    int vn = quadsym::valuation(num, p), vd = quadsym::valuation(den, p);
    BigInt bp = to_big(p);
    num /= ipow(bp, vn);
    den /= ipow(bp, vd);
    BigInt m = ipow(bp, precision);
    PAdicNum x;
    x.p_ = p;
    x.valuation_ = vn - vd;
    x.precision_ = precision;
    x.unit_ = mod(num * inverse_mod(mod(den, m), m), m);
    return x;
  }

  static PAdicNum from_integer(long n, long p, int precision) {
    return from_rational(Rational(to_big(n)), p, precision);
  }

  /// Value known modulo p^abs_precision, given as a residue (possibly divisible by p).
  static PAdicNum from_residue(const BigInt& residue, long p, long abs_precision) {
    BigInt m = ipow(to_big(p), static_cast<unsigned long>(abs_precision));
    BigInt r = mod(residue, m);
    if (r == 0) return big_oh(p, abs_precision);
    int v = quadsym::valuation(r, p);
    PAdicNum x;
    x.p_ = p;
    x.valuation_ = v;
    x.precision_ = static_cast<int>(abs_precision - v);
    x.unit_ = r / ipow(to_big(p), v);
    return x;
  }

  long prime() const { return p_; }
  long valuation() const { return valuation_; }
  int precision() const { return precision_; }
  const BigInt& unit() const { return unit_; }
  bool is_exact_zero() const { return valuation_ == kInfiniteValuation; }
  /// True for exact zero and for O(p^k).
  bool is_zero() const { return is_exact_zero() || precision_ == 0; }
  long absolute_precision() const {
    return is_exact_zero() ? kInfiniteValuation : valuation_ + precision_;
  }

  /// Residue modulo p^k for an integral element (valuation >= 0); requires k <= absolute precision.
  BigInt residue(long k) const {
    BigInt m = ipow(to_big(p_), static_cast<unsigned long>(k));
    if (is_exact_zero()) return 0;
    if (k > absolute_precision()) throw std::domain_error("PAdicNum::residue: not enough precision");
    if (valuation_ < 0) throw std::domain_error("PAdicNum::residue: element is not integral");
    if (valuation_ >= k) return 0;
    return mod(unit_ * ipow(to_big(p_), static_cast<unsigned long>(valuation_)), m);
  }

  /// Same value with relative precision capped at n digits.
  PAdicNum truncated(int n) const {
    if (is_zero() || precision_ <= n) return *this;
    PAdicNum x = *this;
    x.precision_ = n;
    x.unit_ = mod(unit_, ipow(to_big(p_), n));
    return x;
  }

  friend PAdicNum operator+(const PAdicNum& a, const PAdicNum& b) {
    same_prime(a, b);
    if (a.is_exact_zero()) return b;
    if (b.is_exact_zero()) return a;
    long v = std::min(a.valuation_, b.valuation_);
    long A = std::min(a.absolute_precision(), b.absolute_precision());
    if (A <= v) return big_oh(a.p_, A);
    BigInt bp = to_big(a.p_);
    BigInt s = a.unit_ * ipow(bp, a.valuation_ - v) + b.unit_ * ipow(bp, b.valuation_ - v);
    PAdicNum r = from_residue(s, a.p_, A - v);
    r.valuation_ += v;
    return r;
  }
  friend PAdicNum operator-(const PAdicNum& a) {
    PAdicNum r = a;
    if (!a.is_zero()) r.unit_ = mod(-a.unit_, ipow(to_big(a.p_), a.precision_));
    return r;
  }
  friend PAdicNum operator-(const PAdicNum& a, const PAdicNum& b) { return a + (-b); }
  friend PAdicNum operator*(const PAdicNum& a, const PAdicNum& b) {
    same_prime(a, b);
    if (a.is_exact_zero() || b.is_exact_zero()) return zero(a.p_);
    int n = std::min(a.precision_, b.precision_);
    long v = a.valuation_ + b.valuation_;
    if (n == 0) {
      // (x + O(p^A))(y + O(p^B)) = xy + O(p^min(A + v(y), B + v(x)))
      long lo = std::min(a.absolute_precision() + b.valuation_, b.absolute_precision() + a.valuation_);
      return big_oh(a.p_, lo);
    }
    PAdicNum r;
    r.p_ = a.p_;
    r.valuation_ = v;
    r.precision_ = n;
    r.unit_ = mod(a.unit_ * b.unit_, ipow(to_big(a.p_), n));
    return r;
  }
  friend PAdicNum operator/(const PAdicNum& a, const PAdicNum& b) {
    same_prime(a, b);
    if (b.is_zero()) throw std::domain_error("PAdicNum: division by zero");
    if (a.is_exact_zero()) return a;
    if (a.precision_ == 0) return big_oh(a.p_, a.valuation_ - b.valuation_);
    int n = std::min(a.precision_, b.precision_);
    BigInt m = ipow(to_big(a.p_), n);
    PAdicNum r;
    r.p_ = a.p_;
    r.valuation_ = a.valuation_ - b.valuation_;
    r.precision_ = n;
    r.unit_ = mod(a.unit_ * inverse_mod(mod(b.unit_, m), m), m);
    return r;
  }
  PAdicNum& operator+=(const PAdicNum& o) { return *this = *this + o; }
  PAdicNum& operator-=(const PAdicNum& o) { return *this = *this - o; }
  PAdicNum& operator*=(const PAdicNum& o) { return *this = *this * o; }

  PAdicNum pow(long e) const {
    if (e < 0) return from_integer(1, p_, std::max(precision_, 1)) / pow(-e);
    PAdicNum r = from_integer(1, p_, std::max(precision_, 1)), base = *this;
    for (; e > 0; e >>= 1) {
      if (e & 1) r = r * base;
      base = base * base;
    }
    return r;
  }

  /// a == b modulo p^k (k no larger than either absolute precision).
  friend bool equal_mod(const PAdicNum& a, const PAdicNum& b, long k) {
    PAdicNum d = a - b;
    if (d.is_exact_zero()) return true;
    if (d.precision_ == 0) return d.valuation_ >= k;
    return d.valuation_ >= k;
  }

  /// Equality up to the common known precision.
  friend bool operator==(const PAdicNum& a, const PAdicNum& b) {
    PAdicNum d = a - b;
    return d.is_zero();
  }

  std::string str() const {
    if (is_exact_zero()) return "0";
    std::string big = "O(" + std::to_string(p_) + "^" + std::to_string(absolute_precision()) + ")";
    if (precision_ == 0) return big;
    return std::to_string(p_) + "^" + std::to_string(valuation_) + "*" + unit_.get_str() + " + " + big;
  }
  friend std::ostream& operator<<(std::ostream& os, const PAdicNum& x) { return os << x.str(); }

  /// Rational representative in (-p^N/2, p^N/2] * p^v (for display/serialization).
  Rational lift() const {
    if (is_zero()) return 0;
    BigInt m = ipow(to_big(p_), precision_);
    BigInt u = unit_;
    if (2 * u > m) u -= m;
    Rational r(u);
    if (valuation_ >= 0)
      r *= Rational(ipow(to_big(p_), valuation_));
    else
      r /= Rational(ipow(to_big(p_), -valuation_));
    r.canonicalize();
    return r;
  }

 private:
  static void check_prime(long p) {
    if (!is_prime(p)) throw std::invalid_argument("PAdicNum: p must be prime");
  }
  static void same_prime(const PAdicNum& a, const PAdicNum& b) {
    if (a.p_ != b.p_) throw std::invalid_argument("PAdicNum: mixing different primes");
  }

  long p_ = 2;
  long valuation_ = kInfiniteValuation;
  int precision_ = 0;
  BigInt unit_ = 0;
};

/// Teichmuller representative: the (p-1)-th root of unity congruent to x mod p.
inline PAdicNum teichmuller(long x, long p, int precision) {
  if (!is_prime(p)) throw std::invalid_argument("teichmuller: p must be prime");
  if (mod(x, p) == 0) throw std::invalid_argument("teichmuller: p divides x");
  BigInt m = ipow(to_big(p), precision);
  BigInt w = mod(to_big(x), m);
  // x -> x^p is a contraction on the residue class; precision+1 steps reach the fixed point
  for (int i = 0; i <= precision; ++i) w = powmod(w, to_big(p), m);
  return PAdicNum::from_residue(w, p, precision);
}

inline PAdicNum teichmuller(const PAdicNum& x) {
  if (x.valuation() != 0 || x.is_zero()) throw std::invalid_argument("teichmuller: argument must be a unit");
  return teichmuller(to_ll(mod(x.unit(), to_big(x.prime()))), x.prime(), x.precision());
}

/// <x> = x / omega(x), a principal unit.
inline PAdicNum principal_unit_part(const PAdicNum& x) { return x / teichmuller(x); }

/// p-adic logarithm on 1 + pZ_p (1 + 4Z_2 when p = 2).
inline PAdicNum padic_log(const PAdicNum& u) {
  const long p = u.prime();
  if (u.is_zero() || u.valuation() != 0) throw std::domain_error("padic_log: argument outside 1 + pZ_p");
  const long A = u.absolute_precision();
  BigInt bp = to_big(p);
  BigInt m = ipow(bp, A);
  BigInt z = mod(u.unit() - 1, m);
  if (z == 0) return PAdicNum::big_oh(p, A);
  const int v = valuation(z, p);
  if (v < 1 || (p == 2 && v < 2)) throw std::domain_error("padic_log: argument outside the convergence disc");
  BigInt zu = z / ipow(bp, v);
  BigInt sum = 0;
  BigInt zpow = 1;
  // term n has valuation n*v - v_p(n) >= n*v - log_p(n); stop once that exceeds A for good
  for (long n = 1;; ++n) {
    zpow = mod(zpow * zu, m);
    long vn = valuation(to_big(n), p);
    long e = n * v - vn;
    if (e < A) {
      BigInt nu = to_big(n) / ipow(bp, vn);
      BigInt term = mod(ipow(bp, e) * zpow * inverse_mod(mod(nu, m), m), m);
      if (n % 2 == 0) term = -term;
      sum = mod(sum + term, m);
    }
    if (n * v - std::log(static_cast<double>(n)) / std::log(static_cast<double>(p)) - 1 > A) break;
  }
  return PAdicNum::from_residue(sum, p, A);
}

/// p-adic exponential on v_p(z) > 1/(p-1).
inline PAdicNum padic_exp(const PAdicNum& z, int precision_if_exact = 20) {
  const long p = z.prime();
  if (z.is_exact_zero()) return PAdicNum::from_integer(1, p, precision_if_exact);
  const long v = z.valuation();
  if (!(static_cast<double>(v) > 1.0 / static_cast<double>(p - 1)))
    throw std::domain_error("padic_exp: argument outside the convergence disc");
  const long A = z.absolute_precision();
  BigInt bp = to_big(p);
  BigInt m = ipow(bp, A);
  if (z.precision() == 0) return PAdicNum::from_residue(1, p, A);
  BigInt sum = 1;
  BigInt zpow = 1;
  BigInt fact_unit = 1;  // n! with all factors of p removed
  const double slope = static_cast<double>(v) - 1.0 / static_cast<double>(p - 1);
  for (long n = 1;; ++n) {
    zpow = mod(zpow * z.unit(), m);
    BigInt nn = to_big(n);
    fact_unit = mod(fact_unit * (nn / ipow(bp, valuation(nn, p))), m);
    long e = n * v - factorial_valuation(n, p);
    if (e < A) {
      BigInt term = mod(ipow(bp, e) * zpow * inverse_mod(fact_unit, m), m);
      sum = mod(sum + term, m);
    }
    if (static_cast<double>(n) * slope > static_cast<double>(A) + 1) break;
  }
  return PAdicNum::from_residue(sum, p, A);
}

}  // namespace quadsym
