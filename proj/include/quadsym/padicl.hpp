#pragma once

// p-adic distributions attached to a rational newform: the cyclotomic
// (modular symbol) measure, the quadratic measure built from modular
// integrals at a CM point, sigma-permuted measures, characters and
// Mellin-Mazur transforms, and the wild characters chi_s.
//
// Values live in Q(alpha) = Q[X]/(X^2 - a_p X + p) (or alpha = a_p when p | N)
// so every alpha-normalisation is exact; the p-adic picture is recovered by
// sending alpha to the Hensel-lifted unit root.

#include <algorithm>
#include <cctype>
#include <complex>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "quadsym/arith.hpp"
#include "quadsym/digits.hpp"
#include "quadsym/errors.hpp"
#include "quadsym/modsym.hpp"
#include "quadsym/padic.hpp"
#include "quadsym/periods.hpp"

namespace quadsym {

// ---------------------------------------------------------------------------
// Q(alpha)

template <class T>
struct AlphaElem {
  T c0{}, c1{};  // c0 + c1 alpha

  friend AlphaElem operator+(const AlphaElem& x, const AlphaElem& y) { return {T(x.c0 + y.c0), T(x.c1 + y.c1)}; }
  friend AlphaElem operator-(const AlphaElem& x, const AlphaElem& y) { return {T(x.c0 - y.c0), T(x.c1 - y.c1)}; }
  AlphaElem& operator+=(const AlphaElem& y) { return *this = *this + y; }
  friend bool operator==(const AlphaElem& x, const AlphaElem& y) { return x.c0 == y.c0 && x.c1 == y.c1; }
  friend bool operator!=(const AlphaElem& x, const AlphaElem& y) { return !(x == y); }
};

using AlphaQ = AlphaElem<Rational>;
using AlphaC = AlphaElem<Complex>;

namespace detail {
template <class T>
T from_rational(const Rational& r);
template <>
inline Rational from_rational<Rational>(const Rational& r) { return r; }
template <>
inline Complex from_rational<Complex>(const Rational& r) { return r.get_d(); }
}  // namespace detail

class AlphaRing {
 public:
  AlphaRing() = default;
  /// degenerate: alpha = a_p is rational (p | N)
  AlphaRing(long ap, long p, bool degenerate) : ap_(ap), p_(p), degenerate_(degenerate) {
    if (degenerate && ap == 0) throw not_applicable_error("a_p = 0: no nonzero normalising root");
  }
  long ap() const { return ap_; }
  long p() const { return p_; }
  bool degenerate() const { return degenerate_; }

  template <class T>
  AlphaElem<T> mul(const AlphaQ& r, const AlphaElem<T>& v) const {
    T r0 = detail::from_rational<T>(r.c0), r1 = detail::from_rational<T>(r.c1);
    if (degenerate_) return {T(r0 * v.c0), T(r0 * v.c1)};
    T a = detail::from_rational<T>(Rational(ap_)), pp = detail::from_rational<T>(Rational(p_));
    // alpha^2 = a_p alpha - p
    return {T(r0 * v.c0 - pp * r1 * v.c1), T(r0 * v.c1 + r1 * v.c0 + a * r1 * v.c1)};
  }

  AlphaQ alpha_pow(long k) const {
    if (degenerate_) {
      Rational a(ap_);
      Rational r = 1;
      for (long i = 0; i < std::labs(k); ++i) r *= a;
      if (k < 0) r = 1 / r;
      return {r, 0};
    }
    // alpha^-1 = (a_p - alpha)/p
    AlphaQ step = k >= 0 ? AlphaQ{0, 1} : AlphaQ{make_rational(ap_, p_), make_rational(-1, p_)};
    AlphaQ r{1, 0};
    for (long i = 0; i < std::labs(k); ++i) r = mul(step, r);
    return r;
  }

 private:
  long ap_ = 0, p_ = 2;
  bool degenerate_ = false;
};

// ---------------------------------------------------------------------------
// Root of the Hecke polynomial

struct HeckeRootChoice {
  long ap = 0;
  long p = 2;
  bool p_divides_level = false;
  std::optional<PAdicNum> alpha;  // absent when no root in Q_p has |alpha| > 1/p
  bool ordinary = false;
};

inline HeckeRootChoice choose_hecke_root(long ap, long p, long N, int precision = 30) {
  if (!is_prime(p)) throw std::invalid_argument("choose_hecke_root: p must be prime");
  HeckeRootChoice h;
  h.ap = ap;
  h.p = p;
  h.p_divides_level = N % p == 0;
  if (h.p_divides_level) {
    if (ap == 0) throw not_applicable_error("choose_hecke_root: a_p = 0 at p | N");
    h.alpha = PAdicNum::from_integer(ap, p, precision);
    h.ordinary = mod(ap, p) != 0;
    return h;
  }
  if (mod(ap, p) == 0) return h;  // supersingular: both roots have valuation 1/2
  BigInt m = ipow(to_big(p), precision);
  BigInt x = mod(to_big(ap), m), a = to_big(ap), pp = to_big(p);
  for (int i = 0; i <= precision; ++i) {
    BigInt fx = x * x - a * x + pp, dfx = 2 * x - a;
    x = mod(x - fx * inverse_mod(mod(dfx, m), m), m);
  }
  h.alpha = PAdicNum::from_residue(x, p, precision);
  h.ordinary = true;
  return h;
}

inline PAdicNum embed(const AlphaQ& v, const HeckeRootChoice& root, int precision) {
  if (!root.alpha) throw not_available_error("embed: no p-adic root alpha (supersingular)");
  PAdicNum r = v.c0 == 0 ? PAdicNum::zero(root.p) : PAdicNum::from_rational(v.c0, root.p, precision);
  if (v.c1 != 0 && !root.p_divides_level) r += PAdicNum::from_rational(v.c1, root.p, precision) * root.alpha->truncated(precision);
  return r;
}

// ---------------------------------------------------------------------------
// Distributions

/// (phi+, phi-) coordinates, each in Q(alpha).
struct PeriodPair {
  AlphaQ plus, minus;
  friend PeriodPair operator+(const PeriodPair& x, const PeriodPair& y) { return {x.plus + y.plus, x.minus + y.minus}; }
  PeriodPair& operator+=(const PeriodPair& y) { return *this = *this + y; }
  friend bool operator==(const PeriodPair& x, const PeriodPair& y) { return x.plus == y.plus && x.minus == y.minus; }
};

enum class ValueKind { RationalPair, Complex };

template <class V>
struct FiniteLevelDistribution {
  long p = 2;
  long level_N = 1;
  HeckeRootChoice root;
  AlphaRing ring;
  ValueKind kind = ValueKind::RationalPair;
  std::map<int, std::map<long, V>> levels;  // unit residues a in [1, p^n)

  int max_level() const { return levels.empty() ? 0 : levels.rbegin()->first; }

  const std::map<long, V>& table(int n) const {
    auto it = levels.find(n);
    if (it == levels.end()) throw std::invalid_argument("distribution: level " + std::to_string(n) + " not stored");
    return it->second;
  }

  /// mu(a + p^n Z_p); zero on p Z_p.
  V value(long a, int n) const {
    const auto& t = table(n);
    long r = mod(a, ipow(p, n));
    if (r % p == 0) return V{};
    return t.at(r);
  }

  /// mu(Z_p^*) as the level-n sum.
  V total(int n) const {
    V s{};
    for (const auto& [a, v] : table(n)) s += v;
    return s;
  }
};

using CyclotomicMeasure = FiniteLevelDistribution<PeriodPair>;
using QuadraticMeasure = FiniteLevelDistribution<AlphaC>;

/// mu(a) = sum_j mu(a + j p^n) for every unit a mod p^n.
inline bool compatible_exact(const CyclotomicMeasure& mu, int n) {
  const long pn = ipow(mu.p, n);
  for (const auto& [a, v] : mu.table(n)) {
    PeriodPair s{};
    for (long j = 0; j < mu.p; ++j) s += mu.value(a + j * pn, n + 1);
    if (!(s == v)) return false;
  }
  return true;
}

inline double compatibility_defect(const QuadraticMeasure& mu, int n) {
  const long pn = ipow(mu.p, n);
  double worst = 0;
  for (const auto& [a, v] : mu.table(n)) {
    AlphaC s{};
    for (long j = 0; j < mu.p; ++j) s += mu.value(a + j * pn, n + 1);
    worst = std::max({worst, std::abs(s.c0 - v.c0), std::abs(s.c1 - v.c1)});
  }
  return worst;
}

namespace detail {
inline std::vector<long> unit_residues(long p, int n) {
  std::vector<long> out;
  const long pn = ipow(p, n);
  for (long a = 1; a < pn; ++a)
    if (a % p != 0) out.push_back(a);
  return out;
}
inline void check_measure_args(long p, int n) {
  if (!is_prime(p)) throw std::invalid_argument("measure: p must be prime");
  if (n < 1) throw std::invalid_argument("measure: level must be >= 1");
}
}  // namespace detail

/// Levels 1..n of mu(a + p^k Z_p) = alpha^-k lambda(a, p^k) - alpha^-(k+1) lambda(a, p^(k-1)) (p not dividing N),
/// a_p^-k lambda(a, p^k) (p | N), with lambda(a, m) the (phi+, phi-) value of {oo, a/m}.
inline CyclotomicMeasure cyclotomic_measure(const EigenSymbol& f, long p, int n) {
  detail::check_measure_args(p, n);
  CyclotomicMeasure mu;
  mu.p = p;
  mu.level_N = f.level();
  mu.kind = ValueKind::RationalPair;
  const long ap = f.ap(p);
  mu.root = choose_hecke_root(ap, p, f.level());
  mu.ring = AlphaRing(ap, p, mu.root.p_divides_level);
  auto lambda = [&](long a, long m) {
    auto [pl, mi] = f.eval(1, 0, a, m);
    return std::pair<Rational, Rational>{Rational(pl), Rational(mi)};
  };
  for (int k = 1; k <= n; ++k) {
    const long pk = ipow(p, k);
    AlphaQ ak = mu.ring.alpha_pow(-k), ak1 = mu.ring.alpha_pow(-k - 1);
    auto& t = mu.levels[k];
    for (long a : detail::unit_residues(p, k)) {
      auto [l0p, l0m] = lambda(a, pk);
      PeriodPair v{mu.ring.mul(ak, AlphaQ{l0p, 0}), mu.ring.mul(ak, AlphaQ{l0m, 0})};
      if (!mu.root.p_divides_level) {
        auto [l1p, l1m] = lambda(a, pk / p);
        v.plus = v.plus - mu.ring.mul(ak1, AlphaQ{l1p, 0});
        v.minus = v.minus - mu.ring.mul(ak1, AlphaQ{l1m, 0});
      }
      t[a] = v;
    }
  }
  return mu;
}

/// Levels 1..n of mu_Q(a + p^k Z_p) = alpha^-k delta(a) - alpha^-(k+1) delta'(a) (p not dividing N),
/// a_p^-k delta(a) (p | N), where delta(a) = F(g_{-a} tau) - F(g_a tau), delta'(a) = F(p g_{-a} tau) - F(p g_a tau),
/// g_a = gamma_{a,p^k} and F the antiderivative of f.
inline QuadraticMeasure quadratic_measure(const QExpansion& f, long p, int n, Complex tau = Complex(0, 1), double tol = 1e-10) {
  detail::check_measure_args(p, n);
  if (tau.imag() <= 0) throw std::invalid_argument("quadratic_measure: tau must lie in H");
  if (f.length() < p) throw std::invalid_argument("quadratic_measure: q-expansion shorter than p");
  QuadraticMeasure mu;
  mu.p = p;
  mu.level_N = f.level;
  mu.kind = ValueKind::Complex;
  const long ap = f.a[static_cast<std::size_t>(p)];
  mu.root = choose_hecke_root(ap, p, f.level);
  mu.ring = AlphaRing(ap, p, mu.root.p_divides_level);
  const double t = tol / 4;
  for (int k = 1; k <= n; ++k) {
    AlphaQ ak = mu.ring.alpha_pow(-k), ak1 = mu.ring.alpha_pow(-k - 1);
    auto& tab = mu.levels[k];
    const long pk = ipow(p, k);
    for (long a : detail::unit_residues(p, k)) {
      // delta(-a) = -delta(a): store the negation so antisymmetry is exact
      if (auto it = tab.find(pk - a); it != tab.end() && pk - a != a) {
        tab[a] = AlphaC{} - it->second;
        continue;
      }
      Complex zp = mobius_apply(gamma_a_pn(a, p, k), tau), zm = mobius_apply(gamma_a_pn(-a, p, k), tau);
      Complex d = antiderivative(f, zm, t) - antiderivative(f, zp, t);
      AlphaC v = mu.ring.mul(ak, AlphaC{d, 0});
      if (!mu.root.p_divides_level) {
        Complex dd = antiderivative(f, static_cast<double>(p) * zm, t) - antiderivative(f, static_cast<double>(p) * zp, t);
        v = v - mu.ring.mul(ak1, AlphaC{dd, 0});
      }
      tab[a] = v;
    }
  }
  return mu;
}

// ---------------------------------------------------------------------------
// Permutations sigma of {0, ..., p-1} fixing 0, extended digit-wise

using DigitPermutation = std::vector<long>;  // sigma[d] for d = 0..p-1

inline void validate_sigma(const DigitPermutation& s, long p) {
  if (static_cast<long>(s.size()) != p) throw std::invalid_argument("sigma: wrong length");
  if (s[0] != 0) throw std::invalid_argument("sigma: must fix 0");
  std::vector<bool> seen(static_cast<std::size_t>(p), false);
  for (long v : s) {
    if (v < 0 || v >= p || seen[static_cast<std::size_t>(v)]) throw std::invalid_argument("sigma: not a bijection");
    seen[static_cast<std::size_t>(v)] = true;
  }
}

inline DigitPermutation identity_sigma(long p) {
  DigitPermutation s(static_cast<std::size_t>(p));
  for (long i = 0; i < p; ++i) s[static_cast<std::size_t>(i)] = i;
  return s;
}

inline DigitPermutation inverse_sigma(const DigitPermutation& s) {
  DigitPermutation inv(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) inv[static_cast<std::size_t>(s[i])] = static_cast<long>(i);
  return inv;
}

/// "(1 2)(3 4)" cycle notation (composed left to right), or "s1,s2,...,s_{p-1}" images of 1..p-1.
inline DigitPermutation parse_sigma(const std::string& text, long p) {
  DigitPermutation s = identity_sigma(p);
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)) || c == ' ') t += c;
  if (t.find('(') != std::string::npos) {
    std::size_t i = 0;
    while (i < t.size()) {
      if (t[i] == ' ') {
        ++i;
        continue;
      }
      if (t[i] != '(') throw std::invalid_argument("sigma: bad cycle notation");
      std::size_t j = t.find(')', i);
      if (j == std::string::npos) throw std::invalid_argument("sigma: unbalanced parenthesis");
      std::istringstream ss(t.substr(i + 1, j - i - 1));
      std::vector<long> cyc;
      std::string tok;
      while (ss >> tok) {
        for (char& c : tok)
          if (c == ',') c = ' ';
        std::istringstream ts(tok);
        long v;
        while (ts >> v) cyc.push_back(v);
      }
      for (long v : cyc)
        if (v <= 0 || v >= p) throw std::invalid_argument("sigma: entries must lie in 1..p-1");
      // cycles compose left to right: this one acts after those already read
      DigitPermutation comp = s;
      for (long d = 0; d < p; ++d)
        for (std::size_t k = 0; k < cyc.size(); ++k)
          if (cyc[k] == s[static_cast<std::size_t>(d)]) comp[static_cast<std::size_t>(d)] = cyc[(k + 1) % cyc.size()];
      s = comp;
      i = j + 1;
    }
  } else if (!t.empty()) {
    for (char& c : t)
      if (c == ',') c = ' ';
    std::istringstream ss(t);
    long v, d = 1;
    while (ss >> v) {
      if (d >= p) throw std::invalid_argument("sigma: too many images");
      s[static_cast<std::size_t>(d++)] = v;
    }
    if (d != p) throw std::invalid_argument("sigma: expected p-1 images");
  }
  validate_sigma(s, p);
  return s;
}

/// sigma applied to each base-p digit of a mod p^n.
inline long apply_sigma(const DigitPermutation& s, long a, long p, int n) {
  long r = mod(a, ipow(p, n)), out = 0, scale = 1;
  for (int i = 0; i < n; ++i) {
    out += s[static_cast<std::size_t>(r % p)] * scale;
    r /= p;
    scale *= p;
  }
  return out;
}

/// mu^sigma(a + p^n Z_p) = mu(sigma(a) + p^n Z_p) at every stored level.
template <class V>
FiniteLevelDistribution<V> sigma_twist(const FiniteLevelDistribution<V>& mu, const DigitPermutation& s) {
  validate_sigma(s, mu.p);
  FiniteLevelDistribution<V> out = mu;
  for (auto& [n, tab] : out.levels)
    for (auto& [a, v] : tab) v = mu.value(apply_sigma(s, a, mu.p, n), n);
  return out;
}

// ---------------------------------------------------------------------------
// Finite-order characters, stored as exponents of omega(g), g the least primitive root

inline long primitive_root(long p) {
  if (!is_prime(p)) throw std::invalid_argument("primitive_root: p must be prime");
  if (p == 2) return 1;
  auto fac = factorize(p - 1);
  for (long g = 2; g < p; ++g) {
    bool ok = true;
    for (auto [q, e] : fac)
      if (to_ll(powmod(to_big(g), to_big((p - 1) / q), to_big(p))) == 1) ok = false;
    if (ok) return g;
  }
  throw std::logic_error("primitive_root: none found");
}

/// e(a) for a mod p^n: chi(a) = omega(g)^e(a); -1 marks non-units.
struct CharacterTable {
  long p = 2;
  int level = 1;
  std::vector<long> exps;

  long at(long a) const { return exps[static_cast<std::size_t>(mod(a, ipow(p, level)))]; }
  friend bool operator==(const CharacterTable& x, const CharacterTable& y) {
    return x.p == y.p && x.level == y.level && x.exps == y.exps;
  }
};

inline std::vector<long> discrete_log_table(long p) {
  std::vector<long> ind(static_cast<std::size_t>(p), -1);
  long g = primitive_root(p), x = 1;
  for (long e = 0; e < p - 1; ++e) {
    ind[static_cast<std::size_t>(x)] = e;
    x = x * g % p;
  }
  return ind;
}

/// omega^k at level n.
inline CharacterTable teichmuller_character(long p, long k, int n) {
  if (n < 1) throw std::invalid_argument("teichmuller_character: level must be >= 1");
  auto ind = discrete_log_table(p);
  CharacterTable t{p, n, {}};
  const long pn = ipow(p, n);
  t.exps.assign(static_cast<std::size_t>(pn), -1);
  for (long a = 0; a < pn; ++a)
    if (a % p != 0) t.exps[static_cast<std::size_t>(a)] = mod(k * ind[static_cast<std::size_t>(a % p)], p - 1);
  return t;
}

/// Pointwise product of two tables at the same level.
inline CharacterTable pointwise_product(const CharacterTable& x, const CharacterTable& y) {
  if (x.p != y.p || x.level != y.level) throw std::invalid_argument("pointwise_product: level mismatch");
  CharacterTable r = x;
  for (std::size_t i = 0; i < r.exps.size(); ++i)
    r.exps[i] = (x.exps[i] < 0 || y.exps[i] < 0) ? -1 : (x.exps[i] + y.exps[i]) % (x.p - 1);
  return r;
}

/// The same function viewed at level n + 1.
inline CharacterTable lift_level(const CharacterTable& x) {
  CharacterTable r{x.p, x.level + 1, {}};
  const long pn1 = ipow(x.p, x.level + 1);
  r.exps.resize(static_cast<std::size_t>(pn1));
  for (long a = 0; a < pn1; ++a) r.exps[static_cast<std::size_t>(a)] = x.at(a);
  return r;
}

/// chi_sigma(a) = chi(sigma^-1(a) a^-1 mod p^n), as a function (multiplicativity not assumed).
inline CharacterTable chi_sigma(const CharacterTable& chi, const DigitPermutation& s) {
  validate_sigma(s, chi.p);
  DigitPermutation inv = inverse_sigma(s);
  const long pn = ipow(chi.p, chi.level);
  CharacterTable r = chi;
  for (long a = 0; a < pn; ++a) {
    if (a % chi.p == 0) continue;
    long b = apply_sigma(inv, a, chi.p, chi.level);
    long x = mod(b * inverse_mod(a, pn), pn);
    r.exps[static_cast<std::size_t>(a)] = chi.at(x);
  }
  return r;
}

inline bool is_multiplicative(const CharacterTable& chi) {
  const long pn = ipow(chi.p, chi.level);
  for (long a = 1; a < pn; ++a)
    for (long b = 1; b < pn; ++b) {
      if (a % chi.p == 0 || b % chi.p == 0) continue;
      if ((chi.at(a) + chi.at(b)) % (chi.p - 1) != chi.at(a * b % pn)) return false;
    }
  return true;
}

/// sum_a phi(a) mu(a + p^n Z_p) as an element of the group ring: entry e collects
/// the mass where phi = omega(g)^e.
template <class V>
std::vector<V> mellin_mazur(const FiniteLevelDistribution<V>& mu, const CharacterTable& phi) {
  if (phi.p != mu.p) throw std::invalid_argument("mellin_mazur: prime mismatch");
  if (phi.level > mu.max_level() || !mu.levels.count(phi.level))
    throw std::invalid_argument("mellin_mazur: function is not locally constant at an available level");
  std::vector<V> out(static_cast<std::size_t>(mu.p - 1));
  for (const auto& [a, v] : mu.table(phi.level)) {
    long e = phi.at(a);
    if (e < 0) throw std::invalid_argument("mellin_mazur: function undefined at a unit");
    out[static_cast<std::size_t>(e)] += v;
  }
  return out;
}

/// p-adic value of a group-ring element: omega(g) Teichmuller, alpha the unit root; sign picks phi+ or phi-.
inline PAdicNum evaluate_group_ring(const std::vector<PeriodPair>& v, int sign, const HeckeRootChoice& root, int precision) {
  const long p = root.p;
  PAdicNum w = teichmuller(primitive_root(p), p, precision), wp = PAdicNum::from_integer(1, p, precision);
  PAdicNum s = PAdicNum::zero(p);
  for (const auto& x : v) {
    s += wp * embed(sign >= 0 ? x.plus : x.minus, root, precision);
    wp *= w;
  }
  return s;
}

// ---------------------------------------------------------------------------
// chi_s(x) = exp_p(s log_p <x>)

namespace detail {
inline void check_chi_s(long x, const PAdicNum& s) {
  const long p = s.prime();
  if (p == 2) throw std::invalid_argument("chi_s: p = 2 is not supported");
  if (mod(x, p) == 0) throw std::invalid_argument("chi_s: x must be a p-adic unit");
  if (!s.is_exact_zero() && s.valuation() < 1) throw std::domain_error("chi_s: s must lie in D(0, 1/p)");
}
inline PAdicNum log_principal(long x, long p, int precision) {
  PAdicNum xx = PAdicNum::from_integer(x, p, precision + 2);
  return padic_log(principal_unit_part(xx));
}
}  // namespace detail

inline PAdicNum chi_s_eval(long x, const PAdicNum& s, int precision) {
  detail::check_chi_s(x, s);
  const long p = s.prime();
  if (s.is_zero()) return PAdicNum::from_integer(1, p, precision);
  PAdicNum z = s * detail::log_principal(x, p, precision);
  if (z.is_zero()) return PAdicNum::from_integer(1, p, precision);
  return padic_exp(z).truncated(precision);
}

/// Number of series terms after which s^n L^n / n! vanishes mod p^precision, given v(s L) >= w.
inline long chi_s_series_terms(long p, long w, int precision) {
  // v(term n) >= n w - (n - sigma_n)/(p-1) >= n w - (n-1)/(p-1), increasing in n
  long n = 0;
  while (static_cast<double>(n + 1) * static_cast<double>(w) - static_cast<double>(n) / static_cast<double>(p - 1) <
         static_cast<double>(precision))
    ++n;
  return n;
}

/// The series sum_n s^n log_p(<x>)^n / n!.
inline PAdicNum chi_s_series(long x, const PAdicNum& s, int precision) {
  detail::check_chi_s(x, s);
  const long p = s.prime();
  PAdicNum one = PAdicNum::from_integer(1, p, precision);
  if (s.is_zero()) return one;
  PAdicNum L = detail::log_principal(x, p, precision);
  if (L.is_zero()) return one;
  PAdicNum z = s * L;
  long terms = chi_s_series_terms(p, z.valuation(), precision);
  PAdicNum sum = one, term = one;
  for (long n = 1; n <= terms; ++n) {
    term = term * z / PAdicNum::from_integer(n, p, precision + 40);
    sum += term;
  }
  return sum.truncated(precision);
}

// ---------------------------------------------------------------------------
// L_p at s

struct LpResult {
  PAdicNum direct;             // sum_a chi_s(a) mu(a + p^n Z_p)
  PAdicNum series;             // sum_k s^k m_k
  std::vector<PAdicNum> moments;  // m_k = sum_a log<a>^k / k! mu(a + p^n Z_p)
  long vmin = 0;               // min valuation of the embedded measure values
  bool term_bounds_hold = true;
  bool routes_agree = false;
  int precision = 0;
};

/// Lower bound k - (k - sigma_k)/(p-1) + vmin for v(m_k).
inline long moment_valuation_bound(long k, long p, long vmin) {
  return k - factorial_valuation(k, p) + vmin;
}

inline LpResult lp_at_s(const CyclotomicMeasure& mu, const PAdicNum& s, int level, int precision) {
  if (!mu.root.ordinary || !mu.root.alpha) throw not_available_error("lp_at_s: f is not ordinary at p; the distribution is unbounded");
  if (s.prime() != mu.p) throw std::invalid_argument("lp_at_s: prime mismatch");
  if (!s.is_exact_zero() && s.valuation() < 1) throw std::domain_error("lp_at_s: s must lie in D(0, 1/p)");
  const long p = mu.p;
  const int work = precision + 10;
  const auto& tab = mu.table(level);
  LpResult r;
  r.precision = precision;
  std::vector<std::pair<PAdicNum, PAdicNum>> vals;  // (log<a>, mu(a))
  r.vmin = PAdicNum::kInfiniteValuation;
  for (const auto& [a, v] : tab) {
    PAdicNum m = embed(v.plus, mu.root, work);
    if (!m.is_zero()) r.vmin = std::min(r.vmin, m.valuation());
    vals.push_back({detail::log_principal(a, p, work), m});
  }
  if (r.vmin == PAdicNum::kInfiniteValuation) r.vmin = 0;
  r.direct = PAdicNum::zero(p);
  {
    std::size_t i = 0;
    for (const auto& [a, v] : tab) r.direct += chi_s_eval(a, s, work) * vals[i++].second;
  }
  // moments until s^k m_k is below the precision for good
  const long vs = s.is_zero() ? precision : s.valuation();
  long K = chi_s_series_terms(p, vs + 1, precision - static_cast<int>(std::min(0L, r.vmin)));
  r.series = PAdicNum::zero(p);
  PAdicNum sk = PAdicNum::from_integer(1, p, work);
  std::vector<PAdicNum> Lk(vals.size(), PAdicNum::from_integer(1, p, work));
  for (long k = 0; k <= K; ++k) {
    PAdicNum mk = PAdicNum::zero(p);
    PAdicNum kf = PAdicNum::from_integer(1, p, work + 40);
    for (long j = 2; j <= k; ++j) kf *= PAdicNum::from_integer(j, p, work + 40);
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (k > 0) Lk[i] = Lk[i] * vals[i].first;
      mk += Lk[i] * vals[i].second;
    }
    mk = mk / kf;
    r.moments.push_back(mk);
    if (!mk.is_exact_zero() && mk.precision() > 0 && mk.valuation() < moment_valuation_bound(k, p, r.vmin))
      r.term_bounds_hold = false;
    if (k > 0) sk = sk * s;
    if (!s.is_exact_zero() || k == 0) r.series += sk * mk;
  }
  r.direct = r.direct.truncated(precision);
  r.series = r.series.truncated(precision);
  r.routes_agree = equal_mod(r.direct, r.series, std::min<long>(precision + std::min(0L, r.vmin), std::min(r.direct.absolute_precision(), r.series.absolute_precision())));
  return r;
}

/// The quadratic kind has complex values with no p-adic embedding: the transform is returned as the
/// formal list of (a, chi_s(a), mu_Q(a + p^n Z_p)).
struct QuadraticLpTerm {
  long a;
  PAdicNum chi;
  AlphaC mu;
};

inline std::vector<QuadraticLpTerm> lp_at_s_quadratic(const QuadraticMeasure& mu, const PAdicNum& s, int level, int precision) {
  if (!mu.root.ordinary) throw not_available_error("lp_at_s: f is not ordinary at p; the distribution is unbounded");
  std::vector<QuadraticLpTerm> out;
  for (const auto& [a, v] : mu.table(level)) out.push_back({a, chi_s_eval(a, s, precision), v});
  return out;
}

}  // namespace quadsym
