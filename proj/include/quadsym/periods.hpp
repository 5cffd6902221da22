#pragma once

// Modular integrals of a weight-2 newform through the antiderivative of its
// q-expansion, F(z) = sum a_n q^n / (2 pi i n), so that
// int_{z1}^{z2} f(z) dz = F(z2) - F(z1) exactly up to truncation.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
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
#include "quadsym/fuchsian.hpp"
#include "quadsym/modsym.hpp"

namespace quadsym {

inline constexpr double kPi = 3.14159265358979323846;

/// Cap on q-expansion length: QUADSYM_MAX_TERMS, default 20000.
inline long max_terms() {
  const char* s = std::getenv("QUADSYM_MAX_TERMS");
  if (s == nullptr || *s == '\0') return 20000;
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (end == s || *end != '\0' || v <= 0) throw std::invalid_argument("QUADSYM_MAX_TERMS must be a positive integer");
  return v;
}

struct QExpansion {
  long level = 1;
  std::vector<long> a;              // a[0] unused, a[1] = 1
  std::map<long, long> eigenvalues;  // the a_p it was built from
  long length() const { return static_cast<long>(a.size()) - 1; }
};

/// All a_n, n <= M, from a_p via multiplicativity and the Hecke recursion.
inline QExpansion extend_coefficients(const std::map<long, long>& ap, long N, long M) {
  if (M < 1) throw std::invalid_argument("extend_coefficients: length must be >= 1");
  std::vector<long> spf(static_cast<std::size_t>(M + 1), 0);
  for (long i = 2; i <= M; ++i)
    if (spf[static_cast<std::size_t>(i)] == 0)
      for (long j = i; j <= M; j += i)
        if (spf[static_cast<std::size_t>(j)] == 0) spf[static_cast<std::size_t>(j)] = i;
  QExpansion q;
  q.level = N;
  q.a.assign(static_cast<std::size_t>(M + 1), 0);
  q.a[1] = 1;
  for (long n = 2; n <= M; ++n) {
    long p = spf[static_cast<std::size_t>(n)], pk = 1, k = 0, m = n;
    while (m % p == 0) {
      m /= p;
      pk *= p;
      ++k;
    }
    if (m > 1) {
      q.a[static_cast<std::size_t>(n)] = q.a[static_cast<std::size_t>(pk)] * q.a[static_cast<std::size_t>(m)];
      continue;
    }
    if (k == 1) {
      auto it = ap.find(p);
      if (it == ap.end()) throw std::invalid_argument("extend_coefficients: missing a_p for p = " + std::to_string(p));
      q.a[static_cast<std::size_t>(n)] = it->second;
      q.eigenvalues[p] = it->second;
    } else {
      long a_p = q.a[static_cast<std::size_t>(p)];
      long prev = q.a[static_cast<std::size_t>(n / p)];
      q.a[static_cast<std::size_t>(n)] = (N % p == 0) ? a_p * prev : a_p * prev - p * q.a[static_cast<std::size_t>(n / p / p)];
    }
  }
  return q;
}

inline QExpansion newform_qexpansion(const EigenSymbol& f, long M) {
  std::map<long, long> ap;
  for (long p : primes_up_to(M)) ap[p] = f.ap(p);
  return extend_coefficients(ap, f.level(), M);
}

/// Lines "p a_p"; '#' starts a comment.
inline std::map<long, long> read_coefficient_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open coefficient file " + path);
  std::map<long, long> ap;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ss(line);
    long p, a;
    if (!(ss >> p)) continue;
    std::string rest;
    if (!(ss >> a) || (ss >> rest) || !is_prime(p))
      throw std::invalid_argument("coefficient file " + path + ": bad line " + std::to_string(lineno));
    ap[p] = a;
  }
  return ap;
}

/// Smallest M with sum_{n>M} r^n / pi <= tol, r = exp(-2 pi y), using |a_n| <= d(n) sqrt(n) <= 2n.
inline long required_terms(double y, double tol) {
  if (y <= 0) throw std::invalid_argument("required_terms: point must lie in H");
  if (tol <= 0) throw std::invalid_argument("required_terms: tolerance must be positive");
  const double r = std::exp(-2 * kPi * y);
  double m = std::log(tol * kPi * (1 - r)) / std::log(r) - 1;
  return std::max(1L, static_cast<long>(std::ceil(m)));
}

/// Tail bound of the truncated antiderivative at Im z = y.
inline double antiderivative_tail(double y, long M) {
  const double r = std::exp(-2 * kPi * y);
  return std::pow(r, static_cast<double>(M + 1)) / (kPi * (1 - r));
}

inline Complex antiderivative(const QExpansion& f, Complex z, double tol) {
  long M = required_terms(z.imag(), tol);
  if (M > f.length())
    throw precision_error("antiderivative: tail bound needs " + std::to_string(M) + " terms, only " +
                              std::to_string(f.length()) + " available",
                          M);
  const Complex q = std::exp(Complex(0, 2 * kPi) * z);
  Complex qn = 1, sum = 0;
  for (long n = 1; n <= M; ++n) {
    qn *= q;
    long an = f.a[static_cast<std::size_t>(n)];
    if (an != 0) sum += static_cast<double>(an) / static_cast<double>(n) * qn;
  }
  return sum / Complex(0, 2 * kPi);
}

/// f(z) itself, with tail sum_{n>M} 2n r^n <= tol.
inline Complex form_value(const QExpansion& f, Complex z, double tol) {
  if (z.imag() <= 0) throw std::invalid_argument("form_value: point must lie in H");
  const double r = std::exp(-2 * kPi * z.imag());
  long M = required_terms(z.imag(), tol);
  auto tail = [&](long m) {
    double rm = std::pow(r, static_cast<double>(m + 1));
    return 2 * rm * (static_cast<double>(m + 1) - static_cast<double>(m) * r) / ((1 - r) * (1 - r));
  };
  while (tail(M) > tol) {
    M = M + M / 8 + 1;
    if (M > f.length()) break;
  }
  if (M > f.length()) throw precision_error("form_value: not enough coefficients", M);
  const Complex q = std::exp(Complex(0, 2 * kPi) * z);
  Complex qn = 1, sum = 0;
  for (long n = 1; n <= M; ++n) {
    qn *= q;
    long an = f.a[static_cast<std::size_t>(n)];
    if (an != 0) sum += static_cast<double>(an) * qn;
  }
  return sum;
}

inline Complex modular_integral(const QExpansion& f, Complex z1, Complex z2, double tol) {
  if (z1.imag() <= 0 || z2.imag() <= 0) throw std::invalid_argument("modular_integral: endpoints must lie in H");
  if (z1 == z2) return 0;
  return antiderivative(f, z2, tol / 2) - antiderivative(f, z1, tol / 2);
}

/// d(Az)/dz = det(A) (cz+d)^-2
inline Complex mobius_derivative(const IntMat2& A, Complex z) {
  Complex j = static_cast<double>(A.c) * z + static_cast<double>(A.d);
  return static_cast<double>(A.det()) / (j * j);
}

/// (f|_2 A)(z) = det(A) (cz+d)^-2 f(Az)
inline Complex slash_weight2(const QExpansion& f, const IntMat2& A, Complex z, double tol) {
  if (A.det() <= 0) throw std::invalid_argument("slash_weight2: det(A) must be positive");
  return mobius_derivative(A, z) * form_value(f, mobius_apply(A, z), tol);
}

/// phi_f(gamma(tau)) = int_{gamma tau}^{tau} f
inline Complex phi_f(const QExpansion& f, const IntMat2& gamma, Complex tau, double tol) {
  return modular_integral(f, mobius_apply(gamma, tau), tau, tol);
}

inline Complex phi_f(const QExpansion& f, const GroupElement& gamma, Complex tau, double tol) {
  return modular_integral(f, mobius_apply(gamma, tau), tau, tol);
}

/// int_z^{gamma z} f for gamma in Gamma_0(N), evaluated at z = -d/c + i/|c| where both endpoints have Im = 1/|c|.
inline Complex period(const QExpansion& f, const BigMat2& gamma, double tol) {
  if (gamma.c == 0) return 0;
  const double c = gamma.c.get_d(), d = gamma.d.get_d();
  Complex z(-d / c, 1 / std::fabs(c));
  Complex gz = (gamma.a.get_d() * z + gamma.b.get_d()) / (c * z + d);
  return modular_integral(f, z, gz, tol);
}

/// delta_f = phi_f(gamma_{a,p^n} tau) - phi_f(gamma_{-a,p^n} tau)
inline Complex delta_f(const QExpansion& f, long a, long p, int n, Complex tau, double tol) {
  return phi_f(f, gamma_a_pn(a, p, n), tau, tol / 2) - phi_f(f, gamma_a_pn(-a, p, n), tau, tol / 2);
}

// ---------------------------------------------------------------------------
// Finitely generated period module

/// Integer combination of the symbols phi_f(A_l(i)) ("A<l>") and phi_f(B_j(i)) ("B<j>").
struct FormalPeriodSum {
  std::map<std::string, long> coeffs;
  std::optional<Complex> shadow;

  std::size_t support() const {
    std::size_t s = 0;
    for (const auto& [k, c] : coeffs) s += c != 0;
    return s;
  }
  FormalPeriodSum& operator+=(const FormalPeriodSum& o) {
    for (const auto& [k, c] : o.coeffs) coeffs[k] += c;
    if (shadow && o.shadow)
      *shadow += *o.shadow;
    else
      shadow.reset();
    return *this;
  }
};

/// Right coset representatives of Gamma_0(N) in SL2(Z), indexed like P^1(Z/N).
inline std::vector<BigMat2> gamma0_coset_reps(long N) {
  ProjectiveLine p1(N);
  std::vector<BigMat2> reps;
  for (std::size_t i = 0; i < p1.size(); ++i) reps.push_back(to_big(p1.lift(i)));
  reps[p1.index(0L, 1L)] = BigMat2::identity();  // the trivial coset
  return reps;
}

inline std::size_t gamma0_coset_index(long N, const BigMat2& A) { return ProjectiveLine(N).index(A.c, A.d); }

/// phi_f(A(i)) for A = B A_{l0}, B the product of `word` in `generators`.
inline FormalPeriodSum reduce_to_generators(const QExpansion& f, const BigMat2& A,
                                            const std::vector<std::pair<std::size_t, int>>& word,
                                            const std::vector<BigMat2>& generators, const std::vector<BigMat2>& coset_reps,
                                            std::size_t l0, double tol) {
  if (l0 >= coset_reps.size()) throw std::invalid_argument("reduce_to_generators: coset index out of range");
  BigMat2 B = BigMat2::identity();
  FormalPeriodSum s;
  // phi_f(A(i)) = phi_f(A_l0(i)) + phi_f(B(i)); phi_f(i) = 0 drops out
  if (!(coset_reps[l0] == BigMat2::identity())) s.coeffs["A" + std::to_string(l0)] += 1;
  for (auto [j, e] : word) {
    if (j >= generators.size() || (e != 1 && e != -1)) throw std::invalid_argument("reduce_to_generators: bad letter");
    B = B * (e == 1 ? generators[j] : generators[j].adj());
    s.coeffs["B" + std::to_string(j)] += e;
  }
  BigMat2 prod = B * coset_reps[l0];
  if (!(prod == A) && !(prod == -A)) throw std::invalid_argument("reduce_to_generators: A != B A_l");
  const Complex i(0, 1);
  Complex shadow = 0;
  for (const auto& [key, c] : s.coeffs) {
    if (c == 0) continue;
    std::size_t idx = std::stoul(key.substr(1));
    Complex v;
    if (key[0] == 'A') {
      const auto& m = coset_reps[idx];
      IntMat2 small{to_ll(m.a), to_ll(m.b), to_ll(m.c), to_ll(m.d)};
      v = phi_f(f, small, i, tol);
    } else {
      v = -period(f, generators[idx], tol);  // phi_f(B(i)) = -int_i^{B i} f
    }
    shadow += static_cast<double>(c) * v;
  }
  s.shadow = shadow;
  return s;
}

}  // namespace quadsym
