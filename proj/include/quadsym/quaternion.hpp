#pragma once

// Quaternion algebras (a,b/Q), the embedding phi into M(2, Q(sqrt a)),
// discriminants, and the explicit Eichler orders for D in {1, 2p, pq}.

#include <array>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadsym/arith.hpp"
#include "quadsym/linalg.hpp"
#include "quadsym/mat2.hpp"
#include "quadsym/quad_ext.hpp"

namespace quadsym {

struct QuaternionAlgebra {
  long a = 1, b = -1;

  QuaternionAlgebra() = default;
  QuaternionAlgebra(long a_, long b_) : a(a_), b(b_) {
    if (a == 0 || b == 0) throw std::invalid_argument("QuaternionAlgebra: a and b must be nonzero");
  }

  bool is_definite() const { return a < 0 && b < 0; }

  /// Finite primes where the algebra ramifies, ascending.
  std::vector<long> ramified_primes() const {
    std::vector<long> out;
    for (auto [q, e] : factorize(2 * a * b)) {
      (void)e;
      if (hilbert_symbol(a, b, q) == -1) out.push_back(q);
    }
    return out;
  }

  long discriminant() const {
    long d = 1;
    for (long q : ramified_primes()) d *= q;
    return d;
  }

  friend bool operator==(const QuaternionAlgebra& x, const QuaternionAlgebra& y) {
    return x.a == y.a && x.b == y.b;
  }
};

/// x + yI + zJ + tK with I^2 = a, J^2 = b, K = IJ = -JI.
struct Quaternion {
  QuaternionAlgebra alg;
  Rational x = 0, y = 0, z = 0, t = 0;

  Quaternion() = default;
  Quaternion(QuaternionAlgebra h, Rational x_, Rational y_ = 0, Rational z_ = 0, Rational t_ = 0)
      : alg(h), x(std::move(x_)), y(std::move(y_)), z(std::move(z_)), t(std::move(t_)) {}

  static Quaternion one(const QuaternionAlgebra& h) { return {h, 1}; }
  static Quaternion i(const QuaternionAlgebra& h) { return {h, 0, 1}; }
  static Quaternion j(const QuaternionAlgebra& h) { return {h, 0, 0, 1}; }
  static Quaternion k(const QuaternionAlgebra& h) { return {h, 0, 0, 0, 1}; }

  Rational trace() const { return 2 * x; }
  Rational norm() const {
    const long a = alg.a, b = alg.b;
    return x * x - a * y * y - b * z * z + Rational(to_big(a * b)) * t * t;
  }
  Quaternion conj() const { return {alg, x, -y, -z, -t}; }
  bool is_integral() const { return is_integer(trace()) && is_integer(norm()); }
  std::array<Rational, 4> coords() const { return {x, y, z, t}; }

  friend Quaternion operator+(const Quaternion& p, const Quaternion& q) {
    check(p, q);
    return {p.alg, p.x + q.x, p.y + q.y, p.z + q.z, p.t + q.t};
  }
  friend Quaternion operator-(const Quaternion& p, const Quaternion& q) {
    check(p, q);
    return {p.alg, p.x - q.x, p.y - q.y, p.z - q.z, p.t - q.t};
  }
  friend Quaternion operator-(const Quaternion& p) { return {p.alg, -p.x, -p.y, -p.z, -p.t}; }
  friend Quaternion operator*(const Rational& s, const Quaternion& q) {
    return {q.alg, s * q.x, s * q.y, s * q.z, s * q.t};
  }
  friend Quaternion operator*(const Quaternion& p, const Quaternion& q) {
    check(p, q);
    const Rational a = p.alg.a, b = p.alg.b, ab = a * b;
    return {p.alg,
            p.x * q.x + a * p.y * q.y + b * p.z * q.z - ab * p.t * q.t,
            p.x * q.y + p.y * q.x - b * p.z * q.t + b * p.t * q.z,
            p.x * q.z + p.z * q.x + a * p.y * q.t - a * p.t * q.y,
            p.x * q.t + p.t * q.x + p.y * q.z - p.z * q.y};
  }
  friend bool operator==(const Quaternion& p, const Quaternion& q) {
    return p.alg == q.alg && p.x == q.x && p.y == q.y && p.z == q.z && p.t == q.t;
  }
  friend bool operator!=(const Quaternion& p, const Quaternion& q) { return !(p == q); }

  std::string str() const {
    std::ostringstream os;
    os << x.get_str() << " + " << y.get_str() << "*I + " << z.get_str() << "*J + " << t.get_str() << "*K";
    return os.str();
  }

 private:
  static void check(const Quaternion& p, const Quaternion& q) {
    if (!(p.alg == q.alg)) throw std::invalid_argument("Quaternion: operands from different algebras");
  }
};

struct QuaternionInvariants {
  Rational trace, norm;
  Quaternion conjugate;
};

inline QuaternionInvariants invariants(const Quaternion& q) { return {q.trace(), q.norm(), q.conj()}; }

using QuadMat2 = Mat2<QuadExtElem>;

inline QuadExtElem quad_elem(long d, const Rational& u, const Rational& v) {
  if (v == 0) return QuadExtElem(u);
  return QuadExtElem(d, u, v);
}

/// phi(q) = [[x + y sqrt a, z + t sqrt a], [b(z - t sqrt a), x - y sqrt a]].
inline QuadMat2 phi_embed(const Quaternion& q) {
  const long a = q.alg.a;
  if (!is_squarefree(a)) throw std::invalid_argument("phi_embed: a must be squarefree");
  const Rational b = q.alg.b;
  return {quad_elem(a, q.x, q.y), quad_elem(a, q.z, q.t), quad_elem(a, b * q.z, -b * q.t),
          quad_elem(a, q.x, -q.y)};
}

/// Inverse of phi; nullopt when the matrix is not in the image.
inline std::optional<Quaternion> phi_inverse(const QuadMat2& m, const QuaternionAlgebra& h) {
  const long a = h.a;
  auto split = [&](const QuadExtElem& s, const QuadExtElem& d, Rational& re, Rational& im) {
    QuadExtElem sum = (s + d) / QuadExtElem(2), dif = (s - d) / QuadExtElem(2);
    if (!sum.is_rational()) return false;
    re = sum.u();
    if (a == 1) {
      if (!dif.is_rational()) return false;
      im = dif.u();
      return true;
    }
    if (dif.u() != 0) return false;
    if (!dif.is_rational() && dif.d() != a) return false;
    im = dif.v();
    return true;
  };
  Rational x, y, z, t;
  if (!split(m.a, m.d, x, y)) return std::nullopt;
  QuadExtElem c_over_b = m.c / QuadExtElem(Rational(to_big(h.b)));
  if (!split(m.b, c_over_b, z, t)) return std::nullopt;
  return Quaternion(h, x, y, z, t);
}

enum class AlgebraKind { NonRamified, Definite, IndefiniteDivision };

inline const char* to_string(AlgebraKind k) {
  switch (k) {
    case AlgebraKind::NonRamified: return "non-ramified";
    case AlgebraKind::Definite: return "definite";
    case AlgebraKind::IndefiniteDivision: return "indefinite-division";
  }
  return "?";
}

struct AlgebraClassification {
  long discriminant = 1;
  AlgebraKind kind = AlgebraKind::NonRamified;
  bool small_ramified = false;
  int ramified_place_count = 0;  // finite primes plus infinity when definite
};

inline AlgebraClassification classify(const QuaternionAlgebra& h) {
  AlgebraClassification c;
  auto primes = h.ramified_primes();
  c.discriminant = 1;
  for (auto q : primes) c.discriminant *= q;
  c.ramified_place_count = static_cast<int>(primes.size()) + (h.is_definite() ? 1 : 0);
  if (h.is_definite())
    c.kind = AlgebraKind::Definite;
  else if (primes.empty())
    c.kind = AlgebraKind::NonRamified;
  else
    c.kind = AlgebraKind::IndefiniteDivision;
  c.small_ramified = !h.is_definite() && primes.size() == 2;
  return c;
}

/// Which case of the structure theorem has its hypotheses met by (a, b) read as
/// (1,-1), (p,-1) or (p,q): 1, 2, 3, or 0 for none.
inline int structure_theorem_case(long a, long b) {
  if (a == 1 && b == -1) return 1;
  if (b == -1 && is_prime(a) && a % 4 == 3) return 2;
  if (is_prime(a) && is_prime(b) && a != b && b % 4 == 1 && legendre_symbol(a, b) == 1) return 3;
  return 0;
}

/// Discriminant predicted by the structure theorem for a case-k pair.
inline long structure_theorem_discriminant(long a, long b) {
  switch (structure_theorem_case(a, b)) {
    case 1: return 1;
    case 2: return 2 * a;
    case 3: return a * b;
    default: throw std::invalid_argument("structure_theorem_discriminant: no case applies");
  }
}

struct OrderCertificate {
  bool ok = false;
  std::string reason;  // empty when ok
};

struct QuaternionOrder {
  QuaternionAlgebra alg;
  std::array<Quaternion, 4> basis;
  long level = 1;
  long D = 1;       // requested discriminant
  std::string note;      // e.g. presentation mismatch

  /// Coordinates of q in the basis; nullopt if the basis is degenerate.
  std::optional<std::array<Rational, 4>> coordinates(const Quaternion& q) const {
    std::vector<RVec> cols;
    for (const auto& e : basis) {
      auto c = e.coords();
      cols.push_back(RVec(c.begin(), c.end()));
    }
    auto qc = q.coords();
    bool ok = false;
    auto x = solve_in_span(cols, RVec(qc.begin(), qc.end()), &ok);
    if (!ok) return std::nullopt;
    return std::array<Rational, 4>{x[0], x[1], x[2], x[3]};
  }

  bool contains(const Quaternion& q) const {
    auto c = coordinates(q);
    if (!c) return false;
    for (const auto& v : *c)
      if (!is_integer(v)) return false;
    return true;
  }

  /// Mutual inclusion of Z-spans.
  bool same_lattice(const QuaternionOrder& o) const {
    for (const auto& e : o.basis)
      if (!contains(e)) return false;
    for (const auto& e : basis)
      if (!o.contains(e)) return false;
    return true;
  }
};

inline OrderCertificate is_order(const QuaternionAlgebra& h, const std::array<Quaternion, 4>& basis) {
  RMat m;
  for (const auto& e : basis) {
    if (!(e.alg == h)) return {false, "basis element from a different algebra"};
    auto c = e.coords();
    m.push_back(RVec(c.begin(), c.end()));
  }
  if (rank(m) != 4) return {false, "basis is not Q-linearly independent"};
  QuaternionOrder o;
  o.alg = h;
  o.basis = basis;
  if (!o.contains(Quaternion::one(h))) return {false, "1 is not in the Z-span"};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!basis[i].is_integral())
      return {false, "basis element " + std::to_string(i) + " is not integral (" + basis[i].str() + ")"};
  }
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (!o.contains(basis[i] * basis[j]))
        return {false, "product of basis elements " + std::to_string(i) + "," + std::to_string(j) +
                           " leaves the lattice"};
  return {true, ""};
}

inline OrderCertificate is_order(const QuaternionOrder& o) { return is_order(o.alg, o.basis); }

/// Presentation (a,b) used for the Eichler order of discriminant D, and the
/// case of the construction: 1 (D=1), 3 (D=2p), 4 (D=pq).
struct EichlerPresentation {
  QuaternionAlgebra alg;
  int construction = 1;
  long p = 0, q = 0;
};

inline EichlerPresentation eichler_presentation(long D) {
  if (D == 1) return {QuaternionAlgebra(1, -1), 1, 0, 0};
  if (D <= 1 || !is_squarefree(D)) throw std::invalid_argument("eichler_order: D must be 1 or squarefree");
  auto f = factorize(D);
  if (f.size() != 2) throw std::invalid_argument("eichler_order: D must be 1, 2p or pq");
  long p1 = f[0].first, p2 = f[1].first;
  if (p1 == 2 && p2 % 4 == 3) return {QuaternionAlgebra(p2, -1), 3, p2, 0};
  // pq case: q = 1 mod 4 (the larger one if both are)
  long p, q;
  if (p2 % 4 == 1) {
    q = p2;
    p = p1;
  } else if (p1 % 4 == 1) {
    q = p1;
    p = p2;
  } else {
    throw std::invalid_argument("eichler_order: D = pq needs a prime factor q = 1 mod 4");
  }
  return {QuaternionAlgebra(p, q), 4, p, q};
}

/// Explicit Eichler order of level N for discriminant D, one construction per shape of D.
inline QuaternionOrder eichler_order(long D, long N) {
  if (N < 1) throw std::invalid_argument("eichler_order: N must be positive");
  EichlerPresentation pr = eichler_presentation(D);
  const QuaternionAlgebra& h = pr.alg;
  QuaternionOrder o;
  o.alg = h;
  o.level = N;
  o.D = D;
  const Rational half(1, 2);
  if (pr.construction == 1) {
    // phi^{-1} of E11, E12, N*E21, E22 in (1,-1)
    const Rational n = to_big(N);
    o.basis = {Quaternion(h, half, half), Quaternion(h, 0, 0, half, half), Quaternion(h, 0, 0, -n * half, n * half),
               Quaternion(h, half, -half)};
  } else if (pr.construction == 3) {
    const long p = pr.p;
    if ((p - 1) % 2 != 0 || ((p - 1) / 2) % N != 0)
      throw std::invalid_argument("eichler_order: N must divide (p-1)/2 for D=2p");
    if (!is_squarefree(N)) throw std::invalid_argument("eichler_order: N must be squarefree");
    o.basis = {Quaternion::one(h), Quaternion::i(h), Quaternion(h, 0, 0, Rational(to_big(N))),
               Quaternion(h, half, half, half, half)};
  } else {
    const long p = pr.p, q = pr.q;
    if ((q - 1) % 4 != 0 || ((q - 1) / 4) % N != 0)
      throw std::invalid_argument("eichler_order: N must divide (q-1)/4 for D=pq");
    if (gcd(N, p) != 1) throw std::invalid_argument("eichler_order: gcd(N, p) must be 1");
    if (!is_squarefree(N)) throw std::invalid_argument("eichler_order: N must be squarefree");
    o.basis = {Quaternion::one(h), Quaternion(h, 0, Rational(to_big(N))), Quaternion(h, half, 0, half),
               Quaternion(h, 0, half, 0, half)};
  }
  long actual = h.discriminant();
  if (actual != D) {
    std::ostringstream os;
    os << "presentation (" << h.a << "," << h.b << ") has discriminant " << actual << ", not " << D;
    o.note = os.str();
  }
  return o;
}

/// The mixed presentation Z + Z(J+K)/2 + Z N(-J+K)/2 + Z(1-I)/2 in (1,-1).
inline QuaternionOrder mixed_eichler_order(long N) {
  if (N < 1) throw std::invalid_argument("mixed_eichler_order: N must be positive");
  QuaternionAlgebra h(1, -1);
  const Rational half(1, 2), n = to_big(N);
  QuaternionOrder o;
  o.alg = h;
  o.level = N;
  o.basis = {Quaternion::one(h), Quaternion(h, 0, 0, half, half), Quaternion(h, 0, 0, -n * half, n * half),
             Quaternion(h, half, -half)};
  return o;
}

/// Admissible levels N <= bound for the construction attached to D.
inline std::vector<long> admissible_levels(long D, long bound) {
  std::vector<long> out;
  for (long N = 1; N <= bound; ++N) {
    try {
      eichler_order(D, N);
      out.push_back(N);
    } catch (const std::invalid_argument&) {
    }
  }
  return out;
}

}  // namespace quadsym
