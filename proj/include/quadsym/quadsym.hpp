#pragma once

// Quadratic modular symbols: points of the Hecke orbit of tau = sqrt(-D) are
// recorded as words in the coset matrices, and a classical symbol is pulled
// back along "replace tau by infinity". That map is only well defined when no
// two words reach the same point with different cusp images; collision_search
// looks for exactly that obstruction.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "quadsym/arith.hpp"
#include "quadsym/errors.hpp"
#include "quadsym/fuchsian.hpp"
#include "quadsym/modsym.hpp"

namespace quadsym {

/// (-D/p) = -1, i.e. p is inert in Q(sqrt(-D)).
inline bool admissible_prime(long D, long p) {
  if (D <= 0 || !is_squarefree(D)) throw std::invalid_argument("admissible_prime: D must be positive and squarefree");
  if (!is_prime(p)) throw std::invalid_argument("admissible_prime: p must be prime");
  if (p == 2 || D % p == 0) throw not_applicable_error("admissible_prime: needs p odd and p not dividing D");
  return legendre_symbol(-D, p) == -1;
}

/// Coset matrix with index u: [[1,u],[0,p]] for 0 <= u < p, [[p,0],[0,1]] for u = p.
inline IntMat2 coset_matrix(long u, long p) {
  if (u >= 0 && u < p) return {1, u, 0, p};
  if (u == p) return {p, 0, 0, 1};
  throw std::invalid_argument("coset_matrix: index out of range");
}

/// The point left * gamma_{i_1} ... gamma_{i_n} * tail * tau, tau = sqrt(-D).
struct DeltaWord {
  long D = 1;
  long p = 3;
  BigMat2 left = BigMat2::identity();
  std::vector<long> word;
  IntMat2 tail = IntMat2::identity();

  DeltaWord() = default;
  DeltaWord(long D_, long p_, std::vector<long> w, IntMat2 t, BigMat2 l = BigMat2::identity())
      : D(D_), p(p_), left(std::move(l)), word(std::move(w)), tail(t) {
    validate();
  }

  void validate() const {
    if (D <= 0 || !is_squarefree(D)) throw std::invalid_argument("DeltaWord: D must be positive and squarefree");
    if (!is_prime(p)) throw std::invalid_argument("DeltaWord: p must be prime");
    if (tail.det() != 1) throw std::invalid_argument("DeltaWord: tail must lie in SL2(Z)");
    if (left.det() != 1) throw std::invalid_argument("DeltaWord: left factor must have determinant 1");
    for (long u : word)
      if (u < 0 || u > p) throw std::invalid_argument("DeltaWord: coset index out of range");
  }

  BigMat2 matrix() const {
    BigMat2 m = left;
    for (long u : word) m = m * to_big(coset_matrix(u, p));
    return m * to_big(tail);
  }

  /// Exact point in Q(sqrt(-D)).
  QuadExtElem point() const {
    BigMat2 m = matrix();
    QuadExtElem tau = QuadExtElem::sqrt_of(-D);
    GroupElement g{QuadExtElem(Rational(m.a)), QuadExtElem(Rational(m.b)), QuadExtElem(Rational(m.c)), QuadExtElem(Rational(m.d))};
    return mobius_apply(g, tau);
  }

  /// The cusp obtained by replacing tau with infinity.
  Cusp cusp() const { return mobius_apply(matrix(), Cusp::infinity()); }

  /// gamma * (this word)
  DeltaWord translated(const BigMat2& gamma) const {
    DeltaWord w = *this;
    w.left = gamma * left;
    w.validate();
    return w;
  }
};

/// F(a, b) = <functional, {a, b}> on the full modular symbol space.
struct ClassicalSymbol {
  const ModularSymbolSpace* space = nullptr;
  RVec functional;

  Rational operator()(const Cusp& a, const Cusp& b) const { return dot(functional, space->path(a, b)); }
};

/// I(F)(P, Q) = F(P with tau -> oo, Q with tau -> oo).
inline Rational inject_classical(const ClassicalSymbol& F, const DeltaWord& P, const DeltaWord& Q) {
  if (P.D != Q.D || P.p != Q.p) throw std::invalid_argument("inject_classical: words over different (D, p)");
  bool ok = false;
  try {
    ok = admissible_prime(P.D, P.p);
  } catch (const not_applicable_error& e) {
    throw std::invalid_argument(std::string("inject_classical: ") + e.what());
  }
  if (!ok) throw std::invalid_argument("inject_classical: (-D/p) != -1, the injection is not well defined");
  return F(P.cusp(), Q.cusp());
}

// ---------------------------------------------------------------------------
// Collision search

struct CollisionWitness {
  IntMat2 x1, x2;  // sigma [[1,a],[0,p^n]] gamma, with x1 tau = x2 tau and x1 oo != x2 oo
  IntMat2 eta;     // adj(x2) x1 / content, sign-normalised
  long det = 0;
};

struct CollisionReport {
  long D = 1, p = 3, N = 1;
  std::size_t points = 0;
  std::size_t trivial_collisions = 0;  // eta/content of determinant 1: stabiliser of tau in SL2(Z)
  std::vector<CollisionWitness> witnesses;
  std::set<std::tuple<long, long, long, long>> etas;  // normalised eta of every witness, both orders

  std::optional<CollisionWitness> first() const {
    if (witnesses.empty()) return std::nullopt;
    return witnesses.front();
  }
  bool has_eta(const IntMat2& m) const {
    IntMat2 n = m;
    if (n.a < 0 || (n.a == 0 && (n.b < 0 || (n.b == 0 && n.c < 0)))) n = -n;
    return etas.count({n.a, n.b, n.c, n.d}) > 0;
  }
};

namespace detail {
inline IntMat2 normalise_eta(IntMat2 m) {
  long g = std::gcd(std::gcd(std::labs(m.a), std::labs(m.b)), std::gcd(std::labs(m.c), std::labs(m.d)));
  if (g > 1) m = IntMat2{m.a / g, m.b / g, m.c / g, m.d / g};
  if (m.a < 0 || (m.a == 0 && (m.b < 0 || (m.b == 0 && m.c < 0)))) m = -m;
  return m;
}

inline std::vector<IntMat2> sl2z_box(long bound) {
  std::vector<IntMat2> out;
  for (long a = -bound; a <= bound; ++a)
    for (long b = -bound; b <= bound; ++b)
      for (long c = -bound; c <= bound; ++c) {
        // a d - b c = 1
        if (a == 0) {
          if (b * c != -1) continue;
          for (long d = -bound; d <= bound; ++d) out.push_back({a, b, c, d});
        } else {
          long num = 1 + b * c;
          if (num % a != 0) continue;
          long d = num / a;
          if (std::labs(d) <= bound) out.push_back({a, b, c, d});
        }
      }
  return out;
}
}  // namespace detail

/// Exhaustive search over sigma [[1,a],[0,p^n]] gamma tau, n <= max_n, gamma in SL2(Z) with entries
/// bounded by entry_bound, sigma in {I, [[1,0],[N,1]]^(+-1)}, for equal points with distinct cusp images.
/// A collision is a witness when eta = adj(x2) x1, divided by its content, has determinant != 1.
inline CollisionReport collision_search(long D, long p, long N, int max_n, long entry_bound) {
  if (D <= 0 || !is_squarefree(D)) throw std::invalid_argument("collision_search: D must be positive and squarefree");
  if (!is_prime(p)) throw std::invalid_argument("collision_search: p must be prime");
  if (N < 1 || max_n < 0 || entry_bound < 1) throw std::invalid_argument("collision_search: bad bounds");
  CollisionReport rep;
  rep.D = D;
  rep.p = p;
  rep.N = N;
  std::vector<IntMat2> sigmas = {IntMat2::identity()};
  if (N > 1) {
    sigmas.push_back({1, 0, N, 1});
    sigmas.push_back({1, 0, -N, 1});
  }
  const auto gammas = detail::sl2z_box(entry_bound);
  // exact key of x tau: x tau = (acD + bd + det sqrt(-D)) / (c^2 D + d^2)
  using Key = std::tuple<long, long, long, long>;
  std::map<Key, std::vector<IntMat2>> seen;
  auto reduce = [](long n, long d) {
    long g = std::gcd(std::labs(n), std::labs(d));
    if (d < 0) g = -g;
    return std::pair<long, long>{n / g, d / g};
  };
  auto same_cusp = [](const IntMat2& x, const IntMat2& y) { return x.a * y.c == x.c * y.a; };
  for (const auto& s : sigmas)
    for (int n = 0; n <= max_n; ++n) {
      const long pn = ipow(p, n);
      for (long a = 0; a < pn; ++a)
        for (const auto& g : gammas) {
          IntMat2 x = s * IntMat2{1, a, 0, pn} * g;
          long den = x.c * x.c * D + x.d * x.d;
          auto [un, ud] = reduce(x.a * x.c * D + x.b * x.d, den);
          auto [vn, vd] = reduce(x.det(), den);
          Key k{un, ud, vn, vd};
          auto& bucket = seen[k];
          ++rep.points;
          bool recorded = false;
          for (const auto& y : bucket) {
            if (same_cusp(x, y)) continue;
            IntMat2 eta = detail::normalise_eta(y.adj() * x);
            if (eta.det() == 1) {
              ++rep.trivial_collisions;
              continue;
            }
            IntMat2 back = detail::normalise_eta(eta.adj());
            bool fresh = !rep.etas.count({eta.a, eta.b, eta.c, eta.d});
            rep.etas.insert({eta.a, eta.b, eta.c, eta.d});
            rep.etas.insert({back.a, back.b, back.c, back.d});
            if (fresh && !recorded) {
              rep.witnesses.push_back({x, y, eta, eta.det()});
              recorded = true;
            }
          }
          // keep one representative per cusp image at each point
          bool dup = false;
          for (const auto& y : bucket)
            if (same_cusp(x, y)) dup = true;
          if (!dup) bucket.push_back(x);
        }
    }
  return rep;
}

}  // namespace quadsym
