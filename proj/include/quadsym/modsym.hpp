#pragma once

// Weight-2 modular symbols for Gamma_0(N) via Manin symbols (c:d) in P^1(Z/N).
// The symbol (c:d) stands for the path g{0, oo} = {b/d, a/c} where
// g = [[a,b],[c,d]] in SL2(Z).

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "quadsym/arith.hpp"
#include "quadsym/fuchsian.hpp"
#include "quadsym/linalg.hpp"
#include "quadsym/mat2.hpp"

namespace quadsym {

using BigMat2 = Mat2<BigInt>;

inline BigMat2 to_big(const IntMat2& m) { return {to_big(m.a), to_big(m.b), to_big(m.c), to_big(m.d)}; }

inline Cusp mobius_apply(const BigMat2& g, const Cusp& z) {
  BigInt num, den;
  if (z.is_infinity()) {
    num = g.a;
    den = g.c;
  } else {
    num = g.a * z.num + g.b * z.den;
    den = g.c * z.num + g.d * z.den;
  }
  if (num == 0 && den == 0) throw std::invalid_argument("mobius_apply: singular matrix");
  return {num, den};
}

namespace detail {

// x*a + y*b = gcd(a, b) >= 0
inline long egcd(long a, long b, long& x, long& y) {
  long x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    long q = a / b, t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
    t = y0 - q * y1;
    y0 = y1;
    y1 = t;
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  x = x0;
  y = y0;
  return a;
}

inline long mod_big(const BigInt& x, long n) {
  return static_cast<long>(mpz_fdiv_ui(x.get_mpz_t(), static_cast<unsigned long>(n)));
}

}  // namespace detail

class ProjectiveLine {
 public:
  explicit ProjectiveLine(long N) : N_(N) {
    if (N < 1) throw std::invalid_argument("ProjectiveLine: level must be >= 1");
    lookup_.assign(static_cast<std::size_t>(N * N), -1);
    std::vector<long> units;
    for (long u = 0; u < N; ++u)
      if (std::gcd(u, N) == 1) units.push_back(u);
    for (long c = 0; c < N; ++c)
      for (long d = 0; d < N; ++d) {
        if (std::gcd(std::gcd(c, d), N) != 1 || lookup_[slot(c, d)] >= 0) continue;
        const long idx = static_cast<long>(reps_.size());
        std::pair<long, long> best{c, d};
        for (long u : units) {
          long uc = (u * c) % N, ud = (u * d) % N;
          lookup_[slot(uc, ud)] = idx;
          best = std::min(best, {uc, ud});
        }
        reps_.push_back(best);
      }
  }

  long level() const { return N_; }
  std::size_t size() const { return reps_.size(); }
  const std::pair<long, long>& rep(std::size_t i) const { return reps_.at(i); }

  std::size_t index(long c, long d) const {
    long v = lookup_[slot(mod(c, N_), mod(d, N_))];
    if (v < 0) throw std::invalid_argument("ProjectiveLine: (c:d) with gcd(c,d,N) != 1");
    return static_cast<std::size_t>(v);
  }
  std::size_t index(const BigInt& c, const BigInt& d) const { return index(detail::mod_big(c, N_), detail::mod_big(d, N_)); }

  /// An SL2(Z) matrix whose bottom row reduces to rep(i).
  IntMat2 lift(std::size_t i) const {
    if (N_ == 1) return IntMat2::identity();
    long c = reps_.at(i).first, d = reps_.at(i).second;
    if (c == 0) c = N_;
    while (std::gcd(c, d) != 1) d += N_;
    long x, y;
    detail::egcd(d, c, x, y);  // x d + y c = 1
    return {x, -y, c, d};
  }

 private:
  std::size_t slot(long c, long d) const { return static_cast<std::size_t>(c * N_ + d); }
  long N_;
  std::vector<std::pair<long, long>> reps_;
  std::vector<long> lookup_;
};

inline long p1_size(long N) {
  long s = N;
  for (auto [p, e] : factorize(N)) s = s / p * (p + 1);
  return s;
}

/// One term of a Manin-trick decomposition: sign * g{0, oo}.
struct ManinTerm {
  int sign = 1;
  BigMat2 g;
};

namespace detail {

// Emits the matrices g_j with {0, r} = sum_j g_j{0, oo}.
inline void expand_zero_to(const Cusp& r, int sign, std::vector<ManinTerm>& out) {
  if (r.is_infinity()) {
    out.push_back({sign, BigMat2::identity()});
    return;
  }
  if (r.num == 0) return;
  out.push_back({sign, BigMat2::identity()});  // {0, oo}
  BigInt n = r.num, d = r.den;
  BigInt p_prev2 = 0, q_prev2 = 1, p_prev = 1, q_prev = 0;
  int j = 0;
  while (d != 0) {
    BigInt a;
    mpz_fdiv_q(a.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    BigInt rem = n - a * d;
    BigInt pj = a * p_prev + p_prev2, qj = a * q_prev + q_prev2;
    // {p_{j-1}/q_{j-1}, p_j/q_j} = g{0, oo}
    int s = (j % 2 == 0) ? -1 : 1;  // (-1)^(j-1)
    out.push_back({sign, BigMat2{s * pj, p_prev, s * qj, q_prev}});
    p_prev2 = p_prev;
    q_prev2 = q_prev;
    p_prev = pj;
    q_prev = qj;
    n = d;
    d = rem;
    ++j;
  }
}

// Same decomposition, bottom rows only, machine integers.
template <class Emit>
void expand_zero_to_small(long num, long den, Emit&& emit) {
  if (den == 0) {
    emit(0L, 1L, 1);
    return;
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) return;
  emit(0L, 1L, 1);
  long n = num, d = den, q_prev2 = 1, q_prev = 0;
  int j = 0;
  while (d != 0) {
    long a = n / d;
    if ((n % d != 0) && ((n < 0) != (d < 0))) --a;
    long rem = n - a * d;
    long qj = a * q_prev + q_prev2;
    emit((j % 2 == 0) ? -qj : qj, q_prev, 1);
    q_prev2 = q_prev;
    q_prev = qj;
    n = d;
    d = rem;
    ++j;
  }
}

}  // namespace detail

/// Continued-fraction decomposition of {alpha, beta} into M-paths.
inline std::vector<ManinTerm> manin_trick(const Cusp& alpha, const Cusp& beta) {
  std::vector<ManinTerm> out;
  if (alpha == beta) return out;
  detail::expand_zero_to(beta, 1, out);
  detail::expand_zero_to(alpha, -1, out);
  return out;
}

/// Gamma_0(N) equivalence of cusps: s1 c2 = s2 c1 mod gcd(c1 c2, N), a_j s_j = 1 mod c_j.
inline bool cusps_equivalent(const Cusp& x, const Cusp& y, long N) {
  auto s_of = [](const Cusp& z) {
    BigInt c = abs(z.den);
    if (c == 0) return z.num;
    if (c == 1) return BigInt(0);
    BigInt s;
    mpz_invert(s.get_mpz_t(), z.num.get_mpz_t(), c.get_mpz_t());
    return s;
  };
  BigInt s1 = s_of(x), s2 = s_of(y);
  BigInt c1 = x.den, c2 = y.den;
  BigInt prod = c1 * c2, g;
  BigInt bigN = to_big(N);
  mpz_gcd(g.get_mpz_t(), prod.get_mpz_t(), bigN.get_mpz_t());
  BigInt diff = s1 * c2 - s2 * c1;
  if (g == 0) return diff == 0;
  return mpz_divisible_p(diff.get_mpz_t(), g.get_mpz_t()) != 0;
}

inline long cusp_count(long N) {
  long total = 0;
  for (long d = 1; d <= N; ++d) {
    if (N % d) continue;
    long g = std::gcd(d, N / d), phi = 0;
    for (long k = 1; k <= g; ++k)
      if (std::gcd(k, g) == 1) ++phi;
    total += phi;
  }
  return total;
}

class ModularSymbolSpace {
 public:
  explicit ModularSymbolSpace(long N) : N_(N), p1_(N) {
    const std::size_t n = p1_.size();
    // two-term relations x + xS = 0, S: (c:d) -> (d:-c)
    std::vector<long> gen(n, -1);
    std::vector<int> gsign(n, 0);
    long ngens = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto [c, d] = p1_.rep(i);
      std::size_t j = p1_.index(d, -c);
      if (j == i || gen[i] >= 0) continue;
      gen[i] = ngens;
      gsign[i] = 1;
      gen[j] = ngens;
      gsign[j] = -1;
      ++ngens;
    }
    // three-term relations x + xU + xU^2 = 0, U: (c:d) -> (d:-c-d)
    RMat rel;
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      if (seen[i]) continue;
      RVec row(static_cast<std::size_t>(ngens), Rational(0));
      std::size_t k = i;
      for (int t = 0; t < 3; ++t) {
        seen[k] = true;
        if (gen[k] >= 0) row[static_cast<std::size_t>(gen[k])] += gsign[k];
        auto [c, d] = p1_.rep(k);
        k = p1_.index(d, -c - d);
      }
      if (!is_zero(row)) rel.push_back(std::move(row));
    }
    auto pivots = rref(rel);
    std::vector<long> basis_pos(static_cast<std::size_t>(ngens), -1);
    std::vector<long> pivot_row(static_cast<std::size_t>(ngens), -1);
    for (std::size_t r = 0; r < pivots.size(); ++r) pivot_row[pivots[r]] = static_cast<long>(r);
    std::vector<long> free_gens;
    for (long g = 0; g < ngens; ++g)
      if (pivot_row[static_cast<std::size_t>(g)] < 0) {
        basis_pos[static_cast<std::size_t>(g)] = static_cast<long>(free_gens.size());
        free_gens.push_back(g);
      }
    const std::size_t dim = free_gens.size();
    std::vector<RVec> gen_coords(static_cast<std::size_t>(ngens), RVec(dim, Rational(0)));
    for (long g = 0; g < ngens; ++g) {
      auto& v = gen_coords[static_cast<std::size_t>(g)];
      if (basis_pos[static_cast<std::size_t>(g)] >= 0) {
        v[static_cast<std::size_t>(basis_pos[static_cast<std::size_t>(g)])] = 1;
      } else {
        const auto& row = rel[static_cast<std::size_t>(pivot_row[static_cast<std::size_t>(g)])];
        for (std::size_t b = 0; b < dim; ++b) v[b] = -row[static_cast<std::size_t>(free_gens[b])];
      }
    }
    coords_.assign(n, RVec(dim, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
      if (gen[i] >= 0) coords_[i] = scale(Rational(gsign[i]), gen_coords[static_cast<std::size_t>(gen[i])]);
    // each basis vector is represented by the first P^1 element of its generator
    for (long g : free_gens)
      for (std::size_t i = 0; i < n; ++i)
        if (gen[i] == g && gsign[i] == 1) {
          basis_symbols_.push_back(i);
          break;
        }

    // boundary map
    std::vector<std::vector<std::pair<std::size_t, int>>> bd(dim);
    for (std::size_t b = 0; b < dim; ++b) {
      BigMat2 g = to_big(p1_.lift(basis_symbols_[b]));
      bd[b].push_back({cusp_class(Cusp(g.a, g.c)), 1});
      bd[b].push_back({cusp_class(Cusp(g.b, g.d)), -1});
    }
    boundary_ = zero_matrix(cusps_.size(), dim);
    for (std::size_t b = 0; b < dim; ++b)
      for (auto [row, s] : bd[b]) boundary_[row][b] += s;
    cuspidal_ = kernel(boundary_, dim);
  }

  long level() const { return N_; }
  const ProjectiveLine& p1() const { return p1_; }
  std::size_t dimension() const { return basis_symbols_.size(); }
  std::size_t cuspidal_dimension() const { return cuspidal_.size(); }
  const std::vector<RVec>& cuspidal_basis() const { return cuspidal_; }
  const RMat& boundary_matrix() const { return boundary_; }
  const std::vector<Cusp>& cusp_classes() const { return cusps_; }
  const std::vector<std::size_t>& basis_symbols() const { return basis_symbols_; }

  /// Coordinates of the Manin symbol with P^1 index i.
  const RVec& symbol_coords(std::size_t i) const { return coords_.at(i); }
  RVec symbol(long c, long d) const { return coords_[p1_.index(c, d)]; }

  RVec coords_of(const std::vector<ManinTerm>& terms) const {
    RVec v(dimension(), Rational(0));
    for (const auto& t : terms) {
      const auto& x = coords_[p1_.index(t.g.c, t.g.d)];
      for (std::size_t k = 0; k < v.size(); ++k)
        if (x[k] != 0) v[k] += t.sign * x[k];
    }
    return v;
  }

  RVec path(const Cusp& alpha, const Cusp& beta) const { return coords_of(manin_trick(alpha, beta)); }

  /// T_p on the full symbol space, from the action of the p+1 (or p if p | N) cosets on paths.
  RMat hecke_full(long p) const {
    if (!is_prime(p)) throw std::invalid_argument("hecke: p must be prime");
    auto cosets = hecke_cosets(p);
    RMat m = zero_matrix(dimension(), dimension());
    for (std::size_t b = 0; b < dimension(); ++b) {
      BigMat2 g = to_big(p1_.lift(basis_symbols_[b]));
      Cusp from(g.b, g.d), to(g.a, g.c);
      RVec col(dimension(), Rational(0));
      for (const auto& M : cosets) col = add(col, path(mobius_apply(M, from), mobius_apply(M, to)));
      for (std::size_t k = 0; k < dimension(); ++k) m[k][b] = col[k];
    }
    return m;
  }

  std::vector<BigMat2> hecke_cosets(long p) const {
    std::vector<BigMat2> out;
    for (long u = 0; u < p; ++u) out.push_back({BigInt(1), to_big(u), BigInt(0), to_big(p)});
    if (N_ % p != 0) out.push_back({to_big(p), BigInt(0), BigInt(0), BigInt(1)});
    return out;
  }

  /// T_p on the cuspidal subspace, in the cuspidal basis.
  RMat hecke_matrix(long p) const { return restrict_to(hecke_full(p), cuspidal_); }

  /// The involution (c:d) -> (-c:d) induced by z -> -conj(z).
  RMat star_full() const {
    RMat m = zero_matrix(dimension(), dimension());
    for (std::size_t b = 0; b < dimension(); ++b) {
      auto [c, d] = p1_.rep(basis_symbols_[b]);
      const auto& col = coords_[p1_.index(-c, d)];
      for (std::size_t k = 0; k < dimension(); ++k) m[k][b] = col[k];
    }
    return m;
  }
  RMat star_matrix() const { return restrict_to(star_full(), cuspidal_); }

  /// Coordinates in the cuspidal basis; domain_error if v is not cuspidal.
  RVec to_cuspidal(const RVec& v) const {
    bool ok = false;
    auto x = solve_in_span(cuspidal_, v, &ok);
    if (!ok) throw std::domain_error("to_cuspidal: vector is not in the cuspidal subspace");
    return x;
  }

  RVec from_cuspidal(const RVec& x) const {
    RVec v(dimension(), Rational(0));
    for (std::size_t j = 0; j < x.size(); ++j)
      if (x[j] != 0) v = add(v, scale(x[j], cuspidal_[j]));
    return v;
  }

  bool in_gamma0(const BigMat2& g) const {
    return g.det() == 1 && mpz_divisible_ui_p(g.c.get_mpz_t(), static_cast<unsigned long>(N_)) != 0;
  }

  /// Class of {alpha, g(alpha)} in the cuspidal subspace (cuspidal coordinates).
  RVec homology_class(const BigMat2& g, const Cusp& alpha = Cusp::infinity()) const {
    if (!in_gamma0(g)) throw std::invalid_argument("homology_class: g is not in Gamma_0(N)");
    return to_cuspidal(path(alpha, mobius_apply(g, alpha)));
  }

 private:
  std::size_t cusp_class(const Cusp& c) {
    for (std::size_t k = 0; k < cusps_.size(); ++k)
      if (cusps_equivalent(cusps_[k], c, N_)) return k;
    cusps_.push_back(c);
    return cusps_.size() - 1;
  }

  long N_;
  ProjectiveLine p1_;
  std::vector<RVec> coords_;
  std::vector<std::size_t> basis_symbols_;
  std::vector<Cusp> cusps_;
  RMat boundary_;
  std::vector<RVec> cuspidal_;
};

inline ModularSymbolSpace build_space(long N) { return ModularSymbolSpace(N); }

/// {alpha, g alpha} = sum over the letters of a word; letters are (generator index, +-1).
inline std::vector<RVec> distinguished_class_decomposition(const ModularSymbolSpace& space, const BigMat2& g,
                                                           const std::vector<BigMat2>& generators,
                                                           const std::vector<std::pair<std::size_t, int>>& word,
                                                           const Cusp& alpha = Cusp::infinity()) {
  BigMat2 prod = BigMat2::identity();
  std::vector<RVec> out;
  for (auto [idx, e] : word) {
    if (idx >= generators.size() || (e != 1 && e != -1)) throw std::invalid_argument("decomposition: bad letter");
    BigMat2 letter = e == 1 ? generators[idx] : generators[idx].adj();
    prod = prod * letter;
    out.push_back(space.homology_class(letter, alpha));
  }
  if (!(prod == g) && !(prod == -g)) throw std::invalid_argument("decomposition: word does not multiply to g");
  return out;
}

// ---------------------------------------------------------------------------
// Rational eigen-systems

struct EigenSystem {
  std::map<long, long> ap;  // all primes <= bound, including p | N
  RVec plus, minus;         // common eigenvectors in the cuspidal basis (+-1 for the star involution)
};

struct EigenReport {
  std::vector<EigenSystem> systems;
  std::size_t unresolved_dimension = 0;  // per sign: irrational or repeated systems
};

namespace detail {

struct Piece {
  std::vector<RVec> basis;  // cuspidal coordinates
  std::map<long, long> ap;
};

inline long isqrt_floor(long n) {
  long r = static_cast<long>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline std::vector<Piece> split_by_hecke(std::vector<Piece> pieces, const RMat& T, long p, std::size_t& lost) {
  std::vector<Piece> out;
  const long bound = isqrt_floor(4 * p);
  for (auto& piece : pieces) {
    RMat r = restrict_to(T, piece.basis);
    const std::size_t k = piece.basis.size();
    std::size_t found = 0;
    for (long lam = -bound; lam <= bound; ++lam) {
      RMat s = r;
      for (std::size_t i = 0; i < k; ++i) s[i][i] -= lam;
      auto ker = kernel(s, k);
      if (ker.empty()) continue;
      Piece np;
      np.ap = piece.ap;
      np.ap[p] = lam;
      for (const auto& v : ker) {
        RVec w(T.size(), Rational(0));
        for (std::size_t j = 0; j < k; ++j)
          if (v[j] != 0) w = add(w, scale(v[j], piece.basis[j]));
        np.basis.push_back(std::move(w));
      }
      found += ker.size();
      out.push_back(std::move(np));
    }
    lost += k - found;
  }
  return out;
}

}  // namespace detail

/// Simultaneous rational eigenspaces of T_p, p <= bound, p not dividing N, on the cuspidal subspace.
inline EigenReport rational_eigenforms(const ModularSymbolSpace& space, long bound) {
  if (bound < 2) throw std::invalid_argument("rational_eigenforms: bound must be >= 2");
  EigenReport rep;
  const std::size_t g2 = space.cuspidal_dimension();
  if (g2 == 0) return rep;
  RMat star = space.star_matrix();
  auto signed_part = [&](int s) {
    RMat m = star;
    for (std::size_t i = 0; i < g2; ++i) m[i][i] -= s;
    return kernel(m, g2);
  };
  std::vector<detail::Piece> plus{{signed_part(1), {}}}, minus{{signed_part(-1), {}}};
  std::size_t lost_plus = 0, lost_minus = 0;
  std::vector<long> bad;
  for (long p : primes_up_to(bound)) {
    if (space.level() % p == 0) {
      bad.push_back(p);
      continue;
    }
    RMat T = space.hecke_matrix(p);
    plus = detail::split_by_hecke(std::move(plus), T, p, lost_plus);
    minus = detail::split_by_hecke(std::move(minus), T, p, lost_minus);
  }
  for (const auto& pp : plus) {
    if (pp.basis.size() != 1) {
      lost_plus += pp.basis.size();
      continue;
    }
    for (const auto& mm : minus) {
      if (mm.basis.size() != 1 || mm.ap != pp.ap) continue;
      EigenSystem sys{pp.ap, pp.basis[0], mm.basis[0]};
      for (long p : bad) {
        RMat T = space.hecke_matrix(p);
        RVec tv = mat_vec(T, sys.plus);
        std::size_t j = 0;
        while (sys.plus[j] == 0) ++j;
        Rational lam = tv[j] / sys.plus[j];
        if (!is_integer(lam) || tv != scale(lam, sys.plus)) throw std::domain_error("rational_eigenforms: U_p is not scalar");
        sys.ap[p] = to_ll(lam.get_num());
      }
      rep.systems.push_back(std::move(sys));
      break;
    }
  }
  rep.unresolved_dimension = lost_plus;
  return rep;
}

// ---------------------------------------------------------------------------
// Eigen-functionals: the modular symbol {r, s} -> (phi+(r,s), phi-(r,s)) of a newform

class EigenSymbol {
 public:
  EigenSymbol(const ModularSymbolSpace& space, const EigenSystem& sys) : N_(space.level()), ap_(sys.ap) {
    const std::size_t dim = space.dimension();
    RMat star = space.star_full();
    for (int s : {1, -1}) {
      RMat stacked;
      auto push_t = [&](const RMat& m, long lam) {
        RMat t = transpose(m);
        for (std::size_t i = 0; i < dim; ++i) t[i][i] -= lam;
        for (auto& row : t) stacked.push_back(row);
      };
      for (auto [p, a] : sys.ap)
        if (N_ % p != 0) push_t(space.hecke_full(p), a);
      push_t(star, s);
      auto ker = kernel(stacked, dim);
      if (ker.size() != 1) throw std::domain_error("EigenSymbol: eigen-functional is not unique; raise the prime bound");
      const RVec& phi = ker[0];
      std::vector<Rational> vals(space.p1().size());
      for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = dot(phi, space.symbol_coords(i));
      // scale to primitive integers, first nonzero positive
      BigInt l = 1, g = 0;
      for (const auto& v : vals) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den().get_mpz_t());
      for (auto& v : vals) {
        v *= l;
        BigInt n = v.get_num();
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
      }
      Rational f = make_rational(BigInt(1), g);
      for (const auto& v : vals)
        if (v != 0) {
          if (v < 0) f = -f;
          break;
        }
      std::vector<long> iv(vals.size());
      for (std::size_t i = 0; i < vals.size(); ++i) iv[i] = to_ll(Rational(vals[i] * f).get_num());
      (s == 1 ? plus_ : minus_) = std::move(iv);
      (s == 1 ? plus_functional_ : minus_functional_) = scale(Rational(l * f), phi);
    }
    p1_ = std::make_shared<ProjectiveLine>(space.p1());
  }

  long level() const { return N_; }
  const std::map<long, long>& small_ap() const { return ap_; }
  const std::vector<long>& plus_values() const { return plus_; }
  const std::vector<long>& minus_values() const { return minus_; }
  const RVec& plus_functional() const { return plus_functional_; }
  const RVec& minus_functional() const { return minus_functional_; }

  /// (phi+, phi-) of the path {r1/s1, r2/s2}; s = 0 means infinity.
  std::pair<long, long> eval(long r1, long s1, long r2, long s2) const {
    long plus = 0, minus = 0;
    auto acc = [&](int sign) {
      return [&, sign](long c, long d, int) {
        std::size_t i = p1_->index(c, d);
        plus += sign * plus_[i];
        minus += sign * minus_[i];
      };
    };
    detail::expand_zero_to_small(r2, s2, acc(1));
    detail::expand_zero_to_small(r1, s1, acc(-1));
    return {plus, minus};
  }

  std::pair<Rational, Rational> eval(const Cusp& a, const Cusp& b) const {
    std::vector<ManinTerm> terms = manin_trick(a, b);
    long plus = 0, minus = 0;
    for (const auto& t : terms) {
      std::size_t i = p1_->index(t.g.c, t.g.d);
      plus += t.sign * plus_[i];
      minus += t.sign * minus_[i];
    }
    return {Rational(plus), Rational(minus)};
  }

  /// a_p from T_p applied to one M-symbol where phi+ is nonzero.
  long ap(long p) const {
    if (auto it = ap_.find(p); it != ap_.end()) return it->second;
    if (!is_prime(p)) throw std::invalid_argument("ap: p must be prime");
    std::size_t i0 = 0;
    while (plus_[i0] == 0) ++i0;
    IntMat2 g = p1_->lift(i0);
    long total = 0;
    auto add_path = [&](long n1, long d1, long n2, long d2) { total += eval(n1, d1, n2, d2).first; };
    // path {b/d, a/c}
    for (long u = 0; u < p; ++u) add_path(g.b + u * g.d, p * g.d, g.a + u * g.c, p * g.c);
    if (N_ % p != 0) add_path(p * g.b, g.d, p * g.a, g.c);
    if (total % plus_[i0] != 0) throw std::domain_error("ap: non-integral eigenvalue");
    return total / plus_[i0];
  }

 private:
  long N_;
  std::map<long, long> ap_;
  std::vector<long> plus_, minus_;
  RVec plus_functional_, minus_functional_;
  std::shared_ptr<ProjectiveLine> p1_;
};

}  // namespace quadsym
