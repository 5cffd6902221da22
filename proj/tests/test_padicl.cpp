#include <gtest/gtest.h>

#include <random>

#include "quadsym/padicl.hpp"

using namespace quadsym;

namespace {

const EigenSymbol& sym11() {
  static const EigenSymbol f = [] {
    auto space = build_space(11);
    auto rep = rational_eigenforms(space, 7);
    return EigenSymbol(space, rep.systems.at(0));
  }();
  return f;
}

const QExpansion& q11() {
  static const QExpansion q = newform_qexpansion(sym11(), 20000);
  return q;
}

DigitPermutation random_sigma(long p, std::mt19937_64& rng) {
  DigitPermutation s = identity_sigma(p);
  std::shuffle(s.begin() + 1, s.end(), rng);
  return s;
}

}  // namespace

TEST(GammaAPn, Examples) {
  EXPECT_EQ(gamma_a_pn(2, 5, 1), (IntMat2{2, 1, 5, 3}));
  for (long p : {3L, 5L, 7L, 11L}) EXPECT_EQ(gamma_a_pn(1, p, 1), (IntMat2{1, 0, p, 1}));
  EXPECT_THROW(gamma_a_pn(5, 5, 1), std::invalid_argument);
  EXPECT_THROW(gamma_a_pn(26, 5, 2), std::invalid_argument);
  EXPECT_THROW(gamma_a_pn(1, 6, 1), std::invalid_argument);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    long p = std::vector<long>{3, 5, 7}[rng() % 3];
    int n = 1 + static_cast<int>(rng() % 3);
    long pn = ipow(p, n);
    long a = 1 + static_cast<long>(rng() % static_cast<unsigned long>(pn - 1));
    if (a % p == 0) ++a;
    long u = static_cast<long>(rng() % static_cast<unsigned long>(p));
    IntMat2 lhs = gamma_a_pn(a + u * pn, p, n + 1);
    EXPECT_EQ(lhs, (IntMat2{1, u, 0, p} * gamma_a_pn(a, p, n)));
    EXPECT_EQ(lhs.det(), ipow(p, n));
    // negative a: digits negated, same recursion with -u
    EXPECT_EQ(gamma_a_pn(-(a + u * pn), p, n + 1), (IntMat2{1, -u, 0, p} * gamma_a_pn(-a, p, n)));
  }
}

TEST(HeckeRoot, UnitRootAndFlags) {
  auto h = choose_hecke_root(-1, 3, 11, 20);
  ASSERT_TRUE(h.alpha);
  EXPECT_TRUE(h.ordinary);
  PAdicNum a = *h.alpha;
  PAdicNum poly = a * a - PAdicNum::from_integer(-1, 3, 20) * a + PAdicNum::from_integer(3, 3, 20);
  EXPECT_TRUE(equal_mod(poly, PAdicNum::zero(3), 20));
  EXPECT_EQ(a.valuation(), 0);
  auto h11 = choose_hecke_root(1, 11, 11);
  EXPECT_TRUE(h11.p_divides_level);
  EXPECT_EQ(h11.alpha->lift(), Rational(1));
  auto ss = choose_hecke_root(-2, 2, 11);
  EXPECT_FALSE(ss.alpha.has_value());
  EXPECT_FALSE(ss.ordinary);
}

TEST(AlphaRing, Arithmetic) {
  AlphaRing R(-1, 3, false);
  // alpha * alpha^-1 = 1 and alpha^2 = a_p alpha - p
  EXPECT_EQ(R.mul(R.alpha_pow(1), R.alpha_pow(-1)), (AlphaQ{1, 0}));
  EXPECT_EQ(R.alpha_pow(2), (AlphaQ{-3, -1}));
  EXPECT_EQ(R.mul(R.alpha_pow(-3), R.alpha_pow(5)), R.alpha_pow(2));
  AlphaRing D(1, 11, true);
  EXPECT_EQ(D.alpha_pow(-4), (AlphaQ{1, 0}));
  AlphaRing D2(-1, 11, true);
  EXPECT_EQ(D2.alpha_pow(-3), (AlphaQ{-1, 0}));
}

TEST(CyclotomicMeasure, CompatibilityExact) {
  for (long p : {3L, 5L, 11L}) {
    auto mu = cyclotomic_measure(sym11(), p, 3);
    EXPECT_EQ(mu.root.p_divides_level, p == 11);
    for (int n = 1; n < 3; ++n) EXPECT_TRUE(compatible_exact(mu, n)) << p << " " << n;
    EXPECT_EQ(mu.total(1), mu.total(3));
    PeriodPair z{};
    EXPECT_EQ(mu.value(p, 1), z);
    EXPECT_EQ(mu.value(p * 7, 2), z);
  }
}

TEST(CyclotomicMeasure, ValuesFromIndependentSymbols) {
  // p | N: mu(a + 11^n) = a_11^-n [oo, a/11^n], with the symbol evaluated through the BigInt Manin trick
  auto mu = cyclotomic_measure(sym11(), 11, 2);
  for (int n = 1; n <= 2; ++n)
    for (const auto& [a, v] : mu.table(n)) {
      auto [pl, mi] = sym11().eval(Cusp::infinity(), Cusp(a, ipow(11, n)));
      EXPECT_EQ(v.plus, (AlphaQ{pl, 0}));
      EXPECT_EQ(v.minus, (AlphaQ{mi, 0}));
    }
  // p not dividing N: alpha-corrected level 1 formula
  auto mu3 = cyclotomic_measure(sym11(), 3, 1);
  AlphaRing R(-1, 3, false);
  for (const auto& [a, v] : mu3.table(1)) {
    auto l1 = sym11().eval(Cusp::infinity(), Cusp(a, 3));
    auto l0 = sym11().eval(Cusp::infinity(), Cusp(a, 1));
    AlphaQ expect = R.mul(R.alpha_pow(-1), AlphaQ{l1.first, 0}) - R.mul(R.alpha_pow(-2), AlphaQ{l0.first, 0});
    EXPECT_EQ(v.plus, expect);
  }
}

TEST(CyclotomicMeasure, SupersingularBuiltButFlagged) {
  auto mu = cyclotomic_measure(sym11(), 2, 3);
  EXPECT_FALSE(mu.root.ordinary);
  EXPECT_FALSE(mu.root.alpha.has_value());
  EXPECT_TRUE(compatible_exact(mu, 1));
  EXPECT_TRUE(compatible_exact(mu, 2));
  EXPECT_THROW(lp_at_s(mu, PAdicNum::zero(2), 1, 10), not_available_error);
}

TEST(CyclotomicMeasure, OrdinaryValuationsBounded) {
  for (long p : {3L, 5L}) {
    auto mu = cyclotomic_measure(sym11(), p, 3);
    for (int n = 1; n <= 3; ++n) {
      long vmin = PAdicNum::kInfiniteValuation;
      for (const auto& [a, v] : mu.table(n)) {
        for (const AlphaQ* x : {&v.plus, &v.minus}) {
          PAdicNum e = embed(*x, mu.root, 20);
          if (!e.is_zero()) vmin = std::min(vmin, e.valuation());
        }
      }
      EXPECT_GE(vmin, 0) << p << " " << n;
    }
  }
}

TEST(QuadraticMeasure, HeckeIdentity) {
  // a_p F(z) = sum_u F((z+u)/p) + F(pz) for p not dividing N; U_p form when p | N
  const auto& f = q11();
  for (long p : {2L, 3L, 5L, 11L}) {
    Complex z(0.31, 0.45);
    Complex lhs = static_cast<double>(f.a[static_cast<std::size_t>(p)]) * antiderivative(f, z, 1e-13), rhs = 0;
    for (long u = 0; u < p; ++u) rhs += antiderivative(f, (z + static_cast<double>(u)) / static_cast<double>(p), 1e-13);
    if (p != 11) rhs += antiderivative(f, static_cast<double>(p) * z, 1e-13);
    EXPECT_LT(std::abs(lhs - rhs), 1e-11) << p;
  }
}

TEST(QuadraticMeasure, CompatibilityAndZeroOnPZp) {
  const auto& f = q11();
  auto mu = quadratic_measure(f, 3, 2);
  EXPECT_LT(compatibility_defect(mu, 1), 1e-6);
  EXPECT_EQ(mu.value(3, 1), AlphaC{});
  EXPECT_EQ(mu.value(6, 2), AlphaC{});
  AlphaC tot{};
  for (long a : {1L, 2L}) tot += mu.value(a, 1);
  EXPECT_EQ(tot, mu.total(1));
  for (long a : {1L, 2L, 4L, 5L, 7L, 8L}) EXPECT_EQ(mu.value(9 - a, 2), AlphaC{} - mu.value(a, 2)) << a;
  auto mu11 = quadratic_measure(f, 11, 2);
  EXPECT_TRUE(mu11.root.p_divides_level);
  EXPECT_LT(compatibility_defect(mu11, 1), 1e-6);
  // values do not vanish identically
  double mx = 0;
  for (const auto& [a, v] : mu.table(1)) mx = std::max(mx, std::abs(v.c0) + std::abs(v.c1));
  EXPECT_GT(mx, 1e-6);
  // other CM point
  auto mu5 = quadratic_measure(f, 5, 2, Complex(0.5, std::sqrt(3.0) / 2));
  EXPECT_LT(compatibility_defect(mu5, 1), 1e-6);
}

TEST(QuadraticMeasure, DeltaRelation) {
  // p | N: mu_Q(a + p) = a_p^-1 (phi_f(g_a i) - phi_f(g_-a i)) = a_p^-1 delta_f
  const auto& f = q11();
  auto mu = quadratic_measure(f, 11, 1);
  for (long a = 1; a < 11; ++a) {
    Complex d = delta_f(f, a, 11, 1, Complex(0, 1), 1e-11);
    EXPECT_LT(std::abs(mu.value(a, 1).c0 - d), 1e-9);
  }
}

TEST(Sigma, ParseAndValidate) {
  EXPECT_EQ(parse_sigma("(1 2)", 3), (DigitPermutation{0, 2, 1}));
  EXPECT_EQ(parse_sigma("2,1", 3), (DigitPermutation{0, 2, 1}));
  EXPECT_EQ(parse_sigma("(1 2 3)", 5), (DigitPermutation{0, 2, 3, 1, 4}));
  EXPECT_EQ(parse_sigma("(1 2)(2 3)", 5), (DigitPermutation{0, 3, 1, 2, 4}));
  EXPECT_EQ(parse_sigma("", 5), identity_sigma(5));
  EXPECT_THROW(parse_sigma("(0 1)", 3), std::invalid_argument);
  EXPECT_THROW(parse_sigma("1,1", 3), std::invalid_argument);
  EXPECT_THROW(parse_sigma("1", 5), std::invalid_argument);
  EXPECT_THROW(validate_sigma({1, 0, 2}, 3), std::invalid_argument);
  EXPECT_EQ(apply_sigma({0, 2, 1}, 1 + 2 * 3, 3, 2), 2 + 1 * 3);
}

TEST(Sigma, TwistPreservesDistribution) {
  std::mt19937_64 rng(13);
  for (long p : {3L, 5L, 7L}) {
    auto mu = cyclotomic_measure(sym11(), p, 3);
    auto same = sigma_twist(mu, identity_sigma(p));
    EXPECT_EQ(same.levels, mu.levels);
    for (int t = 0; t < 5; ++t) {
      auto s = random_sigma(p, rng);
      auto tw = sigma_twist(mu, s);
      for (int n = 1; n < 3; ++n) EXPECT_TRUE(compatible_exact(tw, n));
      for (int n = 1; n <= 3; ++n) EXPECT_EQ(tw.total(n), mu.total(n));
    }
  }
  auto q = quadratic_measure(q11(), 3, 2);
  auto qt = sigma_twist(q, DigitPermutation{0, 2, 1});
  EXPECT_LT(compatibility_defect(qt, 1), 1e-6);
}

TEST(Characters, ChiSigmaIdentities) {
  std::mt19937_64 rng(17);
  for (long p : {3L, 5L, 7L})
    for (int n = 1; n <= 2; ++n)
      for (long k = 0; k < p - 1; ++k) {
        auto chi = teichmuller_character(p, k, n);
        EXPECT_TRUE(is_multiplicative(chi));
        auto triv = chi_sigma(chi, identity_sigma(p));
        for (long a = 1; a < ipow(p, n); ++a) {
          if (a % p == 0) continue;
          EXPECT_EQ(triv.at(a), 0);
        }
        auto s = random_sigma(p, rng);
        auto cs = chi_sigma(chi, s);
        auto prod = pointwise_product(chi, cs);
        auto inv = inverse_sigma(s);
        for (long a = 1; a < ipow(p, n); ++a) {
          if (a % p == 0) continue;
          EXPECT_EQ(prod.at(a), chi.at(apply_sigma(inv, a, p, n)));
        }
        if (k == 0) {
          auto c0 = chi_sigma(chi, s);
          for (long a = 1; a < ipow(p, n); ++a) {
            if (a % p == 0) continue;
            EXPECT_EQ(c0.at(a), 0);
          }
        }
      }
  // omega(a) = a mod p through the table
  auto w = teichmuller_character(5, 1, 1);
  long g = primitive_root(5);
  EXPECT_EQ(g, 2);
  for (long a = 1; a < 5; ++a) {
    long x = 1;
    for (long e = 0; e < w.at(a); ++e) x = x * g % 5;
    EXPECT_EQ(x, a);
  }
}

TEST(Characters, ChiSigmaMultiplicativityIsReported) {
  // power maps a -> a^m make sigma^-1(a)/a multiplicative; a transposition does not.
  // Only record that both outcomes occur, the general claim is not asserted
  long mult = 0, non = 0;
  for (auto s : std::vector<DigitPermutation>{{0, 2, 1}, {0, 1, 3, 2, 4}, {0, 2, 1, 3, 4}, {0, 1, 5, 3, 2, 4, 6}}) {
    long p = static_cast<long>(s.size());
    auto cs = chi_sigma(teichmuller_character(p, 1, 1), s);
    (is_multiplicative(cs) ? mult : non)++;
  }
  EXPECT_GT(mult, 0);
  EXPECT_GT(non, 0);
}

TEST(MellinMazur, BasicsAndRefinement) {
  for (long p : {3L, 5L, 11L}) {
    auto mu = cyclotomic_measure(sym11(), p, 3);
    auto one = teichmuller_character(p, 0, 1);
    auto v = mellin_mazur(mu, one);
    EXPECT_EQ(v[0], mu.total(1));
    for (long k = 0; k < p - 1; ++k) {
      auto chi = teichmuller_character(p, k, 1);
      EXPECT_EQ(mellin_mazur(mu, chi), mellin_mazur(mu, lift_level(chi)));
      EXPECT_EQ(mellin_mazur(mu, chi), mellin_mazur(mu, lift_level(lift_level(chi))));
    }
    EXPECT_THROW(mellin_mazur(mu, teichmuller_character(p, 0, 4)), std::invalid_argument);
  }
}

TEST(MellinMazur, SigmaTwistIdentity) {
  std::mt19937_64 rng(31);
  for (long p : {3L, 5L, 7L}) {
    auto mu = cyclotomic_measure(sym11(), p, 2);
    for (int t = 0; t < 10; ++t) {
      auto s = random_sigma(p, rng);
      auto tw = sigma_twist(mu, s);
      for (int n = 1; n <= 2; ++n)
        for (long k = 0; k < p - 1; ++k) {
          auto chi = teichmuller_character(p, k, n);
          EXPECT_EQ(mellin_mazur(tw, chi), mellin_mazur(mu, pointwise_product(chi, chi_sigma(chi, s))));
        }
      auto one = teichmuller_character(p, 0, 2);
      EXPECT_EQ(mellin_mazur(tw, one), mellin_mazur(mu, one));
    }
  }
}

TEST(MellinMazur, PadicEvaluation) {
  auto mu = cyclotomic_measure(sym11(), 5, 2);
  for (long k = 0; k < 4; ++k) {
    auto chi = teichmuller_character(5, k, 2);
    auto gr = mellin_mazur(mu, chi);
    // direct: sum_a omega(a)^k mu(a)
    PAdicNum direct = PAdicNum::zero(5);
    int sign = k % 2 == 0 ? 1 : -1;
    for (const auto& [a, v] : mu.table(2))
      direct += teichmuller(a, 5, 20).pow(k) * embed(sign > 0 ? v.plus : v.minus, mu.root, 20);
    EXPECT_TRUE(equal_mod(evaluate_group_ring(gr, sign, mu.root, 20), direct, 15)) << k;
  }
}

TEST(ChiS, SeriesDirectAndOracle) {
  std::mt19937_64 rng(41);
  for (long p : {3L, 5L}) {
    EXPECT_TRUE(equal_mod(chi_s_eval(2, PAdicNum::zero(p), 12), PAdicNum::from_integer(1, p, 12), 12));
    for (int t = 0; t < 20; ++t) {
      long x = 1 + static_cast<long>(rng() % 1000);
      if (x % p == 0) ++x;
      long si = static_cast<long>(rng() % 200) - 100;
      if (si == 0) si = 1;
      PAdicNum s = PAdicNum::from_integer(p * si, p, 14);
      PAdicNum d = chi_s_eval(x, s, 12), ser = chi_s_series(x, s, 12);
      EXPECT_TRUE(equal_mod(d, ser, 10)) << p << " " << x << " " << si;
      // integer s: chi_s(x) = <x>^s
      PAdicNum xx = PAdicNum::from_integer(x, p, 16);
      PAdicNum oracle = principal_unit_part(xx).pow(p * si);
      EXPECT_TRUE(equal_mod(d, oracle, 10));
      long y = 1 + static_cast<long>(rng() % 1000);
      if (y % p == 0) ++y;
      EXPECT_TRUE(equal_mod(chi_s_eval(x, s, 12) * chi_s_eval(y, s, 12), chi_s_eval(x * y, s, 12), 10));
    }
    // non-integer s in pZ_p
    PAdicNum s = PAdicNum::from_rational(make_rational(p, 7), p, 14);
    EXPECT_TRUE(equal_mod(chi_s_eval(4, s, 12), chi_s_series(4, s, 12), 10));
    EXPECT_THROW(chi_s_eval(2, PAdicNum::from_integer(1, p, 10), 10), std::domain_error);
    EXPECT_THROW(chi_s_eval(p, PAdicNum::from_integer(p, p, 10), 10), std::invalid_argument);
  }
}

TEST(LpAtS, TwoRoutesAndTermBounds) {
  for (long p : {3L, 5L}) {
    auto mu = cyclotomic_measure(sym11(), p, 3);
    auto r0 = lp_at_s(mu, PAdicNum::zero(p), 3, 10);
    EXPECT_TRUE(equal_mod(r0.series, embed(mu.total(3).plus, mu.root, 20), 10));
    EXPECT_TRUE(r0.routes_agree);
    for (long si : {1L, 2L, -3L}) {
      PAdicNum s = PAdicNum::from_integer(p * si, p, 14);
      auto r = lp_at_s(mu, s, 3, 10);
      EXPECT_TRUE(r.routes_agree) << p << " " << si << " " << r.direct << " " << r.series;
      EXPECT_TRUE(r.term_bounds_hold);
      for (std::size_t k = 0; k < r.moments.size(); ++k) {
        const auto& m = r.moments[k];
        if (!m.is_zero()) {
          EXPECT_GE(m.valuation(), moment_valuation_bound(static_cast<long>(k), p, r.vmin));
        }
      }
    }
    EXPECT_THROW(lp_at_s(mu, PAdicNum::from_integer(1, p, 10), 3, 10), std::domain_error);
  }
  EXPECT_EQ(moment_valuation_bound(3, 3, 0), 2);
  EXPECT_EQ(factorial_valuation(10, 3), (10 - digit_sum(10, 3)) / 2);
  auto q = quadratic_measure(q11(), 3, 2);
  auto terms = lp_at_s_quadratic(q, PAdicNum::from_integer(3, 3, 10), 2, 10);
  EXPECT_EQ(terms.size(), 6u);
}
