#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <random>

#include "quadsym/periods.hpp"

using namespace quadsym;

namespace {

long legendre_oracle(long a, long p) {
  a = mod(a, p);
  if (a == 0) return 0;
  long r = 1, b = a, e = (p - 1) / 2;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

// 11a: y^2 + y = x^3 - x^2 - 10x - 20, i.e. (2y+1)^2 = 4x^3 - 4x^2 - 40x - 79
long ap_11a(long p) {
  if (p <= 11) {
    long count = 1;
    for (long x = 0; x < p; ++x)
      for (long y = 0; y < p; ++y)
        if (mod(y * y + y - (x * x * x - x * x - 10 * x - 20), p) == 0) ++count;
    return p + 1 - count;
  }
  long s = 0;
  for (long x = 0; x < p; ++x) s += legendre_oracle(mod(4 * x % p * x % p * x - 4 * x * x - 40 * x - 79, p), p);
  return -s;
}

const QExpansion& form11() {
  static const QExpansion f = [] {
    std::map<long, long> ap;
    for (long p : primes_up_to(20000)) ap[p] = ap_11a(p);
    return extend_coefficients(ap, 11, 20000);
  }();
  return f;
}

// plain partial sum, used only where Im z >= 1
Complex f_direct(const QExpansion& f, Complex z) {
  Complex s = 0;
  for (long n = 1; n <= 400; ++n) s += static_cast<double>(f.a[static_cast<std::size_t>(n)]) * std::exp(Complex(0, 2 * kPi * n) * z);
  return s;
}

// Gauss-Legendre nodes on [-1,1] by Newton iteration
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0);
  w.assign(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5)), dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double pk = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (t * p1 - p0) / (t * t - 1);
      double dt = p1 / dp;
      t -= dt;
      if (std::fabs(dt) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = t;
    w[static_cast<std::size_t>(i)] = 2 / ((1 - t * t) * dp * dp);
  }
}

IntMat2 random_gamma0_word(std::mt19937_64& rng, const std::vector<IntMat2>& gens, int len) {
  IntMat2 g = IntMat2::identity();
  for (int i = 0; i < len; ++i) {
    const IntMat2& x = gens[rng() % gens.size()];
    g = g * (rng() % 2 ? x : x.adj());
  }
  return g;
}

}  // namespace

TEST(ExtendCoefficients, Examples) {
  const auto& f = form11();
  EXPECT_EQ(f.a[1], 1);
  EXPECT_EQ(f.a[2], -2);
  EXPECT_EQ(f.a[4], 2);
  EXPECT_EQ(f.a[6], 2);
  EXPECT_EQ(f.a[11], 1);
  EXPECT_EQ(f.a[121], 1);
  std::map<long, long> partial{{2, -2}, {3, -1}};
  EXPECT_THROW(extend_coefficients(partial, 11, 10), std::invalid_argument);
  try {
    extend_coefficients(partial, 11, 10);
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("p = 5"), std::string::npos);
  }
}

TEST(ExtendCoefficients, RecursionInvariants) {
  const auto& f = form11();
  const long M = f.length();
  for (long m = 1; m <= 200; ++m)
    for (long n = 1; m * n <= M; ++n)
      if (std::gcd(m, n) == 1) {
        ASSERT_EQ(f.a[static_cast<std::size_t>(m * n)], f.a[static_cast<std::size_t>(m)] * f.a[static_cast<std::size_t>(n)]);
      }
  for (long p : primes_up_to(150))
    for (long pr = p; pr * p <= M; pr *= p) {
      long lhs = f.a[static_cast<std::size_t>(pr * p)];
      long rhs = p == 11 ? f.a[11] * f.a[static_cast<std::size_t>(pr)]
                         : f.a[static_cast<std::size_t>(p)] * f.a[static_cast<std::size_t>(pr)] - p * f.a[static_cast<std::size_t>(pr / p)];
      EXPECT_EQ(lhs, rhs) << p << " " << pr;
    }
  for (long n = 1; n <= M; ++n) ASSERT_LE(std::labs(f.a[static_cast<std::size_t>(n)]), 2 * n);
}

TEST(ExtendCoefficients, FromModularSymbolsMatchesPointCounts) {
  auto rep = rational_eigenforms(build_space(11), 7);
  ASSERT_EQ(rep.systems.size(), 1u);
  EigenSymbol e(build_space(11), rep.systems[0]);
  QExpansion g = newform_qexpansion(e, 3000);
  for (long n = 1; n <= 3000; ++n) ASSERT_EQ(g.a[static_cast<std::size_t>(n)], form11().a[static_cast<std::size_t>(n)]) << n;
}

TEST(ExtendCoefficients, CoefficientFile) {
  std::string path = ::testing::TempDir() + "ap11.txt";
  {
    std::ofstream out(path);
    out << "# 11a\n";
    for (long p : primes_up_to(100)) out << p << " " << ap_11a(p) << "  # p\n";
  }
  auto ap = read_coefficient_file(path);
  QExpansion g = extend_coefficients(ap, 11, 100);
  for (long n = 1; n <= 100; ++n) EXPECT_EQ(g.a[static_cast<std::size_t>(n)], form11().a[static_cast<std::size_t>(n)]);
  {
    std::ofstream out(path);
    out << "4 1\n";
  }
  EXPECT_THROW(read_coefficient_file(path), std::invalid_argument);
  EXPECT_THROW(read_coefficient_file(path + ".missing"), std::invalid_argument);
}

TEST(ModularIntegral, TrivialAndAdditive) {
  const auto& f = form11();
  Complex z(0.3, 0.7);
  EXPECT_EQ(modular_integral(f, z, z, 1e-10), Complex(0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> re(-1, 1), im(0.05, 1.5);
  for (int t = 0; t < 50; ++t) {
    Complex z1(re(rng), im(rng)), z2(re(rng), im(rng)), z3(re(rng), im(rng));
    Complex lhs = modular_integral(f, z1, z3, 1e-12);
    Complex rhs = modular_integral(f, z1, z2, 1e-12) + modular_integral(f, z2, z3, 1e-12);
    EXPECT_LT(std::abs(lhs - rhs), 1e-12);
  }
  EXPECT_THROW(modular_integral(f, Complex(0, -1), z, 1e-8), std::invalid_argument);
}

TEST(ModularIntegral, AgreesWithQuadrature) {
  const auto& f = form11();
  std::vector<double> x, w;
  gauss_legendre(30, x, w);
  // z(t) = i(1 + t), t in [0,1], dz = i dt; 8 panels
  Complex quad = 0;
  const int panels = 8;
  for (int k = 0; k < panels; ++k) {
    double lo = static_cast<double>(k) / panels, hi = static_cast<double>(k + 1) / panels;
    for (std::size_t j = 0; j < x.size(); ++j) {
      double t = lo + (hi - lo) * (x[j] + 1) / 2;
      quad += w[j] * (hi - lo) / 2 * f_direct(f, Complex(0, 1 + t)) * Complex(0, 1);
    }
  }
  Complex v = modular_integral(f, Complex(0, 1), Complex(0, 2), 1e-13);
  EXPECT_LT(std::abs(v - quad), 1e-10);
  EXPECT_GT(std::abs(v), 1e-4);
}

TEST(ModularIntegral, PrecisionError) {
  QExpansion small = extend_coefficients({{2, -2}, {3, -1}, {5, 1}, {7, -2}}, 11, 10);
  try {
    antiderivative(small, Complex(0, 0.01), 1e-10);
    FAIL() << "expected precision_error";
  } catch (const precision_error& e) {
    EXPECT_EQ(e.required_terms(), required_terms(0.01, 1e-10));
    EXPECT_GT(e.required_terms(), 10);
  }
  // tail bound is honoured by the chosen truncation
  for (double y : {1.0, 0.1, 0.01, 0.001}) {
    long M = required_terms(y, 1e-10);
    EXPECT_LE(antiderivative_tail(y, M), 1e-10);
    if (M > 1) {
      EXPECT_GT(antiderivative_tail(y, M - 1), 1e-10);
    }
  }
  const char* old = std::getenv("QUADSYM_MAX_TERMS");
  setenv("QUADSYM_MAX_TERMS", "123", 1);
  EXPECT_EQ(max_terms(), 123);
  setenv("QUADSYM_MAX_TERMS", "x", 1);
  EXPECT_THROW(max_terms(), std::invalid_argument);
  if (old) {
    setenv("QUADSYM_MAX_TERMS", old, 1);
  } else {
    unsetenv("QUADSYM_MAX_TERMS");
  }
}

TEST(Slash, IdentityAndAutomorphy) {
  const auto& f = form11();
  Complex z(0.1, 0.8);
  EXPECT_LT(std::abs(slash_weight2(f, IntMat2::identity(), z, 1e-12) - form_value(f, z, 1e-12)), 1e-14);
  auto gens = gamma0_generator_table(11).generators;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.3, 1.0);
  int checked = 0;
  for (int t = 0; t < 200 && checked < 40; ++t) {
    IntMat2 A = random_gamma0_word(rng, gens, 1 + static_cast<int>(rng() % 3));
    Complex w(re(rng), im(rng));
    if (mobius_apply(A, w).imag() < 2e-3) continue;
    ++checked;
    EXPECT_LT(std::abs(slash_weight2(f, A, w, 1e-11) - form_value(f, w, 1e-11)), 1e-9) << A.a << " " << A.b << " " << A.c << " " << A.d;
  }
  EXPECT_GE(checked, 20);
  EXPECT_THROW(slash_weight2(f, IntMat2{0, 1, 1, 0}, z, 1e-8), std::invalid_argument);
}

TEST(Slash, DerivativeMatchesFiniteDifference) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> re(-1, 1), im(0.2, 2);
  for (IntMat2 A : {IntMat2{2, 1, 5, 3}, IntMat2{8, 1, -33, -4}, IntMat2{3, 1, 0, 2}, IntMat2{1, 0, 4, 5}}) {
    for (int t = 0; t < 10; ++t) {
      Complex z(re(rng), im(rng));
      const double h = 1e-5;
      Complex fd = (mobius_apply(A, z + h) - mobius_apply(A, z - h)) / (2 * h);
      EXPECT_LT(std::abs(fd - mobius_derivative(A, z)), 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(PhiF, IdentityAndCocycle) {
  const auto& f = form11();
  const Complex i(0, 1);
  EXPECT_EQ(phi_f(f, IntMat2::identity(), i, 1e-10), Complex(0));
  auto gens = gamma0_generator_table(11).generators;
  std::mt19937_64 rng(19);
  int checked = 0;
  for (int t = 0; t < 5000 && checked < 50; ++t) {
    IntMat2 A = random_gamma0_word(rng, gens, 1 + static_cast<int>(rng() % 3));
    IntMat2 g = random_gamma0_word(rng, gens, 1 + static_cast<int>(rng() % 3));
    IntMat2 Ag = A * g;
    double ymin = std::min({mobius_apply(A, i).imag(), mobius_apply(g, i).imag(), mobius_apply(Ag, i).imag()});
    if (ymin < 5e-4) continue;
    ++checked;
    // f|A = f on Gamma_0(11), so phi_{f|A}(g(i)) = int_{Ag(i)}^{A(i)} f
    Complex lhs = phi_f(f, Ag, i, 1e-10);
    Complex f_slash_A = modular_integral(f, mobius_apply(Ag, i), mobius_apply(A, i), 1e-10);
    Complex rhs = f_slash_A + phi_f(f, A, i, 1e-10);
    EXPECT_LT(std::abs(lhs - rhs), 1e-8);
    // and the automorphy statement itself: int_{Ag(i)}^{A(i)} f = int_{g(i)}^{i} f
    EXPECT_LT(std::abs(f_slash_A - phi_f(f, g, i, 1e-10)), 1e-8);
  }
  EXPECT_EQ(checked, 50);
}

TEST(PhiF, PeriodLattice) {
  const auto& f = form11();
  ModularSymbolSpace space(11);
  auto gens = gamma0_generator_table(11).generators;  // T, V4, V6
  std::vector<BigMat2> basis = {to_big(gens[1]), to_big(gens[2])};
  std::vector<RVec> classes;
  std::vector<Complex> omegas;
  for (const auto& b : basis) {
    classes.push_back(space.homology_class(b));
    omegas.push_back(period(f, b, 1e-11));
  }
  ASSERT_EQ(rank(RMat{classes[0], classes[1]}), 2u);
  // the lattice is genuinely two-dimensional over R
  EXPECT_GT(std::abs((omegas[0] * std::conj(omegas[1])).imag()), 1e-3);
  std::mt19937_64 rng(23);
  int checked = 0;
  for (int t = 0; t < 2000 && checked < 30; ++t) {
    long c = 11 * static_cast<long>(1 + rng() % 3);
    long d = static_cast<long>(rng() % 81) - 40;
    if (std::gcd(c, d) != 1) continue;
    long x, y;
    detail::egcd(d, c, x, y);  // x d + y c = 1
    IntMat2 g{x, -y, c, d};
    ASSERT_EQ(g.det(), 1);
    bool ok = false;
    auto m = solve_in_span(classes, space.homology_class(to_big(g)), &ok);
    ASSERT_TRUE(ok);
    ASSERT_TRUE(is_integer(m[0]) && is_integer(m[1]));
    Complex expected = m[0].get_d() * omegas[0] + m[1].get_d() * omegas[1];
    // phi_f(g(i)) = int_{g i}^{i} f = -(period of g)
    Complex direct = phi_f(f, g, Complex(0, 1), 1e-9);
    EXPECT_LT(std::abs(-direct - expected), 1e-6) << c << " " << d;
    EXPECT_LT(std::abs(period(f, to_big(g), 1e-9) - expected), 1e-6);
    ++checked;
  }
  EXPECT_EQ(checked, 30);
}

TEST(DeltaF, AntisymmetryAndStability) {
  const auto& f = form11();
  const Complex i(0, 1);
  for (auto [a, p, n] : std::vector<std::tuple<long, long, int>>{{1, 3, 1}, {2, 5, 1}, {4, 7, 1}, {7, 5, 2}, {13, 7, 2}}) {
    Complex d1 = delta_f(f, a, p, n, i, 1e-10), d2 = delta_f(f, -a, p, n, i, 1e-10);
    EXPECT_LT(std::abs(d1 + d2), 1e-12);
  }
  Complex lo = delta_f(f, 1, 3, 1, i, 1e-6), hi = delta_f(f, 1, 3, 1, i, 1e-9);
  EXPECT_LT(std::abs(lo - hi), 2e-6);
  EXPECT_TRUE(std::isfinite(hi.real()) && std::isfinite(hi.imag()));
  EXPECT_THROW(delta_f(f, 3, 3, 1, i, 1e-8), std::invalid_argument);
}

TEST(DeltaF, EndpointHeights) {
  for (long p : {3L, 5L, 7L})
    for (long a = 1; a < p; ++a) {
      IntMat2 g = gamma_a_pn(a, p, 1);
      EXPECT_EQ(g.c, p);
      double expected = 1.0 / static_cast<double>(p * p + g.d * g.d);
      EXPECT_NEAR(mobius_apply(g, Complex(0, 1)).imag(), expected, 1e-15);
      // the predicted truncation fits within the default cap
      EXPECT_LE(required_terms(expected, 1e-10), 20000);
    }
  EXPECT_EQ(gamma_a_pn(2, 5, 1), (IntMat2{2, 1, 5, 3}));
  EXPECT_EQ(gamma_a_pn(1, 7, 1), (IntMat2{1, 0, 7, 1}));
  // gamma_{a + u p^n, p^{n+1}} = [[1,u],[0,p]] gamma_{a,p^n}
  for (long a : {1L, 2L, 4L})
    for (long u = 0; u < 5; ++u) EXPECT_EQ(gamma_a_pn(a + 5 * u, 5, 2), (IntMat2{1, u, 0, 5} * gamma_a_pn(a, 5, 1)));
}

TEST(FormalPeriods, Reduction) {
  const auto& f = form11();
  auto gens_small = gamma0_generator_table(11).generators;
  std::vector<BigMat2> gens;
  for (const auto& g : gens_small) gens.push_back(to_big(g));
  auto reps = gamma0_coset_reps(11);
  ASSERT_EQ(reps.size(), 12u);
  std::size_t triv = gamma0_coset_index(11, BigMat2::identity());
  // a generator is its own symbol
  auto s = reduce_to_generators(f, gens[1], {{1, 1}}, gens, reps, triv, 1e-10);
  EXPECT_EQ(s.support(), 1u);
  EXPECT_EQ(s.coeffs["B1"], 1);
  // a product of two generators
  auto s2 = reduce_to_generators(f, gens[1] * gens[2], {{1, 1}, {2, 1}}, gens, reps, triv, 1e-10);
  EXPECT_EQ(s2.coeffs["B1"], 1);
  EXPECT_EQ(s2.coeffs["B2"], 1);
  EXPECT_EQ(s2.support(), 2u);
  FormalPeriodSum sum = s;
  sum += reduce_to_generators(f, gens[2], {{2, 1}}, gens, reps, triv, 1e-10);
  EXPECT_EQ(sum.coeffs, s2.coeffs);
  EXPECT_LT(std::abs(*sum.shadow - *s2.shadow), 1e-8);
  EXPECT_THROW(reduce_to_generators(f, gens[1], {{2, 1}}, gens, reps, triv, 1e-10), std::invalid_argument);
  EXPECT_THROW(reduce_to_generators(f, gens[1], {{7, 1}}, gens, reps, triv, 1e-10), std::invalid_argument);

  // random A = B A_l in SL2(Z): shadow equals the direct integral, support bounded by |G| + index
  std::mt19937_64 rng(29);
  int checked = 0;
  for (int t = 0; t < 3000 && checked < 25; ++t) {
    std::vector<std::pair<std::size_t, int>> word;
    BigMat2 B = BigMat2::identity();
    int len = static_cast<int>(rng() % 3);
    for (int k = 0; k < len; ++k) {
      std::size_t j = rng() % gens.size();
      int e = rng() % 2 ? 1 : -1;
      word.push_back({j, e});
      B = B * (e == 1 ? gens[j] : gens[j].adj());
    }
    std::size_t l = rng() % reps.size();
    BigMat2 A = B * reps[l];
    IntMat2 As{to_ll(A.a), to_ll(A.b), to_ll(A.c), to_ll(A.d)};
    if (mobius_apply(As, Complex(0, 1)).imag() < 5e-4 || mobius_apply(to_ll(reps[l].c) == 0 ? IntMat2::identity() : IntMat2{to_ll(reps[l].a), to_ll(reps[l].b), to_ll(reps[l].c), to_ll(reps[l].d)}, Complex(0, 1)).imag() < 5e-4)
      continue;
    EXPECT_EQ(gamma0_coset_index(11, A), l);
    auto r = reduce_to_generators(f, A, word, gens, reps, l, 1e-10);
    EXPECT_LE(r.support(), gens.size() + reps.size());
    EXPECT_LT(std::abs(*r.shadow - phi_f(f, As, Complex(0, 1), 1e-10)), 1e-8);
    ++checked;
  }
  EXPECT_EQ(checked, 25);
}
