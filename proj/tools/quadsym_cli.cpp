// quadsym: command-line front end. JSON on stdout; exit 0 ok, 2 bad input, 3 failed verification.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quadsym/acceptance.hpp"
#include "quadsym/fuchsian.hpp"
#include "quadsym/modsym.hpp"
#include "quadsym/padicl.hpp"
#include "quadsym/periods.hpp"
#include "quadsym/quadsym.hpp"
#include "quadsym/quaternion.hpp"
#include "quadsym/shimura.hpp"

using namespace quadsym;
using json = nlohmann::json;

namespace {

constexpr int kOk = 0, kBadInput = 2, kFailed = 3;

struct BadInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

void require(bool ok, const std::string& param, const std::string& what) {
  if (!ok) throw BadInput(param + ": " + what);
}

// 12 significant digits, so output is byte-stable
double r12(double x) {
  if (!std::isfinite(x) || x == 0) return x == 0 ? 0.0 : x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::stod(buf);
}

json cjson(Complex z) { return json::array({r12(z.real()), r12(z.imag())}); }

std::string mat_str(const IntMat2& m) {
  std::ostringstream os;
  os << "[[" << m.a << "," << m.b << "],[" << m.c << "," << m.d << "]]";
  return os.str();
}

json rmat_json(const RMat& m) {
  json out = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const auto& x : row) r.push_back(x.get_str());
    out.push_back(r);
  }
  return out;
}

std::string alpha_str(const AlphaQ& v) {
  if (v.c1 == 0) return v.c0.get_str();
  return v.c0.get_str() + " + (" + v.c1.get_str() + ")*alpha";
}

json alpha_json(const AlphaC& v) { return json{{"c0", cjson(v.c0)}, {"c1", cjson(v.c1)}}; }

json root_json(const HeckeRootChoice& r) {
  json j{{"a_p", r.ap}, {"p_divides_level", r.p_divides_level}, {"ordinary", r.ordinary}};
  j["alpha"] = r.alpha ? json(r.alpha->str()) : json(nullptr);
  return j;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

void check_prime(long p, const std::string& name = "p") { require(is_prime(p), name, std::to_string(p) + " is not prime"); }

// eigenform at level N: the first rational newform, or coefficients from a file
struct Form {
  std::optional<ModularSymbolSpace> space;
  std::optional<EigenSymbol> sym;
  QExpansion q;
};

Form load_form(long N, bool need_symbol, const std::string& coeffs, long needed_prime) {
  require(N >= 2, "N", "level must be at least 2");
  Form f;
  if (!coeffs.empty() && !need_symbol) {
    auto ap = read_coefficient_file(coeffs);
    long M = max_terms();
    if (!ap.empty()) M = std::min(M, ap.rbegin()->first);
    f.q = extend_coefficients(ap, N, M);
    return f;
  }
  f.space.emplace(N);
  auto rep = rational_eigenforms(*f.space, std::max<long>(7, needed_prime));
  require(!rep.systems.empty(), "N", "no rational newform at level " + std::to_string(N));
  f.sym.emplace(*f.space, rep.systems.front());
  if (!need_symbol) f.q = newform_qexpansion(*f.sym, max_terms());
  return f;
}

// ---------------------------------------------------------------------------

int cmd_classify(long a, long b) {
  require(a != 0, "a", "must be nonzero");
  require(b != 0, "b", "must be nonzero");
  QuaternionAlgebra h(a, b);
  auto c = classify(h);
  emit({{"a", a},
        {"b", b},
        {"discriminant", c.discriminant},
        {"class", to_string(c.kind)},
        {"ramified_primes", h.ramified_primes()},
        {"definite", h.is_definite()},
        {"small_ramified", c.small_ramified}});
  return kOk;
}

int cmd_order(long D, long N) {
  require(D >= 1 && is_squarefree(D), "D", "must be 1 or squarefree");
  require(N >= 1, "N", "must be positive");
  QuaternionOrder o;
  try {
    o = eichler_order(D, N);
  } catch (const std::invalid_argument& e) {
    throw BadInput(std::string("D/N: ") + e.what());
  }
  auto cert = is_order(o);
  json basis = json::array();
  for (const auto& q : o.basis) basis.push_back(q.str());
  json j{{"D", D}, {"N", N}, {"algebra", {o.alg.a, o.alg.b}}, {"basis", basis}, {"is_order", cert.ok}};
  if (!cert.ok) j["reason"] = cert.reason;
  if (!o.note.empty()) j["note"] = o.note;
  emit(j);
  return cert.ok ? kOk : kFailed;
}

json table1_json(const Table1Report& r) {
  json gens = json::array({"T"});
  for (long k : gamma0_generator_table(r.p).ks) gens.push_back("V" + std::to_string(k));
  json rels = json::array();
  for (const auto& c : r.relations)
    rels.push_back({{"k", c.k}, {"printed_order", c.printed_order}, {"actual_order", c.actual_order}, {"holds", c.holds}});
  return {{"p", r.p},
          {"generators", gens},
          {"genus", r.computed.genus},
          {"printed_genus", r.printed_genus},
          {"nu2", r.computed.nu2},
          {"nu3", r.computed.nu3},
          {"relations", rels},
          {"count_identity", r.count_identity},
          {"verified", r.verified}};
}

int cmd_table1(std::optional<long> p, const std::string& format) {
  std::vector<long> ps;
  if (p) {
    check_prime(*p);
    ps.push_back(*p);
  } else {
    for (const auto& row : table1_rows()) ps.push_back(row.p);
  }
  std::vector<Table1Report> reps;
  for (long q : ps) {
    try {
      reps.push_back(verify_table1_row(q));
    } catch (const not_available_error& e) {
      throw BadInput(std::string("p: ") + e.what());
    }
  }
  bool all = true;
  for (const auto& r : reps) all = all && r.verified;
  if (format == "csv") {
    std::cout << "p,generators,genus,printed_genus,nu2,nu3,relations_hold,count_identity,verified\n";
    for (const auto& r : reps)
      std::cout << r.p << "," << r.generator_count << "," << r.computed.genus << "," << r.printed_genus << ","
                << r.computed.nu2 << "," << r.computed.nu3 << "," << r.relations_hold << "," << r.count_identity << ","
                << r.verified << "\n";
  } else if (p) {
    emit(table1_json(reps.front()));
  } else {
    json rows = json::array();
    for (const auto& r : reps) rows.push_back(table1_json(r));
    emit(rows);
  }
  return all ? kOk : kFailed;
}

int cmd_genus(long p) {
  check_prime(p);
  auto g = genus_and_elliptic_counts(p);
  emit({{"p", p}, {"genus", g.genus}, {"nu2", g.nu2}, {"nu3", g.nu3}});
  return kOk;
}

int cmd_modsym(long N, long pmax) {
  require(N >= 1, "N", "must be positive");
  require(pmax >= 0, "hecke", "must be non-negative");
  ModularSymbolSpace m(N);
  json hecke = json::array();
  for (long p : primes_up_to(pmax)) hecke.push_back({{"p", p}, {"matrix", rmat_json(m.hecke_matrix(p))}});
  json j{{"N", N},
         {"dimension", m.dimension()},
         {"cuspidal_dimension", m.cuspidal_dimension()},
         {"cusps", m.cusp_classes().size()},
         {"hecke", hecke}};
  if (pmax >= 2 && m.cuspidal_dimension() > 0) {
    auto rep = rational_eigenforms(m, pmax);
    json sys = json::array();
    for (const auto& s : rep.systems) {
      json ap = json::array();
      for (const auto& [p, a] : s.ap) ap.push_back({{"p", p}, {"a_p", a}});
      sys.push_back(ap);
    }
    j["rational_eigensystems"] = sys;
    j["unresolved_dimension"] = rep.unresolved_dimension;
  }
  emit(j);
  return kOk;
}

int cmd_measure(const std::string& kind, long N, long p, int n, const std::string& sigma, long tauD,
                const std::string& coeffs, double tol) {
  require(kind == "cyclotomic" || kind == "quadratic", "kind", "must be cyclotomic or quadratic");
  check_prime(p);
  require(n >= 1 && n <= 6, "n", "level must lie in 1..6");
  require(tauD >= 1, "tau", "D must be positive");
  std::optional<DigitPermutation> s;
  if (!sigma.empty()) {
    try {
      s = parse_sigma(sigma, p);
    } catch (const std::invalid_argument& e) {
      throw BadInput(std::string("sigma: ") + e.what());
    }
  }
  json j{{"kind", kind}, {"N", N}, {"p", p}, {"n", n}};
  if (s) j["sigma"] = *s;
  json levels = json::array();
  bool ok = true;
  json failures = json::array();
  if (kind == "cyclotomic") {
    Form f = load_form(N, true, coeffs, p);
    auto mu = cyclotomic_measure(*f.sym, p, n);
    if (s) mu = sigma_twist(mu, *s);
    j["root"] = root_json(mu.root);
    for (int k = 1; k <= n; ++k) {
      json vals = json::array();
      for (const auto& [a, v] : mu.table(k)) vals.push_back({{"a", a}, {"plus", alpha_str(v.plus)}, {"minus", alpha_str(v.minus)}});
      levels.push_back({{"level", k}, {"values", vals}});
      if (k < n && !compatible_exact(mu, k)) {
        ok = false;
        failures.push_back("level " + std::to_string(k) + " -> " + std::to_string(k + 1) + " not exact");
      }
    }
  } else {
    Form f = load_form(N, false, coeffs, p);
    Complex tau(0, std::sqrt(static_cast<double>(tauD)));
    j["tau"] = cjson(tau);
    auto mu = quadratic_measure(f.q, p, n, tau);
    if (s) mu = sigma_twist(mu, *s);
    j["root"] = root_json(mu.root);
    json defects = json::array();
    for (int k = 1; k <= n; ++k) {
      json vals = json::array();
      for (const auto& [a, v] : mu.table(k)) vals.push_back({{"a", a}, {"value", alpha_json(v)}});
      levels.push_back({{"level", k}, {"values", vals}});
      if (k < n) {
        double d = compatibility_defect(mu, k);
        defects.push_back(r12(d));
        if (!(d < tol)) {
          ok = false;
          failures.push_back("level " + std::to_string(k) + " -> " + std::to_string(k + 1) + " defect " + std::to_string(d));
        }
      }
    }
    j["compatibility_defects"] = defects;
  }
  j["levels"] = levels;
  j["compatible"] = ok;
  if (!ok) j["failures"] = failures;
  emit(j);
  return ok ? kOk : kFailed;
}

Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    std::size_t used = 0;
    long num = std::stol(s.substr(0, slash), &used);
    require(used == s.substr(0, slash).size(), "s", "not a rational NUM/DEN");
    long den = 1;
    if (slash != std::string::npos) {
      den = std::stol(s.substr(slash + 1), &used);
      require(used == s.size() - slash - 1, "s", "not a rational NUM/DEN");
    }
    require(den != 0, "s", "zero denominator");
    return make_rational(num, den);
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const BadInput*>(&e)) throw;
    throw BadInput("s: not a rational NUM/DEN");
  }
}

int cmd_lp(long N, long p, const std::string& s_text, const std::string& kind, int level, int precision,
           const std::string& coeffs) {
  require(kind == "cyclotomic" || kind == "quadratic", "kind", "must be cyclotomic or quadratic");
  check_prime(p);
  require(p != 2, "p", "p = 2 is not supported for chi_s");
  require(level >= 1 && level <= 5, "level", "must lie in 1..5");
  require(precision >= 2 && precision <= 40, "precision", "must lie in 2..40");
  Rational sr = parse_rational(s_text);
  require(valuation(sr, p) >= 1 || sr == 0, "s", "needs v_p(s) >= 1");
  PAdicNum s = sr == 0 ? PAdicNum::zero(p) : PAdicNum::from_rational(sr, p, precision + 4);
  json j{{"N", N}, {"p", p}, {"s", sr.get_str()}, {"kind", kind}, {"level", level}, {"precision", precision}};
  if (kind == "cyclotomic") {
    Form f = load_form(N, true, coeffs, p);
    auto mu = cyclotomic_measure(*f.sym, p, level);
    auto r = lp_at_s(mu, s, level, precision);
    j["root"] = root_json(mu.root);
    j["direct"] = r.direct.str();
    j["series"] = r.series.str();
    j["moments"] = r.moments.size();
    j["vmin"] = r.vmin;
    j["routes_agree"] = r.routes_agree;
    j["term_bounds_hold"] = r.term_bounds_hold;
    emit(j);
    return r.routes_agree && r.term_bounds_hold ? kOk : kFailed;
  }
  Form f = load_form(N, false, coeffs, p);
  auto mu = quadratic_measure(f.q, p, level);
  j["root"] = root_json(mu.root);
  json terms = json::array();
  for (const auto& t : lp_at_s_quadratic(mu, s, level, precision))
    terms.push_back({{"a", t.a}, {"chi_s", t.chi.str()}, {"mu", alpha_json(t.mu)}});
  j["terms"] = terms;
  emit(j);
  return kOk;
}

int cmd_quadsym_check(long D, long p, long N, int max_n, long bound) {
  require(D >= 1 && is_squarefree(D), "D", "must be positive and squarefree");
  check_prime(p);
  require(p != 2 && D % p != 0, "p", "needs p odd and p not dividing D");
  require(N >= 1, "N", "must be positive");
  require(max_n >= 0 && max_n <= 4, "max-n", "must lie in 0..4");
  require(bound >= 1 && bound <= 40, "bound", "must lie in 1..40");
  bool adm = admissible_prime(D, p);
  auto rep = collision_search(D, p, N, max_n, bound);
  json wit = json::array();
  for (const auto& w : rep.witnesses)
    wit.push_back({{"x1", mat_str(w.x1)}, {"x2", mat_str(w.x2)}, {"eta", mat_str(w.eta)}, {"det", w.det}});
  bool consistent = !(adm && !rep.witnesses.empty());
  emit({{"D", D},
        {"p", p},
        {"N", N},
        {"admissible", adm},
        {"points", rep.points},
        {"trivial_collisions", rep.trivial_collisions},
        {"witnesses", wit},
        {"injection_well_defined", adm && rep.witnesses.empty()},
        {"consistent", consistent}});
  return consistent ? kOk : kFailed;
}

int cmd_shimura_index(long D, long N, long p) {
  long idx;
  try {
    idx = hecke_index(D, N, p);
  } catch (const std::invalid_argument& e) {
    throw BadInput(std::string("D/N/p: ") + e.what());
  }
  LocalCase c = local_case(D, N, p);
  json j{{"D", D}, {"N", N}, {"p", p}, {"index", idx}, {"case", to_string(c)}};
  if (c != LocalCase::Ramified) {
    json reps = json::array();
    for (const auto& m : split_coset_representatives(p, c)) reps.push_back(mat_str(m));
    j["representatives"] = reps;
  }
  emit(j);
  return kOk;
}

int cmd_shimura_verify(long D) {
  require(D == 6 || D == 10 || D == 15, "D", "must be 6, 10 or 15");
  auto r = verify_shimura_group_data(D);
  json gens = json::array();
  for (const auto& g : r.generators) {
    json m = json::array({g.g.a.str(), g.g.b.str(), g.g.c.str(), g.g.d.str()});
    gens.push_back({{"name", g.name},
                    {"matrix", m},
                    {"det_one", g.det_one},
                    {"kind", to_string(g.kind)},
                    {"trace", g.trace.str()},
                    {"psl_order", g.psl_order},
                    {"in_group", g.in_group ? json(*g.in_group) : json(nullptr)}});
  }
  emit({{"D", D},
        {"genus", r.computed.genus.get_str()},
        {"printed_genus", r.printed_genus},
        {"e2", r.computed.e2},
        {"e3", r.computed.e3},
        {"printed_generators", r.printed_generators},
        {"printed_kind", r.printed_kind},
        {"generators", gens},
        {"notes", r.notes},
        {"verified", r.verified}});
  return r.verified ? kOk : kFailed;
}

int cmd_shimura_distcheck(long p, int n, const std::string& sigma) {
  check_prime(p);
  require(n >= 1 && n <= 4, "n", "must lie in 1..4");
  DigitPermutation s = identity_sigma(p);
  if (!sigma.empty()) {
    try {
      s = parse_sigma(sigma, p);
    } catch (const std::invalid_argument& e) {
      throw BadInput(std::string("sigma: ") + e.what());
    }
  }
  auto r = symbolic_quadratic_distribution(p, s, n);
  json j{{"p", p}, {"n", n}, {"sigma", s}, {"discs", r.discs}, {"k_cancels", r.k_cancels}, {"verified", r.verified()}};
  if (r.counterexample) {
    json res = json::array();
    for (const auto& [w, c] : r.counterexample->residual.words) res.push_back({{"word", to_string(w)}, {"coefficient", c.str()}});
    j["counterexample"] = {{"a", r.counterexample->a}, {"residual", res}, {"K", r.counterexample->residual.k.str()},
                           {"trace", r.counterexample->trace}};
  }
  emit(j);
  return r.verified() ? kOk : kFailed;
}

int cmd_check(const std::string& which, bool strict, const std::string& format) {
  std::vector<int> ids;
  if (which == "all") {
    for (int k = 1; k <= acceptance::kCriteria; ++k) ids.push_back(k);
  } else {
    int k = 0;
    try {
      k = std::stoi(which);
    } catch (const std::exception&) {
      throw BadInput("criterion: must be 'all' or 1..12");
    }
    require(k >= 1 && k <= acceptance::kCriteria, "criterion", "must be 'all' or 1..12");
    ids.push_back(k);
  }
  json rows = json::array();
  bool all = true;
  if (format == "csv") std::cout << "criterion,title,pass,failing\n";
  for (int k : ids) {
    auto r = acceptance::run_criterion(k);
    all = all && r.pass();
    if (format == "csv") {
      std::string fail = r.summary();
      for (auto& ch : fail)
        if (ch == ',') ch = ';';
      std::cout << k << "," << r.title << "," << (r.pass() ? "PASS" : "FAIL") << "," << fail << "\n";
      continue;
    }
    json lines = json::array();
    for (const auto& l : r.lines)
      lines.push_back({{"check", l.name}, {"pass", l.pass}, {"detail", l.detail}, {"informational", l.informational}});
    rows.push_back({{"criterion", k}, {"title", r.title}, {"pass", r.pass()}, {"checks", lines}});
  }
  if (format != "csv") emit({{"criteria", rows}, {"all_pass", all}});
  return strict && !all ? kFailed : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quadsym: quaternion algebras, modular symbols and p-adic measures"};
  app.require_subcommand(1);
  app.fallthrough();  // --format after the subcommand
  std::string format = "json";
  app.add_option("--format", format, "json (default) or csv (table1, check)")->check(CLI::IsMember({"json", "csv"}));
  std::function<int()> run;

  // algebra
  auto* algebra = app.add_subcommand("algebra", "quaternion algebras and Eichler orders");
  algebra->require_subcommand(1);
  long ca = 0, cb = 0, oD = 0, oN = 1;
  auto* classify_cmd = algebra->add_subcommand("classify", "discriminant and kind of (a,b/Q)");
  classify_cmd->add_option("a", ca)->required();
  classify_cmd->add_option("b", cb)->required();
  classify_cmd->callback([&] { run = [&] { return cmd_classify(ca, cb); }; });
  auto* order_cmd = algebra->add_subcommand("order", "explicit Eichler order of discriminant D and level N");
  order_cmd->add_option("D", oD)->required();
  order_cmd->add_option("N", oN)->required();
  order_cmd->callback([&] { run = [&] { return cmd_order(oD, oN); }; });

  // table1, genus
  std::optional<long> tp;
  auto* table1 = app.add_subcommand("table1", "generators of Gamma_0(p) as printed, verified");
  table1->add_option("p", tp);
  table1->callback([&] { run = [&] { return cmd_table1(tp, format); }; });
  long gp = 0;
  auto* genus = app.add_subcommand("genus", "genus and elliptic counts of X_0(p)");
  genus->add_option("p", gp)->required();
  genus->callback([&] { run = [&] { return cmd_genus(gp); }; });

  // modsym
  long mN = 0, pmax = 0;
  auto* modsym = app.add_subcommand("modsym", "modular symbols for Gamma_0(N)");
  modsym->add_option("N", mN)->required();
  modsym->add_option("--hecke", pmax, "Hecke matrices for primes up to pmax");
  modsym->callback([&] { run = [&] { return cmd_modsym(mN, pmax); }; });

  // measure
  std::string mkind, sigma, coeffs;
  long meN = 0, mep = 0, tauD = 1;
  int men = 1;
  double tol = 1e-8;
  auto* measure = app.add_subcommand("measure", "cyclotomic or quadratic measure of the level-N newform");
  measure->add_option("kind", mkind)->required();
  measure->add_option("N", meN)->required();
  measure->add_option("p", mep)->required();
  measure->add_option("n", men)->required();
  measure->add_option("--sigma", sigma, "digit permutation, cycles like \"(1 2)\" or images \"2,1\"");
  measure->add_option("--tau", tauD, "tau = sqrt(-D), default D = 1");
  measure->add_option("--coeffs", coeffs, "file of \"p a_p\" lines (quadratic only)");
  measure->add_option("--tol", tol, "compatibility tolerance for quadratic measures");
  measure->callback([&] { run = [&] { return cmd_measure(mkind, meN, mep, men, sigma, tauD, coeffs, tol); }; });

  // lp
  long lN = 0, lp = 0;
  std::string s_text = "0", lkind = "cyclotomic";
  int llevel = 3, lprec = 12;
  auto* lpc = app.add_subcommand("lp", "p-adic L-function at s");
  lpc->add_option("N", lN)->required();
  lpc->add_option("p", lp)->required();
  lpc->add_option("--s", s_text, "NUM/DEN with v_p(s) >= 1");
  lpc->add_option("--kind", lkind, "cyclotomic or quadratic");
  lpc->add_option("--level", llevel, "finite level of the Riemann sums");
  lpc->add_option("--precision", lprec, "p-adic digits");
  lpc->add_option("--coeffs", coeffs, "file of \"p a_p\" lines (quadratic only)");
  lpc->callback([&] { run = [&] { return cmd_lp(lN, lp, s_text, lkind, llevel, lprec, coeffs); }; });

  // quadsym check
  long qD = 0, qp = 0, qN = 0, qbound = 20;
  int qmaxn = 2;
  auto* quad = app.add_subcommand("quadsym", "quadratic modular symbols");
  quad->require_subcommand(1);
  auto* qcheck = quad->add_subcommand("check", "admissibility and collision search for (D, p) at level N");
  qcheck->add_option("D", qD)->required();
  qcheck->add_option("p", qp)->required();
  qcheck->add_option("N", qN)->required();
  qcheck->add_option("--max-n", qmaxn, "largest exponent n in [[1,a],[0,p^n]]");
  qcheck->add_option("--bound", qbound, "entry bound for the SL2(Z) box");
  qcheck->callback([&] { run = [&] { return cmd_quadsym_check(qD, qp, qN, qmaxn, qbound); }; });

  // shimura
  auto* shim = app.add_subcommand("shimura", "Shimura curves X(D,N)");
  shim->require_subcommand(1);
  long sD = 0, sN = 0, sp = 0, vD = 15, dp = 0;
  int dn = 1;
  std::string dsigma;
  auto* sidx = shim->add_subcommand("index", "Hecke coset index");
  sidx->add_option("D", sD)->required();
  sidx->add_option("N", sN)->required();
  sidx->add_option("p", sp)->required();
  sidx->callback([&] { run = [&] { return cmd_shimura_index(sD, sN, sp); }; });
  auto* sver = shim->add_subcommand("verify", "explicit group data for X(6,1), X(10,1), X(15,1)");
  sver->add_option("D", vD)->required();
  sver->callback([&] { run = [&] { return cmd_shimura_verify(vD); }; });
  auto* sdist = shim->add_subcommand("distcheck", "symbolic distribution identity at level n -> n+1");
  sdist->add_option("p", dp)->required();
  sdist->add_option("n", dn)->required();
  sdist->add_option("--sigma", dsigma, "digit permutation");
  sdist->callback([&] { run = [&] { return cmd_shimura_distcheck(dp, dn, dsigma); }; });

  // check
  std::string which;
  bool strict = false;
  auto* check = app.add_subcommand("check", "acceptance criteria");
  check->add_option("which", which, "all, or a criterion number")->required();
  check->add_flag("--strict", strict, "exit 3 when a criterion fails");
  check->callback([&] { run = [&] { return cmd_check(which, strict, format); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kBadInput;
  }
  if (format == "csv" && !table1->parsed() && !check->parsed()) {
    std::cerr << "error: format: csv is only available for table1 and check\n";
    return kBadInput;
  }
  try {
    return run();
  } catch (const precision_error& e) {
    std::cerr << "error: " << e.what() << " (needs " << e.required_terms() << " terms; raise QUADSYM_MAX_TERMS)\n";
    return kBadInput;
  } catch (const not_applicable_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const not_available_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
}
