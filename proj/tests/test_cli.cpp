#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "quadsym/arith.hpp"

using json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  json j() const { return json::parse(out); }
};

Run run(const std::string& args, const std::string& env = "QUADSYM_MAX_TERMS=2000", bool merge_stderr = false) {
  std::string cmd = env + " " + QUADSYM_CLI_PATH + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// 11a by brute-force point counting
long ap_11a(long p) {
  long count = 1;
  for (long x = 0; x < p; ++x)
    for (long y = 0; y < p; ++y)
      if (quadsym::mod(y * y + y - (x * x * x - x * x - 10 * x - 20), p) == 0) ++count;
  return p + 1 - count;
}

}  // namespace

TEST(Cli, Table1Row) {
  auto r = run("table1 11");
  ASSERT_EQ(r.code, 0);
  auto j = r.j();
  EXPECT_EQ(j["p"], 11);
  EXPECT_EQ(j["generators"], json({"T", "V4", "V6"}));
  EXPECT_EQ(j["genus"], 1);
  EXPECT_EQ(j["verified"], true);
}

TEST(Cli, Table1DiscrepancyIsFailedVerification) {
  auto r = run("table1 37");
  EXPECT_EQ(r.code, 3);
  auto j = r.j();
  EXPECT_EQ(j["genus"], 2);
  EXPECT_EQ(j["printed_genus"], 3);
  EXPECT_EQ(j["verified"], false);
  auto csv = run("table1 --format csv");
  EXPECT_EQ(csv.code, 3);
  EXPECT_NE(csv.out.find("\n11,3,1,1,0,0,1,1,1\n"), std::string::npos);
}

TEST(Cli, Algebra) {
  auto r = run("algebra classify 1 -1");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.j()["discriminant"], 1);
  EXPECT_EQ(r.j()["class"], "non-ramified");
  EXPECT_EQ(run("algebra classify 3 -1").j()["discriminant"], 6);
  EXPECT_EQ(run("algebra classify -1 -1").j()["class"], "definite");
  auto o = run("algebra order 6 1");
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.j()["is_order"], true);
  EXPECT_EQ(o.j()["basis"].size(), 4u);
  EXPECT_EQ(run("genus 37").j()["genus"], 2);
}

TEST(Cli, ValidationErrorsNameTheParameter) {
  auto r = run("genus 4", "", true);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("p:"), std::string::npos);
  EXPECT_EQ(run("algebra classify 0 3").code, 2);
  EXPECT_EQ(run("algebra order 4 1").code, 2);
  EXPECT_EQ(run("measure foo 11 3 1").code, 2);
  auto s = run("measure cyclotomic 11 5 1 --sigma \"(1 5)\"", "", true);
  EXPECT_EQ(s.code, 2);
  EXPECT_NE(s.out.find("sigma"), std::string::npos);
  EXPECT_EQ(run("shimura index 6 3 3").code, 2);
  EXPECT_EQ(run("quadsym check 1 2 11").code, 2);
  EXPECT_EQ(run("lp 11 3 --s 1/2", "", true).out.find("s:") != std::string::npos, true);
  EXPECT_EQ(run("lp 11 3 --s 1/2").code, 2);
  EXPECT_EQ(run("lp 11 3 --s x").code, 2);
  EXPECT_EQ(run("check 13").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("genus").code, 2);
  EXPECT_EQ(run("genus 5 --format csv").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, ModularSymbols) {
  auto r = run("modsym 11 --hecke 7");
  ASSERT_EQ(r.code, 0);
  auto j = r.j();
  EXPECT_EQ(j["cuspidal_dimension"], 2);
  ASSERT_EQ(j["rational_eigensystems"].size(), 1u);
  for (const auto& e : j["rational_eigensystems"][0]) {
    long p = e["p"];
    if (p == 11) continue;
    EXPECT_EQ(e["a_p"], ap_11a(p)) << p;
  }
  EXPECT_EQ(j["hecke"][0]["matrix"], json::array({json::array({"-2", "0"}), json::array({"0", "-2"})}));
}

TEST(Cli, CyclotomicMeasure) {
  auto r = run("measure cyclotomic 11 3 3");
  ASSERT_EQ(r.code, 0);
  auto j = r.j();
  EXPECT_EQ(j["compatible"], true);
  EXPECT_EQ(j["levels"].size(), 3u);
  EXPECT_EQ(j["levels"][0]["values"].size(), 2u);
  EXPECT_EQ(j["root"]["ordinary"], true);
  auto t = run("measure cyclotomic 11 5 2 --sigma \"(1 2)(3 4)\"");
  EXPECT_EQ(t.code, 0);
  EXPECT_EQ(t.j()["sigma"], json({0, 2, 1, 4, 3}));
}

TEST(Cli, QuadraticMeasureAndTermCap) {
  auto r = run("measure quadratic 11 3 2", "QUADSYM_MAX_TERMS=1000");
  ASSERT_EQ(r.code, 0);
  auto j = r.j();
  EXPECT_EQ(j["compatible"], true);
  EXPECT_LT(j["compatibility_defects"][0].get<double>(), 1e-8);
  // byte-stable
  EXPECT_EQ(run("measure quadratic 11 3 2", "QUADSYM_MAX_TERMS=1000").out, r.out);
  auto small = run("measure quadratic 11 3 2", "QUADSYM_MAX_TERMS=50", true);
  EXPECT_EQ(small.code, 2);
  EXPECT_NE(small.out.find("QUADSYM_MAX_TERMS"), std::string::npos);
  EXPECT_EQ(run("measure quadratic 11 3 1", "QUADSYM_MAX_TERMS=abc").code, 2);
}

TEST(Cli, CoefficientFileMatchesModularSymbols) {
  std::string path = ::testing::TempDir() + "ap11.txt";
  {
    std::ofstream out(path);
    out << "# 11a by point counting\n";
    for (long p : quadsym::primes_up_to(1000)) out << p << " " << (p == 11 ? 1 : ap_11a(p)) << "\n";
  }
  auto a = run("measure quadratic 11 3 2 --coeffs " + path, "QUADSYM_MAX_TERMS=1000");
  auto b = run("measure quadratic 11 3 2", "QUADSYM_MAX_TERMS=1000");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  {
    std::ofstream out(path);
    out << "2 -2\n3 x\n";
  }
  EXPECT_EQ(run("measure quadratic 11 3 1 --coeffs " + path).code, 2);
}

TEST(Cli, LpAtS) {
  auto r = run("lp 11 3 --s 3/7");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.j()["routes_agree"], true);
  EXPECT_EQ(r.j()["term_bounds_hold"], true);
  EXPECT_EQ(r.j()["direct"], r.j()["series"]);
  auto q = run("lp 11 3 --s 3 --kind quadratic --level 2", "QUADSYM_MAX_TERMS=1000");
  ASSERT_EQ(q.code, 0);
  EXPECT_EQ(q.j()["terms"].size(), 6u);
}

TEST(Cli, QuadraticSymbolCheck) {
  auto ok = run("quadsym check 1 3 11 --bound 10");
  ASSERT_EQ(ok.code, 0);
  EXPECT_EQ(ok.j()["admissible"], true);
  EXPECT_TRUE(ok.j()["witnesses"].empty());
  auto bad = run("quadsym check 1 5 11 --bound 10");
  ASSERT_EQ(bad.code, 0);
  EXPECT_EQ(bad.j()["admissible"], false);
  ASSERT_FALSE(bad.j()["witnesses"].empty());
  EXPECT_EQ(bad.j()["witnesses"][0]["det"], 5);
}

TEST(Cli, Shimura) {
  EXPECT_EQ(run("shimura index 6 1 5").j()["index"], 6);
  EXPECT_EQ(run("shimura index 6 5 5").j()["index"], 5);
  auto r = run("shimura index 6 1 2");
  EXPECT_EQ(r.j()["index"], 1);
  EXPECT_EQ(r.j()["case"], "ramified");
  EXPECT_EQ(run("shimura index 6 1 3").j()["representatives"].size(), 0u);  // 3 | 6
  EXPECT_EQ(run("shimura index 10 1 3").j()["representatives"].size(), 4u);
  auto v = run("shimura verify 15");
  ASSERT_EQ(v.code, 0);
  EXPECT_EQ(v.j()["genus"], "1");
  EXPECT_EQ(v.j()["generators"][2]["kind"], "elliptic");
  EXPECT_EQ(run("shimura verify 10").j()["printed_generators"], 3);
  auto d = run("shimura distcheck 5 2 --sigma 3,1,4,2");
  ASSERT_EQ(d.code, 0);
  EXPECT_EQ(d.j()["verified"], true);
  EXPECT_EQ(d.j()["discs"], 25);
}

TEST(Cli, CheckAll) {
  auto r = run("check all", "");
  ASSERT_EQ(r.code, 0);
  auto j = r.j();
  ASSERT_EQ(j["criteria"].size(), 12u);
  for (int k = 0; k < 12; ++k) EXPECT_EQ(j["criteria"][k]["criterion"], k + 1);
  bool all = true;
  for (const auto& c : j["criteria"]) all = all && c["pass"].get<bool>();
  EXPECT_EQ(j["all_pass"], all);
  auto one = run("check 11 --strict", "");
  EXPECT_EQ(one.code, one.j()["all_pass"].get<bool>() ? 0 : 3);
}
