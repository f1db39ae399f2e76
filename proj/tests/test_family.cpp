#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "hasse/family.hpp"

using namespace hasse;

namespace {

bool trial_prime(long n) {
  n = std::labs(n);
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

long pmod(long a, long m) { return ((a % m) + m) % m; }

const DescentReport& report19() {
  static DescentReport r = analyze(Int(19), {true, 100, 1});
  return r;
}

}  // namespace

TEST_CASE("admissibility") {
  CHECK(admissible(Int(19)));
  CHECK_FALSE(admissible(Int(3)));
  CHECK(admissibility_failure(Int(3)) == "|h-2| = 1 is not prime");
  CHECK(admissibility_failure(Int(20)).find("3 mod 8") != std::string::npos);
  CHECK(admissible(Int(-5), false));
  CHECK_FALSE(admissible(Int(-5), true));
  CHECK(admissibility_failure(Int(-5), true).find("19 mod 120") != std::string::npos);
}

TEST_CASE("sieve over the published window") {
  auto s = sieve({Int(19 - 120000), Int(19 + 120000), true, 1});
  CHECK(s == published_values());
  CHECK(sieve({Int(19 - 120000), Int(19 + 120000), true, 4}) == s);
  CHECK(sieve({Int(-110), Int(20), true, 1}) == std::vector<Int>{-101, 19});
  CHECK(sieve({Int(0), Int(18), true, 1}).empty());
  CHECK(sieve({Int(0), Int(18), false, 1}).empty());
  CHECK_THROWS_AS(sieve({Int(10), Int(5), true, 1}), ArithmeticError);
}

TEST_CASE("sieve against a naive scan") {
  std::vector<Int> strict, literal;
  for (long h = -6000; h <= 6000; ++h) {
    if (pmod(h, 8) != 3) continue;
    if (!(trial_prime(h) && trial_prime(h - 2) && trial_prime(h - 6) && trial_prime(h - 8))) continue;
    literal.push_back(Int(h));
    if (pmod(h, 120) == 19) strict.push_back(Int(h));
  }
  CHECK(sieve({Int(-6000), Int(6000), false, 3}) == literal);
  CHECK(sieve({Int(-6000), Int(6000), true, 1}) == strict);
  // Strict is a subset of literal; -5 is the only extra small value.
  for (const auto& h : strict) CHECK(std::find(literal.begin(), literal.end(), h) != literal.end());
  CHECK(std::find(literal.begin(), literal.end(), Int(-5)) != literal.end());
  for (const auto& h : literal) {
    long v = h.get_si();
    long least = std::min({std::labs(v), std::labs(v - 2), std::labs(v - 6), std::labs(v - 8)});
    if (least > 5) CHECK(pmod(v, 15) == 4);
  }
}

TEST_CASE("analyze h = 19") {
  const auto& r = report19();
  CHECK(r.verdict);
  CHECK(r.rank == 0);
  CHECK(r.selmer_order == 9);
  CHECK(r.selmer_method == "cassels");
  CHECK(r.dual_order == 1);
  CHECK(r.sha_flag);
  CHECK(r.tam_E == 16);
  CHECK(r.tam_Eprime == 16);
  CHECK(r.tam_Ebar == 48);
  CHECK(r.cassels.selmer_ratio == Rat(1, 9));
  CHECK(r.distinguished[0].cubic.c[9] == 6358);
  CHECK(r.distinguished[0].equation == "w^3+18w^2z+216wz^2+432z^3+6358 = -6w^2+432z^2");
  CHECK(r.classes.size() == 9);
  for (const auto& c : r.classes) CHECK(c.locally_solvable);
  REQUIRE(r.reduction.size() == 6);
  CHECK(r.reduction[0].E.kind == ReductionKind::additive);
  CHECK(r.reduction[1].E.kind == ReductionKind::additive);
  CHECK(r.reduction[2].E.kind == ReductionKind::multiplicative_nonsplit);
  CHECK(r.reduction[3].E.kind == ReductionKind::multiplicative_split);
  CHECK(r.reduction[4].E.kind == ReductionKind::multiplicative_nonsplit);
  CHECK(r.reduction[5].E.kind == ReductionKind::multiplicative_nonsplit);
  for (int s = 0; s < 2; ++s)
    for (const auto& c : r.local[s].certificates) CHECK(replay(r.distinguished[s].cubic, c));
  auto text = render_text(r);
  for (const char* needle : {"Sel^(psi) order: 9", "rank: 0", "verdict: HASSE_VIOLATION"})
    CHECK(text.find(needle) != std::string::npos);
}

TEST_CASE("constant term is 2(h-2)^2(h-8)") {
  for (long h : {19l, 3259l, -101l, -821l}) {
    auto C = family_cubic(Int(h), 1);
    CHECK(C.c[9] == Rat(2 * (h - 2) * (h - 2) * (h - 8)));
  }
}

TEST_CASE("analyze is deterministic and independent of jobs") {
  auto a = to_json(report19()).dump();
  auto b = to_json(analyze(Int(19), {true, 100, 4})).dump();
  CHECK(a == b);
  auto j = to_json(report19());
  CHECK(j["schema"] == kReportSchema);
  CHECK(j["verdict"]["hasse_violation"] == true);
  auto dir = std::filesystem::temp_directory_path() / "hasse_report_test";
  auto path = write_report(report19(), dir);
  CHECK(path.filename() == "h_19.json");
  std::ifstream in(path);
  CHECK(nlohmann::json::parse(in)["h"] == "19");
  std::filesystem::remove_all(dir);
}

TEST_CASE("analyze h = 3259") {
  auto r = analyze(Int(3259), {true, 100, 2});
  CHECK(r.verdict);
  CHECK(r.selmer_order == 9);
}

TEST_CASE("negative h: the Cassels ratio is 1") {
  auto r = analyze(Int(-101), {true, 50, 2});
  CHECK(r.cassels.selmer_ratio == 1);
  CHECK(r.tam_E == 144);
  CHECK(r.selmer_method == "local");
  CHECK(r.selmer_order == 1);
  CHECK_FALSE(r.distinguished[0].locally_solvable);
  CHECK_FALSE(r.verdict);
  auto s = analyze(Int(-821), {true, 50, 2});
  CHECK(s.selmer_order == 3);
  CHECK(s.dual_order == 3);
  CHECK_FALSE(s.sha_flag);
  CHECK(s.sha_psi_nontrivial);
  CHECK(s.distinguished[0].locally_solvable);
  CHECK(s.distinguished[1].locally_solvable);
  CHECK(s.verdict);
}

TEST_CASE("inadmissible input") {
  CHECK_THROWS_AS(analyze(Int(20)), Inadmissible);
  CHECK_THROWS_AS(analyze(Int(-5)), Inadmissible);
  try {
    analyze(Int(20));
  } catch (const Inadmissible& e) {
    CHECK(std::string(e.what()).find("3 mod 8") != std::string::npos);
  }
}
