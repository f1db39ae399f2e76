#include <doctest.h>

#include <random>

#include "hasse/arith.hpp"
#include "hasse/poly.hpp"

using namespace hasse;

namespace {

bool trial_prime(unsigned long n) {
  if (n < 2) return false;
  for (unsigned long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

TEST_CASE("primality agrees with trial division") {
  for (unsigned long n = 0; n < 200000; ++n) REQUIRE(is_prime(Int(n)) == trial_prime(n));
  CHECK(is_prime(Int("18446744073709551557")));
  CHECK_FALSE(is_prime(Int("18446744073709551559")));
  CHECK(is_prime(Int("170141183460469231731687303715884105727")));
}

TEST_CASE("legendre and sqrt_mod") {
  CHECK(legendre(Int(2), Int(3)) == -1);
  CHECK(legendre(Int(2), Int(7)) == 1);
  CHECK(legendre(Int(0), Int(7)) == 0);
  CHECK_THROWS_AS(legendre(Int(2), Int(9)), ArithmeticError);
  auto r = sqrt_mod(Int(72), Int(17));
  REQUIRE(r);
  CHECK((*r == 2 || *r == 15));
  for (unsigned long p : {3ul, 5ul, 13ul, 17ul, 97ul, 7919ul, 65537ul}) {
    for (unsigned long a = 0; a < std::min(p, 300ul); ++a) {
      bool residue = false;
      for (unsigned long x = 0; x < p; ++x)
        if (x * x % p == a) residue = true;
      auto s = sqrt_mod(Int(a), Int(p));
      REQUIRE(s.has_value() == residue);
      if (s) CHECK(mod(*s * *s - a, Int(p)) == 0);
      auto s64 = sqrt_mod_u64(a, p);
      REQUIRE(s64.has_value() == residue);
    }
  }
}

TEST_CASE("valuations") {
  CHECK(valuation(Int(-432), Int(2)) == 4);
  CHECK(valuation(Int(-432), Int(3)) == 3);
  CHECK(valuation(Rat(9, 32), Int(2)) == -5);
  CHECK_THROWS_AS(valuation(Int(0), Int(5)), ArithmeticError);
}

TEST_CASE("factorization") {
  Int n = Int(-108) * 19 * 19 * 19 * 11;
  CHECK(squarefree_part(n).rep == -627);
  auto f = factor(Int("1000000016000000063"));  // 1000000007 * 1000000009
  REQUIRE(f.size() == 2);
  CHECK(f[0].first == Int(1000000007));
  CHECK(f[1].first == Int(1000000009));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    Int m = Int(static_cast<unsigned long>(rng() % 1000000000ul + 1)) * Int(static_cast<unsigned long>(rng() % 100000 + 1));
    Int prod = 1;
    for (auto& [p, e] : factor(m)) {
      CHECK(is_prime(p));
      prod *= pow(p, e);
    }
    CHECK(prod == m);
  }
  CHECK(cubefree_part(Int(-8 * 27 * 5)) == -5);
  CHECK(cubefree_part(Int(16)) == 2);
}

TEST_CASE("local square classes") {
  CHECK(local_square_class(Rat(7), Int(2)).rep == -1);
  CHECK(local_square_class(Rat(17), Int(2)).rep == 1);
  CHECK(local_square_class(Rat(-12), Int(2)).rep == 5);  // -12 = 4 * -3, -3 = 5 mod 8
  CHECK(local_square_class(Rat(-3), Int(0)).rep == -1);
  CHECK(is_local_square(Rat(2), Int(7)));
  CHECK_FALSE(is_local_square(Rat(2), Int(5)));
  CHECK(is_local_square(Rat(-7), Int(2)));
  // Oracle: x in Z_p^x is a square iff it is a square mod p (odd p) or mod 8.
  for (long x = 1; x < 300; ++x) {
    for (long p : {3l, 5l, 7l, 11l}) {
      if (x % p == 0) continue;
      bool sq = false;
      for (long y = 0; y < p; ++y)
        if ((y * y - x) % p == 0) sq = true;
      CHECK(is_local_square(Rat(x), Int(p)) == sq);
    }
    if (x % 2) CHECK(is_local_square(Rat(x), Int(2)) == (x % 8 == 1));
  }
}

TEST_CASE("exact roots and parsing") {
  CHECK(*exact_sqrt(Int(144)) == 12);
  CHECK_FALSE(exact_sqrt(Int(-4)));
  CHECK(*exact_cbrt(Int(-27)) == -3);
  CHECK(*exact_cbrt(Rat(8, 125)) == Rat(2, 5));
  CHECK(parse_rational("-3/6") == Rat(-1, 2));
  CHECK(floor_div(Int(-7), Int(2)) == -4);
  CHECK(inv_mod(Int(3), Int(7)) == 5);
}

TEST_CASE("polynomial roots") {
  // (x - 3)(2x + 5)(x^2 + 1) * x
  IntPoly f = IntPoly{Int(-3), Int(1)} * IntPoly{Int(5), Int(2)} * IntPoly{Int(1), Int(0), Int(1)} * IntPoly{Int(0), Int(1)};
  auto r = rational_roots(f);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == Rat(-5, 2));
  CHECK(r[1] == 0);
  CHECK(r[2] == 3);
  CHECK(integer_roots(f).size() == 2);
  // Large roots survive lifting.
  Int big("123456789012345678901");
  IntPoly g = IntPoly{Int(-big), Int(1)} * IntPoly{Int(big), Int(7)} * IntPoly{Int(-big), Int(1)};
  auto rg = rational_roots(g);
  REQUIRE(rg.size() == 2);
  CHECK(rg[1] == Rat(big));
  CHECK(rg[0] == Rat(-big, 7));

  std::mt19937_64 rng(3);
  for (std::uint64_t p : {101ull, 1009ull, 65537ull, 1000003ull}) {
    ModPoly h = {rng() % p, rng() % p, rng() % p, rng() % p, 1};
    auto roots = roots_mod_p(h, p);
    if (p < 70000) {
      std::vector<std::uint64_t> brute;
      for (std::uint64_t x = 0; x < p; ++x)
        if (eval(h, x, p) == 0) brute.push_back(x);
      CHECK(roots == brute);
    }
    for (auto x : roots) CHECK(eval(h, x, p) == 0);
  }
}
