#include <doctest.h>

#include <random>

#include "hasse/quadring.hpp"

using namespace hasse;

TEST_CASE("field arithmetic") {
  QuadElem a(Rat(1), Rat(1), Int(2)), b(Rat(3), Rat(-2), Int(2));
  CHECK(norm(a) == -1);
  CHECK(norm(a * b) == norm(a) * norm(b));
  CHECK((a / b) * b == a);
  CHECK(pow(a, 2) == QuadElem(Rat(3), Rat(2), Int(2)));
  CHECK(pow(a, -1) == QuadElem(Rat(-1), Rat(1), Int(2)));
}

TEST_CASE("fundamental units") {
  CHECK(fundamental_unit(Int(2)) == QuadElem(Rat(1), Rat(1), Int(2)));
  CHECK(fundamental_unit(Int(3)) == QuadElem(Rat(2), Rat(1), Int(3)));
  CHECK(fundamental_unit(Int(7)) == QuadElem(Rat(8), Rat(3), Int(7)));
  CHECK(fundamental_unit(Int(94)) == QuadElem(Rat(2143295), Rat(221064), Int(94)));
  CHECK_THROWS_AS(fundamental_unit(Int(5)), ArithmeticError);
  // Smallest solution: brute force over y.
  for (long d : {6l, 11l, 14l, 19l, 22l}) {
    QuadElem e = fundamental_unit(Int(d));
    for (long y = 1; y < e.v; ++y) {
      CHECK_FALSE(exact_sqrt(Int(d * y * y + 1)).has_value());
      CHECK_FALSE(exact_sqrt(Int(d * y * y - 1)).has_value());
    }
  }
}

TEST_CASE("prime splitting in Q(sqrt 2)") {
  CHECK(split_type(Int(17), Int(2)).kind == SplitKind::split);
  CHECK(split_type(Int(11), Int(2)).kind == SplitKind::inert);
  CHECK(split_type(Int(19), Int(2)).kind == SplitKind::inert);
  CHECK(split_type(Int(2), Int(2)).kind == SplitKind::ramified);
  CHECK(split_type(Int(3), Int(2)).kind == SplitKind::inert);
  CHECK(split_prime(Int(17), Int(2)) == std::pair<Int, Int>(5, 2));
  CHECK(split_prime(Int(7), Int(2)) == std::pair<Int, Int>(3, 1));
  CHECK(split_prime(Int(2), Int(2)) == std::pair<Int, Int>(0, 1));
  CHECK_THROWS_AS(split_prime(Int(11), Int(2)), ArithmeticError);
  for (long p = 3; p < 2000; p += 2) {
    if (!is_prime(Int(p))) continue;
    bool split = (p % 8 == 1 || p % 8 == 7);
    CHECK((split_type(Int(p), Int(2)).kind == SplitKind::split) == split);
    if (split) {
      auto [k, l] = split_prime(Int(p), Int(2));
      Int n = k * k - 2 * l * l;
      CHECK((n == p || n == -p));
    }
  }
}

TEST_CASE("cube detection") {
  QuadElem t(Rat(5), Rat(2), Int(2));
  QuadElem c = pow(t, 3);
  auto r = cube_root(c);
  REQUIRE(r);
  CHECK(*r == t);
  CHECK(is_cube(QuadElem(Rat(-1), Rat(0), Int(2))));
  CHECK_FALSE(is_cube(QuadElem(Rat(1), Rat(1), Int(2))));
  CHECK(is_cube(pow(QuadElem(Rat(1), Rat(1), Int(2)), 3)));
  CHECK(is_cube(Rat(8, 27) * pow(QuadElem(Rat(2, 3), Rat(-1, 5), Int(2)), 3)));
  CHECK_FALSE(is_cube(QuadElem(Rat(2), Rat(0), Int(2))));
  // Oracle: cubes of random elements are cubes, and perturbations are not.
  std::mt19937 rng(11);
  for (int i = 0; i < 200; ++i) {
    long d = std::vector<long>{2, 3, 6, 7, 11}[rng() % 5];
    QuadElem b(Rat(static_cast<long>(rng() % 200) - 100, rng() % 9 + 1),
               Rat(static_cast<long>(rng() % 200) - 100, rng() % 9 + 1), Int(d));
    b.u.canonicalize();
    b.v.canonicalize();
    if (b.is_zero()) continue;
    CHECK(is_cube(pow(b, 3)));
    CHECK(*cube_root(pow(b, 3)) == b);
    QuadElem c2 = pow(b, 3) * QuadElem(Rat(2), Rat(0), Int(d));
    CHECK_FALSE(is_cube(c2));
  }
}

TEST_CASE("cubefree reduction is a class invariant") {
  QuadElem eps(Rat(1), Rat(1), Int(2));
  QuadElem pi(Rat(5), Rat(2), Int(2));
  QuadElem g = pi * pi * conj(pi);
  CHECK(g == QuadElem(Rat(85), Rat(34), Int(2)));
  std::mt19937 rng(5);
  for (int i = 0; i < 60; ++i) {
    QuadElem x = pow(eps, static_cast<long>(rng() % 7) - 3) * pow(g, static_cast<long>(rng() % 3));
    QuadElem m(Rat(static_cast<long>(rng() % 40) - 20), Rat(static_cast<long>(rng() % 40) - 20), Int(2));
    if (m.is_zero()) continue;
    QuadElem y = x * pow(m, 3);
    CHECK(cubefree_reduce(x) == cubefree_reduce(y));
    CHECK(same_cube_class(x, y));
    CHECK(same_cube_class(x, cubefree_reduce(y)));
  }
  CHECK(cubefree_reduce(pow(eps, 3)) == QuadElem::one(Int(2)));
  CHECK(cubefree_reduce(QuadElem(Rat(-8), Rat(0), Int(2))) == QuadElem::one(Int(2)));
}

TEST_CASE("S-units modulo cubes") {
  std::vector<Int> S = {Int(2), Int(3), Int(11), Int(17), Int(19)};
  auto grp = s_units_mod_cubes(S, Int(2));
  REQUIRE(grp.generators.size() == 2);
  CHECK(grp.order == 9);
  CHECK(grp.generators[0] == QuadElem(Rat(1), Rat(1), Int(2)));
  QuadElem pi(Rat(5), Rat(2), Int(2));
  CHECK(grp.generators[1] == pi * pi * conj(pi));
  auto elems = grp.elements();
  REQUIRE(elems.size() == 9);
  for (size_t i = 0; i < elems.size(); ++i) {
    CHECK(exact_cbrt(norm(elems[i])).has_value());
    for (size_t j = 0; j < i; ++j) CHECK_FALSE(same_cube_class(elems[i], elems[j]));
  }
  CHECK_THROWS_AS(s_units_mod_cubes(S, Int(10)), UnsupportedConfiguration);
}
