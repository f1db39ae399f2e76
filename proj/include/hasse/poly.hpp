#pragma once

// Dense univariate polynomials over Z and over F_p. Coefficient i is the
// coefficient of x^i; the zero polynomial is the empty vector.

#include <cstdint>
#include <vector>

#include "hasse/arith.hpp"

namespace hasse {

using IntPoly = std::vector<Int>;
using ModPoly = std::vector<std::uint64_t>;

void trim(IntPoly& f);
int degree(const IntPoly& f);

Int eval(const IntPoly& f, const Int& x);
Rat eval(const IntPoly& f, const Rat& x);
IntPoly derivative(const IntPoly& f);
IntPoly operator+(const IntPoly& f, const IntPoly& g);
IntPoly operator-(const IntPoly& f, const IntPoly& g);
IntPoly operator*(const IntPoly& f, const IntPoly& g);
IntPoly operator*(const Int& c, const IntPoly& f);

Int content(const IntPoly& f);
IntPoly primitive_part(const IntPoly& f);

/// gcd over Q, returned primitive with positive leading coefficient.
IntPoly gcd(const IntPoly& f, const IntPoly& g);

/// f / gcd(f, f'), primitive.
IntPoly squarefree_kernel(const IntPoly& f);

/// Exact division over Z; throws when g does not divide f.
IntPoly exact_quotient(const IntPoly& f, const IntPoly& g);

/// All distinct rational roots, ascending. Works by lifting simple roots
/// modulo a good prime and reconstructing; every root is verified exactly.
std::vector<Rat> rational_roots(const IntPoly& f);

/// Integer roots only.
std::vector<Int> integer_roots(const IntPoly& f);

// ---- F_p helpers (p < 2^63) ----

ModPoly reduce(const IntPoly& f, std::uint64_t p);
void trim(ModPoly& f);
std::uint64_t eval(const ModPoly& f, std::uint64_t x, std::uint64_t p);
ModPoly gcd(ModPoly f, ModPoly g, std::uint64_t p);

/// Distinct roots in F_p, ascending. The zero polynomial is rejected.
std::vector<std::uint64_t> roots_mod_p(const ModPoly& f, std::uint64_t p);

}  // namespace hasse
