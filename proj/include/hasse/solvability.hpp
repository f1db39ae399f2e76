#pragma once

// Local solvability of plane cubics at every place, and a bounded search for
// rational points.

#include <array>
#include <vector>

#include "hasse/threedescent.hpp"

namespace hasse {

struct CubicCertificate {
  Int place;  // 0 = real
  bool solvable = false;
  /// p-adic: primitive (W, Z, V) with v_p(F) > 2 v_p(grad F), so it lifts.
  std::array<Int, 3> witness{};
  int v_value = 0, v_grad = 0;
  /// Real: F changes sign on w in [lo, hi] along z = 0, v = 1 (or the exact
  /// point (1 : 0 : 0) when lo = hi is unset and exact_infinity holds).
  Rat lo{0}, hi{0};
  bool exact_infinity = false;
  int depth_bound = 0;  // 2 v_p(disc) + 3
  int depth = 0;        // level reached (exhaustion depth when unsolvable)
  long nodes = 0;
};

/// Primitive integral coefficients of C (denominators cleared, content removed).
std::array<Int, 10> integral_form(const PlaneCubic& C);

/// Primes dividing the discriminant of the ternary form, with 2 and 3.
/// Throws ArithmeticError on a singular cubic.
std::vector<Int> bad_primes(const PlaneCubic& C, std::span<const Int> hints = {});

/// Disk search over primitive projective points; throws Inconclusive past
/// the depth bound.
CubicCertificate locally_solvable(const PlaneCubic& C, const Int& p);
CubicCertificate really_solvable(const PlaneCubic& C);
bool replay(const PlaneCubic& C, const CubicCertificate& cert);

struct LocalBundle {
  bool solvable = false;
  std::vector<Int> places;  // checked primes, then 0 for the real place
  std::vector<CubicCertificate> certificates;
};

/// Bad primes and primes up to 13 by search, the real place, and every other
/// prime by smooth reduction plus the Hasse bound.
LocalBundle everywhere_locally_solvable(const PlaneCubic& C, std::span<const Int> hints = {}, int jobs = 1);

struct GlobalSearchResult {
  long height_bound = 0;
  /// Primitive (W : Z : V) with max |.| <= height_bound, normalized so the
  /// last nonzero coordinate is positive; sorted.
  std::vector<std::array<Int, 3>> points;
};

GlobalSearchResult search_rational_points(const PlaneCubic& C, long H, int jobs = 1);

/// Sel(psi) computed directly: the classes of L(S,3)* whose cubic is
/// everywhere locally solvable. Used when Cassels' bounds do not meet.
struct DirectSelmer {
  std::vector<QuadElem> elements;      // all of L(S,3)*
  std::vector<PlaneCubic> cubics;      // canonical, same order
  std::vector<bool> locally_solvable;  // same order
  Int order{0};
};

DirectSelmer direct_selmer_psi(const CodomainModel& M, const CubeClassGroup& classes, std::span<const Int> hints = {},
                               int jobs = 1);

}  // namespace hasse
