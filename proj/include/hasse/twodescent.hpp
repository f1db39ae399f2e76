#pragma once

// Descent by 2-isogeny on y^2 = x^3 + a x^2 + b x.

#include <map>
#include <optional>
#include <vector>

#include "hasse/curves.hpp"

namespace hasse {

/// d w^2 = d^2 u^4 + a d u^2 z^2 + b z^4 for the curve y^2 = x^3 + a x^2 + b x.
struct QuarticTorsor {
  SquareClass d;
  Int a, b;

  /// d * g(x, 1) and d * g(1, x); a point exists iff one of them is a square
  /// at some x (x in Z_p, resp. p Z_p).
  IntPoly chart_z() const;
  IntPoly chart_u() const;
  /// g(u, z) itself.
  Int eval(const Int& u, const Int& z) const;
};

struct LocalCertificate {
  Int place;  // 0 = real
  bool solvable = false;
  /// (u, z) with d * g(u, z) a square in Q_p (or zero).
  std::optional<std::pair<Int, Int>> point;
  int depth_bound = 0;
  int max_depth = 0;
  long nodes = 0;
};

SquareClass alpha_image_of_zero(const Int& b);

/// All signed squarefree divisors of the squarefree kernel of b, ascending.
std::vector<SquareClass> candidate_classes(const Int& b, std::span<const Int> hints = {});

/// Local solvability at p (p = 0: real place). Throws Inconclusive if the
/// disk search exceeds 2 v_p(disc) + 3 levels.
LocalCertificate locally_solvable_quartic(const QuarticTorsor& T, const Int& p);

/// Re-checks a certificate: points are verified exactly; negative verdicts
/// are recomputed.
bool replay(const QuarticTorsor& T, const LocalCertificate& c);

enum class Direction { forward, dual };

struct SelmerPhiResult {
  WeierstrassCurve E;       // y^2 = x^3 + a x^2 + b x
  WeierstrassCurve Eprime;  // phi(E)
  Direction direction = Direction::forward;
  Int torsor_a, torsor_b;   // coefficients used by the torsors
  std::vector<SquareClass> selmer;
  std::map<Int, std::vector<LocalCertificate>> certificates;  // keyed by d
  std::vector<Int> places;  // primes checked, real place as 0 last
};

/// forward: classes in Q^x/Q^x2 cut out by E'(Q)/phi(E(Q)) (torsors of E');
/// dual: the same for phi-hat (torsors of E). Requires a1 = a3 = a6 = 0.
SelmerPhiResult selmer_phi(const WeierstrassCurve& E, Direction dir);

/// log2(#S * #S' / 4); throws if that is not a non-negative integer.
int rank_upper_bound(std::size_t sel_fwd, std::size_t sel_dual);

}  // namespace hasse
