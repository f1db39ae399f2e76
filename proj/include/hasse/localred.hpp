#pragma once

// Local reduction data via Tate's algorithm, and global minimal models.

#include <string>
#include <vector>

#include "hasse/curves.hpp"

namespace hasse {

enum class ReductionKind { good, multiplicative_split, multiplicative_nonsplit, additive };
std::string to_string(ReductionKind k);

struct ReductionData {
  Int p;
  ReductionKind kind = ReductionKind::good;
  int v_delta = 0;         // of the local minimal model
  int tamagawa = 1;
  std::string kodaira = "I0";
  WeierstrassCurve minimal;  // local minimal model at p
  ModelChange change;        // input model -> minimal
};

/// Full Tate's algorithm at p. Any model is accepted; it is first made
/// p-integral by a p-power scaling.
ReductionData tate_algorithm(const WeierstrassCurve& E, const Int& p);

/// Reduction kind only. For odd p this is computed independently of the full
/// algorithm from c4, c6, the discriminant and the tangent slopes at the node.
ReductionKind reduction_type(const WeierstrassCurve& E, const Int& p);

WeierstrassCurve minimal_model(const WeierstrassCurve& E, const Int& p);

struct GlobalMinimal {
  WeierstrassCurve curve;  // a1, a3 in {0,1}, a2 in {-1,0,1}
  ModelChange change;      // input -> minimal
};

GlobalMinimal global_minimal_model(const WeierstrassCurve& E);

/// Primes of bad reduction of the global minimal model.
std::vector<Int> bad_primes(const WeierstrassCurve& E);

/// Reduction data at every bad prime, ascending p.
std::vector<ReductionData> local_data(const WeierstrassCurve& E);

Int tamagawa_product(const WeierstrassCurve& E);

}  // namespace hasse
