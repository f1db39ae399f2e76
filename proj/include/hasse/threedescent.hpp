#pragma once

// The 3-isogeny side: connecting map into L^x/(L^x)^3, Cassels' ratio and
// the plane cubics representing classes of L(S,3)*.

#include <array>
#include <string>
#include <vector>

#include "hasse/curves.hpp"
#include "hasse/quadring.hpp"

namespace hasse {

/// Codomain of psi: y^2 = x^3 + A(x - B)^2, or y^2 = x^3 + C (j0, C kept in A).
/// A and B here are the barred parameters.
struct CodomainModel {
  bool j0 = false;
  Rat A{0}, B{0};

  static CodomainModel ab(const Rat& Abar, const Rat& Bbar) { return {false, Abar, Bbar}; }
  static CodomainModel c(const Rat& Cbar) { return {true, Cbar, Rat(0)}; }
  /// From psi: (Abar, Bbar) = (-27A, 4A + 27B), resp. Cbar = -27C.
  static CodomainModel of(const IsogenyDescriptor& psi);

  WeierstrassCurve curve() const;
  /// The radicand Abar (or Cbar) and L = Q(sqrt radicand).
  bool radicand_square() const;
  Int field() const;       // squarefree part of the radicand; 1 when L = Q
  Rat root_scale() const;  // m with sqrt(radicand) = m sqrt(field)
};

struct DeltaImage {
  CurvePoint point;
  QuadElem value;  // field 1 when L = Q (then value.v = 0)
};

/// eta + (xi - Bbar) sqrt(Abar), resp. eta + sqrt(Cbar); O -> 1.
DeltaImage delta_image(const CurvePoint& P, const CodomainModel& M);

/// c with psi^* (dx/2y on the codomain) = c dx/2y on the domain, for the
/// given (not necessarily minimal) models.
Rat pullback_factor(const IsogenyDescriptor& psi);

/// Omega_E / Omega_Ebar for an odd-degree isogeny with the given pullback
/// factor on these models and #ker on real points. Minimal models are found
/// internally; the cokernel comes from component counts.
Rat period_ratio(const WeierstrassCurve& E, const WeierstrassCurve& Ebar, const Rat& pullback, int real_kernel);
Rat period_ratio(const IsogenyDescriptor& psi);

struct CasselsData {
  Int tors_bar{1};  // #Ebar(Q)[psi-hat]
  Int tors{1};      // #E(Q)[psi]
  Int tam_E{1}, tam_Ebar{1};
  Rat period{1};    // Omega_E / Omega_Ebar
  Rat selmer_ratio{1};  // #Sel(psi-hat) / #Sel(psi)
};

CasselsData cassels_formula(const Int& tors_bar, const Int& tors, const Rat& period, const Int& tam_E,
                            const Int& tam_Ebar);
CasselsData cassels_ratio(const IsogenyDescriptor& psi);

struct SelmerPsiResult {
  Int order{0};
  Int lower{0}, upper{0};
  Int dual_order{0};  // #Sel(psi-hat) forced by the ratio
  CasselsData cassels;
  std::vector<Int> S;  // rational primes below the places in S
  CubeClassGroup classes;
  std::vector<QuadElem> elements;
  int rank_bound = -1;
  bool rational_three_torsion = false;
  bool sha_flag = false;
};

/// Squeezes #Sel(psi) between 1/ratio and #L(S,3)*; throws Inconclusive
/// when the bounds differ. rank_bound comes from elsewhere (2-descent).
SelmerPsiResult selmer_psi(const IsogenyDescriptor& psi, int rank_bound, std::span<const Int> hints = {});
/// The family curve E_h: y^2 = x^3 - 216(x - h(h-6)^2)^2, with its 2-descent.
SelmerPsiResult selmer_psi_order(const Int& h);

// ---- plane cubics ----

/// Monomials of F(w, z), in this order throughout.
inline constexpr std::array<const char*, 10> kMonomials = {"w^3", "w^2z", "wz^2", "z^3", "w^2",
                                                          "wz",  "z^2",  "w",    "z",   "1"};
inline constexpr std::array<std::array<int, 2>, 10> kExponents = {
    {{3, 0}, {2, 1}, {1, 2}, {0, 3}, {2, 0}, {1, 1}, {0, 2}, {1, 0}, {0, 1}, {0, 0}}};

struct CubicProvenance {
  int kind = 4;  // 1..4: j0 square, j0 non-square, AB square, AB non-square
  QuadElem t;
  Rat u{0}, v{0};  // t = u + v sqrt(radicand) (kinds 2 and 4)
  Rat s{1};        // rational cube root of N(t)
  CodomainModel model;
  Rat scale{1};          // coefficients = scale * raw
  bool z_negated = false;  // coefficients describe F(w, -z)
};

struct PlaneCubic {
  std::array<Rat, 10> c{};
  CubicProvenance from;

  Rat eval(const Rat& w, const Rat& z) const;
  /// Homogeneous value at (W : Z : V); requires integral coefficients.
  Int eval(const Int& W, const Int& Z, const Int& V) const;
  bool integral() const;
  std::array<Int, 10> integer_coefficients() const;
  friend bool operator==(const PlaneCubic& a, const PlaneCubic& b) { return a.c == b.c; }
};

/// The four-case model of C_t. Throws ArithmeticError when t is not
/// cubefree, its norm is not a cube, or t lives in the wrong field.
PlaneCubic homogeneous_space(const QuadElem& t, const CodomainModel& M, std::span<const Int> hints = {});

/// Primitive integral coefficients; of F(w, z) and F(w, -z), each with its
/// first nonzero coefficient made positive, the lexicographically greater.
PlaneCubic canonicalize(const PlaneCubic& C);

/// "cubic part + constant = -(quadratic and linear part)", monomial order.
std::string render(const PlaneCubic& C);

/// Resultant of the three partials of the homogenized form (times 512):
/// zero exactly when the cubic is singular.
Int cubic_discriminant(const PlaneCubic& C);
bool is_smooth(const PlaneCubic& C);

/// The point of Ebar attached to a point of C_t. Points at infinity (V = 0)
/// go to O. Throws NotOnCurve when the input is not on C.
CurvePoint point_transfer(const PlaneCubic& C, const Rat& w, const Rat& z);
CurvePoint point_transfer(const PlaneCubic& C, const Int& W, const Int& Z, const Int& V);
/// Same formulas over F_p.
Point<ModP> point_transfer_mod(const PlaneCubic& C, const ModP& w, const ModP& z);

/// Family data: the minimal model (72, (h-2)^2 (h-8)/3) of Ebar_h and the
/// cubics C^h_+ (t = 1 + sqrt 2) and C^h_- (t = -1 + sqrt 2), canonicalized.
CodomainModel family_codomain(const Int& h);
PlaneCubic family_cubic(const Int& h, int sign);

}  // namespace hasse
