#pragma once

// Weierstrass models, the group law over Q and F_p, and the explicit
// 3-isogeny psi (kernel at x = 0) and 2-isogeny phi (kernel (0,0)).

#include <string>
#include <vector>

#include "hasse/arith.hpp"
#include "hasse/modp.hpp"
#include "hasse/poly.hpp"

namespace hasse {

// ---- scalar helpers shared by Rat and ModP ----

inline bool is_zero(const Rat& x) { return x == 0; }
inline bool is_zero(const ModP& x) { return x.is_zero(); }
inline Rat constant_like(const Rat&, long c) { return Rat(c); }
inline ModP constant_like(const ModP& like, long c) { return like.lift(c); }
inline Rat embed(const Rat& r, const Rat&) { return r; }
inline ModP embed(const Rat& r, const ModP& like) { return ModP(r, like.modulus()); }

template <class F>
struct Weierstrass {
  F a1, a2, a3, a4, a6;
  std::string label;

  friend bool operator==(const Weierstrass& a, const Weierstrass& b) {
    return a.a1 == b.a1 && a.a2 == b.a2 && a.a3 == b.a3 && a.a4 == b.a4 && a.a6 == b.a6;
  }
};

template <class F>
struct Point {
  bool inf = true;
  F x{}, y{};

  static Point infinity() { return Point{}; }
  static Point affine(F x_, F y_) { return Point{false, std::move(x_), std::move(y_)}; }
  friend bool operator==(const Point& a, const Point& b) {
    if (a.inf || b.inf) return a.inf == b.inf;
    return a.x == b.x && a.y == b.y;
  }
};

using WeierstrassCurve = Weierstrass<Rat>;
using CurvePoint = Point<Rat>;

template <class F>
struct Invariants {
  F b2, b4, b6, b8, c4, c6, disc;
};

template <class F>
Invariants<F> invariants(const Weierstrass<F>& E) {
  const F& a1 = E.a1; const F& a2 = E.a2; const F& a3 = E.a3; const F& a4 = E.a4; const F& a6 = E.a6;
  auto k = [&](long c) { return constant_like(a1, c); };
  Invariants<F> r;
  r.b2 = a1 * a1 + k(4) * a2;
  r.b4 = k(2) * a4 + a1 * a3;
  r.b6 = a3 * a3 + k(4) * a6;
  r.b8 = a1 * a1 * a6 + k(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  r.c4 = r.b2 * r.b2 - k(24) * r.b4;
  r.c6 = k(0) - r.b2 * r.b2 * r.b2 + k(36) * r.b2 * r.b4 - k(216) * r.b6;
  r.disc = k(0) - r.b2 * r.b2 * r.b8 - k(8) * r.b4 * r.b4 * r.b4 - k(27) * r.b6 * r.b6 + k(9) * r.b2 * r.b4 * r.b6;
  return r;
}

template <class F>
F discriminant(const Weierstrass<F>& E) {
  return invariants(E).disc;
}

template <class F>
bool on_curve(const Weierstrass<F>& E, const Point<F>& P) {
  if (P.inf) return true;
  const F& x = P.x; const F& y = P.y;
  return y * y + E.a1 * x * y + E.a3 * y == x * x * x + E.a2 * x * x + E.a4 * x + E.a6;
}

template <class F>
Point<F> negate(const Weierstrass<F>& E, const Point<F>& P) {
  if (P.inf) return P;
  return Point<F>::affine(P.x, constant_like(E.a1, 0) - P.y - E.a1 * P.x - E.a3);
}

template <class F>
Point<F> point_add(const Weierstrass<F>& E, const Point<F>& P, const Point<F>& Q) {
  if (P.inf) return Q;
  if (Q.inf) return P;
  auto k = [&](long c) { return constant_like(E.a1, c); };
  F lambda, nu;
  if (P.x == Q.x) {
    // Q = -P or P = Q.
    if (is_zero(P.y + Q.y + E.a1 * Q.x + E.a3)) return Point<F>::infinity();
    F den = k(2) * P.y + E.a1 * P.x + E.a3;
    lambda = (k(3) * P.x * P.x + k(2) * E.a2 * P.x + E.a4 - E.a1 * P.y) / den;
    nu = (k(0) - P.x * P.x * P.x + E.a4 * P.x + k(2) * E.a6 - E.a3 * P.y) / den;
  } else {
    lambda = (Q.y - P.y) / (Q.x - P.x);
    nu = (P.y * Q.x - Q.y * P.x) / (Q.x - P.x);
  }
  F x3 = lambda * lambda + E.a1 * lambda - E.a2 - P.x - Q.x;
  F y3 = k(0) - (lambda + E.a1) * x3 - nu - E.a3;
  return Point<F>::affine(x3, y3);
}

template <class F>
Point<F> scalar_mul(const Weierstrass<F>& E, Int n, const Point<F>& P) {
  Point<F> base = P, acc = Point<F>::infinity();
  if (n < 0) {
    base = negate(E, P);
    n = -n;
  }
  while (n > 0) {
    if (mpz_odd_p(n.get_mpz_t())) acc = point_add(E, acc, base);
    base = point_add(E, base, base);
    n >>= 1;
  }
  return acc;
}

class NotOnCurve : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---- models ----

/// y^2 = x^3 + A(x - B)^2. Throws ArithmeticError when singular.
WeierstrassCurve model_AB(const Rat& A, const Rat& B);
/// y^2 = x^3 + C.
WeierstrassCurve model_C(const Rat& C);
/// y^2 = x^3 + a x^2 + b x, the 2-torsion point at the origin.
WeierstrassCurve model_ab(const Rat& a, const Rat& b);

/// (Abar, Bbar) = (-27A, 4A + 27B).
std::pair<Rat, Rat> isogenous_AB(const Rat& A, const Rat& B);

/// Curve over F_p; throws ArithmeticError if a coefficient is not p-integral.
Weierstrass<ModP> reduce(const WeierstrassCurve& E, std::uint64_t p);
Point<ModP> reduce(const CurvePoint& P, std::uint64_t p);

/// x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
struct ModelChange {
  Rat u{1}, r{0}, s{0}, t{0};
};
WeierstrassCurve apply_change(const WeierstrassCurve& E, const ModelChange& c);
CurvePoint apply_change(const CurvePoint& P, const ModelChange& c);
/// Composition: first a, then b.
ModelChange compose(const ModelChange& a, const ModelChange& b);

/// Moves the rational 2-torsion point of y^2 = x^3 + a2 x^2 + a4 x + a6 to
/// the origin. Returns the shifted model and r with x_new = x_old - r.
/// If several rational roots exist the smallest is used.
std::pair<WeierstrassCurve, Rat> shift_two_torsion(const WeierstrassCurve& E);

// ---- isogenies ----

enum class IsogenyKind { psi3, psi3_j0, psi3_dual, psi3_j0_dual, phi2, phi2_dual };
std::string to_string(IsogenyKind k);

/// params: (A, B) for psi3 / psi3_dual, (C) for the j = 0 kinds, (a, b) for
/// phi2 / phi2_dual; dual kinds keep the parameters of the forward map.
template <class F>
struct Isogeny {
  IsogenyKind kind;
  Weierstrass<F> domain, codomain;
  std::vector<F> params;
};
using IsogenyDescriptor = Isogeny<Rat>;

IsogenyDescriptor psi_isogeny(const Rat& A, const Rat& B);
IsogenyDescriptor psi_isogeny_j0(const Rat& C);
IsogenyDescriptor phi_isogeny(const Rat& a, const Rat& b);
IsogenyDescriptor dual(const IsogenyDescriptor& d);
WeierstrassCurve phi_codomain(const Rat& a, const Rat& b);
Isogeny<ModP> reduce(const IsogenyDescriptor& d, std::uint64_t p);

/// Sign making psi-hat o psi = [3]; fixed against the [3] oracle in tests.
inline constexpr long kPsiDualSign = 1;

namespace detail {

template <class F>
Point<F> psi_AB(const F& A, const F& B, const Point<F>& P) {
  if (P.inf || is_zero(P.x)) return Point<F>::infinity();
  auto k = [&](long c) { return constant_like(A, c); };
  const F& x = P.x; const F& y = P.y;
  F x2 = x * x, x3 = x2 * x;
  F AB2 = A * B * B;
  F X = k(3) * (k(6) * y * y + k(6) * AB2 - k(3) * x3 - k(2) * A * x2) / x2;
  F Y = k(27) * y * (k(8) * AB2 - x3 - k(4) * A * B * x) / x3;
  return Point<F>::affine(X, Y);
}

template <class F>
Point<F> psi_C(const F& C, const Point<F>& P) {
  if (P.inf || is_zero(P.x)) return Point<F>::infinity();
  auto k = [&](long c) { return constant_like(C, c); };
  const F& x = P.x; const F& y = P.y;
  F x3 = P.x * P.x * P.x;
  return Point<F>::affine((y * y + k(3) * C) / (x * x), y * (x3 - k(8) * C) / x3);
}

template <class F>
Point<F> phi_ab(const F& b, const Point<F>& P) {
  if (P.inf || is_zero(P.x)) return Point<F>::infinity();
  const F& x = P.x; const F& y = P.y;
  F x2 = x * x;
  return Point<F>::affine(y * y / x2, y * (b - x2) / x2);
}

template <class F>
Point<F> scale(const Point<F>& P, long u, long sign) {
  if (P.inf) return P;
  F u2 = constant_like(P.x, u * u), u3 = constant_like(P.x, u * u * u);
  F s = constant_like(P.x, sign);
  return Point<F>::affine(P.x / u2, s * P.y / u3);
}

}  // namespace detail

template <class F>
Point<F> isogeny_apply(const Isogeny<F>& d, const Point<F>& P) {
  if (!on_curve(d.domain, P)) throw NotOnCurve("isogeny_apply: point not on domain curve");
  if (P.inf) return P;
  auto k = [&](long c) { return constant_like(d.params[0], c); };
  switch (d.kind) {
    case IsogenyKind::psi3:
      return detail::psi_AB(d.params[0], d.params[1], P);
    case IsogenyKind::psi3_j0:
      return detail::psi_C(d.params[0], P);
    case IsogenyKind::psi3_dual: {
      // psi for (Abar, Bbar) lands on y^2 = x^3 + 729A(x - 729B)^2; scale by u = 27.
      F Abar = k(-27) * d.params[0];
      F Bbar = k(4) * d.params[0] + k(27) * d.params[1];
      return detail::scale(detail::psi_AB(Abar, Bbar, P), 27, kPsiDualSign);
    }
    case IsogenyKind::psi3_j0_dual:
      return detail::scale(detail::psi_C(F(k(-27) * d.params[0]), P), 3, kPsiDualSign);
    case IsogenyKind::phi2:
      return detail::phi_ab(d.params[1], P);
    case IsogenyKind::phi2_dual: {
      const F& a = d.params[0]; const F& b = d.params[1];
      return detail::scale(detail::phi_ab(F(a * a - k(4) * b), P), 2, 1);
    }
  }
  return Point<F>::infinity();
}

template <class F>
Point<F> psi_apply(const Isogeny<F>& d, const Point<F>& P) {
  if (d.kind != IsogenyKind::psi3 && d.kind != IsogenyKind::psi3_j0)
    throw std::invalid_argument("psi_apply: not a forward 3-isogeny");
  return isogeny_apply(d, P);
}

template <class F>
Point<F> psi_dual_apply(const Isogeny<F>& d, const Point<F>& P) {
  if (d.kind != IsogenyKind::psi3_dual && d.kind != IsogenyKind::psi3_j0_dual)
    throw std::invalid_argument("psi_dual_apply: not a dual 3-isogeny");
  return isogeny_apply(d, P);
}

template <class F>
Point<F> phi_apply(const Isogeny<F>& d, const Point<F>& P) {
  if (d.kind != IsogenyKind::phi2 && d.kind != IsogenyKind::phi2_dual)
    throw std::invalid_argument("phi_apply: not a 2-isogeny");
  return isogeny_apply(d, P);
}

// ---- counting and torsion ----

/// 1 + #{(x, y) in F_p^2 on the reduction}. At bad p the singular point is
/// included in the count.
Int count_points_mod_p(const WeierstrassCurve& E, std::uint64_t p);

/// All points of E(F_p), p small; used as a test oracle and for random points.
std::vector<Point<ModP>> enumerate_points_mod_p(const Weierstrass<ModP>& E);

/// f_n with psi_n = f_n (n odd) or psi_n = (2y + a1 x + a3) f_n (n even).
/// Requires integral coefficients.
IntPoly division_polynomial(const WeierstrassCurve& E, int n);

struct TorsionData {
  Int order{1};
  std::vector<long> invariants;  // [n] cyclic, [2, 2m] otherwise, [] trivial
  std::vector<CurvePoint> points;
  Int bound{0};                   // gcd of #E(F_p) used
  std::vector<long> primes_used;
};

TorsionData torsion_subgroup(const WeierstrassCurve& E);

/// Scale to an integral model: x = x'/D^2, y = y'/D^3.
std::pair<WeierstrassCurve, Int> integral_model(const WeierstrassCurve& E);

std::string to_string(const WeierstrassCurve& E);
std::string to_string(const CurvePoint& P);
std::vector<std::string> coefficient_strings(const WeierstrassCurve& E);

}  // namespace hasse
