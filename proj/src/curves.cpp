#include "hasse/curves.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace hasse {

namespace {

WeierstrassCurve checked(WeierstrassCurve E) {
  if (discriminant(E) == 0) throw ArithmeticError("singular Weierstrass model");
  return E;
}

Int lcm_den(const WeierstrassCurve& E) {
  Int D = 1;
  // Smallest D with D^i a_i integral for all i.
  const Rat* a[] = {&E.a1, &E.a2, &E.a3, &E.a4, &E.a6};
  const int w[] = {1, 2, 3, 4, 6};
  for (int i = 0; i < 5; ++i) {
    for (auto& [p, e] : factor(a[i]->get_den())) {
      int need = (e + w[i] - 1) / w[i];
      int have = 0;
      Int t = D;
      while (mpz_divisible_p(t.get_mpz_t(), p.get_mpz_t())) {
        t /= p;
        ++have;
      }
      if (need > have) D *= pow(p, need - have);
    }
  }
  return D;
}

}  // namespace

WeierstrassCurve model_AB(const Rat& A, const Rat& B) {
  WeierstrassCurve E{Rat(0), A, Rat(0), -2 * A * B, A * B * B, ""};
  E.label = "y^2 = x^3 + (" + to_string(A) + ")(x - " + to_string(B) + ")^2";
  return checked(E);
}

WeierstrassCurve model_C(const Rat& C) {
  WeierstrassCurve E{Rat(0), Rat(0), Rat(0), Rat(0), C, ""};
  E.label = "y^2 = x^3 + " + to_string(C);
  return checked(E);
}

WeierstrassCurve model_ab(const Rat& a, const Rat& b) {
  WeierstrassCurve E{Rat(0), a, Rat(0), b, Rat(0), ""};
  E.label = "y^2 = x^3 + (" + to_string(a) + ")x^2 + (" + to_string(b) + ")x";
  return checked(E);
}

std::pair<Rat, Rat> isogenous_AB(const Rat& A, const Rat& B) { return {-27 * A, 4 * A + 27 * B}; }

Weierstrass<ModP> reduce(const WeierstrassCurve& E, std::uint64_t p) {
  const Int P(static_cast<unsigned long>(p));
  for (const Rat* c : {&E.a1, &E.a2, &E.a3, &E.a4, &E.a6})
    if (mpz_divisible_p(c->get_den_mpz_t(), P.get_mpz_t()))
      throw ArithmeticError("reduce: coefficient not integral at p");
  return {ModP(E.a1, p), ModP(E.a2, p), ModP(E.a3, p), ModP(E.a4, p), ModP(E.a6, p), E.label};
}

Point<ModP> reduce(const CurvePoint& P, std::uint64_t p) {
  if (P.inf) return Point<ModP>::infinity();
  return Point<ModP>::affine(ModP(P.x, p), ModP(P.y, p));
}

WeierstrassCurve apply_change(const WeierstrassCurve& E, const ModelChange& c) {
  const Rat &u = c.u, &r = c.r, &s = c.s, &t = c.t;
  if (u == 0) throw ArithmeticError("model change with u = 0");
  WeierstrassCurve F;
  F.a1 = (E.a1 + 2 * s) / u;
  F.a2 = (E.a2 - s * E.a1 + 3 * r - s * s) / (u * u);
  F.a3 = (E.a3 + r * E.a1 + 2 * t) / (u * u * u);
  F.a4 = (E.a4 - s * E.a3 + 2 * r * E.a2 - (t + r * s) * E.a1 + 3 * r * r - 2 * s * t) / pow(u, 4);
  F.a6 = (E.a6 + r * E.a4 + r * r * E.a2 + r * r * r - t * E.a3 - t * t - r * t * E.a1) / pow(u, 6);
  F.label = E.label;
  return F;
}

CurvePoint apply_change(const CurvePoint& P, const ModelChange& c) {
  if (P.inf) return P;
  Rat xr = P.x - c.r;
  return CurvePoint::affine(xr / (c.u * c.u), (P.y - c.s * xr - c.t) / pow(c.u, 3));
}

ModelChange compose(const ModelChange& a, const ModelChange& b) {
  // x = a.u^2 x1 + a.r, x1 = b.u^2 x2 + b.r, and similarly for y.
  ModelChange c;
  c.u = a.u * b.u;
  c.r = a.u * a.u * b.r + a.r;
  c.s = a.s + a.u * b.s;
  c.t = a.t + a.s * a.u * a.u * b.r + pow(a.u, 3) * b.t;
  return c;
}

std::pair<WeierstrassCurve, Rat> shift_two_torsion(const WeierstrassCurve& E) {
  if (E.a1 != 0 || E.a3 != 0) throw ArithmeticError("shift_two_torsion: need a1 = a3 = 0");
  // Make x^3 + a2 x^2 + a4 x + a6 integral through x = X / D.
  auto [Ei, D] = integral_model(E);
  IntPoly f = {Int(Ei.a6.get_num()), Int(Ei.a4.get_num()), Int(Ei.a2.get_num()), Int(1)};
  auto roots = rational_roots(f);
  if (roots.empty()) throw ArithmeticError("shift_two_torsion: no rational 2-torsion");
  Rat r = roots.front() / Rat(D * D);
  WeierstrassCurve S = apply_change(E, ModelChange{Rat(1), r, Rat(0), Rat(0)});
  S.a6 = 0;  // exact by construction
  return {S, r};
}

std::string to_string(IsogenyKind k) {
  switch (k) {
    case IsogenyKind::psi3: return "psi3";
    case IsogenyKind::psi3_j0: return "psi3_j0";
    case IsogenyKind::psi3_dual: return "psi3_dual";
    case IsogenyKind::psi3_j0_dual: return "psi3_j0_dual";
    case IsogenyKind::phi2: return "phi2";
    case IsogenyKind::phi2_dual: return "phi2_dual";
  }
  return "?";
}

IsogenyDescriptor psi_isogeny(const Rat& A, const Rat& B) {
  auto [Ab, Bb] = isogenous_AB(A, B);
  return {IsogenyKind::psi3, model_AB(A, B), model_AB(Ab, Bb), {A, B}};
}

IsogenyDescriptor psi_isogeny_j0(const Rat& C) {
  return {IsogenyKind::psi3_j0, model_C(C), model_C(-27 * C), {C}};
}

WeierstrassCurve phi_codomain(const Rat& a, const Rat& b) { return model_ab(-2 * a, a * a - 4 * b); }

IsogenyDescriptor phi_isogeny(const Rat& a, const Rat& b) {
  return {IsogenyKind::phi2, model_ab(a, b), phi_codomain(a, b), {a, b}};
}

IsogenyDescriptor dual(const IsogenyDescriptor& d) {
  IsogenyDescriptor r = d;
  std::swap(r.domain, r.codomain);
  switch (d.kind) {
    case IsogenyKind::psi3: r.kind = IsogenyKind::psi3_dual; break;
    case IsogenyKind::psi3_j0: r.kind = IsogenyKind::psi3_j0_dual; break;
    case IsogenyKind::psi3_dual: r.kind = IsogenyKind::psi3; break;
    case IsogenyKind::psi3_j0_dual: r.kind = IsogenyKind::psi3_j0; break;
    case IsogenyKind::phi2: r.kind = IsogenyKind::phi2_dual; break;
    case IsogenyKind::phi2_dual: r.kind = IsogenyKind::phi2; break;
  }
  return r;
}

Isogeny<ModP> reduce(const IsogenyDescriptor& d, std::uint64_t p) {
  Isogeny<ModP> r{d.kind, reduce(d.domain, p), reduce(d.codomain, p), {}};
  for (const Rat& q : d.params) r.params.emplace_back(q, p);
  return r;
}

Int count_points_mod_p(const WeierstrassCurve& E, std::uint64_t p) {
  auto Ep = reduce(E, p);
  if (p == 2) return Int(static_cast<unsigned long>(enumerate_points_mod_p(Ep).size()));
  auto inv = invariants(Ep);
  // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6.
  std::vector<signed char> chi(p, -1);
  chi[0] = 0;
  for (std::uint64_t y = 1; y <= p / 2; ++y) chi[static_cast<std::uint64_t>((unsigned __int128)y * y % p)] = 1;
  const std::uint64_t b2 = inv.b2.value(), b4 = (2 * (unsigned __int128)inv.b4.value() % p), b6 = inv.b6.value();
  long total = 1;
  for (std::uint64_t x = 0; x < p; ++x) {
    unsigned __int128 g = 4;
    g = (g * x + b2) % p;
    g = (g * x + b4) % p;
    g = (g * x + b6) % p;
    total += 1 + chi[static_cast<std::uint64_t>(g)];
  }
  return Int(total);
}

std::vector<Point<ModP>> enumerate_points_mod_p(const Weierstrass<ModP>& E) {
  const std::uint64_t p = E.a1.modulus();
  std::vector<Point<ModP>> out{Point<ModP>::infinity()};
  for (std::uint64_t x = 0; x < p; ++x)
    for (std::uint64_t y = 0; y < p; ++y) {
      auto P = Point<ModP>::affine(ModP(x, p), ModP(y, p));
      if (on_curve(E, P)) out.push_back(P);
    }
  return out;
}

IntPoly division_polynomial(const WeierstrassCurve& E, int n) {
  for (const Rat* c : {&E.a1, &E.a2, &E.a3, &E.a4, &E.a6})
    if (c->get_den() != 1) throw ArithmeticError("division_polynomial: integral model required");
  if (n < 0) throw ArithmeticError("division_polynomial: n < 0");
  auto inv = invariants(E);
  Int b2 = inv.b2.get_num(), b4 = inv.b4.get_num(), b6 = inv.b6.get_num(), b8 = inv.b8.get_num();
  IntPoly F = {b6, 2 * b4, b2, Int(4)};
  IntPoly F2 = F * F;
  std::map<int, IntPoly> memo;
  memo[0] = {};
  memo[1] = {Int(1)};
  memo[2] = {Int(1)};
  memo[3] = {b8, 3 * b6, 3 * b4, b2, Int(3)};
  memo[4] = {Int(b4 * b8 - b6 * b6), Int(b2 * b8 - b4 * b6), 10 * b8, 10 * b6, 5 * b4, b2, Int(2)};
  auto f = [&](auto&& self, int k) -> IntPoly {
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    IntPoly r;
    int m = k / 2;
    if (k % 2 == 0) {
      IntPoly a = self(self, m + 2) * self(self, m - 1) * self(self, m - 1);
      IntPoly b = self(self, m - 2) * self(self, m + 1) * self(self, m + 1);
      r = self(self, m) * (a - b);
    } else {
      IntPoly fm = self(self, m), fm1 = self(self, m + 1);
      IntPoly a = self(self, m + 2) * fm * fm * fm;
      IntPoly b = self(self, m - 1) * fm1 * fm1 * fm1;
      r = (m % 2 == 0) ? F2 * a - b : a - F2 * b;
    }
    trim(r);
    memo[k] = r;
    return r;
  };
  return f(f, n);
}

std::pair<WeierstrassCurve, Int> integral_model(const WeierstrassCurve& E) {
  Int D = lcm_den(E);
  if (D == 1) return {E, D};
  return {apply_change(E, ModelChange{Rat(1) / Rat(D), Rat(0), Rat(0), Rat(0)}), D};
}

TorsionData torsion_subgroup(const WeierstrassCurve& E0) {
  auto [E, D] = integral_model(E0);
  TorsionData out;
  Int disc = discriminant(E).get_num();
  Int bound = 0;
  for (long p = 3; p < 100 && out.primes_used.size() < 5; p += 2) {
    if (!is_prime(Int(p)) || mpz_divisible_ui_p(disc.get_mpz_t(), p)) continue;
    out.primes_used.push_back(p);
    Int n = count_points_mod_p(E, static_cast<std::uint64_t>(p));
    mpz_gcd(bound.get_mpz_t(), bound.get_mpz_t(), n.get_mpz_t());
  }
  out.bound = bound;

  // The exponent of E(Q)_tors is at most 12 and divides the bound.
  auto inv = invariants(E);
  IntPoly F = {Int(inv.b6.get_num()), Int(2 * inv.b4.get_num()), Int(inv.b2.get_num()), Int(4)};
  std::vector<Rat> xs;
  for (long d = 2; d <= 12; ++d) {
    if (!mpz_divisible_ui_p(bound.get_mpz_t(), d)) continue;
    IntPoly f = division_polynomial(E, static_cast<int>(d));
    if (d % 2 == 0) f = f * F;
    for (const Rat& x : rational_roots(f)) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<CurvePoint> pts{CurvePoint::infinity()};
  for (const Rat& x : xs) {
    // y^2 + (a1 x + a3) y - (x^3 + a2 x^2 + a4 x + a6) = 0
    Rat l = E.a1 * x + E.a3;
    Rat disc_y = l * l + 4 * (x * x * x + E.a2 * x * x + E.a4 * x + E.a6);
    auto s = exact_sqrt(disc_y);
    if (!s) continue;
    for (const Rat& y : {Rat((-l + *s) / 2), Rat((-l - *s) / 2)}) {
      CurvePoint P = CurvePoint::affine(x, y);
      if (std::find(pts.begin(), pts.end(), P) == pts.end()) pts.push_back(P);
    }
  }
  // Confirm each candidate is torsion of order dividing the bound.
  std::vector<long> orders;
  std::vector<CurvePoint> torsion;
  for (const auto& P : pts) {
    CurvePoint Q = P;
    long ord = 1;
    while (!Q.inf && ord <= 12) {
      Q = point_add(E, Q, P);
      ++ord;
    }
    if (!Q.inf) continue;
    torsion.push_back(P);
    orders.push_back(ord);
  }
  out.order = static_cast<long>(torsion.size());
  long n = static_cast<long>(torsion.size());
  long max_order = orders.empty() ? 1 : *std::max_element(orders.begin(), orders.end());
  if (n == 1) out.invariants = {};
  else if (max_order == n) out.invariants = {n};
  else out.invariants = {2, n / 2};
  // Back to the input model.
  for (auto& P : torsion) {
    if (!P.inf) P = CurvePoint::affine(P.x / Rat(D * D), P.y / Rat(D * D * D));
  }
  out.points = torsion;
  return out;
}

std::string to_string(const WeierstrassCurve& E) {
  auto c = coefficient_strings(E);
  return "[" + c[0] + "," + c[1] + "," + c[2] + "," + c[3] + "," + c[4] + "]";
}

std::string to_string(const CurvePoint& P) {
  if (P.inf) return "O";
  return "(" + to_string(P.x) + ", " + to_string(P.y) + ")";
}

std::vector<std::string> coefficient_strings(const WeierstrassCurve& E) {
  return {to_string(E.a1), to_string(E.a2), to_string(E.a3), to_string(E.a4), to_string(E.a6)};
}

}  // namespace hasse
