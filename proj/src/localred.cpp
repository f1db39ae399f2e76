#include "hasse/localred.hpp"

#include <climits>

namespace hasse {

namespace {

using u64 = std::uint64_t;

constexpr int kInfiniteValuation = INT_MAX / 4;

int vp(const Rat& x, const Int& p) { return x == 0 ? kInfiniteValuation : valuation(x, p); }
bool pdiv(const Rat& x, const Int& p) { return vp(x, p) >= 1; }

u64 red(const Rat& x, u64 p) { return ModP(x, p).value(); }

ModPoly reduce_rat(const std::vector<Rat>& c, u64 p) {
  ModPoly f;
  for (const auto& x : c) f.push_back(red(x, p));
  trim(f);
  return f;
}

ModPoly derivative_mod(const ModPoly& f, u64 p) {
  ModPoly d;
  for (size_t i = 1; i < f.size(); ++i) d.push_back(static_cast<u64>((unsigned __int128)f[i] * (i % p) % p));
  trim(d);
  return d;
}

// Root multiplicity of alpha in f over F_p.
int multiplicity(ModPoly f, u64 alpha, u64 p) {
  int m = 0;
  while (!f.empty() && eval(f, alpha, p) == 0) {
    // Synthetic division by (T - alpha).
    ModPoly q(f.size() - 1);
    unsigned __int128 carry = 0;
    for (size_t i = f.size(); i-- > 1;) {
      carry = (f[i] + carry * alpha) % p;
      q[i - 1] = static_cast<u64>(carry);
    }
    f = q;
    trim(f);
    ++m;
  }
  return m;
}

// a X^2 + b X + c has a root in F_p.
bool quad_has_root(const Rat& a, const Rat& b, const Rat& c, u64 p) {
  u64 A = red(a, p), B = red(b, p), C = red(c, p);
  if (A == 0) return B != 0 || C == 0;
  if (p == 2) return C == 0 || (A + B + C) % 2 == 0;
  Int disc = Int(static_cast<unsigned long>(B)) * B - 4 * Int(static_cast<unsigned long>(A)) * C;
  return legendre(disc, Int(static_cast<unsigned long>(p))) != -1;
}

// Double root of a X^2 + b X + c mod p (a a unit, discriminant divisible by p).
u64 double_root(const Rat& a, const Rat& b, const Rat& c, u64 p) {
  if (p == 2) return red(c / a, p);  // b is even, so a X^2 = c
  ModP A(a, p), B(b, p);
  return (ModP(0, p) - B / (ModP(2, p) * A)).value();
}

struct Work {
  WeierstrassCurve C;
  ModelChange total;
  Int p;

  void rst(const Rat& r, const Rat& s, const Rat& t) {
    ModelChange c{Rat(1), r, s, t};
    C = apply_change(C, c);
    total = compose(total, c);
  }
  void scale(const Rat& u) {
    ModelChange c{u, Rat(0), Rat(0), Rat(0)};
    C = apply_change(C, c);
    total = compose(total, c);
  }
};

// Moves the singular point of the reduction to (0, 0).
void move_singular_point(Work& w, u64 p) {
  auto Cp = reduce(w.C, p);
  if (p <= 3) {
    for (u64 x = 0; x < p; ++x)
      for (u64 y = 0; y < p; ++y) {
        ModP X(x, p), Y(y, p);
        ModP F = Y * Y + Cp.a1 * X * Y + Cp.a3 * Y - X * X * X - Cp.a2 * X * X - Cp.a4 * X - Cp.a6;
        ModP Fx = Cp.a1 * Y - ModP(3, p) * X * X - ModP(2, p) * Cp.a2 * X - Cp.a4;
        ModP Fy = ModP(2, p) * Y + Cp.a1 * X + Cp.a3;
        if (F.is_zero() && Fx.is_zero() && Fy.is_zero()) {
          w.rst(Rat(Int(static_cast<unsigned long>(x))), Rat(0), Rat(Int(static_cast<unsigned long>(y))));
          return;
        }
      }
    throw std::logic_error("tate: no singular point found");
  }
  auto inv = invariants(Cp);
  ModPoly g = {inv.b6.value(), (ModP(2, p) * inv.b4).value(), inv.b2.value(), 4 % p};
  trim(g);
  ModPoly G = gcd(g, derivative_mod(g, p), p);
  auto roots = roots_mod_p(G, p);
  if (roots.empty()) throw std::logic_error("tate: no singular point found");
  ModP x0(roots.front(), p);
  ModP y0 = ModP(0, p) - (Cp.a1 * x0 + Cp.a3) / ModP(2, p);
  w.rst(Rat(Int(static_cast<unsigned long>(x0.value()))), Rat(0), Rat(Int(static_cast<unsigned long>(y0.value()))));
}

std::string kodaira_In(int n, bool star) { return "I" + std::to_string(n) + (star ? "*" : ""); }

}  // namespace

std::string to_string(ReductionKind k) {
  switch (k) {
    case ReductionKind::good: return "good";
    case ReductionKind::multiplicative_split: return "multiplicative_split";
    case ReductionKind::multiplicative_nonsplit: return "multiplicative_nonsplit";
    case ReductionKind::additive: return "additive";
  }
  return "?";
}

ReductionData tate_algorithm(const WeierstrassCurve& E, const Int& P) {
  if (!is_prime(P) || P < 2) throw ArithmeticError("tate_algorithm: p must be prime");
  if (!P.fits_ulong_p() || P > Int("9223372036854775807")) throw ArithmeticError("tate_algorithm: p too large");
  const u64 p = P.get_ui();
  const Rat pr(P);

  Work w{E, ModelChange{}, P};
  // p-integral model.
  {
    int k = 0;
    const Rat* a[] = {&E.a1, &E.a2, &E.a3, &E.a4, &E.a6};
    const int wt[] = {1, 2, 3, 4, 6};
    for (int i = 0; i < 5; ++i) {
      if (*a[i] == 0) continue;
      int v = valuation(*a[i], P);
      if (v < 0) k = std::max(k, (-v + wt[i] - 1) / wt[i]);
    }
    if (k > 0) w.scale(Rat(1) / pow(pr, k));
  }

  ReductionData out;
  out.p = P;
  while (true) {
    WeierstrassCurve& C = w.C;
    Rat disc = discriminant(C);
    if (disc == 0) throw ArithmeticError("tate_algorithm: singular curve");
    int vD = valuation(disc, P);
    out.v_delta = vD;
    // Step 1.
    if (vD == 0) {
      out.kind = ReductionKind::good;
      out.tamagawa = 1;
      out.kodaira = "I0";
      break;
    }
    // Step 2.
    move_singular_point(w, p);
    if (!pdiv(C.a3, P) || !pdiv(C.a4, P) || !pdiv(C.a6, P)) throw std::logic_error("tate: step 2 failed");
    auto inv = invariants(C);
    if (!pdiv(inv.b2, P)) {
      bool split = quad_has_root(Rat(1), C.a1, -C.a2, p);
      out.kind = split ? ReductionKind::multiplicative_split : ReductionKind::multiplicative_nonsplit;
      out.tamagawa = split ? vD : (vD % 2 == 0 ? 2 : 1);
      out.kodaira = kodaira_In(vD, false);
      break;
    }
    out.kind = ReductionKind::additive;
    // Step 3.
    if (vp(C.a6, P) < 2) {
      out.tamagawa = 1;
      out.kodaira = "II";
      break;
    }
    // Step 4.
    if (vp(inv.b8, P) < 3) {
      out.tamagawa = 2;
      out.kodaira = "III";
      break;
    }
    // Step 5.
    if (vp(inv.b6, P) < 3) {
      const Rat p2 = pr * pr;
      out.tamagawa = quad_has_root(Rat(1), C.a3 / pr, -C.a6 / p2, p) ? 3 : 1;
      out.kodaira = "IV";
      break;
    }
    // Step 6: p | a1, a2; p^2 | a3, a4; p^3 | a6.
    auto step6_ok = [&](const WeierstrassCurve& D) {
      return vp(D.a1, P) >= 1 && vp(D.a2, P) >= 1 && vp(D.a3, P) >= 2 && vp(D.a4, P) >= 2 && vp(D.a6, P) >= 3;
    };
    if (p > 3) {
      w.rst(Rat(0), -C.a1 / 2, -C.a3 / 2);
    } else {
      bool found = false;
      const long p3 = static_cast<long>(p * p * p);
      for (long r = 0; r < p3 && !found; ++r)
        for (long s = 0; s < static_cast<long>(p) && !found; ++s)
          for (long t = 0; t < p3 && !found; ++t) {
            ModelChange c{Rat(1), Rat(r), Rat(s), Rat(t)};
            if (step6_ok(apply_change(C, c))) {
              w.rst(Rat(r), Rat(s), Rat(t));
              found = true;
            }
          }
      if (!found) throw std::logic_error("tate: step 6 transform not found");
    }
    if (!step6_ok(C)) throw std::logic_error("tate: step 6 failed");

    const Rat p2 = pr * pr, p3 = p2 * pr;
    std::vector<Rat> Pc = {C.a6 / p3, C.a4 / p2, C.a2 / pr, Rat(1)};
    ModPoly Pm = reduce_rat(Pc, p);
    ModPoly G = gcd(Pm, derivative_mod(Pm, p), p);
    if (G.size() <= 1) {
      // Distinct roots: I0*.
      out.tamagawa = 1 + static_cast<int>(roots_mod_p(Pm, p).size());
      out.kodaira = "I0*";
      break;
    }
    u64 alpha = roots_mod_p(G, p).front();
    int mult = multiplicity(Pm, alpha, p);
    if (mult == 2) {
      // Step 7: I_m*.
      w.rst(pr * Rat(Int(static_cast<unsigned long>(alpha))), Rat(0), Rat(0));
      int ix = 3, iy = 3;
      Rat mx = p2, my = p2;
      int cp = 0;
      while (true) {
        Rat a2t = C.a2 / pr, a3t = C.a3 / my, a4t = C.a4 / (pr * mx), a6t = C.a6 / (mx * my);
        if (pdiv(a3t * a3t + 4 * a6t, P)) {
          u64 beta = double_root(Rat(1), a3t, -a6t, p);
          w.rst(Rat(0), Rat(0), my * Rat(Int(static_cast<unsigned long>(beta))));
          my *= pr;
          ++iy;
          a2t = C.a2 / pr;
          a3t = C.a3 / my;
          a4t = C.a4 / (pr * mx);
          a6t = C.a6 / (mx * my);
          if (pdiv(a4t * a4t - 4 * a6t * a2t, P)) {
            u64 gamma = double_root(a2t, a4t, a6t, p);
            w.rst(mx * Rat(Int(static_cast<unsigned long>(gamma))), Rat(0), Rat(0));
            mx *= pr;
            ++ix;
          } else {
            cp = quad_has_root(a2t, a4t, a6t, p) ? 4 : 2;
            break;
          }
        } else {
          cp = quad_has_root(Rat(1), a3t, -a6t, p) ? 4 : 2;
          break;
        }
      }
      out.tamagawa = cp;
      out.kodaira = kodaira_In(ix + iy - 5, true);
      break;
    }
    // Step 8: triple root.
    w.rst(pr * Rat(Int(static_cast<unsigned long>(alpha))), Rat(0), Rat(0));
    Rat x3 = C.a3 / p2, x6 = C.a6 / (p2 * p2);
    if (!pdiv(x3 * x3 + 4 * x6, P)) {
      out.tamagawa = quad_has_root(Rat(1), x3, -x6, p) ? 3 : 1;
      out.kodaira = "IV*";
      break;
    }
    // Step 9.
    u64 beta = double_root(Rat(1), x3, -x6, p);
    w.rst(Rat(0), Rat(0), p2 * Rat(Int(static_cast<unsigned long>(beta))));
    if (vp(C.a4, P) < 4) {
      out.tamagawa = 2;
      out.kodaira = "III*";
      break;
    }
    // Step 10.
    if (vp(C.a6, P) < 6) {
      out.tamagawa = 1;
      out.kodaira = "II*";
      break;
    }
    // Step 11: not minimal.
    w.scale(pr);
  }
  out.minimal = w.C;
  out.change = w.total;
  return out;
}

ReductionKind reduction_type(const WeierstrassCurve& E, const Int& P) {
  if (P == 2 || P == 3) return tate_algorithm(E, P).kind;
  // p >= 5: minimal at p iff not (v(c4) >= 4 and v(c6) >= 6 and v(D) >= 12),
  // after making the model p-integral.
  const u64 p = P.get_ui();
  auto inv = invariants(E);
  Rat c4 = inv.c4, c6 = inv.c6, D = inv.disc;
  // Normalise to v(c4), v(c6) >= 0 then strip p^12 from D while allowed.
  while (vp(c4, P) < 0 || vp(c6, P) < 0) {
    c4 *= pow(Rat(P), 4);
    c6 *= pow(Rat(P), 6);
    D *= pow(Rat(P), 12);
  }
  while (vp(c4, P) >= 4 && vp(c6, P) >= 6 && vp(D, P) >= 12) {
    c4 /= pow(Rat(P), 4);
    c6 /= pow(Rat(P), 6);
    D /= pow(Rat(P), 12);
  }
  if (vp(D, P) == 0) return ReductionKind::good;
  if (vp(c4, P) > 0) return ReductionKind::additive;
  // Node: with the model y^2 = x^3 - 27 c4 x - 54 c6 the singular point is
  // (x0, 0) with x0 the double root; tangent slopes satisfy T^2 = 3 x0.
  ModP C4(c4, p), C6(c6, p);
  // Double root of x^3 - 27 c4 x - 54 c6: x0 = -3 c6 / c4.
  ModP x0 = ModP(0, p) - ModP(3, p) * C6 / C4;
  ModP slope2 = ModP(3, p) * x0;
  int l = legendre(Int(static_cast<unsigned long>(slope2.value())), P);
  return l == 1 ? ReductionKind::multiplicative_split : ReductionKind::multiplicative_nonsplit;
}

WeierstrassCurve minimal_model(const WeierstrassCurve& E, const Int& p) { return tate_algorithm(E, p).minimal; }

GlobalMinimal global_minimal_model(const WeierstrassCurve& E0) {
  auto [E, D] = integral_model(E0);
  auto inv = invariants(E);
  Int disc = inv.disc.get_num();
  Int u = 1;
  for (const Int& p : prime_divisors(disc)) {
    auto rd = tate_algorithm(E, p);
    int k = (valuation(disc, p) - rd.v_delta) / 12;
    u *= pow(p, static_cast<unsigned long>(k));
  }
  Rat c4 = inv.c4 / pow(Rat(u), 4), c6 = inv.c6 / pow(Rat(u), 6);
  if (c4.get_den() != 1 || c6.get_den() != 1) throw std::logic_error("global_minimal_model: non-integral invariants");
  Int C4 = c4.get_num(), C6 = c6.get_num();
  // Kraus: recover integral a-invariants with a1, a3 in {0,1}, a2 in {-1,0,1}.
  Int first = mod(-C6, Int(12));
  if (first > 6) first -= 12;
  std::vector<Int> choices{first};
  for (long b = -5; b <= 6; ++b)
    if (Int(b) != first) choices.push_back(Int(b));
  for (const Int& b2 : choices) {
    Int n4 = b2 * b2 - C4;
    if (!mpz_divisible_ui_p(n4.get_mpz_t(), 24)) continue;
    Int b4 = n4 / 24;
    Int n6 = -b2 * b2 * b2 + 36 * b2 * b4 - C6;
    if (!mpz_divisible_ui_p(n6.get_mpz_t(), 216)) continue;
    Int b6 = n6 / 216;
    Int a1 = mod(b2, Int(2)), a3 = mod(b6, Int(2));
    Int t2 = b2 - a1, t4 = b4 - a1 * a3, t6 = b6 - a3;
    if (!mpz_divisible_ui_p(t2.get_mpz_t(), 4) || !mpz_divisible_ui_p(t4.get_mpz_t(), 2) ||
        !mpz_divisible_ui_p(t6.get_mpz_t(), 4))
      continue;
    WeierstrassCurve M{Rat(a1), Rat(t2 / 4), Rat(a3), Rat(t4 / 2), Rat(t6 / 4), E0.label};
    auto mi = invariants(M);
    if (mi.c4 != c4 || mi.c6 != c6) continue;
    // Change from the input model: u_total relates E0 to M.
    Rat U = Rat(u) / Rat(D);
    ModelChange ch;
    ch.u = U;
    ch.s = (U * M.a1 - E0.a1) / 2;
    ch.r = (U * U * M.a2 - E0.a2 + ch.s * E0.a1 + ch.s * ch.s) / 3;
    ch.t = (U * U * U * M.a3 - E0.a3 - ch.r * E0.a1) / 2;
    if (!(apply_change(E0, ch) == M)) continue;
    return {M, ch};
  }
  throw std::logic_error("global_minimal_model: Kraus reconstruction failed");
}

std::vector<Int> bad_primes(const WeierstrassCurve& E) {
  auto M = global_minimal_model(E).curve;
  return prime_divisors(discriminant(M).get_num());
}

std::vector<ReductionData> local_data(const WeierstrassCurve& E) {
  auto M = global_minimal_model(E).curve;
  std::vector<ReductionData> out;
  for (const Int& p : prime_divisors(discriminant(M).get_num())) out.push_back(tate_algorithm(M, p));
  return out;
}

Int tamagawa_product(const WeierstrassCurve& E) {
  Int c = 1;
  for (const auto& d : local_data(E)) c *= d.tamagawa;
  return c;
}

}  // namespace hasse
