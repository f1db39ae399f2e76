#include "hasse/poly.hpp"

#include <algorithm>
#include <cmath>

namespace hasse {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulm(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }
u64 addm(u64 a, u64 b, u64 p) { return (a + b) % p; }
u64 subm(u64 a, u64 b, u64 p) { return (a + p - b) % p; }

u64 powm(u64 b, u64 e, u64 p) {
  u64 r = 1 % p;
  while (e) {
    if (e & 1) r = mulm(r, b, p);
    b = mulm(b, b, p);
    e >>= 1;
  }
  return r;
}

u64 invm(u64 a, u64 p) { return powm(a, p - 2, p); }

ModPoly mod_mul(const ModPoly& f, const ModPoly& g, u64 p) {
  if (f.empty() || g.empty()) return {};
  ModPoly r(f.size() + g.size() - 1, 0);
  for (size_t i = 0; i < f.size(); ++i)
    for (size_t j = 0; j < g.size(); ++j) r[i + j] = addm(r[i + j], mulm(f[i], g[j], p), p);
  trim(r);
  return r;
}

// Remainder of f modulo monic-izable g.
ModPoly mod_rem(ModPoly f, const ModPoly& g, u64 p) {
  const size_t dg = g.size() - 1;
  const u64 inv_lead = invm(g.back(), p);
  while (!f.empty() && f.size() - 1 >= dg) {
    u64 c = mulm(f.back(), inv_lead, p);
    size_t shift = f.size() - 1 - dg;
    for (size_t i = 0; i <= dg; ++i) f[shift + i] = subm(f[shift + i], mulm(c, g[i], p), p);
    trim(f);
  }
  return f;
}

ModPoly mod_div(ModPoly f, const ModPoly& g, u64 p) {
  const size_t dg = g.size() - 1;
  const u64 inv_lead = invm(g.back(), p);
  ModPoly q(f.size() >= g.size() ? f.size() - dg : 0, 0);
  while (!f.empty() && f.size() - 1 >= dg) {
    u64 c = mulm(f.back(), inv_lead, p);
    size_t shift = f.size() - 1 - dg;
    q[shift] = c;
    for (size_t i = 0; i <= dg; ++i) f[shift + i] = subm(f[shift + i], mulm(c, g[i], p), p);
    trim(f);
  }
  trim(q);
  return q;
}

// base^e mod (f, p)
ModPoly mod_powmod(ModPoly base, u64 e, const ModPoly& f, u64 p) {
  ModPoly r{1};
  base = mod_rem(base, f, p);
  while (e) {
    if (e & 1) r = mod_rem(mod_mul(r, base, p), f, p);
    base = mod_rem(mod_mul(base, base, p), f, p);
    e >>= 1;
  }
  return r;
}

void split_roots(const ModPoly& g, u64 p, std::vector<u64>& out, u64& seed) {
  if (g.size() <= 1) return;
  if (g.size() == 2) {
    out.push_back(mulm(p - g[0] % p, invm(g[1], p), p));
    return;
  }
  while (true) {
    // (x + a)^((p-1)/2) - 1 separates residues from non-residues of x + a.
    u64 a = seed++ % p;
    ModPoly h = mod_powmod(ModPoly{a, 1}, (p - 1) / 2, g, p);
    if (h.empty()) h = {p - 1};
    else h[0] = subm(h[0], 1, p);
    trim(h);
    ModPoly d = gcd(g, h, p);
    if (d.size() > 1 && d.size() < g.size()) {
      split_roots(d, p, out, seed);
      split_roots(mod_div(g, d, p), p, out, seed);
      return;
    }
  }
}

Int cauchy_root_bound(const IntPoly& f) {
  // 1 + max |a_i| / |a_n|, rounded up.
  Int lead = abs(f.back());
  Int best = 0;
  for (size_t i = 0; i + 1 < f.size(); ++i) best = std::max<Int>(best, abs(f[i]));
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), best.get_mpz_t(), lead.get_mpz_t());
  return q + 1;
}

std::optional<Rat> rational_reconstruct(const Int& r, const Int& m, const Int& num_bound,
                                        const Int& den_bound) {
  Int r0 = m, r1 = mod(r, m), t0 = 0, t1 = 1;
  while (r1 > num_bound) {
    Int q = r0 / r1;
    Int tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  Int a = r1, b = t1;
  if (b < 0) {
    a = -a;
    b = -b;
  }
  if (b == 0 || b > den_bound) return std::nullopt;
  if (mod(a - b * r, m) != 0) return std::nullopt;
  Rat out(a, b);
  out.canonicalize();
  return out;
}

}  // namespace

void trim(IntPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const IntPoly& f) { return static_cast<int>(f.size()) - 1; }

Int eval(const IntPoly& f, const Int& x) {
  Int r = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) r = r * x + *it;
  return r;
}

Rat eval(const IntPoly& f, const Rat& x) {
  Rat r = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) r = r * x + Rat(*it);
  return r;
}

IntPoly derivative(const IntPoly& f) {
  IntPoly d;
  for (size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<unsigned long>(i));
  trim(d);
  return d;
}

IntPoly operator+(const IntPoly& f, const IntPoly& g) {
  IntPoly r(std::max(f.size(), g.size()), 0);
  for (size_t i = 0; i < f.size(); ++i) r[i] += f[i];
  for (size_t i = 0; i < g.size(); ++i) r[i] += g[i];
  trim(r);
  return r;
}

IntPoly operator-(const IntPoly& f, const IntPoly& g) {
  IntPoly r(std::max(f.size(), g.size()), 0);
  for (size_t i = 0; i < f.size(); ++i) r[i] += f[i];
  for (size_t i = 0; i < g.size(); ++i) r[i] -= g[i];
  trim(r);
  return r;
}

IntPoly operator*(const IntPoly& f, const IntPoly& g) {
  if (f.empty() || g.empty()) return {};
  IntPoly r(f.size() + g.size() - 1, 0);
  for (size_t i = 0; i < f.size(); ++i)
    for (size_t j = 0; j < g.size(); ++j) r[i + j] += f[i] * g[j];
  trim(r);
  return r;
}

IntPoly operator*(const Int& c, const IntPoly& f) {
  IntPoly r = f;
  for (auto& a : r) a *= c;
  trim(r);
  return r;
}

Int content(const IntPoly& f) {
  Int g = 0;
  for (const auto& a : f) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
  return g;
}

IntPoly primitive_part(const IntPoly& f) {
  if (f.empty()) return {};
  Int c = content(f);
  if (f.back() < 0) c = -c;
  IntPoly r = f;
  for (auto& a : r) mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), c.get_mpz_t());
  return r;
}

namespace {

// Pseudo-remainder of f by g.
IntPoly pseudo_rem(IntPoly f, const IntPoly& g) {
  const size_t dg = g.size() - 1;
  const Int& lead = g.back();
  while (!f.empty() && f.size() - 1 >= dg) {
    Int c = f.back();
    size_t shift = f.size() - 1 - dg;
    for (auto& a : f) a *= lead;
    for (size_t i = 0; i <= dg; ++i) f[shift + i] -= c * g[i];
    trim(f);
    f = primitive_part(f);
  }
  return f;
}

}  // namespace

IntPoly gcd(const IntPoly& f, const IntPoly& g) {
  IntPoly a = primitive_part(f), b = primitive_part(g);
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    IntPoly r = pseudo_rem(a, b);
    a = std::move(b);
    b = primitive_part(r);
  }
  return primitive_part(a);
}

IntPoly exact_quotient(const IntPoly& f, const IntPoly& g) {
  if (g.empty()) throw ArithmeticError("exact_quotient: division by zero polynomial");
  IntPoly rem = f;
  trim(rem);
  if (rem.size() < g.size()) {
    if (rem.empty()) return {};
    throw ArithmeticError("exact_quotient: not divisible");
  }
  IntPoly q(rem.size() - g.size() + 1, 0);
  const size_t dg = g.size() - 1;
  while (!rem.empty() && rem.size() - 1 >= dg) {
    Int c = rem.back();
    if (!mpz_divisible_p(c.get_mpz_t(), g.back().get_mpz_t()))
      throw ArithmeticError("exact_quotient: not divisible");
    c /= g.back();
    size_t shift = rem.size() - 1 - dg;
    q[shift] = c;
    for (size_t i = 0; i <= dg; ++i) rem[shift + i] -= c * g[i];
    trim(rem);
  }
  if (!rem.empty()) throw ArithmeticError("exact_quotient: not divisible");
  trim(q);
  return q;
}

IntPoly squarefree_kernel(const IntPoly& f) {
  IntPoly pf = primitive_part(f);
  if (pf.size() <= 2) return pf;
  IntPoly g = gcd(pf, derivative(pf));
  if (g.size() <= 1) return pf;
  return primitive_part(exact_quotient(pf, g));
}

std::vector<Rat> rational_roots(const IntPoly& input) {
  IntPoly f = input;
  trim(f);
  if (f.empty()) throw ArithmeticError("rational_roots: zero polynomial");
  std::vector<Rat> roots;
  size_t zeros = 0;
  while (zeros < f.size() && f[zeros] == 0) ++zeros;
  if (zeros > 0) {
    roots.emplace_back(0);
    f.erase(f.begin(), f.begin() + static_cast<long>(zeros));
  }
  if (f.size() <= 1) return roots;
  f = squarefree_kernel(f);
  if (f.size() == 2) {
    Rat r(-f[0], f[1]);
    r.canonicalize();
    roots.push_back(r);
    std::sort(roots.begin(), roots.end());
    return roots;
  }

  const Int den_bound = abs(f.back());
  const Int num_bound = cauchy_root_bound(f) * den_bound;
  const Int need = 2 * num_bound * den_bound + 1;

  for (u64 ell = 101;; ell += 2) {
    if (!is_prime_u64(ell)) continue;
    if (mpz_divisible_ui_p(f.back().get_mpz_t(), ell)) continue;
    ModPoly fm = reduce(f, ell);
    ModPoly dfm = reduce(derivative(f), ell);
    if (gcd(fm, dfm, ell).size() != 1) continue;  // not squarefree mod ell

    const IntPoly df = derivative(f);
    const Int ell_z = static_cast<unsigned long>(ell);
    for (u64 r0 : roots_mod_p(fm, ell)) {
      Int r = static_cast<unsigned long>(r0);
      Int m = ell_z;
      while (m < need) {
        Int m2 = m * m;
        Int fr = mod(eval(f, r), m2);
        Int dr = mod(eval(df, r), m2);
        r = mod(r - fr * inv_mod(dr, m2), m2);
        m = m2;
      }
      if (auto q = rational_reconstruct(r, m, num_bound, den_bound)) {
        if (eval(f, *q) == 0) roots.push_back(*q);
      }
    }
    break;
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

std::vector<Int> integer_roots(const IntPoly& f) {
  std::vector<Int> out;
  for (const auto& r : rational_roots(f))
    if (r.get_den() == 1) out.push_back(r.get_num());
  return out;
}

ModPoly reduce(const IntPoly& f, std::uint64_t p) {
  ModPoly r;
  r.reserve(f.size());
  Int pz = static_cast<unsigned long>(p);
  for (const auto& a : f) r.push_back(mod(a, pz).get_ui());
  trim(r);
  return r;
}

void trim(ModPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

std::uint64_t eval(const ModPoly& f, std::uint64_t x, std::uint64_t p) {
  u64 r = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) r = addm(mulm(r, x, p), *it, p);
  return r;
}

ModPoly gcd(ModPoly f, ModPoly g, std::uint64_t p) {
  trim(f);
  trim(g);
  while (!g.empty()) {
    ModPoly r = mod_rem(f, g, p);
    f = std::move(g);
    g = std::move(r);
  }
  if (!f.empty()) {
    u64 inv = invm(f.back(), p);
    for (auto& a : f) a = mulm(a, inv, p);
  }
  return f;
}

std::vector<std::uint64_t> roots_mod_p(const ModPoly& input, std::uint64_t p) {
  ModPoly f = input;
  trim(f);
  if (f.empty()) throw ArithmeticError("roots_mod_p: zero polynomial");
  std::vector<u64> out;
  if (f.size() == 1) return out;
  if (p < 64 || p <= 4 * f.size()) {
    for (u64 x = 0; x < p; ++x)
      if (eval(f, x, p) == 0) out.push_back(x);
    return out;
  }
  // gcd with x^p - x keeps exactly the split linear part.
  ModPoly xp = mod_powmod(ModPoly{0, 1}, p, f, p);
  xp.resize(std::max<size_t>(xp.size(), 2), 0);
  xp[1] = subm(xp[1], 1, p);
  trim(xp);
  ModPoly g = xp.empty() ? f : gcd(f, xp, p);
  if (g.size() > 1) {
    if (g.size() > 2 && g[0] == 0) {
      // x divides g: peel it off so the splitting below never sees a = -0 degeneracy.
      out.push_back(0);
      g = mod_div(g, ModPoly{0, 1}, p);
    }
    u64 seed = 1;
    split_roots(g, p, out, seed);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace hasse
