#include "hasse/arith.hpp"

#include <algorithm>
#include <map>

namespace hasse {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

bool fits_u64(const Int& n) { return mpz_sizeinbase(n.get_mpz_t(), 2) <= 64; }

u64 to_u64(const Int& n) {
  Int a = abs(n);
  u64 lo = mpz_getlimbn(a.get_mpz_t(), 0);
  static_assert(sizeof(mp_limb_t) == 8);
  return lo;
}

Int from_u64(u64 v) {
  Int r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return r;
}

constexpr unsigned kTrialBound = 1u << 16;

const std::vector<unsigned>& small_primes() {
  static const std::vector<unsigned> primes = [] {
    std::vector<bool> composite(kTrialBound + 1, false);
    std::vector<unsigned> out;
    for (unsigned i = 2; i <= kTrialBound; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (unsigned long j = static_cast<unsigned long>(i) * i; j <= kTrialBound; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

// Brent's variant of Pollard rho; returns a nontrivial factor or 0.
Int pollard_rho(const Int& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1; c < 64; ++c) {
    Int y = 2, x, q = 1, g = 1, ys;
    unsigned long r = 1;
    const unsigned long m = 128;
    auto f = [&](const Int& v) {
      Int t = v * v + c;
      mpz_mod(t.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
      return t;
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          Int d = abs(x - y);
          q = q * d;
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      } while (k < r && g == 1);
      r *= 2;
      if (r > (1ul << 26)) break;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        Int d = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n && g != 1) return g;
  }
  return 0;
}

void factor_into(const Int& n, std::map<Int, int>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out[n] += 1;
    return;
  }
  if (auto r = exact_sqrt(n)) {
    std::map<Int, int> sub;
    factor_into(*r, sub);
    for (auto& [p, e] : sub) out[p] += 2 * e;
    return;
  }
  Int d = pollard_rho(n);
  if (d == 0) throw FactorizationError("cannot factor " + n.get_str());
  factor_into(d, out);
  factor_into(Int(n / d), out);
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set is deterministic for all n < 3.3 * 10^24.
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

bool is_prime(const Int& n) {
  if (fits_u64(n)) return is_prime_u64(to_u64(n));
  Int a = abs(n);
  // 64 Miller-Rabin rounds on top of BPSW: error below 4^-64.
  return mpz_probab_prime_p(a.get_mpz_t(), 64) != 0;
}

int legendre(const Int& a, const Int& p) {
  if (p <= 2 || !is_prime(p)) throw ArithmeticError("legendre: modulus is not an odd prime");
  return mpz_legendre(a.get_mpz_t(), p.get_mpz_t());
}

std::optional<std::uint64_t> sqrt_mod_u64(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  if (p == 2) return a;
  if (powmod(a, (p - 1) / 2, p) != 1) return std::nullopt;
  if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
  u64 q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  u64 z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  u64 m = static_cast<u64>(s), c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    u64 i = 0, t2 = t;
    while (t2 != 1) {
      t2 = mulmod(t2, t2, p);
      ++i;
    }
    u64 b = c;
    for (u64 j = 0; j + 1 < m - i; ++j) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

std::optional<Int> sqrt_mod(const Int& a, const Int& p) {
  if (fits_u64(p)) {
    Int am = mod(a, p);
    auto r = sqrt_mod_u64(to_u64(am), to_u64(p));
    if (!r) return std::nullopt;
    return from_u64(*r);
  }
  Int am = mod(a, p);
  if (am == 0) return Int(0);
  if (mpz_legendre(am.get_mpz_t(), p.get_mpz_t()) != 1) return std::nullopt;
  auto pw = [&](const Int& b, const Int& e) {
    Int r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    return r;
  };
  if (mod(p, 4) == 3) return pw(am, Int((p + 1) / 4));
  Int q = p - 1;
  unsigned long s = mpz_scan1(q.get_mpz_t(), 0);
  q >>= s;
  Int z = 2;
  while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;
  unsigned long m = s;
  Int c = pw(z, q), t = pw(am, q), r = pw(am, Int((q + 1) / 2));
  while (t != 1) {
    unsigned long i = 0;
    Int t2 = t;
    while (t2 != 1) {
      t2 = mod(t2 * t2, p);
      ++i;
    }
    Int b = c;
    for (unsigned long j = 0; j + 1 < m - i; ++j) b = mod(b * b, p);
    m = i;
    c = mod(b * b, p);
    t = mod(t * c, p);
    r = mod(r * b, p);
  }
  return r;
}

int valuation(const Int& x, const Int& p) {
  if (x == 0) throw ArithmeticError("valuation of zero");
  Int rest;
  return static_cast<int>(mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()));
}

int valuation(const Rat& x, const Int& p) {
  if (x == 0) throw ArithmeticError("valuation of zero");
  return valuation(Int(x.get_num()), p) - valuation(Int(x.get_den()), p);
}

Int least_nonresidue(const Int& p) {
  Int u = 2;
  while (legendre(u, p) != -1) ++u;
  return u;
}

Factorization factor(const Int& n, std::span<const Int> hints) {
  if (n == 0) throw ArithmeticError("factor: zero");
  Int m = abs(n);
  std::map<Int, int> out;
  auto strip = [&](const Int& p) {
    if (p < 2) return;
    Int rest;
    auto e = mpz_remove(rest.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
    if (e > 0) {
      out[p] += static_cast<int>(e);
      m = rest;
    }
  };
  for (const auto& h : hints) {
    Int a = abs(h);
    if (a > 1 && is_prime(a)) strip(a);
  }
  for (unsigned p : small_primes()) {
    if (m == 1) break;
    if (Int(p) * p > m) break;
    if (mpz_divisible_ui_p(m.get_mpz_t(), p)) strip(Int(p));
  }
  if (m > 1) factor_into(m, out);
  return {out.begin(), out.end()};
}

std::vector<Int> prime_divisors(const Int& n, std::span<const Int> hints) {
  std::vector<Int> out;
  for (auto& [p, e] : factor(n, hints)) out.push_back(p);
  return out;
}

SquareClass operator*(const SquareClass& a, const SquareClass& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.rep.get_mpz_t(), b.rep.get_mpz_t());
  return SquareClass{Int((a.rep / g) * (b.rep / g))};
}

SquareClass squarefree_part(const Int& n, std::span<const Int> hints) {
  if (n == 0) throw ArithmeticError("squarefree_part: zero");
  Int s = sgn(n);
  for (auto& [p, e] : factor(n, hints))
    if (e % 2) s *= p;
  return SquareClass{s};
}

SquareClass square_class(const Rat& x, std::span<const Int> hints) {
  return squarefree_part(Int(x.get_num() * x.get_den()), hints);
}

Int cubefree_part(const Int& n, std::span<const Int> hints) {
  if (n == 0) throw ArithmeticError("cubefree_part: zero");
  Int c = sgn(n);
  for (auto& [p, e] : factor(n, hints))
    for (int i = 0; i < e % 3; ++i) c *= p;
  return c;
}

LocalSquareClass local_square_class(const Rat& x, const Int& p) {
  if (x == 0) throw ArithmeticError("local_square_class: zero");
  if (p == 0) return {Int(0), Int(sgn(x))};
  int v = valuation(x, p);
  Int num = x.get_num(), den = x.get_den();
  Int rest;
  mpz_remove(num.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t());
  mpz_remove(den.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
  Int unit = num * den;  // same square class as num/den
  Int rep = (v % 2 != 0) ? p : Int(1);
  if (p == 2) {
    Int r8 = mod(unit, 8);
    Int u = r8 == 1 ? 1 : r8 == 3 ? -5 : r8 == 5 ? 5 : -1;
    return {p, Int(rep * u)};
  }
  if (legendre(unit, p) == -1) rep *= least_nonresidue(p);
  return {p, rep};
}

bool is_local_square(const Rat& x, const Int& p) {
  if (x == 0) return false;
  return local_square_class(x, p).rep == 1;
}

std::optional<Int> exact_sqrt(const Int& n) {
  if (n < 0) return std::nullopt;
  if (!mpz_perfect_square_p(n.get_mpz_t())) return std::nullopt;
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

std::optional<Int> exact_cbrt(const Int& n) {
  Int r;
  if (!mpz_root(r.get_mpz_t(), n.get_mpz_t(), 3)) return std::nullopt;
  return r;
}

std::optional<Rat> exact_sqrt(const Rat& x) {
  auto a = exact_sqrt(Int(x.get_num()));
  auto b = exact_sqrt(Int(x.get_den()));
  if (!a || !b) return std::nullopt;
  return Rat(*a, *b);
}

std::optional<Rat> exact_cbrt(const Rat& x) {
  auto a = exact_cbrt(Int(x.get_num()));
  auto b = exact_cbrt(Int(x.get_den()));
  if (!a || !b) return std::nullopt;
  return Rat(*a, *b);
}

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int mod(const Int& a, const Int& m) {
  Int r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int inv_mod(const Int& a, const Int& m) {
  Int r;
  if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()))
    throw ArithmeticError("inv_mod: not invertible");
  return r;
}

Int pow(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Rat pow(const Rat& base, long e) {
  if (e < 0) {
    if (base == 0) throw ArithmeticError("pow: zero to negative power");
    return pow(Rat(1) / base, -e);
  }
  Rat r(pow(Int(base.get_num()), static_cast<unsigned long>(e)),
        pow(Int(base.get_den()), static_cast<unsigned long>(e)));
  r.canonicalize();
  return r;
}

std::string to_string(const Int& x) { return x.get_str(); }

std::string to_string(const Rat& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Rat parse_rational(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("not a rational number: " + s);
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

}  // namespace hasse
