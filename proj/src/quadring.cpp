#include "hasse/quadring.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hasse/poly.hpp"

namespace hasse {

namespace {

void same_field(const QuadElem& a, const QuadElem& b) {
  if (a.d != b.d) throw ArithmeticError("quadratic elements from different fields");
}

bool is_squarefree(const Int& n) {
  for (auto& [p, e] : factor(n))
    if (e > 1) return false;
  return true;
}

// log of a positive big integer.
long double log_abs(const Int& n) {
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log(std::fabs(static_cast<long double>(mant))) + static_cast<long double>(exp) * std::log(2.0L);
}

// log|u + v sqrt d| for integers u, v, computed without cancellation.
long double log_abs_embedding(const Int& u, const Int& v, const Int& d) {
  auto log_sum = [](long double x, long double y) {
    long double hi = std::max(x, y), lo = std::min(x, y);
    return hi + std::log1p(std::exp(lo - hi));
  };
  const long double half_log_d = 0.5L * log_abs(d);
  if (v == 0) return log_abs(u);
  if (u == 0) return log_abs(v) + half_log_d;
  long double lu = log_abs(u), lv = log_abs(v) + half_log_d;
  if (sgn(u) == sgn(v)) return log_sum(lu, lv);
  // |u + v sqrt d| = |N| / |u - v sqrt d| and the latter has no cancellation.
  Int n = u * u - d * v * v;
  return log_abs(n) - log_sum(lu, lv);
}

// Divides a by pi if the quotient is integral.
std::optional<QuadElem> try_divide(const QuadElem& a, const QuadElem& pi) {
  QuadElem q = a / pi;
  if (!q.is_integral()) return std::nullopt;
  return q;
}

int strip_power(QuadElem& a, const QuadElem& pi) {
  int e = 0;
  while (auto q = try_divide(a, pi)) {
    a = *q;
    ++e;
  }
  return e;
}

}  // namespace

QuadElem operator+(const QuadElem& a, const QuadElem& b) {
  same_field(a, b);
  return {a.u + b.u, a.v + b.v, a.d};
}

QuadElem operator-(const QuadElem& a, const QuadElem& b) {
  same_field(a, b);
  return {a.u - b.u, a.v - b.v, a.d};
}

QuadElem operator*(const QuadElem& a, const QuadElem& b) {
  same_field(a, b);
  return {a.u * b.u + Rat(a.d) * a.v * b.v, a.u * b.v + a.v * b.u, a.d};
}

QuadElem operator*(const Rat& c, const QuadElem& a) { return {c * a.u, c * a.v, a.d}; }

QuadElem operator/(const QuadElem& a, const QuadElem& b) {
  same_field(a, b);
  Rat n = norm(b);
  if (n == 0) throw ArithmeticError("division by zero in Q(sqrt d)");
  return (Rat(1) / n) * (a * conj(b));
}

QuadElem pow(const QuadElem& a, long e) {
  if (e < 0) return pow(QuadElem::one(a.d) / a, -e);
  QuadElem r = QuadElem::one(a.d), b = a;
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

QuadElem conj(const QuadElem& a) { return {a.u, -a.v, a.d}; }

Rat norm(const QuadElem& a) { return a.u * a.u - Rat(a.d) * a.v * a.v; }

Rat trace(const QuadElem& a) { return 2 * a.u; }

std::string to_string(const QuadElem& a) {
  std::string s = to_string(a.u);
  if (a.v != 0) {
    s += (a.v > 0 ? "+" : "-");
    Rat av = abs(a.v);
    if (av != 1) s += to_string(av) + "*";
    s += "sqrt(" + a.d.get_str() + ")";
  }
  return s;
}

std::string to_string(SplitKind k) {
  switch (k) {
    case SplitKind::split: return "split";
    case SplitKind::inert: return "inert";
    case SplitKind::ramified: return "ramified";
  }
  return "?";
}

bool has_class_number_one(const Int& d) {
  static const std::set<long> table = {2,  3,  6,  7,  11, 14, 19, 22, 23, 31, 38,
                                       43, 46, 47, 59, 62, 67, 71, 83, 86, 94};
  return d.fits_slong_p() && table.count(d.get_si()) > 0;
}

void require_supported_field(const Int& d) {
  if (d <= 1) throw ArithmeticError("quadratic field needs d > 1");
  if (mod(d, 4) == 1) throw ArithmeticError("d = 1 mod 4 is not supported");
  if (!is_squarefree(d)) throw ArithmeticError("d must be squarefree");
}

PrimeSplitting split_type(const Int& p, const Int& d) {
  require_supported_field(d);
  PrimeSplitting out;
  out.p = p;
  if (mod(d, p) == 0 || p == 2) {
    out.kind = SplitKind::ramified;
  } else {
    out.kind = legendre(d, p) == 1 ? SplitKind::split : SplitKind::inert;
  }
  if (out.kind != SplitKind::inert && has_class_number_one(d)) {
    auto [k, l] = split_prime(p, d);
    out.generator = QuadElem(Rat(k), Rat(l), d);
    out.conjugate_generator = conj(*out.generator);
  }
  return out;
}

std::pair<Int, Int> split_prime(const Int& p, const Int& d) {
  require_supported_field(d);
  if (p != 2 && mod(d, p) != 0 && legendre(d, p) != 1)
    throw ArithmeticError("split_prime: " + p.get_str() + " is inert");
  // A generator balanced against the fundamental unit has
  // |l| <= sqrt(p * eps / d); the search runs a little past that.
  QuadElem eps = fundamental_unit(d);
  long double eps_real = std::exp(log_abs_embedding(Int(eps.u.get_num()), Int(eps.v.get_num()), d));
  long double bound_ld = std::sqrt(p.get_d() * eps_real / d.get_d()) + 2.0L;
  Int bound(static_cast<double>(bound_ld));
  for (Int l = 1; l <= bound; ++l) {
    Int dl2 = d * l * l;
    std::optional<Int> best;
    for (const Int& target : {Int(dl2 - p), Int(dl2 + p)}) {
      if (auto k = exact_sqrt(target)) {
        if (!best || *k < *best) best = *k;
      }
    }
    if (best) return {*best, l};
  }
  throw ArithmeticError("split_prime: no generator found (class number > 1?)");
}

QuadElem fundamental_unit(const Int& d) {
  require_supported_field(d);
  Int a0;
  mpz_sqrt(a0.get_mpz_t(), d.get_mpz_t());
  Int m = 0, q = 1, a = a0;
  Int h_prev = 1, h = a0, k_prev = 0, k = 1;
  while (true) {
    Int n = h * h - d * k * k;
    if (n == 1 || n == -1) return QuadElem(Rat(h), Rat(k), d);
    m = q * a - m;
    q = (d - m * m) / q;
    a = (a0 + m) / q;
    Int h_next = a * h + h_prev, k_next = a * k + k_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
}

std::optional<QuadElem> cube_root(const QuadElem& a) {
  if (a.is_zero()) return a;
  // Scale to an integral element; c^3 a has the same cube class.
  Int c;
  mpz_lcm(c.get_mpz_t(), a.u.get_den_mpz_t(), a.v.get_den_mpz_t());
  const Rat c3 = Rat(c * c * c);
  QuadElem ai = c3 * a;
  Int u = ai.u.get_num(), v = ai.v.get_num();
  Int n = u * u - a.d * v * v;
  auto m = exact_cbrt(n);
  if (!m) return std::nullopt;
  // If b^3 = a with conjugate b', T = b + b' solves T^3 - 3mT - 2u = 0.
  IntPoly trace_poly = {Int(-2 * u), Int(-3 * *m), Int(0), Int(1)};
  for (const Int& t : integer_roots(trace_poly)) {
    Rat y2 = Rat(t * t - 4 * *m, 4 * a.d);
    y2.canonicalize();
    auto y = exact_sqrt(y2);
    if (!y) continue;
    for (const Rat& yy : {*y, Rat(-*y)}) {
      QuadElem b(Rat(t, 2), yy, a.d);
      b.u.canonicalize();
      if (b * b * b == ai) return (Rat(1) / Rat(c)) * b;
    }
  }
  return std::nullopt;
}

bool is_cube(const QuadElem& a) { return cube_root(a).has_value(); }

bool same_cube_class(const QuadElem& a, const QuadElem& b) {
  if (a.is_zero() || b.is_zero()) throw ArithmeticError("cube class of zero");
  return is_cube(a * b * b);
}

bool is_cubefree(const QuadElem& a, std::span<const Int> hints) {
  if (a.is_zero() || !a.is_integral()) return false;
  const Int& d = a.d;
  Int n = abs(a.u.get_num() * a.u.get_num() - d * a.v.get_num() * a.v.get_num());
  for (const Int& p : prime_divisors(n, hints)) {
    PrimeSplitting sp = split_type(p, d);
    if (sp.kind == SplitKind::inert) {
      // Only p^3 | a matters; the norm already carries p^2 per factor p.
      Int p3 = p * p * p;
      if (a.u.get_num() % p3 == 0 && a.v.get_num() % p3 == 0) return false;
      continue;
    }
    if (!sp.generator) throw UnsupportedConfiguration("no prime generator for Q(sqrt " + d.get_str() + ")");
    std::vector<QuadElem> primes{*sp.generator};
    if (sp.kind == SplitKind::split) primes.push_back(*sp.conjugate_generator);
    for (const QuadElem& pi : primes) {
      QuadElem rest = a;
      if (strip_power(rest, pi) >= 3) return false;
    }
  }
  return true;
}

QuadElem cubefree_reduce(const QuadElem& input, std::span<const Int> hints) {
  if (input.is_zero()) throw ArithmeticError("cubefree_reduce: zero");
  const Int& d = input.d;
  Int c;
  mpz_lcm(c.get_mpz_t(), input.u.get_den_mpz_t(), input.v.get_den_mpz_t());
  QuadElem a = Rat(c * c * c) * input;

  Int n = a.u.get_num() * a.u.get_num() - d * a.v.get_num() * a.v.get_num();
  for (const Int& p : prime_divisors(n, hints)) {
    PrimeSplitting sp = split_type(p, d);
    if (sp.kind == SplitKind::inert) {
      const Rat p3 = Rat(p * p * p);
      while (true) {
        QuadElem q = (Rat(1) / p3) * a;
        if (!q.is_integral()) break;
        a = q;
      }
      continue;
    }
    if (!sp.generator) throw UnsupportedConfiguration("no prime generator for Q(sqrt " + d.get_str() + ")");
    std::vector<QuadElem> primes{*sp.generator};
    if (sp.kind == SplitKind::split) primes.push_back(*sp.conjugate_generator);
    for (const QuadElem& pi : primes) {
      QuadElem rest = a;
      int e = strip_power(rest, pi);
      a = a / pow(pi, 3 * (e / 3));
    }
  }

  // Balance log|a| - log|a'| into [-3 log eps, 3 log eps) using eps^3.
  QuadElem eps = fundamental_unit(d);
  Int u = a.u.get_num(), v = a.v.get_num();
  long double la = log_abs_embedding(u, v, d);
  long double lc = log_abs_embedding(u, Int(-v), d);
  long double le = log_abs_embedding(Int(eps.u.get_num()), Int(eps.v.get_num()), d);
  long double shift = std::floor((la - lc + 3 * le) / (6 * le));
  long k = static_cast<long>(shift);
  if (k != 0) a = a * pow(eps, -3 * k);
  if (a.u < 0 || (a.u == 0 && a.v < 0)) a = Rat(-1) * a;
  return a;
}

std::vector<QuadElem> CubeClassGroup::elements(std::span<const Int> hints) const {
  std::vector<QuadElem> out{QuadElem::one(d)};
  for (const QuadElem& g : generators) {
    std::vector<QuadElem> next;
    // Keep the first generator varying fastest.
    const QuadElem g2 = g * g;
    std::vector<QuadElem> level0 = out, level1, level2;
    for (const auto& x : out) {
      level1.push_back(cubefree_reduce(x * g, hints));
      level2.push_back(cubefree_reduce(x * g2, hints));
    }
    next = level0;
    next.insert(next.end(), level1.begin(), level1.end());
    next.insert(next.end(), level2.begin(), level2.end());
    out = std::move(next);
  }
  return out;
}

CubeClassGroup s_units_mod_cubes(std::span<const Int> S, const Int& d) {
  require_supported_field(d);
  if (!has_class_number_one(d))
    throw UnsupportedConfiguration("class number of Q(sqrt " + d.get_str() + ") is not known to be 1");
  CubeClassGroup g;
  g.d = d;
  // Units: -1 is a cube, and the fundamental unit has norm +-1, a cube.
  g.generators.push_back(fundamental_unit(d));
  std::vector<Int> primes(S.begin(), S.end());
  for (auto& p : primes) p = abs(p);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (const Int& p : primes) {
    // Inert and (principal) ramified primes cannot occur in a cubefree class
    // with cube norm; a split prime contributes pi^2 * conj(pi).
    if (split_type(p, d).kind != SplitKind::split) continue;
    auto [k, l] = split_prime(p, d);
    QuadElem pi(Rat(k), Rat(l), d);
    g.generators.push_back(pi * pi * conj(pi));
  }
  g.order = pow(Int(3), g.generators.size());
  return g;
}

}  // namespace hasse
