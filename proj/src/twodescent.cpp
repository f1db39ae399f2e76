#include "hasse/twodescent.hpp"

#include <algorithm>

namespace hasse {

namespace {

// Coefficients of f(x0 + y) in y.
IntPoly taylor_shift(IntPoly c, const Int& x0) {
  const size_t n = c.size();
  for (size_t i = 0; i + 1 < n; ++i)
    for (size_t j = n - 1; j-- > i;) c[j] += x0 * c[j + 1];
  return c;
}

int vp_or(const Int& x, const Int& p, int infinite) { return x == 0 ? infinite : valuation(x, p); }

struct DiskSearch {
  const IntPoly& f;
  const Int& p;
  int margin;
  int depth_bound;
  long nodes = 0;
  int max_depth = 0;

  // Returns x with f(x) a p-adic square (or zero) on the disk x0 + p^k0 Z_p.
  // Level by level, so a disk around a root cannot starve its siblings.
  std::optional<Int> run(const Int& x0, int k0, const Int& pk0) {
    std::vector<Int> level{x0};
    Int pk = pk0;
    for (int k = k0;; ++k) {
      max_depth = std::max(max_depth, k);
      std::vector<Int> open;
      for (const Int& c : level) {
        ++nodes;
        IntPoly T = taylor_shift(f, c);
        Int v = T.empty() ? Int(0) : T[0];
        if (v == 0 || is_local_square(Rat(v), p)) return c;
        int v0 = valuation(v, p);
        constexpr int kInf = 1 << 28;
        int m = kInf;
        for (size_t j = 1; j < T.size(); ++j) m = std::min(m, vp_or(T[j], p, kInf) + static_cast<int>(j) * k);
        if (m < v0 + margin) open.push_back(c);  // otherwise f / f(c) is a unit square on the disk
      }
      if (open.empty()) return std::nullopt;
      if (k >= depth_bound)
        throw Inconclusive("twodescent", "disk search at p = " + p.get_str() + " exceeded depth " +
                                             std::to_string(depth_bound));
      level.clear();
      for (const Int& c : open)
        for (Int t = 0; t < p; ++t) level.push_back(c + t * pk);
      pk *= p;
    }
  }
};

bool real_solvable(const QuarticTorsor& T, std::optional<std::pair<Int, Int>>& point) {
  const Int& d = T.d.rep;
  if (d > 0) {
    point = std::make_pair(Int(1), Int(0));
    return true;
  }
  // d < 0: need g(x, 1) <= 0, i.e. q(t) = d^2 t^2 + a d t + b <= 0 for some t >= 0.
  if (T.b <= 0) {
    point = std::make_pair(Int(0), Int(1));
    return true;
  }
  Rat vertex = Rat(-T.a, 2 * d);
  vertex.canonicalize();
  if (vertex > 0 && T.a * T.a - 4 * T.b >= 0) {
    // q(vertex) <= 0 at a positive t; the real point x = sqrt(t) has no
    // rational witness, so none is recorded and replay recomputes.
    point = std::nullopt;
    return true;
  }
  return false;
}

}  // namespace

IntPoly QuarticTorsor::chart_z() const {
  const Int& d0 = d.rep;
  return {Int(d0 * b), Int(0), Int(a * d0 * d0), Int(0), Int(d0 * d0 * d0)};
}

IntPoly QuarticTorsor::chart_u() const {
  const Int& d0 = d.rep;
  return {Int(d0 * d0 * d0), Int(0), Int(a * d0 * d0), Int(0), Int(d0 * b)};
}

Int QuarticTorsor::eval(const Int& u, const Int& z) const {
  const Int& d0 = d.rep;
  Int u2 = u * u, z2 = z * z;
  return d0 * d0 * u2 * u2 + a * d0 * u2 * z2 + b * z2 * z2;
}

SquareClass alpha_image_of_zero(const Int& b) { return squarefree_part(b); }

std::vector<SquareClass> candidate_classes(const Int& b, std::span<const Int> hints) {
  if (b == 0) throw ArithmeticError("candidate_classes: b = 0");
  auto primes = prime_divisors(b, hints);
  std::vector<SquareClass> out;
  const size_t n = primes.size();
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
    Int d = 1;
    for (size_t i = 0; i < n; ++i)
      if (mask & (1ul << i)) d *= primes[i];
    out.push_back(SquareClass{d});
    out.push_back(SquareClass{-d});
  }
  std::sort(out.begin(), out.end());
  return out;
}

LocalCertificate locally_solvable_quartic(const QuarticTorsor& T, const Int& p) {
  LocalCertificate c;
  c.place = p;
  if (p == 0) {
    c.solvable = real_solvable(T, c.point);
    return c;
  }
  if (!is_prime(p)) throw ArithmeticError("locally_solvable_quartic: p must be prime");
  // disc(A x^4 + B x^2 + C) = 16 A C (B^2 - 4AC)^2
  IntPoly fz = T.chart_z();
  Int disc = 16 * fz[4] * fz[0] * (fz[2] * fz[2] - 4 * fz[4] * fz[0]) * (fz[2] * fz[2] - 4 * fz[4] * fz[0]);
  if (disc == 0) throw ArithmeticError("locally_solvable_quartic: singular torsor");
  c.depth_bound = 2 * valuation(disc, p) + 3;
  const int margin = (p == 2) ? 3 : 1;

  DiskSearch sz{fz, p, margin, c.depth_bound};
  if (auto x = sz.run(Int(0), 0, Int(1))) {
    c.solvable = true;
    c.point = std::make_pair(*x, Int(1));
  }
  c.nodes = sz.nodes;
  c.max_depth = sz.max_depth;
  if (c.solvable) return c;

  IntPoly fu = T.chart_u();
  DiskSearch su{fu, p, margin, c.depth_bound};
  if (auto x = su.run(Int(0), 1, p)) {
    c.solvable = true;
    c.point = std::make_pair(Int(1), *x);
  }
  c.nodes += su.nodes;
  c.max_depth = std::max(c.max_depth, su.max_depth);
  return c;
}

bool replay(const QuarticTorsor& T, const LocalCertificate& c) {
  if (c.solvable && c.point) {
    auto [u, z] = *c.point;
    if (u == 0 && z == 0) return false;
    Int val = T.d.rep * T.eval(u, z);
    if (c.place == 0) return val >= 0;
    return val == 0 || is_local_square(Rat(val), c.place);
  }
  LocalCertificate again = locally_solvable_quartic(T, c.place);
  return again.solvable == c.solvable;
}

SelmerPhiResult selmer_phi(const WeierstrassCurve& E, Direction dir) {
  if (E.a1 != 0 || E.a3 != 0 || E.a6 != 0) throw ArithmeticError("selmer_phi: need y^2 = x^3 + a x^2 + b x");
  SelmerPhiResult out;
  out.E = E;
  out.Eprime = phi_codomain(E.a2, E.a4);
  out.direction = dir;
  Rat a = dir == Direction::forward ? out.Eprime.a2 : E.a2;
  Rat b = dir == Direction::forward ? out.Eprime.a4 : E.a4;
  // Integral model x -> D^2 x keeps square classes.
  Int D;
  mpz_lcm(D.get_mpz_t(), a.get_den_mpz_t(), b.get_den_mpz_t());
  Rat A = a * Rat(D * D), B = b * Rat(D * D * D * D);
  out.torsor_a = A.get_num();
  out.torsor_b = B.get_num();

  Int bad = 2 * out.torsor_b * (out.torsor_a * out.torsor_a - 4 * out.torsor_b);
  std::vector<Int> primes = prime_divisors(bad);
  // 2 and 3 first, then ascending.
  std::stable_partition(primes.begin(), primes.end(), [](const Int& q) { return q == 2 || q == 3; });
  out.places = primes;
  out.places.push_back(Int(0));

  for (const SquareClass& d : candidate_classes(out.torsor_b, primes)) {
    QuarticTorsor T{d, out.torsor_a, out.torsor_b};
    bool ok = true;
    std::vector<LocalCertificate> certs;
    for (const Int& place : out.places) {
      certs.push_back(locally_solvable_quartic(T, place));
      if (!certs.back().solvable) {
        ok = false;
        break;
      }
    }
    out.certificates[d.rep] = std::move(certs);
    if (ok) out.selmer.push_back(d);
  }
  return out;
}

int rank_upper_bound(std::size_t sel_fwd, std::size_t sel_dual) {
  std::size_t prod = sel_fwd * sel_dual;
  if (prod < 4 || prod % 4 != 0) throw ArithmeticError("rank_upper_bound: sizes must be powers of 2 with product >= 4");
  prod /= 4;
  int r = 0;
  while (prod > 1) {
    if (prod % 2) throw ArithmeticError("rank_upper_bound: sizes must be powers of 2");
    prod /= 2;
    ++r;
  }
  return r;
}

}  // namespace hasse
