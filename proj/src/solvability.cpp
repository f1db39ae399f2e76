#include "hasse/solvability.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <set>
#include <thread>

#include "hasse/poly.hpp"

namespace hasse {

namespace {

using Form = std::array<Int, 10>;

int third(int i) { return 3 - kExponents[i][0] - kExponents[i][1]; }

Int hom_eval(const Form& f, const Int& W, const Int& Z, const Int& V) {
  Int s = 0;
  for (int i = 0; i < 10; ++i) {
    if (f[i] == 0) continue;
    s += f[i] * pow(W, kExponents[i][0]) * pow(Z, kExponents[i][1]) * pow(V, third(i));
  }
  return s;
}

std::array<Int, 3> hom_grad(const Form& f, const Int& W, const Int& Z, const Int& V) {
  std::array<Int, 3> g{Int(0), Int(0), Int(0)};
  for (int i = 0; i < 10; ++i) {
    if (f[i] == 0) continue;
    int a = kExponents[i][0], b = kExponents[i][1], e = third(i);
    if (a) g[0] += f[i] * a * pow(W, a - 1) * pow(Z, b) * pow(V, e);
    if (b) g[1] += f[i] * b * pow(W, a) * pow(Z, b - 1) * pow(V, e);
    if (e) g[2] += f[i] * e * pow(W, a) * pow(Z, b) * pow(V, e - 1);
  }
  return g;
}

// -1 when the gradient vanishes identically.
int grad_valuation(const std::array<Int, 3>& g, const Int& p) {
  int best = -1;
  for (const auto& x : g) {
    if (x == 0) continue;
    int v = valuation(x, p);
    if (best < 0 || v < best) best = v;
  }
  return best;
}

// Bivariate cubic in chart coordinates: g[i][j] multiplies x^i y^j.
using Bi = std::array<std::array<Int, 4>, 4>;

Bi chart_poly(const Form& f, int chart) {
  Bi g{};
  for (auto& row : g) row.fill(Int(0));
  for (int i = 0; i < 10; ++i) {
    int a = kExponents[i][0], b = kExponents[i][1], e = third(i);
    if (chart == 0) g[a][b] += f[i];
    else if (chart == 1) g[a][e] += f[i];
    else g[b][e] += f[i];
  }
  return g;
}

std::array<Int, 3> chart_point(int chart, const Int& x, const Int& y) {
  if (chart == 0) return {x, y, Int(1)};
  if (chart == 1) return {x, Int(1), y};
  return {Int(1), x, y};
}

const long kBinom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};

Bi taylor(const Bi& g, const Int& x0, const Int& y0) {
  Bi t{};
  for (auto& row : t) row.fill(Int(0));
  std::array<Int, 4> xp{Int(1), x0, x0 * x0, x0 * x0 * x0}, yp{Int(1), y0, y0 * y0, y0 * y0 * y0};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; a + b < 4; ++b) {
      if (g[a][b] == 0) continue;
      for (int i = 0; i <= a; ++i)
        for (int j = 0; j <= b; ++j) t[i][j] += g[a][b] * kBinom[a][i] * kBinom[b][j] * xp[a - i] * yp[b - j];
    }
  return t;
}

std::uint64_t inv_mod_u64(std::uint64_t a, std::uint64_t p) {
  unsigned __int128 r = 1, b = a % p;
  for (std::uint64_t e = p - 2; e; e >>= 1) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
  }
  return static_cast<std::uint64_t>(r);
}

// Zeros over F_p^2 of a bivariate polynomial with coefficients already
// reduced mod p; ascending.
// `visit` returns true to stop.
template <class Visit>
void plane_zeros(const Bi& g, std::uint64_t p, Visit&& visit) {
  std::array<std::array<std::uint64_t, 4>, 4> c{};
  bool any = false;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; i + j < 4; ++j) {
      c[i][j] = g[i][j].get_ui();
      any = any || c[i][j] != 0;
    }
  if (!any) throw ArithmeticError("plane_zeros: zero polynomial");
  auto mulm = [p](std::uint64_t x, std::uint64_t y) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % p);
  };
  ModPoly f(4);
  for (std::uint64_t a = 0; a < p; ++a) {
    for (int j = 0; j < 4; ++j) {
      std::uint64_t s = 0, ap = 1;
      for (int i = 0; i + j < 4; ++i) {
        s = (s + mulm(c[i][j], ap)) % p;
        ap = mulm(ap, a);
      }
      f[j] = s;
    }
    ModPoly q = f;
    trim(q);
    if (q.empty()) {
      for (std::uint64_t b = 0; b < p; ++b)
        if (visit(a, b)) return;
    } else if (q.size() == 2) {
      if (visit(a, mulm(p - q[0], inv_mod_u64(q[1], p)))) return;
    } else if (q.size() > 2) {
      for (auto b : roots_mod_p(q, p))
        if (visit(a, b)) return;
    }
  }
}

struct Node {
  int chart;
  Int x, y;
};

constexpr long kNodeBudget = 4000000;

PlaneCubic as_cubic(const Form& f) {
  PlaneCubic C;
  for (int i = 0; i < 10; ++i) C.c[i] = Rat(f[i]);
  return C;
}

int sign(__int128 x) { return (x > 0) - (x < 0); }

}  // namespace

Form integral_form(const PlaneCubic& C) {
  Int l = 1;
  for (const auto& c : C.c) l = lcm(l, Int(c.get_den()));
  Form f;
  Int g = 0;
  for (int i = 0; i < 10; ++i) {
    f[i] = Int(C.c[i] * Rat(l));
    g = gcd(g, f[i]);
  }
  if (g == 0) throw ArithmeticError("zero cubic");
  for (auto& x : f) x /= g;
  return f;
}

std::vector<Int> bad_primes(const PlaneCubic& C, std::span<const Int> hints) {
  Int d = cubic_discriminant(as_cubic(integral_form(C)));
  if (d == 0) throw ArithmeticError("singular cubic");
  std::set<Int> s{Int(2), Int(3)};
  for (const auto& p : prime_divisors(abs(d), hints)) s.insert(p);
  return {s.begin(), s.end()};
}

CubicCertificate locally_solvable(const PlaneCubic& C, const Int& p) {
  if (p < 2 || !is_prime(p)) throw ArithmeticError("locally_solvable: p must be prime");
  if (p >= (Int(1) << 62)) throw ArithmeticError("locally_solvable: p too large");
  Form f = integral_form(C);
  Int disc = cubic_discriminant(as_cubic(f));
  if (disc == 0) throw ArithmeticError("singular cubic");
  CubicCertificate cert;
  cert.place = p;
  cert.depth_bound = 2 * valuation(disc, p) + 3;
  std::array<Bi, 3> G{chart_poly(f, 0), chart_poly(f, 1), chart_poly(f, 2)};
  const std::uint64_t pu = p.get_ui();

  std::vector<Node> next;
  Int pk = 1;
  int k = 1;
  // True when n certifies a point; otherwise queues its surviving children.
  auto visit = [&](const Node& n) {
    ++cert.nodes;
    Bi T = taylor(G[n.chart], n.x, n.y);
    auto P = chart_point(n.chart, n.x, n.y);
    int vg = grad_valuation(hom_grad(f, P[0], P[1], P[2]), p);
    if (vg < 0 && T[0][0] == 0) return false;
    if (T[0][0] == 0 || (vg >= 0 && valuation(T[0][0], p) > 2 * vg)) {
      cert.solvable = true;
      cert.witness = P;
      cert.v_value = T[0][0] == 0 ? -1 : valuation(T[0][0], p);  // -1: exact point
      cert.v_grad = vg;
      return true;
    }
    int v0 = valuation(T[0][0], p);
    // m: least valuation of the scaled Taylor coefficients on this disk.
    int m = v0;
    bool open = false;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; i + j < 4; ++j) {
        if ((i == 0 && j == 0) || T[i][j] == 0) continue;
        int v = valuation(T[i][j], p) + k * (i + j);
        if (v <= v0) open = true;
        m = std::min(m, v);
      }
    if (!open) return false;
    // Children whose scaled value is a unit times p^m fail one level down.
    Bi gbar{};
    Int pm = pow(p, static_cast<unsigned long>(m)), step = pk * p;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; i + j < 4; ++j) {
        gbar[i][j] = 0;
        if (T[i][j] == 0) continue;
        Int scaled = T[i][j] * pow(step, static_cast<unsigned long>(i + j));
        if (valuation(scaled, p) == m) gbar[i][j] = mod(Int(scaled / pm), p);
      }
    plane_zeros(gbar, pu, [&](std::uint64_t a, std::uint64_t b) {
      next.push_back({n.chart, n.x + step * a, n.y + step * b});
      return false;
    });
    if (cert.nodes + static_cast<long>(next.size()) > kNodeBudget)
      throw Inconclusive("solvability", "disk search at p = " + to_string(p) + " exceeded the node budget");
    return false;
  };

  // Level 1 is generated lazily from the F_p-points of the reduction; other
  // residue disks fail the valuation test at once.
  cert.depth = 1;
  Bi g0 = G[0];
  for (auto& row : g0)
    for (auto& x : row) x = mod(x, p);
  bool found = false;
  plane_zeros(g0, pu, [&](std::uint64_t a, std::uint64_t b) { return found = visit({0, Int(a), Int(b)}); });
  if (found) return cert;
  ModPoly at_inf;  // F(w, 1, 0)
  for (int a = 0; a < 4; ++a) at_inf.push_back(mod(G[1][a][0], p).get_ui());
  trim(at_inf);
  std::vector<std::uint64_t> inf_roots;
  if (at_inf.empty()) {
    for (std::uint64_t a = 0; a < pu; ++a) inf_roots.push_back(a);
  } else {
    inf_roots = roots_mod_p(at_inf, pu);
  }
  for (auto a : inf_roots)
    if (visit({1, Int(a), Int(0)})) return cert;
  if (f[0] % p == 0 && visit({2, Int(0), Int(0)})) return cert;

  for (pk = p;; pk *= p) {
    if (next.empty()) return cert;
    if (k >= cert.depth_bound)
      throw Inconclusive("solvability", "disk search at p = " + to_string(p) + " exceeded depth " +
                                            std::to_string(cert.depth_bound));
    std::vector<Node> level = std::move(next);
    next.clear();
    cert.depth = ++k;
    for (const auto& n : level)
      if (visit(n)) return cert;
  }
}

CubicCertificate really_solvable(const PlaneCubic& C) {
  Form f = integral_form(C);
  CubicCertificate cert;
  cert.place = 0;
  cert.solvable = true;
  if (f[0] == 0) {
    cert.exact_infinity = true;
    cert.witness = {Int(1), Int(0), Int(0)};
    return cert;
  }
  IntPoly g{f[9], f[7], f[4], f[0]};
  Int bound = 1;
  for (const Int& c : {f[9], f[7], f[4]}) bound = std::max(bound, Int(abs(c) / abs(f[0]) + 2));
  Rat lo(-bound), hi(bound);
  int slo = sgn(eval(g, lo));
  for (int it = 0; it < 60; ++it) {
    Rat mid = (lo + hi) / 2;
    int s = sgn(eval(g, mid));
    if (s == 0) {
      lo = hi = mid;
      break;
    }
    if (s == slo) lo = mid;
    else hi = mid;
  }
  cert.lo = lo;
  cert.hi = hi;
  return cert;
}

bool replay(const PlaneCubic& C, const CubicCertificate& cert) {
  Form f = integral_form(C);
  if (cert.place == 0) {
    if (!cert.solvable) return false;
    if (cert.exact_infinity) return f[0] == 0;
    IntPoly g{f[9], f[7], f[4], f[0]};
    return cert.lo <= cert.hi && sgn(eval(g, cert.lo)) * sgn(eval(g, cert.hi)) <= 0;
  }
  if (!cert.solvable) {
    auto again = locally_solvable(C, cert.place);
    return !again.solvable && again.depth == cert.depth;
  }
  const auto& P = cert.witness;
  if (gcd(gcd(P[0], P[1]), P[2]) % cert.place == 0) return false;
  Int v = hom_eval(f, P[0], P[1], P[2]);
  int vg = grad_valuation(hom_grad(f, P[0], P[1], P[2]), cert.place);
  if (vg < 0) return false;
  if (v == 0) return true;
  return valuation(v, cert.place) > 2 * vg;
}

LocalBundle everywhere_locally_solvable(const PlaneCubic& C, std::span<const Int> hints, int jobs) {
  if (!is_smooth(C)) throw ArithmeticError("singular cubic");
  std::set<Int> ps;
  for (const auto& p : bad_primes(C, hints)) ps.insert(p);
  for (long p : {2, 3, 5, 7, 11, 13}) ps.insert(Int(p));
  LocalBundle out;
  out.places.assign(ps.begin(), ps.end());
  if (jobs <= 1) {
    for (const auto& p : out.places) out.certificates.push_back(locally_solvable(C, p));
  } else {
    std::vector<std::future<CubicCertificate>> fs;
    for (const auto& p : out.places)
      fs.push_back(std::async(std::launch::async, [&C, p] { return locally_solvable(C, p); }));
    for (auto& fu : fs) out.certificates.push_back(fu.get());
  }
  out.places.push_back(Int(0));
  out.certificates.push_back(really_solvable(C));
  out.solvable = std::all_of(out.certificates.begin(), out.certificates.end(),
                             [](const CubicCertificate& c) { return c.solvable; });
  return out;
}

GlobalSearchResult search_rational_points(const PlaneCubic& C, long H, int jobs) {
  if (H < 1 || H > 100000) throw ArithmeticError("search height must be in [1, 100000]");
  Form f = integral_form(C);
  std::array<__int128, 10> c{};
  for (int i = 0; i < 10; ++i) {
    if (abs(f[i]) >= (Int(1) << 60)) throw ArithmeticError("cubic coefficients too large for the point search");
    c[i] = f[i].get_si();
  }
  GlobalSearchResult out;
  out.height_bound = H;
  std::set<std::array<Int, 3>> found;

  // V = 0: rational roots of the binary cubic.
  if (f[0] == 0) found.insert({Int(1), Int(0), Int(0)});
  IntPoly bin{f[3], f[2], f[1], f[0]};
  trim(bin);
  if (degree(bin) > 0)
    for (const Rat& t : rational_roots(bin))
      if (abs(t.get_num()) <= H && t.get_den() <= H) found.insert({Int(t.get_num()), Int(t.get_den()), Int(0)});

  auto worker = [&](long start, long step) {
    std::vector<std::array<Int, 3>> pts;
    for (long V = start; V <= H; V += step) {
      __int128 v = V;
      for (long Z = -H; Z <= H; ++Z) {
        __int128 z = Z;
        __int128 p3 = c[0], p2 = c[1] * z + c[4] * v, p1 = c[2] * z * z + c[5] * z * v + c[7] * v * v,
                 p0 = c[3] * z * z * z + c[6] * z * z * v + c[8] * z * v * v + c[9] * v * v * v;
        auto P = [&](long W) {
          __int128 w = W;
          return ((p3 * w + p2) * w + p1) * w + p0;
        };
        // Breakpoints at the floor and ceiling of the critical points keep P
        // monotone on every piece.
        std::vector<long> bp{-H, H};
        long double a = static_cast<long double>(3 * p3), b = static_cast<long double>(2 * p2),
                    cc = static_cast<long double>(p1);
        std::vector<long double> crit;
        if (a != 0) {
          long double D = b * b - 4 * a * cc;
          if (D >= 0) {
            long double s = std::sqrt(D);
            crit = {(-b - s) / (2 * a), (-b + s) / (2 * a)};
          }
        } else if (b != 0) {
          crit = {-cc / b};
        } else if (cc == 0 && p0 == 0) {
          continue;  // P vanishes identically; impossible for a smooth cubic
        }
        for (long double r : crit) {
          if (r < -H || r > H) continue;
          bp.push_back(static_cast<long>(std::floor(r)));
          bp.push_back(static_cast<long>(std::ceil(r)));
        }
        std::sort(bp.begin(), bp.end());
        bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
        std::set<long> roots;
        for (size_t i = 0; i + 1 < bp.size(); ++i) {
          long lo = bp[i], hi = bp[i + 1];
          int sl = sign(P(lo)), sh = sign(P(hi));
          if (sl == 0) roots.insert(lo);
          if (sh == 0) roots.insert(hi);
          if (sl * sh >= 0) continue;
          while (hi - lo > 1) {
            long mid = lo + (hi - lo) / 2;
            int sm = sign(P(mid));
            if (sm == 0) {
              roots.insert(mid);
              break;
            }
            if (sm == sl) lo = mid;
            else hi = mid;
          }
        }
        if (bp.size() == 1 && sign(P(bp[0])) == 0) roots.insert(bp[0]);
        for (long W : roots) {
          if (std::gcd(std::gcd(std::labs(W), std::labs(Z)), V) != 1) continue;
          pts.push_back({Int(W), Int(Z), Int(V)});
        }
      }
    }
    return pts;
  };

  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(H)));
  if (jobs == 1) {
    for (auto& q : worker(1, 1)) found.insert(q);
  } else {
    std::vector<std::future<std::vector<std::array<Int, 3>>>> fs;
    for (int j = 0; j < jobs; ++j) fs.push_back(std::async(std::launch::async, worker, 1L + j, static_cast<long>(jobs)));
    for (auto& fu : fs)
      for (auto& q : fu.get()) found.insert(q);
  }
  out.points.assign(found.begin(), found.end());
  return out;
}

DirectSelmer direct_selmer_psi(const CodomainModel& M, const CubeClassGroup& classes, std::span<const Int> hints,
                               int jobs) {
  DirectSelmer out;
  out.elements = classes.elements(hints);
  for (const auto& t : out.elements) {
    auto C = canonicalize(homogeneous_space(t, M, hints));
    bool ok = everywhere_locally_solvable(C, hints, jobs).solvable;
    out.cubics.push_back(C);
    out.locally_solvable.push_back(ok);
    if (ok) out.order += 1;
  }
  return out;
}

}  // namespace hasse
