#include "hasse/threedescent.hpp"

#include <algorithm>
#include <map>

#include "hasse/localred.hpp"
#include "hasse/twodescent.hpp"

namespace hasse {

namespace {

Rat exact_root_or_throw(const Rat& x, const char* what) {
  auto r = exact_sqrt(x);
  if (!r) throw ArithmeticError(what);
  return *r;
}

// Ternary forms in (w, z, v).
using Mono = std::array<int, 3>;
using Form = std::map<Mono, Int>;

Form diff(const Form& f, int var) {
  Form out;
  for (const auto& [m, c] : f) {
    if (m[var] == 0) continue;
    Mono n = m;
    --n[var];
    out[n] += c * m[var];
  }
  return out;
}

Form mul(const Form& a, const Form& b) {
  Form out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) out[{ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]}] += ca * cb;
  return out;
}

Form add(Form a, const Form& b, long sign = 1) {
  for (const auto& [m, c] : b) a[m] += sign * c;
  return a;
}

Int bareiss_det(std::vector<std::vector<Int>> M) {
  const size_t n = M.size();
  Int prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (M[k][k] == 0) {
      size_t r = k + 1;
      while (r < n && M[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(M[k], M[r]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
    prev = M[k][k];
  }
  return sign * M[n - 1][n - 1];
}

// eta, xi from (w, z) in the coordinates of the raw (unscaled, unflipped) model.
template <class F, class Embed>
Point<F> transfer_formula(const CubicProvenance& pv, const F& w, const F& z, Embed R) {
  const Rat& r = pv.model.A;
  switch (pv.kind) {
    case 1:
    case 3: {
      Rat k = exact_root_or_throw(r, "point_transfer: radicand not a square");
      F t = R(pv.t.u);
      F xi = w * z;
      F eta = w * w * w * t - R(k) * (pv.kind == 1 ? R(Rat(1)) : F(xi - R(pv.model.B)));
      return Point<F>::affine(xi, eta);
    }
    default: {
      F a = w * w * w + R(Rat(3) * r) * w * z * z;
      F b = R(Rat(3)) * w * w * z + R(r) * z * z * z;
      F eta = a * R(pv.u) + b * R(pv.v) * R(r);
      F xi = R(pv.s) * (w * w - R(r) * z * z);
      return Point<F>::affine(xi, eta);
    }
  }
}

Rat pow_rat(const Rat& x, int e) {
  Rat r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

// ---- models ----

CodomainModel CodomainModel::of(const IsogenyDescriptor& psi) {
  switch (psi.kind) {
    case IsogenyKind::psi3: {
      auto [Ab, Bb] = isogenous_AB(psi.params[0], psi.params[1]);
      return ab(Ab, Bb);
    }
    case IsogenyKind::psi3_j0:
      return c(Rat(-27 * psi.params[0]));
    default:
      throw std::invalid_argument("CodomainModel::of: not a forward 3-isogeny");
  }
}

WeierstrassCurve CodomainModel::curve() const { return j0 ? model_C(A) : model_AB(A, B); }

bool CodomainModel::radicand_square() const { return exact_sqrt(A).has_value(); }

Int CodomainModel::field() const {
  if (radicand_square()) return 1;
  return square_class(A).rep;
}

Rat CodomainModel::root_scale() const { return exact_root_or_throw(A / Rat(field()), "root_scale"); }

// ---- delta ----

DeltaImage delta_image(const CurvePoint& P, const CodomainModel& M) {
  if (!on_curve(M.curve(), P)) throw NotOnCurve("delta_image: point not on the codomain");
  DeltaImage out{P, QuadElem::one(M.field())};
  if (P.inf) return out;
  if (M.radicand_square()) {
    Rat k = *exact_sqrt(M.A);
    Rat value;
    if (P.x == 0) {
      // (0, +-sqrt(Cbar)) -> (4C)^-+1 and (0, +-sqrt(Abar) Bbar) -> (2 Bbar A^2)^-+1.
      Rat A = -M.A / 27;
      Rat base = M.j0 ? Rat(4 * A) : Rat(2 * M.B * A * A);
      Rat plus = M.j0 ? k : Rat(k * M.B);
      value = P.y == plus ? Rat(1 / base) : base;
    } else {
      value = M.j0 ? Rat(P.y + k) : Rat(P.y + (P.x - M.B) * k);
    }
    out.value = QuadElem(value, Rat(0), Int(1));
    return out;
  }
  Rat m = M.root_scale();
  out.value = QuadElem(P.y, M.j0 ? m : Rat((P.x - M.B) * m), M.field());
  return out;
}

// ---- periods and Cassels ----

Rat pullback_factor(const IsogenyDescriptor& psi) {
  // psi(x, y) = (N(x)/x^2, y D(x)/x^3) once y^2 = f(x) is substituted, so
  // psi^* dX/2Y = (N'(x) x - 2 N(x)) / D(x) * dx/2y, constant in x.
  auto at = [&](const Rat& x) -> std::optional<Rat> {
    Rat N, dN, D;
    if (psi.kind == IsogenyKind::psi3) {
      const Rat &A = psi.params[0], &B = psi.params[1];
      Rat f = x * x * x + A * (x - B) * (x - B), df = 3 * x * x + 2 * A * (x - B);
      N = 3 * (6 * f + 6 * A * B * B - 3 * x * x * x - 2 * A * x * x);
      dN = 3 * (6 * df - 9 * x * x - 4 * A * x);
      D = 27 * (8 * A * B * B - x * x * x - 4 * A * B * x);
    } else if (psi.kind == IsogenyKind::psi3_j0) {
      const Rat& C = psi.params[0];
      N = x * x * x + 4 * C;
      dN = 3 * x * x;
      D = x * x * x - 8 * C;
    } else {
      throw std::invalid_argument("pullback_factor: not a forward 3-isogeny");
    }
    if (D == 0) return std::nullopt;
    return Rat((dN * x - 2 * N) / D);
  };
  std::optional<Rat> first;
  for (long x0 = 1; x0 < 20; ++x0) {
    auto c = at(Rat(x0));
    if (!c) continue;
    if (!first) {
      first = c;
    } else if (*c != *first) {
      throw ArithmeticError("pullback_factor: not constant");
    } else {
      return *first;
    }
  }
  throw ArithmeticError("pullback_factor: no sample point");
}

Rat period_ratio(const WeierstrassCurve& E, const WeierstrassCurve& Ebar, const Rat& pullback, int real_kernel) {
  // omega_min = u omega_model for x = u^2 x' + r.
  Rat uE = global_minimal_model(E).change.u;
  Rat uB = global_minimal_model(Ebar).change.u;
  Rat diff = uE / (uB * pullback);
  if (diff < 0) diff = -diff;
  auto components = [](const WeierstrassCurve& C) { return discriminant(C) > 0 ? 2 : 1; };
  // Odd degree: the identity components map onto each other and the kernel
  // meets only the identity component, so #coker = n(Ebar) / n(E).
  Rat coker(components(Ebar), components(E));
  coker.canonicalize();
  return Rat(real_kernel) / coker * diff;
}

Rat period_ratio(const IsogenyDescriptor& psi) {
  // Real kernel points (0, +-sqrt(A) B), resp. (0, +-sqrt(C)).
  int kernel = psi.params[0] > 0 ? 3 : 1;
  return period_ratio(psi.domain, psi.codomain, pullback_factor(psi), kernel);
}

CasselsData cassels_formula(const Int& tors_bar, const Int& tors, const Rat& period, const Int& tam_E,
                            const Int& tam_Ebar) {
  CasselsData d{tors_bar, tors, tam_E, tam_Ebar, period, Rat(0)};
  d.selmer_ratio = Rat(tors_bar) * period * Rat(tam_E) / (Rat(tors) * Rat(tam_Ebar));
  return d;
}

CasselsData cassels_ratio(const IsogenyDescriptor& psi) {
  CodomainModel M = CodomainModel::of(psi);
  Int tors = exact_sqrt(psi.params[0]) ? 3 : 1;
  Int tors_bar = M.radicand_square() ? 3 : 1;
  return cassels_formula(tors_bar, tors, period_ratio(psi), tamagawa_product(psi.domain),
                         tamagawa_product(psi.codomain));
}

SelmerPsiResult selmer_psi(const IsogenyDescriptor& psi, int rank_bound, std::span<const Int> hints) {
  SelmerPsiResult out;
  out.cassels = cassels_ratio(psi);
  out.rank_bound = rank_bound;
  const Rat& r = out.cassels.selmer_ratio;
  // #Sel(psi) = #Sel(psi-hat) * den/num, so den divides it.
  out.lower = r.get_den();
  CodomainModel M = CodomainModel::of(psi);
  Int d = M.field();
  if (d == 1) throw UnsupportedConfiguration("selmer_psi: L = Q is not handled");
  out.S = bad_primes(psi.domain);
  out.S.push_back(Int(3));
  std::sort(out.S.begin(), out.S.end());
  out.S.erase(std::unique(out.S.begin(), out.S.end()), out.S.end());
  out.classes = s_units_mod_cubes(out.S, d);
  out.upper = out.classes.order;
  if (out.lower != out.upper)
    throw Inconclusive("threedescent", "Selmer bounds " + out.lower.get_str() + " <= #Sel <= " +
                                           out.upper.get_str() + " do not meet");
  out.order = out.lower;
  out.dual_order = Rat(r * Rat(out.order)).get_num();
  out.elements = out.classes.elements(hints);
  out.rational_three_torsion =
      torsion_subgroup(psi.domain).order % 3 == 0 || torsion_subgroup(psi.codomain).order % 3 == 0;
  out.sha_flag = rank_bound == 0 && !out.rational_three_torsion && out.dual_order == 1;
  return out;
}

SelmerPsiResult selmer_psi_order(const Int& h) {
  Rat B = Rat(h * (h - 6) * (h - 6));
  WeierstrassCurve E = model_AB(Rat(-216), B);
  auto S = shift_two_torsion(E).first;
  auto fwd = selmer_phi(S, Direction::forward);
  auto dual = selmer_phi(S, Direction::dual);
  int rank = rank_upper_bound(fwd.selmer.size(), dual.selmer.size());
  std::vector<Int> hints;
  for (long k : {0l, 2l, 6l, 8l}) hints.push_back(abs(Int(h - k)));
  return selmer_psi(psi_isogeny(Rat(-216), B), rank, hints);
}

// ---- plane cubics ----

Rat PlaneCubic::eval(const Rat& w, const Rat& z) const {
  Rat s = 0;
  for (size_t i = 0; i < 10; ++i) {
    if (c[i] == 0) continue;
    s += c[i] * pow_rat(w, kExponents[i][0]) * pow_rat(z, kExponents[i][1]);
  }
  return s;
}

Int PlaneCubic::eval(const Int& W, const Int& Z, const Int& V) const {
  if (!integral()) throw ArithmeticError("PlaneCubic::eval: coefficients not integral");
  Int s = 0;
  for (size_t i = 0; i < 10; ++i) {
    if (c[i] == 0) continue;
    auto [a, b] = kExponents[i];
    s += c[i].get_num() * pow(W, a) * pow(Z, b) * pow(V, 3 - a - b);
  }
  return s;
}

bool PlaneCubic::integral() const {
  return std::all_of(c.begin(), c.end(), [](const Rat& x) { return x.get_den() == 1; });
}

std::array<Int, 10> PlaneCubic::integer_coefficients() const {
  if (!integral()) throw ArithmeticError("PlaneCubic: coefficients not integral");
  std::array<Int, 10> out;
  for (size_t i = 0; i < 10; ++i) out[i] = c[i].get_num();
  return out;
}

PlaneCubic homogeneous_space(const QuadElem& t, const CodomainModel& M, std::span<const Int> hints) {
  if (t.is_zero()) throw ArithmeticError("homogeneous_space: t = 0");
  PlaneCubic C;
  CubicProvenance& pv = C.from;
  pv.t = t;
  pv.model = M;
  const Rat& r = M.A;
  if (M.radicand_square()) {
    if (t.v != 0) throw ArithmeticError("homogeneous_space: L = Q needs rational t");
    if (t.u.get_den() != 1 || cubefree_part(t.u.get_num()) != abs(t.u.get_num()))
      throw ArithmeticError("homogeneous_space: t not cubefree");
    Rat k = *exact_sqrt(r);
    const Rat& tt = t.u;
    pv.kind = M.j0 ? 1 : 3;
    pv.u = tt;
    pv.s = tt;  // unused; N(t) = t over Q
    C.c[0] = tt * tt;
    C.c[3] = -1;
    if (M.j0) {
      C.c[9] = -2 * tt * k;
    } else {
      C.c[5] = -2 * tt * k;
      C.c[9] = 2 * tt * k * M.B;
    }
    return C;
  }
  if (t.d != M.field()) throw ArithmeticError("homogeneous_space: t not in Q(sqrt " + M.field().get_str() + ")");
  if (!is_cubefree(t, hints)) throw ArithmeticError("homogeneous_space: t not cubefree");
  auto s = exact_cbrt(norm(t));
  if (!s) throw ArithmeticError("homogeneous_space: N(t) is not a cube");
  pv.s = *s;
  pv.u = t.u;
  pv.v = t.v / M.root_scale();
  const Rat &u = pv.u, &v = pv.v;
  C.c[0] = v;
  C.c[1] = 3 * u;
  C.c[2] = 3 * r * v;
  C.c[3] = r * u;
  if (M.j0) {
    pv.kind = 2;
    C.c[9] = -1;
  } else {
    pv.kind = 4;
    C.c[4] = -pv.s;
    C.c[6] = pv.s * r;
    C.c[9] = M.B;
  }
  return C;
}

PlaneCubic canonicalize(const PlaneCubic& C) {
  Int den = 1, g = 0;
  for (const Rat& x : C.c) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  for (const Rat& x : C.c) {
    Int n = Rat(x * Rat(den)).get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  }
  if (g == 0) throw ArithmeticError("canonicalize: zero cubic");
  Rat factor = Rat(den, g);
  factor.canonicalize();

  auto normalized = [&](bool flip) {
    PlaneCubic out = C;
    Rat f = factor;
    for (size_t i = 0; i < 10; ++i) {
      out.c[i] = C.c[i] * f;
      if (flip && kExponents[i][1] % 2) out.c[i] = -out.c[i];
    }
    auto lead = std::find_if(out.c.begin(), out.c.end(), [](const Rat& x) { return x != 0; });
    if (*lead < 0) {
      for (Rat& x : out.c) x = -x;
      f = -f;
    }
    out.from.scale = C.from.scale * f;
    out.from.z_negated = C.from.z_negated != flip;
    return out;
  };
  PlaneCubic a = normalized(false), b = normalized(true);
  return std::lexicographical_compare(a.c.begin(), a.c.end(), b.c.begin(), b.c.end()) ? b : a;
}

std::string render(const PlaneCubic& C) {
  auto side = [&](std::initializer_list<size_t> idx, long sign) {
    std::string s;
    for (size_t i : idx) {
      Rat x = C.c[i] * sign;
      if (x == 0) continue;
      bool neg = x < 0;
      Rat a = neg ? Rat(-x) : x;
      if (!s.empty() || neg) s += neg ? "-" : "+";
      bool constant = i == 9;
      std::string coeff;
      if (a.get_den() != 1)
        coeff = "(" + to_string(a) + ")";
      else if (a != 1 || constant)
        coeff = to_string(a);
      s += coeff + (constant ? "" : kMonomials[i]);
    }
    return s.empty() ? std::string("0") : s;
  };
  return side({0, 1, 2, 3, 9}, 1) + " = " + side({4, 5, 6, 7, 8}, -1);
}

Int cubic_discriminant(const PlaneCubic& C) {
  PlaneCubic P = canonicalize(C);
  Form F;
  for (size_t i = 0; i < 10; ++i) {
    auto [a, b] = kExponents[i];
    if (P.c[i] != 0) F[{a, b, 3 - a - b}] = P.c[i].get_num();
  }
  std::array<Form, 3> Q = {diff(F, 0), diff(F, 1), diff(F, 2)};
  std::array<std::array<Form, 3>, 3> H;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) H[i][j] = diff(Q[i], j);
  auto minor = [&](int r1, int r2, int c1, int c2) {
    return add(mul(H[r1][c1], H[r2][c2]), mul(H[r1][c2], H[r2][c1]), -1);
  };
  Form J = add(add(mul(H[0][0], minor(1, 2, 1, 2)), mul(H[0][1], minor(1, 2, 0, 2)), -1),
               mul(H[0][2], minor(1, 2, 0, 1)));
  std::array<Form, 6> rows = {Q[0], Q[1], Q[2], diff(J, 0), diff(J, 1), diff(J, 2)};
  const std::array<Mono, 6> basis = {{{2, 0, 0}, {0, 2, 0}, {0, 0, 2}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}}};
  std::vector<std::vector<Int>> M(6, std::vector<Int>(6));
  for (size_t i = 0; i < 6; ++i)
    for (size_t j = 0; j < 6; ++j) {
      auto it = rows[i].find(basis[j]);
      M[i][j] = it == rows[i].end() ? Int(0) : it->second;
    }
  return bareiss_det(M);
}

bool is_smooth(const PlaneCubic& C) { return cubic_discriminant(C) != 0; }

CurvePoint point_transfer(const PlaneCubic& C, const Rat& w, const Rat& z) {
  if (C.eval(w, z) != 0) throw NotOnCurve("point_transfer: point not on the cubic");
  Rat zz = C.from.z_negated ? Rat(-z) : z;
  CurvePoint P = transfer_formula<Rat>(C.from, w, zz, [](const Rat& x) { return x; });
  if (!on_curve(C.from.model.curve(), P)) throw ArithmeticError("point_transfer: image off the curve");
  return P;
}

CurvePoint point_transfer(const PlaneCubic& C, const Int& W, const Int& Z, const Int& V) {
  if (V != 0) {
    Rat w(W, V), z(Z, V);
    w.canonicalize();
    z.canonicalize();
    return point_transfer(C, w, z);
  }
  Rat s = 0;
  for (size_t i = 0; i < 4; ++i) s += C.c[i] * Rat(pow(W, kExponents[i][0]) * pow(Z, kExponents[i][1]));
  if (s != 0 || (W == 0 && Z == 0)) throw NotOnCurve("point_transfer: point not on the cubic");
  return CurvePoint::infinity();
}

Point<ModP> point_transfer_mod(const PlaneCubic& C, const ModP& w, const ModP& z) {
  const auto p = w.modulus();
  ModP zz = C.from.z_negated ? -z : z;
  return transfer_formula<ModP>(C.from, w, zz, [p](const Rat& x) { return ModP(x, p); });
}

CodomainModel family_codomain(const Int& h) {
  Rat B = Rat((h - 2) * (h - 2) * (h - 8), 3);
  B.canonicalize();
  return CodomainModel::ab(Rat(72), B);
}

PlaneCubic family_cubic(const Int& h, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("family_cubic: sign must be +-1");
  QuadElem t(Rat(sign), Rat(1), Int(2));
  return canonicalize(homogeneous_space(t, family_codomain(h)));
}

}  // namespace hasse
