#include "hasse/family.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <sstream>

namespace hasse {

namespace {

using nlohmann::ordered_json;

Int floor_mod(const Int& a, long m) { return mod(a, Int(m)); }

std::vector<Int> family_hints(const Int& h) {
  std::vector<Int> out{Int(2), Int(3)};
  for (long k : {0l, 2l, 6l, 8l}) out.push_back(abs(Int(h - k)));
  return out;
}

CubicEntry make_entry(const QuadElem& t, const PlaneCubic& C, bool els) {
  return {t, C, render(C), els};
}

ordered_json jrat(const Rat& x) { return to_string(x); }
ordered_json jint(const Int& x) { return to_string(x); }

ordered_json jcurve(const WeierstrassCurve& E) {
  return ordered_json::array({jrat(E.a1), jrat(E.a2), jrat(E.a3), jrat(E.a4), jrat(E.a6)});
}

ordered_json jred(const ReductionData& d) {
  return {{"type", to_string(d.kind)}, {"kodaira", d.kodaira}, {"v_delta", d.v_delta}, {"tamagawa", d.tamagawa}};
}

ordered_json jcubic(const CubicEntry& e) {
  ordered_json c = ordered_json::array();
  for (const auto& x : e.cubic.c) c.push_back(jrat(x));
  return {{"t", to_string(e.t)},
          {"equation", e.equation},
          {"coefficients", c},
          {"z_negated", e.cubic.from.z_negated},
          {"everywhere_locally_solvable", e.locally_solvable}};
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

std::string admissibility_failure(const Int& h, bool strict) {
  if (floor_mod(h, 8) != 3) return "h \xe2\x89\xa2 3 mod 8";
  const char* names[] = {"|h|", "|h-2|", "|h-6|", "|h-8|"};
  long shifts[] = {0, 2, 6, 8};
  for (int i = 0; i < 4; ++i) {
    Int v = abs(Int(h - shifts[i]));
    if (!is_prime(v)) return std::string(names[i]) + " = " + to_string(v) + " is not prime";
  }
  if (strict && floor_mod(h, 120) != 19) return "h \xe2\x89\xa2 19 mod 120 (strict congruence)";
  return "";
}

bool admissible(const Int& h, bool strict) { return admissibility_failure(h, strict).empty(); }

std::vector<Int> sieve(const SieveQuery& q) {
  if (q.lo > q.hi) throw ArithmeticError("sieve: empty range (lo > hi)");
  long step = q.strict ? 120 : 8, res = q.strict ? 19 : 3;
  Int first = q.lo + mod(Int(res) - q.lo, Int(step));
  auto worker = [&](long offset, long stride) {
    std::vector<Int> out;
    for (Int h = first + Int(step) * offset; h <= q.hi; h += Int(step) * stride)
      if (admissible(h, q.strict)) out.push_back(h);
    return out;
  };
  int jobs = std::max(1, q.jobs);
  std::vector<Int> all;
  if (jobs == 1) {
    all = worker(0, 1);
  } else {
    std::vector<std::future<std::vector<Int>>> fs;
    for (int j = 0; j < jobs; ++j) fs.push_back(std::async(std::launch::async, worker, long(j), long(jobs)));
    for (auto& f : fs)
      for (auto& h : f.get()) all.push_back(h);
    std::sort(all.begin(), all.end());
  }
  return all;
}

const std::vector<Int>& published_values() {
  static const std::vector<Int> v = [] {
    std::vector<Int> out;
    for (long h : {-77261l, -72221l, -62981l, -51341l, -43781l, -25301l, -19421l, -16061l, -3461l, -821l, -101l, 19l,
                   3259l, 5659l, 15739l, 21019l, 55339l, 67219l, 69499l, 79699l, 88819l, 99139l, 116539l, 119299l})
      out.push_back(Int(h));
    return out;
  }();
  return v;
}

DescentReport analyze(const Int& h, const AnalyzeOptions& opt) {
  if (auto why = admissibility_failure(h, opt.strict); !why.empty()) throw Inadmissible(why);
  auto hints = family_hints(h);
  DescentReport r;
  r.h = h;
  r.strict = opt.strict;

  Rat B = Rat(h * (h - 6) * (h - 6));
  r.E = model_AB(Rat(-216), B);
  r.E_min = global_minimal_model(r.E).curve;
  r.discriminant = factor(Int(invariants(r.E_min).disc.get_num()), hints);

  auto shifted = shift_two_torsion(r.E).first;
  r.phi_fwd = selmer_phi(shifted, Direction::forward);
  r.phi_dual = selmer_phi(shifted, Direction::dual);
  r.rank = rank_upper_bound(r.phi_fwd.selmer.size(), r.phi_dual.selmer.size());
  r.Eprime = r.phi_fwd.Eprime;
  r.Eprime_min = global_minimal_model(r.Eprime).curve;

  auto psi = psi_isogeny(Rat(-216), B);
  CodomainModel M = family_codomain(h);
  r.Ebar = M.curve();
  r.Ebar_min = global_minimal_model(r.Ebar).curve;

  const char* roles[] = {"2", "3", "h", "h-2", "h-6", "h-8"};
  Int ps[] = {Int(2), Int(3), abs(h), abs(Int(h - 2)), abs(Int(h - 6)), abs(Int(h - 8))};
  for (int i = 0; i < 6; ++i)
    r.reduction.push_back(
        {roles[i], ps[i], tate_algorithm(r.E, ps[i]), tate_algorithm(r.Eprime, ps[i]), tate_algorithm(r.Ebar, ps[i])});
  r.tam_E = tamagawa_product(r.E);
  r.tam_Eprime = tamagawa_product(r.Eprime);
  r.tam_Ebar = tamagawa_product(r.Ebar);

  std::vector<Int> S = bad_primes(psi.domain);
  S.push_back(Int(3));
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  CubeClassGroup classes = s_units_mod_cubes(S, M.field());
  r.generators = classes.generators;
  r.cassels = cassels_ratio(psi);
  r.selmer_lower = r.cassels.selmer_ratio.get_den();
  r.selmer_upper = classes.order;

  DirectSelmer direct = direct_selmer_psi(M, classes, hints, opt.jobs);
  for (size_t i = 0; i < direct.elements.size(); ++i)
    r.classes.push_back(make_entry(direct.elements[i], direct.cubics[i], direct.locally_solvable[i]));
  try {
    auto sel = selmer_psi(psi, r.rank, hints);
    r.selmer_method = "cassels";
    r.selmer_order = sel.order;
    if (direct.order != sel.order)
      r.notes.push_back("local count of Sel(psi) (" + to_string(direct.order) + ") disagrees with the Cassels bounds");
  } catch (const Inconclusive& e) {
    r.selmer_method = "local";
    r.selmer_order = direct.order;
    r.notes.push_back(std::string(e.what()) + "; Sel(psi) counted from local solvability of every class");
  }
  r.dual_order = r.cassels.selmer_ratio * Rat(r.selmer_order);
  if (r.dual_order.get_den() != 1) r.notes.push_back("Cassels ratio times #Sel(psi) is not an integer");

  r.rational_three_torsion =
      torsion_subgroup(psi.domain).order % 3 == 0 || torsion_subgroup(psi.codomain).order % 3 == 0;
  r.sha_flag = r.rank == 0 && !r.rational_three_torsion && r.dual_order == 1 && r.selmer_order > 1;
  r.sha_psi_nontrivial = r.rank == 0 && !r.rational_three_torsion && r.selmer_order > 1;

  bool ok = true;
  for (int s = 0; s < 2; ++s) {
    int sign = s == 0 ? 1 : -1;
    PlaneCubic C = family_cubic(h, sign);
    r.local[s] = everywhere_locally_solvable(C, hints, opt.jobs);
    r.distinguished[s] = make_entry(C.from.t, C, r.local[s].solvable);
    r.search[s] = search_rational_points(C, opt.search_height, opt.jobs);
    bool trivial = cubefree_reduce(C.from.t, hints) == QuadElem::one(M.field());
    ok = ok && r.local[s].solvable && !trivial && r.search[s].points.empty();
    if (!r.local[s].solvable) {
      std::string where;
      for (size_t i = 0; i < r.local[s].places.size(); ++i)
        if (!r.local[s].certificates[i].solvable)
          where += (where.empty() ? "" : ", ") + (r.local[s].places[i] == 0 ? std::string("real")
                                                                             : to_string(r.local[s].places[i]));
      r.notes.push_back(std::string("C_") + (sign > 0 ? "+" : "-") + " has no point over Q_p for p in {" + where + "}");
    }
  }
  r.verdict = ok && r.rank == 0 && !r.rational_three_torsion;
  return r;
}

ordered_json to_json(const CubicCertificate& c) {
  ordered_json j;
  j["place"] = c.place == 0 ? ordered_json("real") : jint(c.place);
  j["status"] = c.solvable ? "solvable" : "unsolvable";
  if (c.place == 0) {
    if (c.exact_infinity) j["witness"] = ordered_json::array({"1", "0", "0"});
    else j["witness"] = {{"w_interval", {jrat(c.lo), jrat(c.hi)}}, {"z", "0"}};
    return j;
  }
  if (c.solvable) j["witness"] = {jint(c.witness[0]), jint(c.witness[1]), jint(c.witness[2])};
  else j["witness"] = nullptr;
  j["depth"] = c.depth;
  j["depth_bound"] = c.depth_bound;
  j["nodes"] = c.nodes;
  if (c.solvable) {
    j["v_value"] = c.v_value;
    j["v_grad"] = c.v_grad;
  }
  return j;
}

ordered_json to_json(const DescentReport& r) {
  ordered_json j;
  j["schema"] = kReportSchema;
  j["h"] = jint(r.h);
  j["strict_congruence"] = r.strict;
  j["curves"] = {{"E", jcurve(r.E)},        {"E_min", jcurve(r.E_min)},     {"E_prime", jcurve(r.Eprime)},
                 {"E_prime_min", jcurve(r.Eprime_min)}, {"E_bar", jcurve(r.Ebar)}, {"E_bar_min", jcurve(r.Ebar_min)}};
  ordered_json disc = ordered_json::array();
  for (const auto& [p, e] : r.discriminant) disc.push_back({jint(p), e});
  j["discriminant_factorization"] = disc;
  ordered_json red = ordered_json::array();
  for (const auto& row : r.reduction)
    red.push_back({{"role", row.role}, {"p", jint(row.p)}, {"E", jred(row.E)}, {"E_prime", jred(row.Eprime)},
                   {"E_bar", jred(row.Ebar)}});
  j["reduction"] = red;
  j["tamagawa_products"] = {{"E", jint(r.tam_E)}, {"E_prime", jint(r.tam_Eprime)}, {"E_bar", jint(r.tam_Ebar)}};
  auto sel2 = [](const SelmerPhiResult& s) {
    ordered_json a = ordered_json::array();
    for (const auto& c : s.selmer) a.push_back(jint(c.rep));
    return a;
  };
  j["two_descent"] = {{"selmer_phi", sel2(r.phi_fwd)}, {"selmer_phi_hat", sel2(r.phi_dual)}, {"rank", r.rank}};
  j["cassels"] = {{"tors_bar", jint(r.cassels.tors_bar)}, {"tors", jint(r.cassels.tors)},
                  {"tam_E", jint(r.cassels.tam_E)},       {"tam_E_bar", jint(r.cassels.tam_Ebar)},
                  {"period_ratio", jrat(r.cassels.period)}, {"selmer_ratio", jrat(r.cassels.selmer_ratio)}};
  ordered_json gens = ordered_json::array();
  for (const auto& g : r.generators) gens.push_back(to_string(g));
  j["selmer_psi"] = {{"method", r.selmer_method},
                     {"order", jint(r.selmer_order)},
                     {"lower", jint(r.selmer_lower)},
                     {"upper", jint(r.selmer_upper)},
                     {"dual_order", jrat(r.dual_order)},
                     {"generators", gens},
                     {"rational_three_torsion", r.rational_three_torsion},
                     {"sha_flag", r.sha_flag},
                     {"sha_psi_nontrivial", r.sha_psi_nontrivial}};
  ordered_json cls = ordered_json::array();
  for (const auto& c : r.classes) cls.push_back(jcubic(c));
  ordered_json dist = ordered_json::array();
  for (int s = 0; s < 2; ++s) {
    ordered_json d = jcubic(r.distinguished[s]);
    d["sign"] = s == 0 ? "+" : "-";
    ordered_json certs = ordered_json::array();
    for (const auto& c : r.local[s].certificates) certs.push_back(to_json(c));
    d["local_certificates"] = certs;
    ordered_json pts = ordered_json::array();
    for (const auto& p : r.search[s].points) pts.push_back({jint(p[0]), jint(p[1]), jint(p[2])});
    d["search"] = {{"height", r.search[s].height_bound}, {"points", pts}};
    dist.push_back(d);
  }
  j["cubics"] = {{"distinguished", dist}, {"classes", cls}};
  j["notes"] = r.notes;
  j["verdict"] = {{"hasse_violation", r.verdict}};
  return j;
}

std::string render_text(const DescentReport& r) {
  std::ostringstream o;
  o << "h: " << r.h << (r.strict ? "" : " (literal conditions)") << "\n";
  o << "E_h: " << to_string(r.E) << "\n";
  o << "E_h': " << to_string(r.Eprime) << "\n";
  o << "Ebar_h: " << to_string(r.Ebar) << "\n";
  o << "minimal discriminant:";
  for (const auto& [p, e] : r.discriminant) o << " " << p << "^" << e;
  o << "\n";
  o << "reduction (p: E | E' | Ebar):\n";
  for (const auto& row : r.reduction) {
    o << "  " << row.role << " = " << row.p << ":";
    for (const auto* d : {&row.E, &row.Eprime, &row.Ebar})
      o << "  " << to_string(d->kind) << " " << d->kodaira << " c=" << d->tamagawa;
    o << "\n";
  }
  o << "Tamagawa products: " << r.tam_E << " " << r.tam_Eprime << " " << r.tam_Ebar << "\n";
  o << "Sel^(phi):";
  for (const auto& c : r.phi_fwd.selmer) o << " " << c.rep;
  o << "\nSel^(phi-hat):";
  for (const auto& c : r.phi_dual.selmer) o << " " << c.rep;
  o << "\nrank: " << r.rank << "\n";
  o << "Cassels ratio: " << r.cassels.selmer_ratio << " (period ratio " << r.cassels.period << ")\n";
  o << "#L(S,3)*: " << r.selmer_upper << ", generators:";
  for (const auto& g : r.generators) o << " " << to_string(g);
  o << "\nSel^(psi) order: " << r.selmer_order << " [" << r.selmer_method << "]\n";
  o << "Sel^(psi-hat) order: " << r.dual_order << "\n";
  o << "sha_flag: " << yes_no(r.sha_flag) << "\n";
  for (int s = 0; s < 2; ++s) {
    const auto& d = r.distinguished[s];
    o << "C" << (s == 0 ? "+" : "-") << " (t = " << to_string(d.t) << "): " << d.equation << "\n";
    o << "  everywhere locally solvable: " << yes_no(d.locally_solvable) << " (places:";
    for (const auto& p : r.local[s].places) o << " " << (p == 0 ? std::string("real") : to_string(p));
    o << ")\n  rational points up to height " << r.search[s].height_bound << ": " << r.search[s].points.size() << "\n";
  }
  for (const auto& n : r.notes) o << "note: " << n << "\n";
  o << "verdict: " << (r.verdict ? "HASSE_VIOLATION" : "NOT_ESTABLISHED") << "\n";
  return o.str();
}

std::filesystem::path write_report(const DescentReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto path = dir / ("h_" + to_string(r.h) + ".json");
  std::ofstream f(path);
  f << to_json(r).dump(2) << "\n";
  return path;
}

}  // namespace hasse
