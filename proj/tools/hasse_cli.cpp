// hasse: sieve, analyze, cubic, check-local, search-points, reproduce-paper.
//
// Exit codes: 0 success, 1 reproduction failure, 2 usage, 3 inadmissible h,
// 4 inconclusive.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <thread>

#include "acceptance.hpp"
#include "hasse/family.hpp"

using namespace hasse;
using nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kFail = 1, kUsage = 2, kInadmissible = 3, kInconclusive = 4 };

struct Options {
  std::string format = "text";
  int jobs = 1;
  bool literal = false;
  std::string h, from, to, sign = "+", out;
  bool json = false;
  long height = 1000;
};

Int parse_int(const std::string& s, const char* what) {
  Int v;
  if (s.empty() || v.set_str(s, 10) != 0) throw CLI::ValidationError(what, "not an integer: " + s);
  return v;
}

int parse_sign(const std::string& s) {
  if (s == "+" || s == "plus") return 1;
  if (s == "-" || s == "minus") return -1;
  throw CLI::ValidationError("--sign", "expected + or -");
}

bool want_json(const Options& o) { return o.json || o.format == "json"; }

// Inadmissible h is reported before any computation.
Int admissible_h(const Options& o) {
  Int h = parse_int(o.h, "--h");
  if (auto why = admissibility_failure(h, !o.literal); !why.empty()) throw Inadmissible(why);
  return h;
}

std::vector<Int> hints(const Int& h) {
  std::vector<Int> v{Int(2), Int(3)};
  for (long k : {0l, 2l, 6l, 8l}) v.push_back(abs(Int(h - k)));
  return v;
}

int cmd_sieve(const Options& o) {
  Int lo = parse_int(o.from, "--from"), hi = parse_int(o.to, "--to");
  if (lo > hi) {
    std::cerr << "invalid range: --from " << lo << " exceeds --to " << hi << "\n";
    return kUsage;
  }
  auto s = sieve({lo, hi, !o.literal, o.jobs});
  if (want_json(o)) {
    ordered_json a = ordered_json::array();
    for (const auto& h : s) a.push_back(h.get_str());
    std::cout << a.dump() << "\n";
  } else {
    for (const auto& h : s) std::cout << h << "\n";
  }
  return kOk;
}

int cmd_analyze(const Options& o) {
  Int h = admissible_h(o);
  auto r = analyze(h, {!o.literal, o.height, o.jobs});
  std::string dir = o.out;
  if (dir.empty())
    if (const char* env = std::getenv("HASSE_REPORT_DIR")) dir = env;
  if (!dir.empty()) std::cerr << "report written to " << write_report(r, dir).string() << "\n";
  if (want_json(o)) std::cout << to_json(r).dump(2) << "\n";
  else std::cout << render_text(r);
  return r.verdict ? kOk : kFail;
}

int cmd_cubic(const Options& o) {
  Int h = admissible_h(o);
  auto C = family_cubic(h, parse_sign(o.sign));
  if (want_json(o)) {
    ordered_json c = ordered_json::array();
    for (const auto& x : C.c) c.push_back(x.get_str());
    std::cout << ordered_json{{"h", h.get_str()}, {"sign", o.sign}, {"equation", render(C)}, {"coefficients", c},
                              {"z_negated", C.from.z_negated}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << render(C) << "\n";
  }
  return kOk;
}

int cmd_check_local(const Options& o) {
  Int h = admissible_h(o);
  auto C = family_cubic(h, parse_sign(o.sign));
  auto b = everywhere_locally_solvable(C, hints(h), o.jobs);
  if (want_json(o)) {
    ordered_json certs = ordered_json::array();
    for (const auto& c : b.certificates) certs.push_back(to_json(c));
    std::cout << ordered_json{{"h", h.get_str()}, {"sign", o.sign}, {"equation", render(C)},
                              {"everywhere_locally_solvable", b.solvable}, {"certificates", certs}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << render(C) << "\n";
    for (const auto& c : b.certificates) {
      std::cout << (c.place == 0 ? std::string("real") : to_string(c.place)) << ": "
                << (c.solvable ? "solvable" : "unsolvable");
      if (c.place == 0) {
        if (c.exact_infinity) std::cout << " at (1 : 0 : 0)";
        else std::cout << " with a sign change for w in [" << c.lo << ", " << c.hi << "], z = 0";
      } else if (c.solvable) {
        std::cout << " at (" << c.witness[0] << " : " << c.witness[1] << " : " << c.witness[2] << "), depth " << c.depth;
      } else {
        std::cout << ", every disk closed by depth " << c.depth;
      }
      std::cout << "\n";
    }
    std::cout << "everywhere locally solvable: " << (b.solvable ? "yes" : "no") << "\n";
  }
  return b.solvable ? kOk : kFail;
}

int cmd_search(const Options& o) {
  Int h = admissible_h(o);
  auto C = family_cubic(h, parse_sign(o.sign));
  auto s = search_rational_points(C, o.height, o.jobs);
  if (want_json(o)) {
    ordered_json pts = ordered_json::array();
    for (const auto& p : s.points) pts.push_back({p[0].get_str(), p[1].get_str(), p[2].get_str()});
    std::cout << ordered_json{{"h", h.get_str()}, {"sign", o.sign}, {"height", s.height_bound}, {"points", pts}}.dump(2)
              << "\n";
  } else {
    std::cout << "points of height <= " << s.height_bound << ": " << s.points.size() << "\n";
    for (const auto& p : s.points) std::cout << "(" << p[0] << " : " << p[1] << " : " << p[2] << ")\n";
  }
  return kOk;
}

int cmd_reproduce(const Options& o) {
  bool ok = true;
  for (const auto& r : acceptance::run_all(o.jobs)) {
    std::cout << acceptance::format(r) << std::endl;
    ok = ok && r.pass;
  }
  std::cout << "listed values:";
  for (const auto& h : published_values()) std::cout << " " << h;
  std::cout << "\n";
  return ok ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plane cubics violating the Hasse principle from 3-isogeny descent"};
  app.require_subcommand(1);
  // -h would clash with --h.
  app.set_help_flag("--help", "print this help and exit");
  Options o;
  app.add_option("--format", o.format, "text, json or tsv")->check(CLI::IsMember({"text", "json", "tsv"}));
  app.add_option("--jobs", o.jobs, "worker threads (output does not depend on it)")->check(CLI::PositiveNumber);

  auto* sv = app.add_subcommand("sieve", "admissible h in a range");
  sv->add_option("--from", o.from)->required();
  sv->add_option("--to", o.to)->required();
  auto* strict_flag = sv->add_flag("--strict", "require h = 19 mod 120 (default)");
  sv->add_flag("--literal", o.literal, "only h = 3 mod 8 and the four primalities")->excludes(strict_flag);
  sv->add_flag("--json", o.json);

  auto* an = app.add_subcommand("analyze", "full descent report for one h");
  an->add_option("--h", o.h)->required();
  an->add_flag("--json", o.json);
  an->add_option("--out", o.out, "report directory (default $HASSE_REPORT_DIR)");
  an->add_option("--height", o.height, "search height")->check(CLI::Range(1, 100000));
  an->add_flag("--literal", o.literal);

  auto* cu = app.add_subcommand("cubic", "the canonical cubic C^h_+ or C^h_-");
  cu->add_option("--h", o.h)->required();
  cu->add_option("--sign", o.sign, "+ or -");
  cu->add_flag("--json", o.json);
  cu->add_flag("--literal", o.literal);

  auto* cl = app.add_subcommand("check-local", "local solvability certificates for C^h_+-");
  cl->add_option("--h", o.h)->required();
  cl->add_option("--sign", o.sign, "+ or -");
  cl->add_flag("--json", o.json);
  cl->add_flag("--literal", o.literal);

  auto* sp = app.add_subcommand("search-points", "bounded search for rational points on C^h_+-");
  sp->add_option("--h", o.h)->required();
  sp->add_option("--sign", o.sign, "+ or -");
  sp->add_option("--height", o.height)->check(CLI::Range(1, 100000));
  sp->add_flag("--json", o.json);
  sp->add_flag("--literal", o.literal);

  auto* rp = app.add_subcommand("reproduce-paper", "run every reproduction check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*sv) return cmd_sieve(o);
    if (*an) return cmd_analyze(o);
    if (*cu) return cmd_cubic(o);
    if (*cl) return cmd_check_local(o);
    if (*sp) return cmd_search(o);
    if (*rp) return cmd_reproduce(o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const Inadmissible& e) {
    std::cerr << "inadmissible h: " << e.what() << "\n";
    return kInadmissible;
  } catch (const Inconclusive& e) {
    std::cerr << "inconclusive (" << e.stage() << "): " << e.what() << "\n";
    return kInconclusive;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
