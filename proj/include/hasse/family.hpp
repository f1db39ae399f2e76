#pragma once

// The family E_h: admissibility, the sieve and the per-h pipeline.

#include <array>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hasse/localred.hpp"
#include "hasse/solvability.hpp"
#include "hasse/twodescent.hpp"

namespace hasse {

class Inadmissible : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Empty when admissible, else the first failed condition.
std::string admissibility_failure(const Int& h, bool strict = true);
bool admissible(const Int& h, bool strict = true);

struct SieveQuery {
  Int lo, hi;
  bool strict = true;  // h = 19 mod 120 rather than only h = 3 mod 8
  int jobs = 1;
};

/// Ascending admissible h in [lo, hi]. Throws ArithmeticError when lo > hi.
std::vector<Int> sieve(const SieveQuery& q);

/// The values listed for the window [19 - 120000, 19 + 120000].
const std::vector<Int>& published_values();

struct ReductionRow {
  std::string role;  // "2", "3", "h", "h-2", "h-6", "h-8"
  Int p;
  ReductionData E, Eprime, Ebar;
};

struct CubicEntry {
  QuadElem t;
  PlaneCubic cubic;  // canonical
  std::string equation;
  bool locally_solvable = false;
};

struct AnalyzeOptions {
  bool strict = true;
  long search_height = 1000;
  int jobs = 1;
};

struct DescentReport {
  Int h;
  bool strict = true;
  WeierstrassCurve E, E_min, Eprime, Eprime_min, Ebar, Ebar_min;
  Factorization discriminant;  // of the minimal model of E
  std::vector<ReductionRow> reduction;
  Int tam_E{1}, tam_Eprime{1}, tam_Ebar{1};
  SelmerPhiResult phi_fwd, phi_dual;
  int rank = -1;
  CasselsData cassels;
  std::string selmer_method;  // "cassels" or "local"
  Int selmer_order{0}, selmer_lower{0}, selmer_upper{0};
  Rat dual_order{0};
  std::vector<QuadElem> generators;
  bool rational_three_torsion = false;
  bool sha_flag = false;              // rank 0, no 3-torsion, Sel(psi-hat) trivial
  bool sha_psi_nontrivial = false;    // rank 0, no 3-torsion, Sel(psi) nontrivial
  std::array<CubicEntry, 2> distinguished;  // C_+ then C_-
  std::vector<CubicEntry> classes;          // all of L(S,3)*
  std::array<LocalBundle, 2> local;
  std::array<GlobalSearchResult, 2> search;
  bool verdict = false;
  std::vector<std::string> notes;
};

/// Runs the whole chain. Throws Inadmissible, or Inconclusive naming the stage.
DescentReport analyze(const Int& h, const AnalyzeOptions& opt = {});

nlohmann::ordered_json to_json(const DescentReport& r);
nlohmann::ordered_json to_json(const CubicCertificate& c);
std::string render_text(const DescentReport& r);

/// Writes dir/h_<h>.json and returns the path.
std::filesystem::path write_report(const DescentReport& r, const std::filesystem::path& dir);

inline constexpr int kReportSchema = 1;

}  // namespace hasse
