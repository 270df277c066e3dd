#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "stablefrac/families.hpp"
#include "stablefrac/grid.hpp"
#include "stablefrac/stable_model.hpp"

namespace sf {

enum class Verdict { Pass, Fail, Exploratory, Skipped };
const char* verdict_name(Verdict v);

// margin = rhs - lhs in the units named by `margin_kind`; for identities lhs is the
// measured error and rhs is 0. A checked entry passes iff margin >= -tolerance.
struct InequalityReport {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  double constant = 0;
  std::string provenance;   // how `constant` was obtained
  double margin = 0;
  std::string margin_kind;  // "relative" or "absolute"
  double tolerance = 0;
  Verdict verdict = Verdict::Pass;
  std::string digest;
  std::string sidedness;
  nlohmann::json inputs;
  nlohmann::json details = nlohmann::json::array();

  nlohmann::json to_json() const;
};

struct CheckInputs {
  std::vector<TestFunction> family;  // empty selects default_family(grid, seed)
  std::uint64_t seed = 0;
  std::vector<double> times{0.01, 0.1, 1.0};
  double beta = 1.3;  // partner exponent for composition_rot
  std::vector<double> T_list{2, 4, 8};
  int levels = 32;  // level sets for the coarea entries
};

// Registry names in order; entry 13 contributes two names.
const std::vector<std::string>& registry_names();
// "core": the checked entries with computable constants; "all": the whole registry.
std::vector<std::string> suite_entries(const std::string& suite);

InequalityReport evaluate_inequality(const std::string& name, const StableModel& m, const Grid& g,
                                     const CheckInputs& in);
std::vector<InequalityReport> run_suite(const std::string& suite, const StableModel& m, const Grid& g,
                                        const CheckInputs& in);

// True iff every report is Pass, Exploratory or Skipped.
bool all_passed(const std::vector<InequalityReport>& reports);

struct AsymptoticStudy {
  std::string kind;  // "BBM" or "MS"
  std::vector<double> alpha;
  std::vector<double> error;
  bool monotone = true;  // nonincreasing up to a 5% wiggle
  double final_over_initial = 0;
  Verdict verdict = Verdict::Pass;

  nlohmann::json to_json() const;
};

// BBM: ||(2 - a) D^(a-1) f - D_sigma f||_p along a -> 2; MS: ||D^(a-1) f - R_sigma f||_p
// along a -> 1. The spherical part sigma of `base` is held fixed for every a.
AsymptoticStudy asymptotic_study(const std::string& kind, const StableModel& base, const Field& f,
                                 const std::vector<double>& alphas, double p = 2);

// The model with the same sigma as `m` (not the same lambda1) at exponent beta.
StableModel with_alpha_fixed_sigma(const StableModel& m, double beta);

// tan(pi/(2p)) for p <= 2, cot(pi/(2p)) for p >= 2.
double pichorides_constant(double p);

}  // namespace sf
