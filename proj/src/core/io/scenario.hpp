#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/io/expr.hpp"
#include "core/io/serialize.hpp"
#include "core/models/family.hpp"

namespace semiflow {

// One requested modulus check. threshold is the pass criterion; an absent
// threshold leaves the check informational (it always passes).
struct CheckSpec {
  std::string kind;  // semigroup_law | t_continuity | t_lipschitz | derivative
  double threshold = 0.0;
  std::vector<double> s_values, t_values;  // semigroup_law
  double t0 = 0.0;                         // t_continuity
  double fd_step = 1e-5;                   // derivative
};

struct GeneratorSpec {
  double epsilon = 1e-3;
  double t_max = 1.0;
  double floor = 1e-7;
  double gap_floor = 1e-6;
};

struct LemmaSpec {
  std::string which;  // iterates | corollary | derivative | transfer
  int p = 2;
  double t0 = 0.0;
  double fd_step = 1e-5;
  std::vector<Expr> map_exprs;  // empty: the map is F_{t0} of the family
  Subset d1;                    // transfer only
};

struct ExampleSpec {
  std::string which;  // piecewise_corner | ellinf_paths
  std::vector<double> x_values;
  double t_lo = 0.05, t_hi = 0.8, spacing = 1e-3, step = 1e-5;
  double jump_threshold = 1e-3;
  double a = 0.25, inner_a = 0.1;  // chain overlap and the inner copy's
  int n_min = 2, n_max = 8;
};

// A parsed and validated scenario. `resolved` holds the config with every
// applied default filled in; it is echoed into all output files, so a
// report names exactly the run that produced it.
struct Scenario {
  std::string name;
  std::string command;  // check | generator | lemma | example
  Json resolved;

  Domain domain;
  SemigroupFamily family;
  bool has_family = false;
  Subset d_hat;
  bool has_subset = false;
  double mu = 0.0;

  std::string strategy = "grid";
  int n_points = 25;
  int n_pairs = 50;
  std::uint64_t seed = 1;

  std::vector<double> t_grid;
  double tolerance = 1e-9;

  std::vector<CheckSpec> checks;
  GeneratorSpec gen;
  LemmaSpec lemma;
  ExampleSpec example;
};

struct ScenarioResult {
  bool pass = false;                 // every requested criterion met
  std::vector<std::string> files;    // paths written, in write order
  std::vector<std::string> summary;  // one line per artifact
};

// Parses and validates a JSON scenario. All problems are collected and
// reported together in one ConfigError naming each field (parse failures
// name the line).
Scenario parse_scenario(const std::string& json_text);

// Command-line overrides; both update the resolved echo.
void scenario_set_seed(Scenario& s, std::uint64_t seed);
void scenario_set_tolerance(Scenario& s, double tolerance);

// Runs the scenario, writing artifacts into out_dir (created on demand).
// format is "csv", "json", or "both". Identical scenarios write identical
// bytes. Errors: ConfigError for a bad format, IoError, plus whatever the
// pipeline raises (NoDelta1, HypothesisNotMet, Diverging, ...).
ScenarioResult run_scenario(const Scenario& s, const std::string& out_dir,
                            const std::string& format);

// Canned scenario text for the two reproduction examples, nullptr for
// unknown names. Valid input for parse_scenario.
const char* builtin_scenario(const std::string& name);

}  // namespace semiflow
