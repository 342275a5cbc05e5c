// Command-line front end; all work happens behind the C API.
#include <cstdio>
#include <string>

#include <CLI11.hpp>
#include <semiflow/semiflow.h>

namespace {

struct Options {
  std::string config;
  std::string example_name;
  std::string out_dir = ".";
  std::string format = "both";
  unsigned long long seed = 0;
  double tolerance = 0.0;
  bool has_seed = false;
  bool has_tolerance = false;
};

void add_shared(CLI::App* sub, Options& o) {
  sub->add_option("--out", o.out_dir, "directory for emitted artifacts")
      ->capture_default_str();
  sub->add_option("--format", o.format, "artifact set: csv, json, or both")
      ->capture_default_str();
  sub->add_option("--seed", o.seed, "override the sample seed")
      ->each([&o](const std::string&) { o.has_seed = true; });
  sub->add_option("--tolerance", o.tolerance, "override the comparison tolerance")
      ->each([&o](const std::string&) { o.has_tolerance = true; });
}

int fail_with(sf_status st) {
  std::fprintf(stderr, "error: %s\n", sf_last_error());
  return sf_exit_code(st);
}

int run(const std::string& command, const Options& o) {
  sf_scenario* sc = nullptr;
  sf_status st;
  if (command == "example") {
    const char* text = sf_builtin_scenario(o.example_name.c_str());
    if (!text) {
      std::fprintf(stderr,
                   "error: unknown example '%s' (try piecewise_corner or "
                   "ellinf_paths)\n",
                   o.example_name.c_str());
      return 2;
    }
    st = sf_scenario_parse(text, &sc);
  } else {
    st = sf_scenario_load(o.config.c_str(), &sc);
  }
  if (st != SF_OK) return fail_with(st);

  if (std::string(sf_scenario_command(sc)) != command) {
    std::fprintf(stderr,
                 "error: %s holds a '%s' scenario, but the subcommand is "
                 "'%s'\n",
                 o.config.c_str(), sf_scenario_command(sc), command.c_str());
    sf_scenario_free(sc);
    return 2;
  }

  if (o.has_seed) st = sf_scenario_set_seed(sc, o.seed);
  if (st == SF_OK && o.has_tolerance)
    st = sf_scenario_set_tolerance(sc, o.tolerance);
  if (st == SF_OK) st = sf_scenario_run(sc, o.out_dir.c_str(), o.format.c_str());
  if (st != SF_OK) {
    int code = fail_with(st);
    sf_scenario_free(sc);
    return code;
  }

  std::printf("scenario %s\n", sf_scenario_name(sc));
  for (int i = 0; i < sf_scenario_summary_count(sc); ++i)
    std::printf("  %s\n", sf_scenario_summary(sc, i));
  for (int i = 0; i < sf_scenario_file_count(sc); ++i)
    std::printf("  wrote %s\n", sf_scenario_file(sc, i));
  int pass = sf_scenario_pass(sc);
  std::printf("result: %s\n", pass == 1 ? "pass" : "fail");
  sf_scenario_free(sc);
  return pass == 1 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semiflow: checks, generator extraction, quantitative lemma "
               "verification, and worked examples for semigroup families"};
  app.set_version_flag("--version", sf_version());
  app.require_subcommand(1);

  Options o;
  const char* cfg_help = "scenario configuration (JSON)";

  CLI::App* chk = app.add_subcommand("check", "run semigroup property checks");
  chk->add_option("--config", o.config, cfg_help)->required();
  add_shared(chk, o);

  CLI::App* gen = app.add_subcommand(
      "generator", "extract the infinitesimal generator with a certificate");
  gen->add_option("--config", o.config, cfg_help)->required();
  add_shared(gen, o);

  CLI::App* lem =
      app.add_subcommand("lemma", "verify a quantitative inequality");
  lem->add_option("--config", o.config, cfg_help)->required();
  add_shared(lem, o);

  CLI::App* ex = app.add_subcommand("example", "run a packaged example");
  ex->add_option("name", o.example_name,
                 "piecewise_corner or ellinf_paths")
      ->required();
  add_shared(ex, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (chk->parsed()) return run("check", o);
  if (gen->parsed()) return run("generator", o);
  if (lem->parsed()) return run("lemma", o);
  return run("example", o);
}
