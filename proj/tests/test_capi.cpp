#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <string>

#include <semiflow/semiflow.h>

namespace fs = std::filesystem;

namespace {

const char* kGenLinear = R"json({
  "name": "capi_gen",
  "command": "generator",
  "domain": {"shape": "interval", "lo": -2.0, "hi": 2.0},
  "subset": {"shape": "box", "lo": [-0.5], "hi": [0.5]},
  "mu": 0.25,
  "family": {"name": "linear", "matrix": [[-1.0]]},
  "sample": {"points": 9, "pairs": 36, "seed": 1}
})json";

const char* kStraddle = R"json({
  "name": "capi_straddle",
  "command": "generator",
  "subset": {"shape": "box", "lo": [0.4], "hi": [0.6]},
  "mu": 0.25,
  "family": {"name": "piecewise_decay"},
  "sample": {"points": 9, "pairs": 162, "seed": 1}
})json";

std::string scratch(const std::string& tag) {
  std::string dir = "capi_scratch/" + tag;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(sf_version()) == "0.1.0");
  CHECK(std::string(sf_status_name(SF_OK)) == "OK");
  CHECK(std::string(sf_status_name(SF_NO_DELTA1)) == "NoDelta1");
  CHECK(std::string(sf_status_name(SF_CONFIG_ERROR)) == "ConfigError");
  CHECK(std::string(sf_status_name(static_cast<sf_status>(999))) == "Internal");
}

TEST_CASE("exit classes partition the statuses") {
  CHECK(sf_exit_code(SF_OK) == 0);
  CHECK(sf_exit_code(SF_CONFIG_ERROR) == 2);
  CHECK(sf_exit_code(SF_BAD_PARAMETER) == 2);
  CHECK(sf_exit_code(SF_MARGIN_VIOLATION) == 2);
  CHECK(sf_exit_code(SF_EMPTY_SAMPLE) == 2);
  CHECK(sf_exit_code(SF_OUTSIDE_DOMAIN) == 2);
  CHECK(sf_exit_code(SF_IO_ERROR) == 3);
  CHECK(sf_exit_code(SF_INTERNAL) == 3);
  CHECK(sf_exit_code(SF_TRAJECTORY_ESCAPE) == 3);
  CHECK(sf_exit_code(SF_HYPOTHESIS_NOT_MET) == 4);
  CHECK(sf_exit_code(SF_NO_DELTA1) == 4);
  CHECK(sf_exit_code(SF_DIVERGING) == 4);
}

TEST_CASE("null arguments are rejected, not crashed on") {
  CHECK(sf_scenario_parse(nullptr, nullptr) == SF_BAD_PARAMETER);
  sf_scenario* sc = nullptr;
  CHECK(sf_scenario_parse(nullptr, &sc) == SF_BAD_PARAMETER);
  CHECK(sf_scenario_run(nullptr, nullptr, nullptr) == SF_BAD_PARAMETER);
  CHECK(sf_scenario_set_seed(nullptr, 1) == SF_BAD_PARAMETER);
  CHECK(sf_scenario_set_tolerance(nullptr, 1e-9) == SF_BAD_PARAMETER);
  CHECK(sf_scenario_pass(nullptr) == -1);
  CHECK(sf_scenario_file_count(nullptr) == 0);
  CHECK(sf_scenario_file(nullptr, 0) == nullptr);
  CHECK(sf_scenario_summary_count(nullptr) == 0);
  CHECK(sf_scenario_name(nullptr) == nullptr);
  sf_scenario_free(nullptr);  // no-op
}

TEST_CASE("parse errors set the thread-local message") {
  sf_scenario* sc = nullptr;
  sf_status st = sf_scenario_parse("{\"name\": \"x\"}", &sc);
  CHECK(st == SF_CONFIG_ERROR);
  CHECK(sc == nullptr);
  CHECK(std::strlen(sf_last_error()) > 0);
  CHECK(sf_exit_code(st) == 2);

  st = sf_scenario_load("capi_scratch/does_not_exist.json", &sc);
  CHECK(st == SF_IO_ERROR);
  CHECK(sc == nullptr);
  CHECK(std::strlen(sf_last_error()) > 0);
}

TEST_CASE("a scenario runs end to end through the C surface") {
  sf_scenario* sc = nullptr;
  REQUIRE(sf_scenario_parse(kGenLinear, &sc) == SF_OK);
  REQUIRE(sc != nullptr);
  CHECK(std::string(sf_last_error()).empty());
  CHECK(std::string(sf_scenario_name(sc)) == "capi_gen");
  CHECK(std::string(sf_scenario_command(sc)) == "generator");
  CHECK(sf_scenario_pass(sc) == -1);  // not run yet
  CHECK(sf_scenario_set_seed(sc, 1) == SF_OK);
  CHECK(sf_scenario_set_tolerance(sc, 1e-9) == SF_OK);

  std::string dir = scratch("gen");
  REQUIRE(sf_scenario_run(sc, dir.c_str(), "both") == SF_OK);
  CHECK(sf_scenario_pass(sc) == 1);
  REQUIRE(sf_scenario_file_count(sc) == 3);
  for (int i = 0; i < 3; ++i) {
    const char* f = sf_scenario_file(sc, i);
    REQUIRE(f != nullptr);
    CHECK(fs::exists(f));
  }
  CHECK(sf_scenario_file(sc, 3) == nullptr);
  CHECK(sf_scenario_file(sc, -1) == nullptr);
  REQUIRE(sf_scenario_summary_count(sc) == 1);
  CHECK(std::string(sf_scenario_summary(sc, 0)).find("generator: converged") == 0);
  sf_scenario_free(sc);
}

TEST_CASE("pipeline failures map to exit class 4") {
  sf_scenario* sc = nullptr;
  REQUIRE(sf_scenario_parse(kStraddle, &sc) == SF_OK);
  std::string dir = scratch("straddle");
  sf_status st = sf_scenario_run(sc, dir.c_str(), "both");
  CHECK(st == SF_NO_DELTA1);
  CHECK(sf_exit_code(st) == 4);
  CHECK(std::string(sf_last_error()).find("smallness") != std::string::npos);
  sf_scenario_free(sc);
}

TEST_CASE("bad run arguments map to exit class 2") {
  sf_scenario* sc = nullptr;
  REQUIRE(sf_scenario_parse(kGenLinear, &sc) == SF_OK);
  CHECK(sf_scenario_run(sc, "capi_scratch/fmt", "yaml") == SF_CONFIG_ERROR);
  CHECK(sf_scenario_set_tolerance(sc, -1.0) == SF_BAD_PARAMETER);
  sf_scenario_free(sc);
}

TEST_CASE("builtin scenarios round-trip through parse") {
  const char* text = sf_builtin_scenario("piecewise_corner");
  REQUIRE(text != nullptr);
  sf_scenario* sc = nullptr;
  REQUIRE(sf_scenario_parse(text, &sc) == SF_OK);
  CHECK(std::string(sf_scenario_command(sc)) == "example");
  sf_scenario_free(sc);
  CHECK(sf_builtin_scenario("nope") == nullptr);
  CHECK(sf_builtin_scenario(nullptr) == nullptr);
}

TEST_CASE("load reads a scenario from disk") {
  fs::create_directories("capi_scratch");
  {
    FILE* f = fopen("capi_scratch/gen.json", "wb");
    REQUIRE(f != nullptr);
    fwrite(kGenLinear, 1, std::strlen(kGenLinear), f);
    fclose(f);
  }
  sf_scenario* sc = nullptr;
  REQUIRE(sf_scenario_load("capi_scratch/gen.json", &sc) == SF_OK);
  CHECK(std::string(sf_scenario_name(sc)) == "capi_gen");
  sf_scenario_free(sc);
}
