#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "core/io/expr.hpp"
#include "core/io/scenario.hpp"
#include "core/io/serialize.hpp"
#include "core/support/error.hpp"

using namespace semiflow;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(const std::function<void()>& op) {
  try {
    op();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Internal;
}

std::string message_of(const std::function<void()>& op) {
  try {
    op();
  } catch (const Error& e) {
    return e.what();
  }
  FAIL("expected an Error");
  return "";
}

// Fresh scratch directory under the test's working directory.
std::string scratch(const std::string& tag) {
  std::string dir = "io_scratch/" + tag;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("expressions evaluate with the usual precedence") {
  CHECK(Expr::parse("1 + 2 * 3").eval({}) == 7.0);
  CHECK(Expr::parse("(1 + 2) * 3").eval({}) == 9.0);
  CHECK(Expr::parse("2 ^ 3 ^ 2").eval({}) == 512.0);  // right associative
  CHECK(Expr::parse("-2 ^ 2").eval({}) == -4.0);      // unary binds last
  CHECK(Expr::parse("2 ^ -2").eval({}) == 0.25);
  CHECK(Expr::parse("6 / 3 / 2").eval({}) == 1.0);
  CHECK(Expr::parse("1 - 2 - 3").eval({}) == -4.0);
  CHECK(Expr::parse("abs(-1.5)").eval({}) == 1.5);
  CHECK(Expr::parse("exp(0)").eval({}) == 1.0);
  CHECK(Expr::parse("sin(0) + cos(0)").eval({}) == 1.0);
  CHECK(Expr::parse("2e-3 + 1.5E2").eval({}) == doctest::Approx(150.002));
}

TEST_CASE("expressions read coordinates") {
  Expr e = Expr::parse("-x^3");
  CHECK(e.eval({0.5}) == -0.125);
  CHECK(e.max_coord() == 1);

  Expr rot = Expr::parse("0.5 * y - x2");  // y aliases x2
  CHECK(rot.eval({3.0, 2.0}) == doctest::Approx(-1.0));
  CHECK(rot.max_coord() == 2);

  Expr high = Expr::parse("x11");
  CHECK(high.max_coord() == 11);
  Vec p(11, 0.0);
  p[10] = 4.5;
  CHECK(high.eval(p) == 4.5);

  CHECK(code_of([] { Expr::parse("x1").eval({}); }) == ErrorCode::BadParameter);
}

TEST_CASE("expression parse errors carry positions") {
  CHECK(code_of([] { Expr::parse("1 +"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { Expr::parse("sin 1"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { Expr::parse("(1 + 2"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { Expr::parse("foo(1)"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { Expr::parse("x0"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { Expr::parse(""); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { Expr::parse("1 $ 2"); }) == ErrorCode::ConfigError);
  std::string msg = message_of([] { Expr::parse("2 * @"); });
  CHECK(msg.find("position 5") != std::string::npos);
}

TEST_CASE("csv fields quote per RFC 4180") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(csv_row({"a", "1,2", "c"}) == "a,\"1,2\",c\n");
}

TEST_CASE("scenario parsing accumulates precise errors") {
  std::string bad = R"json({
    "name": "bad one",
    "command": "generator",
    "domain": {"shape": "interval", "lo": -2.0, "hi": 2.0},
    "subset": {"shape": "box", "lo": [-1.0], "hi": [1.0]},
    "mu": 1.5,
    "family": {"name": "linear", "matrix": [[-1.0], [0.0]]},
    "sample": {"points": 0, "strtegy": "grid"}
  })json";
  std::string msg = message_of([&] { parse_scenario(bad); });
  CHECK(msg.find("name:") != std::string::npos);
  CHECK(msg.find("mu:") != std::string::npos);
  CHECK(msg.find("family.matrix:") != std::string::npos);
  CHECK(msg.find("sample.points:") != std::string::npos);
  CHECK(msg.find("sample.strtegy: unknown key") != std::string::npos);
}

TEST_CASE("scenario parsing reports the failing line on bad JSON") {
  std::string text = "{\n  \"name\": \"x\",\n  \"command\" \"check\"\n}";
  std::string msg = message_of([&] { parse_scenario(text); });
  CHECK(msg.find("line 3") != std::string::npos);

  CHECK(code_of([] { parse_scenario("[1, 2]"); }) == ErrorCode::ConfigError);
}

TEST_CASE("scenario parsing echoes applied defaults") {
  std::string text = R"json({
    "name": "gen",
    "command": "generator",
    "domain": {"shape": "interval", "lo": -2.0, "hi": 2.0},
    "subset": {"shape": "box", "lo": [-1.0], "hi": [1.0]},
    "mu": 0.25,
    "family": {"name": "linear", "matrix": [[-1.0]]}
  })json";
  Scenario s = parse_scenario(text);
  CHECK(s.resolved["sample"]["strategy"] == "grid");
  CHECK(s.resolved["sample"]["points"] == 25);
  CHECK(s.resolved["sample"]["pairs"] == 50);
  CHECK(s.resolved["sample"]["seed"] == 1);
  CHECK(s.resolved["generator"]["epsilon"] == 1e-3);
  CHECK(s.resolved["generator"]["t_max"] == 1.0);
  CHECK(s.resolved["generator"]["floor"] == 1e-7);
  CHECK(s.resolved["generator"]["gap_floor"] == 1e-6);
  CHECK(s.resolved["tolerance"] == 1e-9);
  CHECK(s.resolved["mu"] == 0.25);

  scenario_set_seed(s, 7);
  scenario_set_tolerance(s, 1e-8);
  CHECK(s.resolved["sample"]["seed"] == 7);
  CHECK(s.resolved["tolerance"] == 1e-8);
  CHECK(s.seed == 7);
  CHECK(s.tolerance == 1e-8);
}

TEST_CASE("scenario parsing rejects conflicting domains and stray keys") {
  std::string own = R"json({
    "name": "pw",
    "command": "generator",
    "domain": {"shape": "interval", "lo": -1.0, "hi": 1.0},
    "subset": {"shape": "box", "lo": [-0.25], "hi": [0.25]},
    "mu": 0.25,
    "family": {"name": "piecewise_decay"}
  })json";
  std::string msg = message_of([&] { parse_scenario(own); });
  CHECK(msg.find("brings its own domain") != std::string::npos);

  std::string stray = R"json({
    "name": "pw",
    "command": "generator",
    "subset": {"shape": "box", "lo": [-0.25], "hi": [0.25]},
    "mu": 0.25,
    "family": {"name": "piecewise_decay"},
    "checks": []
  })json";
  msg = message_of([&] { parse_scenario(stray); });
  CHECK(msg.find("checks: unknown key") != std::string::npos);
}

TEST_CASE("scenario parsing validates field expressions") {
  std::string text = R"json({
    "name": "flow",
    "command": "generator",
    "domain": {"shape": "interval", "lo": -1.0, "hi": 1.0},
    "subset": {"shape": "box", "lo": [-0.5], "hi": [0.5]},
    "mu": 0.25,
    "family": {"field": ["-x^3", "y"]}
  })json";
  std::string msg = message_of([&] { parse_scenario(text); });
  CHECK(msg.find("family.field") != std::string::npos);

  std::string badexpr = R"json({
    "name": "flow",
    "command": "generator",
    "domain": {"shape": "interval", "lo": -1.0, "hi": 1.0},
    "subset": {"shape": "box", "lo": [-0.5], "hi": [0.5]},
    "mu": 0.25,
    "family": {"field": ["-x^"]}
  })json";
  msg = message_of([&] { parse_scenario(badexpr); });
  CHECK(msg.find("family.field[0]") != std::string::npos);
}

TEST_CASE("generator scenario runs and replays byte for byte") {
  std::string text = R"json({
    "name": "gen_linear",
    "command": "generator",
    "domain": {"shape": "interval", "lo": -2.0, "hi": 2.0},
    "subset": {"shape": "box", "lo": [-0.5], "hi": [0.5]},
    "mu": 0.25,
    "family": {"name": "linear", "matrix": [[-1.0]]},
    "sample": {"points": 9, "pairs": 36, "seed": 1}
  })json";
  Scenario s = parse_scenario(text);
  std::string d1 = scratch("gen1"), d2 = scratch("gen2");
  ScenarioResult r1 = run_scenario(s, d1, "both");
  CHECK(r1.pass);
  REQUIRE(r1.files.size() == 3);
  CHECK(r1.files[0] == d1 + "/gen_linear_estimate.json");
  CHECK(r1.files[1] == d1 + "/gen_linear_fvalues.csv");
  CHECK(r1.files[2] == d1 + "/gen_linear_gaps.csv");
  REQUIRE(r1.summary.size() == 1);
  CHECK(r1.summary[0].find("generator: converged") == 0);

  Json doc = Json::parse(read_text_file(r1.files[0]));
  CHECK(doc["tool"] == "semiflow");
  CHECK(doc["kind"] == "generator_estimate");
  CHECK(doc["config"]["mu"] == 0.25);
  CHECK(doc["report"]["converged"] == true);
  CHECK(doc["report"]["certificate"]["delta1"] == 0.25);
  CHECK(doc["report"]["certificate"]["L"].get<double>() ==
        doctest::Approx(8.0 / 3.0).epsilon(1e-12));

  // replay from a fresh parse of the same text
  Scenario s2 = parse_scenario(text);
  ScenarioResult r2 = run_scenario(s2, d2, "both");
  REQUIRE(r2.files.size() == 3);
  for (size_t i = 0; i < 3; ++i)
    CHECK(read_text_file(r1.files[i]) == read_text_file(r2.files[i]));

  std::string csv = read_text_file(r1.files[1]);
  CHECK(csv.find("# semiflow") == 0);
  CHECK(csv.find("x1,f1") != std::string::npos);
}

TEST_CASE("format selects the artifact set") {
  std::string text = R"json({
    "name": "fmt",
    "command": "generator",
    "domain": {"shape": "interval", "lo": -2.0, "hi": 2.0},
    "subset": {"shape": "box", "lo": [-0.5], "hi": [0.5]},
    "mu": 0.25,
    "family": {"name": "linear", "matrix": [[-1.0]]},
    "sample": {"points": 9, "pairs": 36, "seed": 1}
  })json";
  Scenario s = parse_scenario(text);
  ScenarioResult csv_only = run_scenario(s, scratch("fmt_csv"), "csv");
  CHECK(csv_only.files.size() == 2);
  ScenarioResult json_only = run_scenario(s, scratch("fmt_json"), "json");
  CHECK(json_only.files.size() == 1);
  CHECK(code_of([&] { run_scenario(s, scratch("fmt_bad"), "yaml"); }) ==
        ErrorCode::ConfigError);
}

TEST_CASE("check scenario passes the law and flags the straddle") {
  std::string text = R"json({
    "name": "pw_checks",
    "command": "check",
    "subset": {"shape": "box", "lo": [0.4], "hi": [0.6]},
    "mu": 0.1,
    "family": {"name": "piecewise_decay"},
    "sample": {"points": 41, "pairs": 120, "seed": 3},
    "t_grid": {"start": 1e-4, "stop": 0.1, "count": 10},
    "checks": [
      {"kind": "semigroup_law", "s_values": [0.1, 0.5], "t_values": [0.2]},
      {"kind": "t_continuity", "threshold": 1e-3},
      {"kind": "t_lipschitz", "threshold": 0.2}
    ]
  })json";
  Scenario s = parse_scenario(text);
  ScenarioResult r = run_scenario(s, scratch("checks"), "both");
  CHECK_FALSE(r.pass);  // the straddling window is not t-lipschitzian
  REQUIRE(r.summary.size() == 3);
  CHECK(r.summary[0].find("semigroup_law: pass") == 0);
  CHECK(r.summary[1].find("t_continuity: pass") == 0);
  CHECK(r.summary[2].find("t_lipschitz: fail") == 0);
  CHECK(r.summary[2].find("witness") != std::string::npos);
  CHECK(r.files.size() == 6);

  Json law = Json::parse(read_text_file(r.files[1]));
  CHECK(law["kind"] == "law_residuals");
  CHECK(law["report"]["max_residual"].get<double>() <= 1e-12);
  CHECK(law["report"]["rows"].size() == 2);
}

TEST_CASE("informational checks never fail the scenario") {
  std::string text = R"json({
    "name": "pw_info",
    "command": "check",
    "subset": {"shape": "box", "lo": [0.4], "hi": [0.6]},
    "mu": 0.1,
    "family": {"name": "piecewise_decay"},
    "sample": {"points": 11, "pairs": 40, "seed": 3},
    "t_grid": {"list": [0.05, 0.1]},
    "checks": [{"kind": "t_lipschitz"}]
  })json";
  Scenario s = parse_scenario(text);
  ScenarioResult r = run_scenario(s, scratch("info"), "csv");
  CHECK(r.pass);
  CHECK(r.summary[0].find("t_lipschitz: recorded") == 0);
}

TEST_CASE("lemma scenarios run all four statements") {
  std::string iter = R"json({
    "name": "lem_iter",
    "command": "lemma",
    "domain": {"shape": "interval", "lo": -2.0, "hi": 2.0},
    "subset": {"shape": "box", "lo": [-0.7], "hi": [0.7]},
    "mu": 0.4,
    "sample": {"points": 9, "pairs": 18, "seed": 1},
    "lemma": {"which": "iterates", "p": 3, "map": ["0.9 * x"]}
  })json";
  Scenario s = parse_scenario(iter);
  ScenarioResult r = run_scenario(s, scratch("lem_iter"), "both");
  CHECK(r.pass);
  CHECK(r.summary[0].find("iterates: pass") == 0);

  std::string coro = R"json({
    "name": "lem_coro",
    "command": "lemma",
    "domain": {"shape": "interval", "lo": -2.0, "hi": 2.0},
    "subset": {"shape": "box", "lo": [-1.0], "hi": [1.0]},
    "mu": 0.11,
    "family": {"name": "linear", "matrix": [[-1.0]]},
    "sample": {"points": 9, "pairs": 18, "seed": 1},
    "lemma": {"which": "corollary", "p": 3, "t0": 0.1}
  })json";
  Scenario sc = parse_scenario(coro);
  ScenarioResult rc = run_scenario(sc, scratch("lem_coro"), "both");
  CHECK(rc.pass);
  Json doc = Json::parse(read_text_file(rc.files.back()));
  CHECK(doc["report"]["ell"].get<double>() ==
        doctest::Approx(1.0 - std::exp(-0.3)).epsilon(1e-6));

  std::string deriv = R"json({
    "name": "lem_deriv",
    "command": "lemma",
    "domain": {"shape": "interval", "lo": -2.0, "hi": 2.0},
    "subset": {"shape": "box", "lo": [-0.7], "hi": [0.7]},
    "mu": 0.1,
    "sample": {"points": 9, "pairs": 18, "seed": 1},
    "lemma": {"which": "derivative", "map": ["x + 0.1 * sin(x)"]}
  })json";
  Scenario sd = parse_scenario(deriv);
  ScenarioResult rd = run_scenario(sd, scratch("lem_deriv"), "both");
  CHECK(rd.pass);
  Json ddoc = Json::parse(read_text_file(rd.files.back()));
  CHECK(ddoc["report"]["ell"].get<double>() == doctest::Approx(0.1).epsilon(1e-4));

  std::string xfer = R"json({
    "name": "lem_xfer",
    "command": "lemma",
    "domain": {"shape": "interval", "lo": -1.0, "hi": 1.0},
    "family": {"name": "linear", "matrix": [[-1.0]]},
    "sample": {"points": 9, "seed": 1},
    "t_grid": {"list": [0.2, 0.3]},
    "lemma": {"which": "transfer", "t0": 0.1,
              "d1": {"shape": "box", "lo": [-0.5], "hi": [0.5]}}
  })json";
  Scenario sx = parse_scenario(xfer);
  ScenarioResult rx = run_scenario(sx, scratch("lem_xfer"), "both");
  CHECK(rx.pass);
  REQUIRE(rx.files.size() == 3);  // certificate + csv + json
  Json xdoc = Json::parse(read_text_file(rx.files[2]));
  CHECK(xdoc["report"]["rows"].size() == 18);
  Json cdoc = Json::parse(read_text_file(rx.files[0]));
  CHECK(cdoc["kind"] == "path_certificate");
  CHECK(cdoc["report"]["refuted"] == false);
}

TEST_CASE("pipeline failures surface with their own codes") {
  std::string straddle = R"json({
    "name": "gen_straddle",
    "command": "generator",
    "subset": {"shape": "box", "lo": [0.4], "hi": [0.6]},
    "mu": 0.25,
    "family": {"name": "piecewise_decay"},
    "sample": {"points": 9, "pairs": 162, "seed": 1}
  })json";
  Scenario s = parse_scenario(straddle);
  CHECK(code_of([&] { run_scenario(s, scratch("straddle"), "both"); }) ==
        ErrorCode::NoDelta1);

  std::string broken = R"json({
    "name": "lem_broken",
    "command": "lemma",
    "domain": {"shape": "interval", "lo": -2.0, "hi": 2.0},
    "subset": {"shape": "box", "lo": [-0.7], "hi": [0.7]},
    "mu": 0.05,
    "family": {"name": "linear", "matrix": [[-1.0]]},
    "sample": {"points": 9, "pairs": 18, "seed": 1},
    "lemma": {"which": "corollary", "p": 3, "t0": 0.1}
  })json";
  Scenario sb = parse_scenario(broken);
  CHECK(code_of([&] { run_scenario(sb, scratch("broken"), "both"); }) ==
        ErrorCode::HypothesisNotMet);
}

TEST_CASE("corner example reproduces the seam table") {
  std::string text = R"json({
    "name": "corners",
    "command": "example",
    "example": {"name": "piecewise_corner", "x_values": [0.6, 0.8]}
  })json";
  Scenario s = parse_scenario(text);
  ScenarioResult r = run_scenario(s, scratch("corners"), "both");
  CHECK(r.pass);
  REQUIRE(r.files.size() == 2);
  Json doc = Json::parse(read_text_file(r.files[1]));
  REQUIRE(doc["report"]["rows"].size() == 2);
  const Json& row = doc["report"]["rows"][1];
  CHECK(row["x"] == 0.8);
  CHECK(row["corners"] == 1);
  CHECK(row["t_corner"].get<double>() ==
        doctest::Approx(std::log(1.6)).epsilon(2e-5));
  CHECK(row["left_slope"].get<double>() == doctest::Approx(-0.5).epsilon(1e-3));
  CHECK(row["right_slope"].get<double>() == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(doc["report"]["max_t_error"].get<double>() <= 2e-5);
}

TEST_CASE("path example certifies diverging lower bounds") {
  std::string text = R"json({
    "name": "paths",
    "command": "example",
    "example": {"name": "ellinf_paths", "n_min": 2, "n_max": 4}
  })json";
  Scenario s = parse_scenario(text);
  ScenarioResult r = run_scenario(s, scratch("paths"), "both");
  CHECK(r.pass);
  REQUIRE(r.files.size() == 3);  // bounds csv + json + witness polyline
  Json doc = Json::parse(read_text_file(r.files[1]));
  REQUIRE(doc["report"]["rows"].size() == 2 + 3 + 4);
  for (const Json& row : doc["report"]["rows"]) {
    CHECK(row["lower_bound"].get<double>() >=
          row["reference"].get<double>() - 1e-12);
    CHECK(row["witness_length"].get<double>() >=
          row["lower_bound"].get<double>() - 1e-9);
    CHECK(row["connected"] == true);
  }
  std::string poly = read_text_file(r.files[2]);
  CHECK(poly.find("node,x1,x2,x3,x4") != std::string::npos);
}

TEST_CASE("builtin scenarios parse") {
  REQUIRE(builtin_scenario("piecewise_corner") != nullptr);
  REQUIRE(builtin_scenario("ellinf_paths") != nullptr);
  CHECK(builtin_scenario("nope") == nullptr);
  Scenario a = parse_scenario(builtin_scenario("piecewise_corner"));
  CHECK(a.command == "example");
  CHECK(a.example.x_values.size() == 4);
  Scenario b = parse_scenario(builtin_scenario("ellinf_paths"));
  CHECK(b.example.n_max == 8);
  CHECK(b.example.a == 0.25);
}
