#include "semiflow/semiflow.h"

#include <string>

#include "core/io/scenario.hpp"
#include "core/io/serialize.hpp"
#include "core/support/error.hpp"

using semiflow::Error;
using semiflow::ErrorCode;

struct sf_scenario {
  semiflow::Scenario scenario;
  semiflow::ScenarioResult result;
  bool ran = false;
};

namespace {

thread_local std::string g_last_error;

sf_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadParameter: return SF_BAD_PARAMETER;
    case ErrorCode::OutsideDomain: return SF_OUTSIDE_DOMAIN;
    case ErrorCode::MarginViolation: return SF_MARGIN_VIOLATION;
    case ErrorCode::EmptySample: return SF_EMPTY_SAMPLE;
    case ErrorCode::CurveExitsDomain: return SF_CURVE_EXITS_DOMAIN;
    case ErrorCode::Unreachable: return SF_UNREACHABLE;
    case ErrorCode::Unsupported: return SF_UNSUPPORTED;
    case ErrorCode::TrajectoryEscape: return SF_TRAJECTORY_ESCAPE;
    case ErrorCode::StiffnessFailure: return SF_STIFFNESS_FAILURE;
    case ErrorCode::DegeneratePair: return SF_DEGENERATE_PAIR;
    case ErrorCode::ContractViolation: return SF_CONTRACT_VIOLATION;
    case ErrorCode::HypothesisNotMet: return SF_HYPOTHESIS_NOT_MET;
    case ErrorCode::NoDelta1: return SF_NO_DELTA1;
    case ErrorCode::Diverging: return SF_DIVERGING;
    case ErrorCode::ConfigError: return SF_CONFIG_ERROR;
    case ErrorCode::IoError: return SF_IO_ERROR;
    case ErrorCode::Internal: return SF_INTERNAL;
  }
  return SF_INTERNAL;
}

sf_status fail_status(sf_status st, const std::string& message) {
  g_last_error = message;
  return st;
}

// Runs fn inside the exception fence shared by every entry point.
template <typename Fn>
sf_status guarded(Fn&& fn) {
  try {
    sf_status st = fn();
    if (st == SF_OK) g_last_error.clear();
    return st;
  } catch (const Error& e) {
    return fail_status(status_of(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail_status(SF_INTERNAL, e.what());
  } catch (...) {
    return fail_status(SF_INTERNAL, "unknown failure");
  }
}

}  // namespace

extern "C" {

const char* sf_version(void) { return semiflow::tool_version(); }

const char* sf_status_name(sf_status status) {
  if (status == SF_OK) return "OK";
  switch (status) {
    case SF_BAD_PARAMETER: return semiflow::error_code_name(ErrorCode::BadParameter);
    case SF_OUTSIDE_DOMAIN: return semiflow::error_code_name(ErrorCode::OutsideDomain);
    case SF_MARGIN_VIOLATION: return semiflow::error_code_name(ErrorCode::MarginViolation);
    case SF_EMPTY_SAMPLE: return semiflow::error_code_name(ErrorCode::EmptySample);
    case SF_CURVE_EXITS_DOMAIN: return semiflow::error_code_name(ErrorCode::CurveExitsDomain);
    case SF_UNREACHABLE: return semiflow::error_code_name(ErrorCode::Unreachable);
    case SF_UNSUPPORTED: return semiflow::error_code_name(ErrorCode::Unsupported);
    case SF_TRAJECTORY_ESCAPE: return semiflow::error_code_name(ErrorCode::TrajectoryEscape);
    case SF_STIFFNESS_FAILURE: return semiflow::error_code_name(ErrorCode::StiffnessFailure);
    case SF_DEGENERATE_PAIR: return semiflow::error_code_name(ErrorCode::DegeneratePair);
    case SF_CONTRACT_VIOLATION: return semiflow::error_code_name(ErrorCode::ContractViolation);
    case SF_HYPOTHESIS_NOT_MET: return semiflow::error_code_name(ErrorCode::HypothesisNotMet);
    case SF_NO_DELTA1: return semiflow::error_code_name(ErrorCode::NoDelta1);
    case SF_DIVERGING: return semiflow::error_code_name(ErrorCode::Diverging);
    case SF_CONFIG_ERROR: return semiflow::error_code_name(ErrorCode::ConfigError);
    case SF_IO_ERROR: return semiflow::error_code_name(ErrorCode::IoError);
    default: return semiflow::error_code_name(ErrorCode::Internal);
  }
}

int sf_exit_code(sf_status status) {
  switch (status) {
    case SF_OK:
      return 0;
    case SF_BAD_PARAMETER:
    case SF_OUTSIDE_DOMAIN:
    case SF_MARGIN_VIOLATION:
    case SF_EMPTY_SAMPLE:
    case SF_CONFIG_ERROR:
      return 2;
    case SF_HYPOTHESIS_NOT_MET:
    case SF_NO_DELTA1:
    case SF_DIVERGING:
      return 4;
    default:
      return 3;
  }
}

const char* sf_last_error(void) { return g_last_error.c_str(); }

const char* sf_builtin_scenario(const char* name) {
  if (!name) return nullptr;
  return semiflow::builtin_scenario(name);
}

sf_status sf_scenario_parse(const char* json_text, sf_scenario** out) {
  if (out) *out = nullptr;
  return guarded([&]() -> sf_status {
    if (!json_text || !out)
      return fail_status(SF_BAD_PARAMETER,
                         "sf_scenario_parse needs text and an out pointer");
    auto sc = new sf_scenario;
    try {
      sc->scenario = semiflow::parse_scenario(json_text);
    } catch (...) {
      delete sc;
      throw;
    }
    *out = sc;
    return SF_OK;
  });
}

sf_status sf_scenario_load(const char* path, sf_scenario** out) {
  if (out) *out = nullptr;
  return guarded([&]() -> sf_status {
    if (!path || !out)
      return fail_status(SF_BAD_PARAMETER,
                         "sf_scenario_load needs a path and an out pointer");
    std::string text = semiflow::read_text_file(path);
    return sf_scenario_parse(text.c_str(), out);
  });
}

void sf_scenario_free(sf_scenario* sc) { delete sc; }

sf_status sf_scenario_set_seed(sf_scenario* sc, unsigned long long seed) {
  return guarded([&]() -> sf_status {
    if (!sc) return fail_status(SF_BAD_PARAMETER, "null scenario handle");
    semiflow::scenario_set_seed(sc->scenario, seed);
    return SF_OK;
  });
}

sf_status sf_scenario_set_tolerance(sf_scenario* sc, double tolerance) {
  return guarded([&]() -> sf_status {
    if (!sc) return fail_status(SF_BAD_PARAMETER, "null scenario handle");
    semiflow::scenario_set_tolerance(sc->scenario, tolerance);
    return SF_OK;
  });
}

sf_status sf_scenario_run(sf_scenario* sc, const char* out_dir,
                          const char* format) {
  return guarded([&]() -> sf_status {
    if (!sc) return fail_status(SF_BAD_PARAMETER, "null scenario handle");
    sc->result = semiflow::run_scenario(sc->scenario,
                                        out_dir ? out_dir : ".",
                                        format ? format : "both");
    sc->ran = true;
    return SF_OK;
  });
}

int sf_scenario_pass(const sf_scenario* sc) {
  if (!sc || !sc->ran) return -1;
  return sc->result.pass ? 1 : 0;
}

int sf_scenario_file_count(const sf_scenario* sc) {
  return sc && sc->ran ? static_cast<int>(sc->result.files.size()) : 0;
}

const char* sf_scenario_file(const sf_scenario* sc, int i) {
  if (!sc || !sc->ran || i < 0 ||
      i >= static_cast<int>(sc->result.files.size()))
    return nullptr;
  return sc->result.files[static_cast<size_t>(i)].c_str();
}

int sf_scenario_summary_count(const sf_scenario* sc) {
  return sc && sc->ran ? static_cast<int>(sc->result.summary.size()) : 0;
}

const char* sf_scenario_summary(const sf_scenario* sc, int i) {
  if (!sc || !sc->ran || i < 0 ||
      i >= static_cast<int>(sc->result.summary.size()))
    return nullptr;
  return sc->result.summary[static_cast<size_t>(i)].c_str();
}

const char* sf_scenario_name(const sf_scenario* sc) {
  return sc ? sc->scenario.name.c_str() : nullptr;
}

const char* sf_scenario_command(const sf_scenario* sc) {
  return sc ? sc->scenario.command.c_str() : nullptr;
}

}  // extern "C"
