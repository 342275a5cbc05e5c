#pragma once

#include <string>
#include <vector>

#include "core/geometry/sample.hpp"

namespace semiflow {

// One estimated modulus value per grid time, with the witness that attained
// it. sampled_lower_bound values come from finite suprema and sit below the
// true modulus; derivative_certified_upper_bound values dominate it.
struct ModulusWitness {
  Vec x;
  Vec x_tilde;          // meaningful when has_pair
  bool has_pair = false;
  double value = 0.0;   // re-evaluating the witness reproduces this
};

struct ModulusReport {
  std::vector<double> t_grid;
  std::vector<double> values;
  std::vector<ModulusWitness> witnesses;
  std::string estimator_kind;  // "sampled_lower_bound" or
                               // "derivative_certified_upper_bound"
  SampleDescriptor sample_descriptor;
  double fd_step = 0.0;  // nonzero when finite differences were used
};

// Default geometric time grid t_max * 2^{-k}, finest first.
std::vector<double> default_t_grid(double t_max = 1.0, int points = 20);

}  // namespace semiflow
