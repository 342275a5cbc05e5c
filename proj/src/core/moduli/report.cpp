#include "core/moduli/report.hpp"

#include <cmath>

#include "core/support/error.hpp"

namespace semiflow {

std::vector<double> default_t_grid(double t_max, int points) {
  require(t_max > 0.0 && points >= 1, ErrorCode::BadParameter,
          "grid needs t_max > 0 and at least one point");
  std::vector<double> grid(points);
  for (int k = 0; k < points; ++k)
    grid[k] = t_max * std::ldexp(1.0, -(points - 1 - k));
  return grid;
}

}  // namespace semiflow
