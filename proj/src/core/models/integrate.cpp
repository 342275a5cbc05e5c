#include "core/models/integrate.hpp"

#include <algorithm>
#include <cmath>

#include "core/support/error.hpp"
#include "core/support/numfmt.hpp"

namespace semiflow {

namespace {

constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187,
                 kA53 = 64448.0 / 6561, kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33,
                 kA63 = 46732.0 / 5247, kA64 = 49.0 / 176,
                 kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
// difference between the 5th- and 4th-order weights
constexpr double kE1 = kB1 - 5179.0 / 57600, kE3 = kB3 - 7571.0 / 16695,
                 kE4 = kB4 - 393.0 / 640, kE5 = kB5 + 92097.0 / 339200,
                 kE6 = kB6 - 187.0 / 2100, kE7 = -1.0 / 40;

Vec axpy(const Vec& y, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
  Vec out = y;
  for (auto& [c, k] : terms)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * c * (*k)[i];
  return out;
}

}  // namespace

Vec integrate_ode(const std::function<Vec(const Vec&)>& f, Vec y0,
                  double t_span, const IntegratorConfig& cfg,
                  const std::function<bool(const Vec&)>& inside) {
  require(t_span >= 0.0, ErrorCode::BadParameter, "time span must be nonnegative");
  if (t_span == 0.0) return y0;

  double t = 0.0;
  Vec y = std::move(y0);
  Vec k1 = f(y);
  double fn = norm_sup(k1);
  double h = std::min(t_span, 0.01 * (1.0 + norm_sup(y)) / (1.0 + fn));
  const double h_min = 1e-14 * std::max(1.0, t_span);

  for (long step = 0; step < cfg.max_steps;) {
    if (h < h_min)
      fail(ErrorCode::StiffnessFailure,
           "step size underflow at t=" + fmt_double(t));
    bool last = t + h >= t_span;
    if (last) h = t_span - t;

    Vec k2 = f(axpy(y, h, {{kA21, &k1}}));
    Vec k3 = f(axpy(y, h, {{kA31, &k1}, {kA32, &k2}}));
    Vec k4 = f(axpy(y, h, {{kA41, &k1}, {kA42, &k2}, {kA43, &k3}}));
    Vec k5 = f(axpy(y, h, {{kA51, &k1}, {kA52, &k2}, {kA53, &k3}, {kA54, &k4}}));
    Vec k6 = f(axpy(y, h,
                    {{kA61, &k1}, {kA62, &k2}, {kA63, &k3}, {kA64, &k4}, {kA65, &k5}}));
    Vec y5 = axpy(y, h, {{kB1, &k1}, {kB3, &k3}, {kB4, &k4}, {kB5, &k5}, {kB6, &k6}});
    Vec k7 = f(y5);

    double err = 0.0;
    double sc = cfg.abs_tol +
                cfg.rel_tol * std::max(norm_sup(y), norm_sup(y5));
    for (std::size_t i = 0; i < y.size(); ++i) {
      double e = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] +
                      kE6 * k6[i] + kE7 * k7[i]);
      err = std::max(err, std::abs(e));
    }
    double ratio = err / sc;

    if (ratio <= 1.0) {
      t += h;
      y = std::move(y5);
      k1 = std::move(k7);  // first-same-as-last
      ++step;
      if (!inside(y))
        fail(ErrorCode::TrajectoryEscape,
             "trajectory left the domain at t=" + fmt_double(t));
      if (last || t >= t_span) return y;
    }
    double grow = ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
    h *= std::clamp(grow, 0.2, 5.0);
    h = std::min(h, t_span - t + 1e-300);
  }
  fail(ErrorCode::StiffnessFailure, "integrator exceeded its step budget");
}

}  // namespace semiflow
