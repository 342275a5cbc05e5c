#pragma once

#include <map>
#include <string>
#include <vector>

#include "core/geometry/path.hpp"
#include "core/models/family.hpp"
#include "core/moduli/moduli.hpp"

namespace semiflow {

// One tested inequality instance. t is 0 for time-free statements.
struct InequalityPoint {
  Vec x;
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
};

// pass holds iff every margin >= -tolerance. ell echoes the sampled
// modulus the right-hand sides were built from; being a sampled lower
// bound, a pass is evidence and a fail is a refutation of the sampled
// instance.
struct InequalityReport {
  std::string statement_id;
  std::vector<InequalityPoint> per_point;
  bool pass = false;
  double tolerance = 0.0;
  double ell = 0.0;
  std::map<std::string, std::string> inputs_echo;
};

struct C1Map {
  MapFn f;
  std::function<Mat(const Vec&)> jac;  // optional; finite differences otherwise
  std::string name = "map";
};

struct GeneratorCertificate {
  double mu = 0.0;
  double delta1 = 0.0;
  double epsilon = 0.0;
  double L = 0.0;      // 2 mu / ((1 - mu) delta1)
  double bound = 0.0;  // 6 epsilon L
};

struct GeneratorEstimate {
  std::vector<Vec> points;
  std::vector<Vec> f_values;        // difference quotients at the last time
  std::vector<double> t_schedule;   // times actually marched, decreasing
  std::vector<double> gaps;         // sup gap between consecutive times
  double cauchy_gap = 0.0;          // last entry of gaps
  GeneratorCertificate certificate;
  bool converged = false;
};

struct Corner {
  double t_corner = 0.0;
  Vec left_slope;
  Vec right_slope;
};

// (F_t(x) - x) / t. t must be positive.
Vec difference_quotient(const SemigroupFamily& fam, double t, const Vec& x);

// Geometric grid t_max, t_max/2, ... down to the floor, decreasing.
std::vector<double> generator_schedule(double t_max = 1.0, double floor = 1e-7);

// Telescoped iterate bound: per point x,
//   lhs = ||x - phi^p(x) - p (x - phi(x))||,
//   rhs = (p - 1) ell ||x - phi(x)||,
// with ell the largest sampled quotient of phi^k - Id over the pair set
// (k = 1..p). The orbit pairs (x, phi(x)) join the pair set, since they
// are exactly the pairs the telescoping argument consumes. Hypotheses
// checked: iterates of sample points and pair partners stay in the
// domain, and sup ||x - phi(x)|| <= mu; violations raise HypothesisNotMet
// naming the hypothesis and a witness.
InequalityReport verify_lemma_iterates(const MapFn& phi, const Subset& d_hat,
                                       const Domain& d, double mu, int p,
                                       const SampleSet& sample,
                                       double tolerance);

// Same telescope through the family at times k t0: per point,
//   lhs = ||f_{p t0}(x) - f_{t0}(x)||,
//   rhs = ((p-1)/p) ell ||f_{t0}(x)||,
// ell sampled from the maps F_{k t0} - Id. Hypothesis sup ||F_t0 - Id||
// <= mu on d_hat; HypothesisNotMet otherwise.
InequalityReport verify_corollary_quotients(const SemigroupFamily& fam,
                                            double t0, int p,
                                            const Subset& d_hat, double mu,
                                            const SampleSet& sample,
                                            double tolerance);

// Derivative route: ell = sup ||Id - phi'|| over an internal dense sample
// of d_hat inflated by mu; every pair quotient of phi - Id must stay
// within ell + tolerance. The last row carries the refined pair scan.
InequalityReport verify_lemma_derivative(const C1Map& phi, const Subset& d_hat,
                                         const Domain& d, double mu,
                                         const SampleSet& sample,
                                         double tolerance,
                                         double fd_step = 1e-5);

// Transfer of t-continuity through a finite-path-length certificate:
// for each grid t, eps_t = max(sup over the sample of ||F_t' - F_t0'||
// on cert.d2, ||F_t(x1) - F_t0(x1)|| at the anchor x1 = first sample
// point), and every sample point lying in d1 must satisfy
//   ||F_t(x) - F_t0(x)|| <= (L + 1) eps_t + tolerance,
// L = cert.length_bound. Unsupported when the certificate is refuted.
InequalityReport verify_transfer_estimate(const SemigroupFamily& fam,
                                          const Subset& d1,
                                          const PathCertificate& cert,
                                          double t0,
                                          const std::vector<double>& t_grid,
                                          const SampleSet& sample,
                                          double tolerance);

// Cauchy-net extraction of the infinitesimal generator.
//   1. delta1 = largest schedule time with sup ||F_t - Id|| < mu on the
//      mu-inflation of d_hat and sampled Lip_{d_hat,mu}(F_t - Id) < mu;
//      NoDelta1 if the schedule has none.
//   2. L = 2 mu / ((1 - mu) delta1), bound = 6 epsilon L.
//   3. March the schedule below delta1; stop once three consecutive sup
//      gaps sit below min(bound, gap_floor). A gap 4x above the running
//      minimum while still above the bound raises Diverging.
// converged additionally requires ||f|| <= L on every sample point.
GeneratorEstimate estimate_generator(const SemigroupFamily& fam,
                                     const Subset& d_hat, double mu,
                                     double epsilon,
                                     const std::vector<double>& t_schedule,
                                     const SampleSet& sample,
                                     double gap_floor = 1e-6);

// Residual of du/dt = f(u) along t -> F_t(x):
//   ||(F_{t+step}(x) - F_{t-step}(x)) / (2 step) - f(F_t(x))||,
// using the family's centered difference hook when present. Also insists
// F_0(x) = x.
ModulusReport cauchy_problem_residual(const SemigroupFamily& fam,
                                      const VectorField& f, const Vec& x,
                                      const std::vector<double>& t_grid,
                                      double step);

// Scans secant slopes of t -> F_t(x) over the grid for jumps above the
// threshold, then localizes each by maximizing the second difference at
// scale `step` (corner time lands within 2 step of the true kink) and
// reports one-sided slopes from centered quotients extrapolated to the
// corner. Candidates whose one-sided slopes agree within the threshold
// are curvature artifacts of the grid and are dropped, so corners with a
// slope gap below the threshold go unreported. Smooth trajectories yield
// an empty list. The grid must start at or above 5 step.
std::vector<Corner> detect_corners(const SemigroupFamily& fam, const Vec& x,
                                   const std::vector<double>& t_grid,
                                   double step,
                                   double jump_threshold = 1e-3);

}  // namespace semiflow
