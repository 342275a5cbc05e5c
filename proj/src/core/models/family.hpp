#pragma once

#include <functional>
#include <map>
#include <string>

#include "core/geometry/domain.hpp"
#include "core/models/integrate.hpp"

namespace semiflow {

enum class FamilyKind { ClosedForm, MatrixExponential, FlowGenerated, IterateExtended };

const char* family_kind_name(FamilyKind k);

// One-parameter family F_t on a domain. eval_fn must satisfy F_0 = Id; the
// semigroup law is a property to be checked, not assumed. deriv_fn (the
// space derivative F_t') is optional, as is centered_tdiff, a cancellation
// free evaluation of F_{t+h}(x) - F_{t-h}(x) used by difference quotients.
struct SemigroupFamily {
  Domain domain;
  FamilyKind kind = FamilyKind::ClosedForm;
  std::string name;
  std::map<std::string, double> params;
  std::function<Vec(double, const Vec&)> eval_fn;
  std::function<Mat(double, const Vec&)> deriv_fn;
  std::function<Vec(double, double, const Vec&)> centered_tdiff;
  double eval_tolerance = 0.0;  // 0 for exact closed forms

  bool has_derivative() const { return static_cast<bool>(deriv_fn); }
};

struct VectorField {
  std::function<Vec(const Vec&)> f;
  std::function<Mat(const Vec&)> jacobian;  // optional
  double lipschitz_hint = 0.0;              // 0 when unknown
  std::string name;
};

// F_t(x) with domain checks. The point must be interior; for closed-form
// kinds the image is checked at the endpoint, flow kinds check every
// accepted integrator step. Errors: OutsideDomain, TrajectoryEscape.
Vec evaluate(const SemigroupFamily& fam, double t, const Vec& x);

// phi^k(x) with every intermediate image required interior; the failing
// iteration index is reported on escape.
Vec iterate(const std::function<Vec(const Vec&)>& phi, int k, Vec x,
            const Domain& d);

}  // namespace semiflow
