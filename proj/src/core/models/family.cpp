#include "core/models/family.hpp"

#include <string>

#include "core/support/error.hpp"
#include "core/support/numfmt.hpp"

namespace semiflow {

const char* family_kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::ClosedForm: return "closed_form";
    case FamilyKind::MatrixExponential: return "matrix_exponential";
    case FamilyKind::FlowGenerated: return "flow_generated";
    case FamilyKind::IterateExtended: return "iterate_extended";
  }
  return "?";
}

Vec evaluate(const SemigroupFamily& fam, double t, const Vec& x) {
  require(t >= 0.0, ErrorCode::BadParameter, "family time must be nonnegative");
  require(static_cast<int>(x.size()) == fam.domain.dim, ErrorCode::BadParameter,
          "evaluation point dimension mismatch");
  require(domain_contains(fam.domain, x), ErrorCode::OutsideDomain,
          "evaluation point outside the domain");
  Vec y = fam.eval_fn(t, x);
  require(domain_contains(fam.domain, y), ErrorCode::TrajectoryEscape,
          "trajectory left the domain by t=" + fmt_double(t));
  return y;
}

Vec iterate(const std::function<Vec(const Vec&)>& phi, int k, Vec x,
            const Domain& d) {
  require(k >= 1, ErrorCode::BadParameter, "iteration count must be positive");
  require(domain_contains(d, x), ErrorCode::OutsideDomain,
          "iteration start outside the domain");
  for (int i = 1; i <= k; ++i) {
    x = phi(x);
    require(domain_contains(d, x), ErrorCode::TrajectoryEscape,
            "iterate " + std::to_string(i) + " left the domain");
  }
  return x;
}

}  // namespace semiflow
