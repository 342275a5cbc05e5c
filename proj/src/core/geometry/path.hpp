#pragma once

#include <vector>

#include "core/geometry/domain.hpp"
#include "core/geometry/subset.hpp"

namespace semiflow {

// Length of a polyline in the domain norm. Nodes must lie in the open
// domain. A segment whose endpoints share an open piece is inside by
// convexity; every other segment is probed at probe_spacing * its length.
// Errors: CurveExitsDomain.
double path_length(const std::vector<Vec>& nodes, const Domain& d,
                   double probe_spacing = 1e-3);

struct PathBound {
  double lower_bound = 0.0;
  std::vector<Vec> witness;  // polyline from x1 to x2, valid per path_length
  double witness_length = 0.0;
};

// Certified lower bound on the length of any in-domain curve joining x1 and
// x2, plus an explicit witness. A curve traversing pieces p_0..p_m crosses
// every consecutive interface; minimizing the induced polyline over crossing
// placements is a linear program, and taking the minimum over simple piece
// sequences bounds all traversals (loop excision only shortens). When the
// sequence count explodes, falls back to a shortest path over the interface
// graph with set-to-set distances, which is coarser but still a lower bound.
// Under the euclidean norm the program measures sup-norm legs, so the bound
// stays valid there too. Errors: OutsideDomain, Unreachable, Unsupported
// (multi-piece routing around euclidean balls).
PathBound shortest_path_bound(const Domain& d, const Vec& x1, const Vec& x2);

struct RefutationRow {
  int level = 0;
  Vec target;               // chain corner at this level
  double lower_bound = 0.0; // certified bound from the origin
  double reference = 0.0;   // level / 2
};

// Uniform-length certificate: an inner region d2 containing d1, strictly
// inside the domain, and a bound L so that any two points of d1 can be
// joined inside d2 by a polyline of length <= L. For the chain_boxes family
// no uniform bound survives growing truncation; the result is instead a
// refutation table of corner points with diverging certified lower bounds.
struct PathCertificate {
  bool refuted = false;
  Subset d2;                        // certificate branch
  double length_bound = 0.0;
  std::vector<RefutationRow> rows;  // refutation branch
};

PathCertificate finite_path_length_certificate(const Domain& d, const Subset& d1);

}  // namespace semiflow
