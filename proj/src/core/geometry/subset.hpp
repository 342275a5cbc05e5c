#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "core/geometry/domain.hpp"

namespace semiflow {

// A strictly-inside working set: either an explicit point cloud or a finite
// union of closed convex pieces. An inexactly-inflatable set is kept as a
// wrapper around its base (membership = within inflate_mu of the base).
struct Subset {
  std::vector<Vec> pts;
  std::vector<Piece> pieces;
  std::shared_ptr<const Subset> base;
  double inflate_mu = 0.0;
  std::string label;

  bool is_points() const { return !pts.empty(); }
  bool is_inflation() const { return base != nullptr; }
};

Subset subset_points(std::vector<Vec> pts, std::string label = "points");
Subset subset_box(Vec lo, Vec hi, std::string label = "box");
Subset subset_ball(Vec center, double radius, NormKind norm, std::string label = "ball");
Subset subset_pieces(std::vector<Piece> pieces, std::string label = "region");

bool subset_contains(const Subset& s, const Vec& x, NormKind norm);
// Distance from x to the (closed) subset; Unsupported for euclidean
// polytope pieces.
double dist_to_subset(const Subset& s, const Vec& x, NormKind norm);
std::pair<Vec, Vec> subset_bbox(const Subset& s);

// Certified lower bound on inf over the subset of the distance to the domain
// complement. Exact for point clouds in convex pieces and for convex subset
// pieces contained in one convex domain piece; a 1-Lipschitz probe grid
// covers the remaining low-dimensional cases. Errors: OutsideDomain when any
// part of the subset leaves the domain; Unsupported above probe dimension.
double subset_margin(const Subset& s, const Domain& d);

// The mu-neighborhood of the subset, exact in kind when possible (points,
// sup-norm boxes, euclidean balls), wrapper otherwise.
// Errors: MarginViolation when mu >= subset_margin(s, d).
Subset inflate(const Subset& s, const Domain& d, double mu);

}  // namespace semiflow
