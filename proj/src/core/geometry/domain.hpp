#pragma once

#include <string>
#include <utility>
#include <vector>

#include "core/support/linalg.hpp"

namespace semiflow {

// Convex building block of a domain: open box, open norm ball, or the
// interior of a bounded polytope {a.x <= b}. Sup-norm balls are normalized
// to boxes at construction time.
enum class PieceKind { Box, Ball, Polytope };

struct Piece {
  PieceKind kind = PieceKind::Box;
  Vec lo, hi;          // Box
  Vec center;          // Ball
  double radius = 0.0;
  std::vector<Vec> a;  // Polytope faces a[i].x <= b[i]
  Vec b;
};

Piece piece_box(Vec lo, Vec hi);
Piece piece_ball(Vec center, double radius, NormKind norm);
Piece piece_polytope(std::vector<Vec> a, Vec b);

bool piece_contains(const Piece& p, const Vec& x);         // open interior
bool piece_closed_contains(const Piece& p, const Vec& x);  // closure, small tol
// Distance from an interior point to the piece's boundary; 0 outside.
double piece_interior_distance(const Piece& p, const Vec& x, NormKind norm);
// Distance from any point to the closed piece. Euclidean polytopes are the
// one unsupported combination (that projection is not an LP).
double piece_point_distance(const Piece& p, const Vec& x, NormKind norm);
std::pair<Vec, Vec> piece_bbox(const Piece& p);
double piece_diameter(const Piece& p, NormKind norm);  // exact for boxes/balls,
                                                       // bbox upper bound otherwise
double piece_support(const Piece& p, const Vec& dir);  // sup of dir.x over the piece
// Inner parallel body at depth tau, same shape kind, exact.
Piece piece_shrink(const Piece& p, double tau, NormKind norm);
Piece piece_grow(const Piece& p, double mu, NormKind norm);  // Box sup / Ball only
bool piece_growable(const Piece& p, NormKind norm);
// Largest norm ball radius fitting inside the piece.
double piece_inradius(const Piece& p, NormKind norm, Vec* center_out = nullptr);

// Certified lower bound on the inradius of the open intersection; exact for
// box/polytope pairs (an LP), concave line search when a euclidean ball is
// involved. <= 0 means no certified overlap.
double overlap_inradius(const Piece& p, const Piece& q, NormKind norm,
                        Vec* deep_point = nullptr);

struct Domain {
  int dim = 0;
  NormKind norm = NormKind::Euclidean;
  std::vector<Piece> pieces;
  std::string name;
  // Chain-of-boxes counterexample family; set only by make_chain_boxes_domain.
  double chain_a = 0.0;
  int chain_n = 0;
};

Domain make_interval(double lo, double hi);
Domain make_box(Vec lo, Vec hi, NormKind norm);
Domain make_ball(Vec center, double radius, NormKind norm);
Domain make_polytope(std::vector<Vec> a, Vec b, NormKind norm);
Domain make_union(std::vector<Piece> pieces, NormKind norm,
                  bool allow_disconnected = false);
// The sup-norm chain domain D_1 ∪ … ∪ D_n with overlap parameter a in (0, 1/2):
// D_j fixes coordinates before j near 1, frees coordinate j across (-a, 1+a),
// and pins the rest near 0. Consecutive pieces overlap; others do not.
Domain make_chain_boxes_domain(double a, int n);
// Corner point of the chain domain at level j (first j coordinates 1).
Vec chain_corner(const Domain& d, int j);

bool domain_contains(const Domain& d, const Vec& x);         // open
bool domain_closed_contains(const Domain& d, const Vec& x);  // closure
std::vector<int> containing_pieces(const Domain& d, const Vec& x);
// Certified lower bound on the distance to the complement: max over
// containing pieces of the per-piece interior distance (exact when one
// convex piece contains x and no other piece extends past it).
// Errors: OutsideDomain when x is outside the closure; 0 on the boundary.
double dist_to_boundary(const Domain& d, const Vec& x);
std::pair<Vec, Vec> domain_bbox(const Domain& d);

struct AdjacencyEdge {
  int p, q;
  double inradius;
  Vec deep_point;  // interior point of the intersection realizing inradius
};
std::vector<AdjacencyEdge> domain_adjacency(const Domain& d);
bool domain_connected(const Domain& d);

}  // namespace semiflow
