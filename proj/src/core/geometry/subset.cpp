#include "core/geometry/subset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/support/error.hpp"

namespace semiflow {

namespace {

// Depth inside the union, 0 outside; a 1-Lipschitz minorant of the true
// distance to the domain complement, defined on the whole space.
double domain_depth(const Domain& d, const Vec& x) {
  double best = 0.0;
  for (const Piece& p : d.pieces)
    best = std::max(best, piece_interior_distance(p, x, d.norm));
  return best;
}

}  // namespace

Subset subset_points(std::vector<Vec> pts, std::string label) {
  require(!pts.empty(), ErrorCode::BadParameter, "point cloud must be nonempty");
  Subset s;
  s.pts = std::move(pts);
  s.label = std::move(label);
  return s;
}

Subset subset_box(Vec lo, Vec hi, std::string label) {
  Subset s;
  s.pieces.push_back(piece_box(std::move(lo), std::move(hi)));
  s.label = std::move(label);
  return s;
}

Subset subset_ball(Vec center, double radius, NormKind norm, std::string label) {
  Subset s;
  s.pieces.push_back(piece_ball(std::move(center), radius, norm));
  s.label = std::move(label);
  return s;
}

Subset subset_pieces(std::vector<Piece> pieces, std::string label) {
  require(!pieces.empty(), ErrorCode::BadParameter, "subset needs pieces");
  Subset s;
  s.pieces = std::move(pieces);
  s.label = std::move(label);
  return s;
}

bool subset_contains(const Subset& s, const Vec& x, NormKind norm) {
  if (s.is_inflation())
    return dist_to_subset(*s.base, x, norm) <= s.inflate_mu * (1.0 + 1e-12) + 1e-12;
  if (s.is_points()) {
    for (const Vec& p : s.pts)
      if (vec_dist(p, x, norm) <= 1e-9) return true;
    return false;
  }
  for (const Piece& p : s.pieces)
    if (piece_closed_contains(p, x)) return true;
  return false;
}

double dist_to_subset(const Subset& s, const Vec& x, NormKind norm) {
  if (s.is_inflation())
    return std::max(0.0, dist_to_subset(*s.base, x, norm) - s.inflate_mu);
  double best = std::numeric_limits<double>::infinity();
  if (s.is_points()) {
    for (const Vec& p : s.pts) best = std::min(best, vec_dist(p, x, norm));
    return best;
  }
  for (const Piece& p : s.pieces)
    best = std::min(best, piece_point_distance(p, x, norm));
  return best;
}

std::pair<Vec, Vec> subset_bbox(const Subset& s) {
  if (s.is_inflation()) {
    auto [lo, hi] = subset_bbox(*s.base);
    for (size_t i = 0; i < lo.size(); ++i) {
      lo[i] -= s.inflate_mu;
      hi[i] += s.inflate_mu;
    }
    return {lo, hi};
  }
  if (s.is_points()) {
    Vec lo = s.pts.front(), hi = s.pts.front();
    for (const Vec& p : s.pts)
      for (size_t i = 0; i < p.size(); ++i) {
        lo[i] = std::min(lo[i], p[i]);
        hi[i] = std::max(hi[i], p[i]);
      }
    return {lo, hi};
  }
  auto [lo, hi] = piece_bbox(s.pieces.front());
  for (size_t i = 1; i < s.pieces.size(); ++i) {
    auto [plo, phi] = piece_bbox(s.pieces[i]);
    for (size_t c = 0; c < lo.size(); ++c) {
      lo[c] = std::min(lo[c], plo[c]);
      hi[c] = std::max(hi[c], phi[c]);
    }
  }
  return {lo, hi};
}

namespace {

// sup over the subset piece of the euclidean distance to c, or -1 when no
// closed form exists (polytope case).
double sup_dist_to_center(const Piece& s, const Vec& c) {
  if (s.kind == PieceKind::Box) {
    double ss = 0.0;
    for (size_t i = 0; i < c.size(); ++i) {
      double e = std::max(std::fabs(s.lo[i] - c[i]), std::fabs(s.hi[i] - c[i]));
      ss += e * e;
    }
    return std::sqrt(ss);
  }
  if (s.kind == PieceKind::Ball)
    return norm_euclidean(vec_sub(s.center, c)) + s.radius;
  return -1.0;
}

// Exact margin of a convex subset piece against one convex domain piece that
// fully contains it; -infinity when containment cannot be certified.
double piece_in_piece_margin(const Piece& s, const Piece& q, NormKind norm) {
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  switch (q.kind) {
    case PieceKind::Box: {
      auto [lo, hi] = piece_bbox(s);
      double m = std::numeric_limits<double>::infinity();
      for (size_t c = 0; c < lo.size(); ++c)
        m = std::min(m, std::min(lo[c] - q.lo[c], q.hi[c] - hi[c]));
      return m > 0.0 ? m : kNone;
    }
    case PieceKind::Ball: {
      double sup = sup_dist_to_center(s, q.center);
      if (sup < 0.0) return kNone;
      double m = q.radius - sup;
      return m > 0.0 ? m : kNone;
    }
    case PieceKind::Polytope: {
      double m = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < q.a.size(); ++i)
        m = std::min(m, (q.b[i] - piece_support(s, q.a[i])) / dual_norm(q.a[i], norm));
      return m > 0.0 ? m : kNone;
    }
  }
  return kNone;
}

double lattice_covering_radius(const Vec& h, NormKind norm) {
  if (norm == NormKind::Sup) {
    double m = 0.0;
    for (double v : h) m = std::max(m, v);
    return m / 2.0;
  }
  double ss = 0.0;
  for (double v : h) ss += v * v;
  return std::sqrt(ss) / 2.0;
}

// Certified probe-grid lower bound for one subset piece spanning several
// domain pieces. Every point of the piece lies within the covering radius of
// a kept probe, and the depth minorant is 1-Lipschitz, so
// inf depth >= min over probes - radius.
double probe_margin(const Piece& s, const Domain& d) {
  int dim = d.dim;
  require(dim <= 3, ErrorCode::Unsupported,
          "probe-grid margin certification is limited to dimension <= 3");
  auto [lo, hi] = piece_bbox(s);
  size_t budget = s.kind == PieceKind::Polytope ? 80000 : 2000000;
  double best = -std::numeric_limits<double>::infinity();
  bool saw_outside = false;
  for (int k = 9; ; k = 2 * k - 1) {
    Vec h(dim);
    for (int c = 0; c < dim; ++c) h[c] = (hi[c] - lo[c]) / (k - 1);
    double rho = lattice_covering_radius(h, d.norm);
    std::vector<int> idx(dim, 0);
    double min_depth = std::numeric_limits<double>::infinity();
    for (;;) {
      Vec y(dim);
      for (int c = 0; c < dim; ++c) y[c] = lo[c] + idx[c] * h[c];
      if (piece_point_distance(s, y, d.norm) <= rho * (1.0 + 1e-12)) {
        double g = domain_depth(d, y);
        if (g == 0.0 && !domain_closed_contains(d, y) &&
            piece_closed_contains(s, y))
          saw_outside = true;
        min_depth = std::min(min_depth, g);
      }
      int c = 0;
      while (c < dim && ++idx[c] == k) idx[c++] = 0;
      if (c == dim) break;
    }
    if (min_depth < std::numeric_limits<double>::infinity())
      best = std::max(best, min_depth - rho);
    size_t next_nodes = 1;
    for (int c = 0; c < dim; ++c) next_nodes *= static_cast<size_t>(2 * k - 1);
    if (best > 0.0 || next_nodes > budget) break;
  }
  if (saw_outside)
    fail(ErrorCode::OutsideDomain, "subset piece extends outside the domain closure");
  require(best > 0.0, ErrorCode::MarginViolation,
          "cannot certify the subset strictly inside the domain");
  return best;
}

}  // namespace

double subset_margin(const Subset& s, const Domain& d) {
  if (s.is_inflation()) {
    double m = subset_margin(*s.base, d) - s.inflate_mu;
    require(m > 0.0, ErrorCode::MarginViolation,
            "inflated subset margin is not certifiably positive");
    return m;
  }
  if (s.is_points()) {
    double m = std::numeric_limits<double>::infinity();
    for (const Vec& p : s.pts) m = std::min(m, dist_to_boundary(d, p));
    require(m > 0.0, ErrorCode::MarginViolation,
            "subset point lies on the domain boundary");
    return m;
  }
  double total = std::numeric_limits<double>::infinity();
  for (const Piece& sp : s.pieces) {
    double piece_margin = -std::numeric_limits<double>::infinity();
    for (const Piece& q : d.pieces)
      piece_margin = std::max(piece_margin, piece_in_piece_margin(sp, q, d.norm));
    if (!(piece_margin > 0.0)) piece_margin = probe_margin(sp, d);
    total = std::min(total, piece_margin);
  }
  return total;
}

Subset inflate(const Subset& s, const Domain& d, double mu) {
  require(mu > 0.0, ErrorCode::BadParameter, "inflation depth must be positive");
  double margin = subset_margin(s, d);
  require(mu < margin, ErrorCode::MarginViolation,
          "inflation depth must stay below the certified margin");
  Subset out;
  out.label = s.label + "_inflated";
  if (s.is_points()) {
    for (const Vec& p : s.pts) out.pieces.push_back(piece_ball(p, mu, d.norm));
    return out;
  }
  if (!s.is_inflation()) {
    bool exact = true;
    for (const Piece& p : s.pieces) exact = exact && piece_growable(p, d.norm);
    if (exact) {
      for (const Piece& p : s.pieces) out.pieces.push_back(piece_grow(p, mu, d.norm));
      return out;
    }
  }
  out.base = std::make_shared<Subset>(s);
  out.inflate_mu = mu;
  return out;
}

}  // namespace semiflow
