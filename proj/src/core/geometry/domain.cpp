#include "core/geometry/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "core/geometry/lp.hpp"
#include "core/support/error.hpp"

namespace semiflow {

namespace {

// Closure membership slack; domains here are O(1) scale.
constexpr double kClosedTol = 1e-9;

void check_dim(const Piece& p, const Vec& x) {
  size_t d = p.kind == PieceKind::Box   ? p.lo.size()
             : p.kind == PieceKind::Ball ? p.center.size()
                                          : p.a.front().size();
  require(x.size() == d, ErrorCode::BadParameter, "point dimension mismatch");
}

int piece_dim(const Piece& p) {
  switch (p.kind) {
    case PieceKind::Box:
      return static_cast<int>(p.lo.size());
    case PieceKind::Ball:
      return static_cast<int>(p.center.size());
    case PieceKind::Polytope:
      return static_cast<int>(p.a.front().size());
  }
  return 0;
}

LpProblem polytope_feasibility(const Piece& p, int extra_vars = 0) {
  int d = piece_dim(p);
  LpProblem lp(d + extra_vars);
  for (size_t i = 0; i < p.a.size(); ++i) {
    Vec row(d + extra_vars, 0.0);
    for (int c = 0; c < d; ++c) row[c] = p.a[i][c];
    lp.add_le(std::move(row), p.b[i]);
  }
  return lp;
}

}  // namespace

Piece piece_box(Vec lo, Vec hi) {
  require(!lo.empty() && lo.size() == hi.size(), ErrorCode::BadParameter,
          "box bounds must be nonempty and matched");
  for (size_t i = 0; i < lo.size(); ++i)
    require(lo[i] < hi[i], ErrorCode::BadParameter, "box must have positive extent");
  Piece p;
  p.kind = PieceKind::Box;
  p.lo = std::move(lo);
  p.hi = std::move(hi);
  return p;
}

Piece piece_ball(Vec center, double radius, NormKind norm) {
  require(!center.empty(), ErrorCode::BadParameter, "ball needs a center");
  require(radius > 0.0, ErrorCode::BadParameter, "ball radius must be positive");
  if (norm == NormKind::Sup) {
    Vec lo = center, hi = center;
    for (size_t i = 0; i < center.size(); ++i) {
      lo[i] -= radius;
      hi[i] += radius;
    }
    return piece_box(std::move(lo), std::move(hi));
  }
  Piece p;
  p.kind = PieceKind::Ball;
  p.center = std::move(center);
  p.radius = radius;
  return p;
}

Piece piece_polytope(std::vector<Vec> a, Vec b) {
  require(!a.empty() && a.size() == b.size(), ErrorCode::BadParameter,
          "polytope needs matched face lists");
  size_t d = a.front().size();
  require(d > 0, ErrorCode::BadParameter, "polytope faces need coordinates");
  for (const Vec& row : a)
    require(row.size() == d, ErrorCode::BadParameter, "polytope face dimension mismatch");
  Piece p;
  p.kind = PieceKind::Polytope;
  p.a = std::move(a);
  p.b = std::move(b);
  // Bounded and nonempty, or the piece is rejected outright.
  auto bb = piece_bbox(p);
  (void)bb;
  return p;
}

bool piece_contains(const Piece& p, const Vec& x) {
  check_dim(p, x);
  switch (p.kind) {
    case PieceKind::Box:
      for (size_t i = 0; i < x.size(); ++i)
        if (!(x[i] > p.lo[i] && x[i] < p.hi[i])) return false;
      return true;
    case PieceKind::Ball:
      return norm_euclidean(vec_sub(x, p.center)) < p.radius;
    case PieceKind::Polytope:
      for (size_t i = 0; i < p.a.size(); ++i)
        if (!(vec_dot(p.a[i], x) < p.b[i])) return false;
      return true;
  }
  return false;
}

bool piece_closed_contains(const Piece& p, const Vec& x) {
  check_dim(p, x);
  switch (p.kind) {
    case PieceKind::Box:
      for (size_t i = 0; i < x.size(); ++i)
        if (x[i] < p.lo[i] - kClosedTol || x[i] > p.hi[i] + kClosedTol) return false;
      return true;
    case PieceKind::Ball:
      return norm_euclidean(vec_sub(x, p.center)) <= p.radius + kClosedTol;
    case PieceKind::Polytope:
      for (size_t i = 0; i < p.a.size(); ++i)
        if (vec_dot(p.a[i], x) > p.b[i] + kClosedTol * (1.0 + norm_l1(p.a[i])))
          return false;
      return true;
  }
  return false;
}

double piece_interior_distance(const Piece& p, const Vec& x, NormKind norm) {
  if (!piece_contains(p, x)) return 0.0;
  switch (p.kind) {
    case PieceKind::Box: {
      double best = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < x.size(); ++i)
        best = std::min(best, std::min(x[i] - p.lo[i], p.hi[i] - x[i]));
      return best;
    }
    case PieceKind::Ball:
      return p.radius - norm_euclidean(vec_sub(x, p.center));
    case PieceKind::Polytope: {
      double best = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < p.a.size(); ++i)
        best = std::min(best, (p.b[i] - vec_dot(p.a[i], x)) / dual_norm(p.a[i], norm));
      return best;
    }
  }
  return 0.0;
}

double piece_point_distance(const Piece& p, const Vec& x, NormKind norm) {
  check_dim(p, x);
  switch (p.kind) {
    case PieceKind::Box: {
      Vec excess(x.size(), 0.0);
      for (size_t i = 0; i < x.size(); ++i)
        excess[i] = std::max({p.lo[i] - x[i], 0.0, x[i] - p.hi[i]});
      return vec_norm(excess, norm);
    }
    case PieceKind::Ball:
      return std::max(0.0, norm_euclidean(vec_sub(x, p.center)) - p.radius);
    case PieceKind::Polytope: {
      require(norm == NormKind::Sup, ErrorCode::Unsupported,
              "euclidean point-to-polytope distance is not linear-programmable");
      int d = piece_dim(p);
      LpProblem lp = polytope_feasibility(p, 1);
      lp.c[d] = 1.0;
      for (int c = 0; c < d; ++c) {
        Vec row(d + 1, 0.0);
        row[c] = 1.0;
        row[d] = -1.0;
        lp.add_le(row, x[c]);
        row[c] = -1.0;
        lp.add_le(std::move(row), -x[c]);
      }
      LpResult r = solve_lp(lp);
      require(r.status == LpStatus::Optimal, ErrorCode::Internal,
              "point-to-polytope LP failed");
      return std::max(0.0, r.value);
    }
  }
  return 0.0;
}

std::pair<Vec, Vec> piece_bbox(const Piece& p) {
  switch (p.kind) {
    case PieceKind::Box:
      return {p.lo, p.hi};
    case PieceKind::Ball: {
      Vec lo = p.center, hi = p.center;
      for (size_t i = 0; i < lo.size(); ++i) {
        lo[i] -= p.radius;
        hi[i] += p.radius;
      }
      return {lo, hi};
    }
    case PieceKind::Polytope: {
      int d = piece_dim(p);
      Vec lo(d), hi(d);
      for (int c = 0; c < d; ++c) {
        for (double sgn : {1.0, -1.0}) {
          LpProblem lp = polytope_feasibility(p);
          lp.c[c] = sgn;
          LpResult r = solve_lp(lp);
          require(r.status == LpStatus::Optimal, ErrorCode::BadParameter,
                  "polytope piece must be bounded and nonempty");
          (sgn > 0 ? lo[c] : hi[c]) = sgn * r.value;
        }
      }
      return {lo, hi};
    }
  }
  return {{}, {}};
}

double piece_diameter(const Piece& p, NormKind norm) {
  if (p.kind == PieceKind::Ball) return 2.0 * p.radius;
  auto [lo, hi] = piece_bbox(p);
  return vec_dist(lo, hi, norm);
}

double piece_support(const Piece& p, const Vec& dir) {
  check_dim(p, dir);
  switch (p.kind) {
    case PieceKind::Box: {
      double s = 0.0;
      for (size_t i = 0; i < dir.size(); ++i)
        s += std::max(dir[i] * p.lo[i], dir[i] * p.hi[i]);
      return s;
    }
    case PieceKind::Ball:
      return vec_dot(dir, p.center) + p.radius * norm_euclidean(dir);
    case PieceKind::Polytope: {
      LpProblem lp = polytope_feasibility(p);
      for (int c = 0; c < lp.n; ++c) lp.c[c] = -dir[c];
      LpResult r = solve_lp(lp);
      require(r.status == LpStatus::Optimal, ErrorCode::Internal, "support LP failed");
      return -r.value;
    }
  }
  return 0.0;
}

Piece piece_shrink(const Piece& p, double tau, NormKind norm) {
  require(tau >= 0.0, ErrorCode::BadParameter, "shrink depth must be nonnegative");
  Piece q = p;
  switch (p.kind) {
    case PieceKind::Box:
      for (size_t i = 0; i < q.lo.size(); ++i) {
        q.lo[i] += tau;
        q.hi[i] -= tau;
        require(q.lo[i] <= q.hi[i], ErrorCode::BadParameter,
                "shrink depth exceeds piece inradius");
      }
      return q;
    case PieceKind::Ball:
      q.radius -= tau;
      require(q.radius > 0.0, ErrorCode::BadParameter,
              "shrink depth exceeds piece inradius");
      return q;
    case PieceKind::Polytope:
      for (size_t i = 0; i < q.b.size(); ++i)
        q.b[i] -= tau * dual_norm(q.a[i], norm);
      return q;
  }
  return q;
}

bool piece_growable(const Piece& p, NormKind norm) {
  if (p.kind == PieceKind::Box && p.lo.size() == 1) return true;  // norms agree
  return (p.kind == PieceKind::Box && norm == NormKind::Sup) ||
         (p.kind == PieceKind::Ball && norm == NormKind::Euclidean);
}

Piece piece_grow(const Piece& p, double mu, NormKind norm) {
  require(piece_growable(p, norm), ErrorCode::Unsupported,
          "exact inflation only for sup-norm boxes and euclidean balls");
  Piece q = p;
  if (p.kind == PieceKind::Box) {
    for (size_t i = 0; i < q.lo.size(); ++i) {
      q.lo[i] -= mu;
      q.hi[i] += mu;
    }
  } else {
    q.radius += mu;
  }
  return q;
}

double piece_inradius(const Piece& p, NormKind norm, Vec* center_out) {
  switch (p.kind) {
    case PieceKind::Box: {
      double best = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < p.lo.size(); ++i)
        best = std::min(best, (p.hi[i] - p.lo[i]) / 2.0);
      if (center_out) *center_out = vec_scale(vec_add(p.lo, p.hi), 0.5);
      return best;
    }
    case PieceKind::Ball:
      if (center_out) *center_out = p.center;
      return p.radius;
    case PieceKind::Polytope: {
      int d = piece_dim(p);
      LpProblem lp(d + 1);
      lp.c[d] = -1.0;
      for (size_t i = 0; i < p.a.size(); ++i) {
        Vec row(d + 1, 0.0);
        for (int c = 0; c < d; ++c) row[c] = p.a[i][c];
        row[d] = dual_norm(p.a[i], norm);
        lp.add_le(std::move(row), p.b[i]);
      }
      LpResult r = solve_lp(lp);
      require(r.status == LpStatus::Optimal, ErrorCode::Internal, "inradius LP failed");
      if (center_out) *center_out = Vec(r.x.begin(), r.x.begin() + d);
      return -r.value;
    }
  }
  return 0.0;
}

namespace {

void append_piece_faces(LpProblem& lp, const Piece& p, NormKind norm, int dim,
                        bool with_margin_var) {
  // Encodes {x : x in piece, dist(x, piece boundary) >= delta} when the
  // margin variable is present (delta is the last LP variable).
  int total = lp.n;
  auto face = [&](Vec normal, double off) {
    Vec row(total, 0.0);
    double dn = dual_norm(normal, norm);
    for (int c = 0; c < dim; ++c) row[c] = normal[c];
    if (with_margin_var) row[total - 1] = dn;
    lp.add_le(std::move(row), off);
  };
  if (p.kind == PieceKind::Box) {
    for (int c = 0; c < dim; ++c) {
      Vec n(dim, 0.0);
      n[c] = 1.0;
      face(n, p.hi[c]);
      n[c] = -1.0;
      face(n, -p.lo[c]);
    }
  } else if (p.kind == PieceKind::Polytope) {
    for (size_t i = 0; i < p.a.size(); ++i) face(p.a[i], p.b[i]);
  } else {
    fail(ErrorCode::Unsupported, "ball pieces are not linear-programmable");
  }
}

bool lp_representable(const Piece& p) { return p.kind != PieceKind::Ball; }

Vec piece_deep_point(const Piece& p, NormKind norm) {
  Vec c;
  piece_inradius(p, norm, &c);
  return c;
}

}  // namespace

double overlap_inradius(const Piece& p, const Piece& q, NormKind norm,
                        Vec* deep_point) {
  int d = piece_dim(p);
  require(piece_dim(q) == d, ErrorCode::BadParameter, "piece dimension mismatch");
  if (lp_representable(p) && lp_representable(q)) {
    LpProblem lp(d + 1);
    lp.c[d] = -1.0;
    append_piece_faces(lp, p, norm, d, true);
    append_piece_faces(lp, q, norm, d, true);
    LpResult r = solve_lp(lp);
    if (r.status != LpStatus::Optimal) return -1.0;
    if (deep_point) *deep_point = Vec(r.x.begin(), r.x.begin() + d);
    return -r.value;
  }
  if (p.kind == PieceKind::Ball && q.kind == PieceKind::Ball) {
    double dist = norm_euclidean(vec_sub(p.center, q.center));
    double delta = std::min({p.radius, q.radius, (p.radius + q.radius - dist) / 2.0});
    if (deep_point) {
      double t = dist == 0.0 ? 0.0
                             : std::clamp((p.radius - q.radius + dist) / 2.0, 0.0, dist);
      *deep_point = dist == 0.0 ? p.center
                                : vec_lerp(p.center, q.center, t / dist);
    }
    return delta;
  }
  // Mixed ball/LP pair: maximize the concave depth function along the segment
  // between the two deep points; any point found certifies its own radius.
  Vec a = piece_deep_point(p, norm), b = piece_deep_point(q, norm);
  auto depth = [&](const Vec& z) {
    return std::min(piece_interior_distance(p, z, norm),
                    piece_interior_distance(q, z, norm));
  };
  double t_lo = 0.0, t_hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    double t1 = t_lo + (t_hi - t_lo) / 3.0, t2 = t_hi - (t_hi - t_lo) / 3.0;
    if (depth(vec_lerp(a, b, t1)) < depth(vec_lerp(a, b, t2)))
      t_lo = t1;
    else
      t_hi = t2;
  }
  Vec z = vec_lerp(a, b, (t_lo + t_hi) / 2.0);
  if (deep_point) *deep_point = z;
  return depth(z);
}

namespace {

Domain finish_domain(Domain d, bool allow_disconnected) {
  require(!d.pieces.empty(), ErrorCode::BadParameter, "domain needs pieces");
  d.dim = piece_dim(d.pieces.front());
  for (const Piece& p : d.pieces)
    require(piece_dim(p) == d.dim, ErrorCode::BadParameter,
            "all pieces must share a dimension");
  if (!allow_disconnected)
    require(domain_connected(d), ErrorCode::BadParameter,
            "domain pieces must form a connected union");
  return d;
}

}  // namespace

Domain make_interval(double lo, double hi) {
  Domain d;
  d.norm = NormKind::Euclidean;
  d.pieces.push_back(piece_box({lo}, {hi}));
  d.name = "interval";
  return finish_domain(std::move(d), true);
}

Domain make_box(Vec lo, Vec hi, NormKind norm) {
  Domain d;
  d.norm = norm;
  d.pieces.push_back(piece_box(std::move(lo), std::move(hi)));
  d.name = "box";
  return finish_domain(std::move(d), true);
}

Domain make_ball(Vec center, double radius, NormKind norm) {
  Domain d;
  d.norm = norm;
  d.pieces.push_back(piece_ball(std::move(center), radius, norm));
  d.name = "ball";
  return finish_domain(std::move(d), true);
}

Domain make_polytope(std::vector<Vec> a, Vec b, NormKind norm) {
  Domain d;
  d.norm = norm;
  d.pieces.push_back(piece_polytope(std::move(a), std::move(b)));
  d.name = "polytope";
  return finish_domain(std::move(d), true);
}

Domain make_union(std::vector<Piece> pieces, NormKind norm, bool allow_disconnected) {
  Domain d;
  d.norm = norm;
  d.pieces = std::move(pieces);
  d.name = "union";
  return finish_domain(std::move(d), allow_disconnected);
}

Domain make_chain_boxes_domain(double a, int n) {
  require(a > 0.0 && a < 0.5, ErrorCode::BadParameter,
          "chain overlap parameter must lie in (0, 1/2)");
  require(n >= 2, ErrorCode::BadParameter, "chain needs at least two pieces");
  Domain d;
  d.norm = NormKind::Sup;
  for (int j = 1; j <= n; ++j) {
    Vec lo(n), hi(n);
    for (int k = 1; k <= n; ++k) {
      if (k < j) {
        lo[k - 1] = 1.0 - a;
        hi[k - 1] = 1.0 + a;
      } else if (k == j) {
        lo[k - 1] = -a;
        hi[k - 1] = 1.0 + a;
      } else {
        lo[k - 1] = -a;
        hi[k - 1] = a;
      }
    }
    d.pieces.push_back(piece_box(std::move(lo), std::move(hi)));
  }
  d.name = "chain_boxes";
  d.chain_a = a;
  d.chain_n = n;
  return finish_domain(std::move(d), false);
}

Vec chain_corner(const Domain& d, int j) {
  require(d.chain_n > 0, ErrorCode::BadParameter, "not a chain-of-boxes domain");
  require(j >= 1 && j <= d.chain_n, ErrorCode::BadParameter,
          "chain level out of range");
  Vec x(d.dim, 0.0);
  for (int k = 0; k < j; ++k) x[k] = 1.0;
  return x;
}

bool domain_contains(const Domain& d, const Vec& x) {
  for (const Piece& p : d.pieces)
    if (piece_contains(p, x)) return true;
  return false;
}

bool domain_closed_contains(const Domain& d, const Vec& x) {
  for (const Piece& p : d.pieces)
    if (piece_closed_contains(p, x)) return true;
  return false;
}

std::vector<int> containing_pieces(const Domain& d, const Vec& x) {
  std::vector<int> out;
  for (size_t i = 0; i < d.pieces.size(); ++i)
    if (piece_contains(d.pieces[i], x)) out.push_back(static_cast<int>(i));
  return out;
}

double dist_to_boundary(const Domain& d, const Vec& x) {
  require(static_cast<int>(x.size()) == d.dim, ErrorCode::BadParameter,
          "point dimension mismatch");
  double best = 0.0;
  bool inside = false;
  for (const Piece& p : d.pieces)
    if (piece_contains(p, x)) {
      inside = true;
      best = std::max(best, piece_interior_distance(p, x, d.norm));
    }
  if (inside) return best;
  if (domain_closed_contains(d, x)) return 0.0;
  fail(ErrorCode::OutsideDomain, "point lies outside the domain closure");
}

std::pair<Vec, Vec> domain_bbox(const Domain& d) {
  auto [lo, hi] = piece_bbox(d.pieces.front());
  for (size_t i = 1; i < d.pieces.size(); ++i) {
    auto [plo, phi] = piece_bbox(d.pieces[i]);
    for (int c = 0; c < d.dim; ++c) {
      lo[c] = std::min(lo[c], plo[c]);
      hi[c] = std::max(hi[c], phi[c]);
    }
  }
  return {lo, hi};
}

std::vector<AdjacencyEdge> domain_adjacency(const Domain& d) {
  std::vector<AdjacencyEdge> edges;
  for (size_t i = 0; i < d.pieces.size(); ++i)
    for (size_t j = i + 1; j < d.pieces.size(); ++j) {
      Vec deep;
      double rho = overlap_inradius(d.pieces[i], d.pieces[j], d.norm, &deep);
      if (rho > 1e-12)
        edges.push_back({static_cast<int>(i), static_cast<int>(j), rho, deep});
    }
  return edges;
}

bool domain_connected(const Domain& d) {
  int n = static_cast<int>(d.pieces.size());
  if (n <= 1) return true;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const AdjacencyEdge& e : domain_adjacency(d)) parent[find(e.p)] = find(e.q);
  for (int v = 1; v < n; ++v)
    if (find(v) != find(0)) return false;
  return true;
}

}  // namespace semiflow
