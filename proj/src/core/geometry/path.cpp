#include "core/geometry/path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <utility>

#include "core/geometry/lp.hpp"
#include "core/support/error.hpp"

namespace semiflow {

namespace {

constexpr int kPathCap = 4000;
constexpr int kDfsStepCap = 200000;
constexpr double kInf = std::numeric_limits<double>::infinity();

Vec lerp(const Vec& a, const Vec& b, double t) {
  Vec x(a.size());
  for (std::size_t c = 0; c < a.size(); ++c) x[c] = a[c] + t * (b[c] - a[c]);
  return x;
}

// Closed membership rows for the variable block [base, base+dim).
void append_piece_faces(LpProblem& lp, const Piece& p, int base, int dim) {
  if (p.kind == PieceKind::Box) {
    for (int c = 0; c < dim; ++c) {
      Vec row(lp.n, 0.0);
      row[base + c] = 1.0;
      lp.add_le(std::move(row), p.hi[c]);
      Vec row2(lp.n, 0.0);
      row2[base + c] = -1.0;
      lp.add_le(std::move(row2), -p.lo[c]);
    }
  } else if (p.kind == PieceKind::Polytope) {
    for (std::size_t r = 0; r < p.a.size(); ++r) {
      Vec row(lp.n, 0.0);
      for (int c = 0; c < dim; ++c) row[base + c] = p.a[r][c];
      lp.add_le(std::move(row), p.b[r]);
    }
  } else {
    fail(ErrorCode::Unsupported,
         "euclidean ball pieces cannot enter the interface relaxation");
  }
}

// t_var >= sup-norm displacement of a leg. Either endpoint is a variable
// block (base >= 0) or a fixed point.
void append_leg(LpProblem& lp, int dim, int from_base, const Vec* from_pt,
                int to_base, const Vec* to_pt, int t_var) {
  for (int c = 0; c < dim; ++c) {
    for (int sign : {+1, -1}) {
      Vec row(lp.n, 0.0);
      double rhs = 0.0;
      if (to_base >= 0)
        row[to_base + c] += sign;
      else
        rhs -= sign * (*to_pt)[c];
      if (from_base >= 0)
        row[from_base + c] -= sign;
      else
        rhs += sign * (*from_pt)[c];
      row[t_var] -= 1.0;
      lp.add_le(std::move(row), rhs);
    }
  }
}

struct TourResult {
  bool feasible = false;
  double value = 0.0;
  std::vector<Vec> waypoints;
};

// Minimum total sup-norm length of x1 -> y_1 -> ... -> y_m -> x2 with y_i
// ranging over the closed overlap of pieces seq[i-1] and seq[i].
TourResult tour_lp(const Domain& d, const std::vector<int>& seq, const Vec& x1,
                   const Vec& x2) {
  int dim = d.dim;
  int m = static_cast<int>(seq.size()) - 1;
  int tbase = m * dim;
  LpProblem lp(tbase + m + 1);
  for (int i = 0; i <= m; ++i) lp.c[tbase + i] = 1.0;
  for (int i = 0; i < m; ++i) {
    append_piece_faces(lp, d.pieces[seq[i]], i * dim, dim);
    append_piece_faces(lp, d.pieces[seq[i + 1]], i * dim, dim);
  }
  for (int i = 0; i <= m; ++i) {
    int from_base = i == 0 ? -1 : (i - 1) * dim;
    int to_base = i == m ? -1 : i * dim;
    append_leg(lp, dim, from_base, i == 0 ? &x1 : nullptr, to_base,
               i == m ? &x2 : nullptr, tbase + i);
  }
  LpResult r = solve_lp(lp);
  TourResult out;
  if (r.status != LpStatus::Optimal) return out;
  out.feasible = true;
  out.value = r.value;
  out.waypoints.resize(m);
  for (int i = 0; i < m; ++i) {
    out.waypoints[i] = Vec(dim);
    for (int c = 0; c < dim; ++c) out.waypoints[i][c] = r.x[i * dim + c];
  }
  return out;
}

// Simple piece sequences from start to the first target piece hit. Stopping
// at the first hit is sound: a prefix drops constraints, so its tour value
// only goes down.
void dfs_paths(int u, const std::vector<std::vector<int>>& adj,
               const std::vector<bool>& target, std::vector<int>& cur,
               std::vector<bool>& used, std::vector<std::vector<int>>& out,
               int& steps, bool& overflow) {
  if (overflow) return;
  if (++steps > kDfsStepCap) {
    overflow = true;
    return;
  }
  if (target[u]) {
    out.push_back(cur);
    if (static_cast<int>(out.size()) > kPathCap) overflow = true;
    return;
  }
  for (int v : adj[u]) {
    if (used[v]) continue;
    used[v] = true;
    cur.push_back(v);
    dfs_paths(v, adj, target, cur, used, out, steps, overflow);
    cur.pop_back();
    used[v] = false;
    if (overflow) return;
  }
}

double interface_point_distance(const Domain& d, const AdjacencyEdge& e,
                                const Vec& x) {
  int dim = d.dim;
  LpProblem lp(dim + 1);
  lp.c[dim] = 1.0;
  append_piece_faces(lp, d.pieces[e.p], 0, dim);
  append_piece_faces(lp, d.pieces[e.q], 0, dim);
  append_leg(lp, dim, -1, &x, 0, nullptr, dim);
  LpResult r = solve_lp(lp);
  require(r.status == LpStatus::Optimal, ErrorCode::Internal,
          "interface distance program did not solve");
  return r.value;
}

double interface_pair_distance(const Domain& d, const AdjacencyEdge& e,
                               const AdjacencyEdge& f) {
  int dim = d.dim;
  LpProblem lp(2 * dim + 1);
  lp.c[2 * dim] = 1.0;
  append_piece_faces(lp, d.pieces[e.p], 0, dim);
  append_piece_faces(lp, d.pieces[e.q], 0, dim);
  append_piece_faces(lp, d.pieces[f.p], dim, dim);
  append_piece_faces(lp, d.pieces[f.q], dim, dim);
  append_leg(lp, dim, 0, nullptr, dim, nullptr, 2 * dim);
  LpResult r = solve_lp(lp);
  require(r.status == LpStatus::Optimal, ErrorCode::Internal,
          "interface distance program did not solve");
  return r.value;
}

bool touches(const AdjacencyEdge& e, int piece) {
  return e.p == piece || e.q == piece;
}

bool share_piece(const AdjacencyEdge& e, const AdjacencyEdge& f) {
  return touches(f, e.p) || touches(f, e.q);
}

struct InterfaceRoute {
  double bound = kInf;
  std::vector<int> interfaces;  // adjacency-edge indices along the route
};

// Coarse bound: any curve's crossing points live in successive interfaces,
// so its length is at least the sum of set-to-set interface distances along
// some walk. Shortest path over that graph covers all walks at once.
InterfaceRoute dijkstra_bound(const Domain& d,
                              const std::vector<AdjacencyEdge>& edges,
                              const std::vector<bool>& s1,
                              const std::vector<bool>& s2, const Vec& x1,
                              const Vec& x2) {
  int ne = static_cast<int>(edges.size());
  int source = ne, sink = ne + 1;
  std::vector<std::vector<std::pair<int, double>>> g(ne + 2);
  for (int k = 0; k < ne; ++k) {
    if (s1[edges[k].p] || s1[edges[k].q])
      g[source].push_back({k, interface_point_distance(d, edges[k], x1)});
    if (s2[edges[k].p] || s2[edges[k].q])
      g[k].push_back({sink, interface_point_distance(d, edges[k], x2)});
  }
  for (int k = 0; k < ne; ++k)
    for (int l = k + 1; l < ne; ++l)
      if (share_piece(edges[k], edges[l])) {
        double w = interface_pair_distance(d, edges[k], edges[l]);
        g[k].push_back({l, w});
        g[l].push_back({k, w});
      }
  std::vector<double> dist(ne + 2, kInf);
  std::vector<int> prev(ne + 2, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = 0.0;
  pq.push({0.0, source});
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > dist[u]) continue;
    for (auto [v, w] : g[u])
      if (du + w < dist[v]) {
        dist[v] = du + w;
        prev[v] = u;
        pq.push({dist[v], v});
      }
  }
  InterfaceRoute route;
  if (dist[sink] == kInf) return route;
  route.bound = dist[sink];
  for (int u = prev[sink]; u != source && u != -1; u = prev[u])
    route.interfaces.push_back(u);
  std::reverse(route.interfaces.begin(), route.interfaces.end());
  return route;
}

PathBound finish_with_witness(const Domain& d, double bound,
                              std::vector<Vec> nodes) {
  PathBound out;
  out.witness_length = path_length(nodes, d);
  out.witness = std::move(nodes);
  // The bound is below the infimum and the witness above it; a tie can
  // still invert by rounding, so clamp.
  out.lower_bound = std::min(bound, out.witness_length);
  return out;
}

}  // namespace

double path_length(const std::vector<Vec>& nodes, const Domain& d,
                   double probe_spacing) {
  require(nodes.size() >= 2, ErrorCode::BadParameter,
          "a curve needs at least two nodes");
  require(probe_spacing > 0.0 && probe_spacing <= 0.5, ErrorCode::BadParameter,
          "probe spacing must be in (0, 0.5]");
  for (const Vec& x : nodes) {
    require(static_cast<int>(x.size()) == d.dim, ErrorCode::BadParameter,
            "curve node dimension mismatch");
    require(domain_contains(d, x), ErrorCode::CurveExitsDomain,
            "curve node outside the domain");
  }
  double total = 0.0;
  int steps = static_cast<int>(std::ceil(1.0 / probe_spacing));
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const Vec& a = nodes[i];
    const Vec& b = nodes[i + 1];
    double len = vec_dist(a, b, d.norm);
    total += len;
    if (len == 0.0) continue;
    bool same_piece = false;
    for (const Piece& p : d.pieces)
      if (piece_contains(p, a) && piece_contains(p, b)) {
        same_piece = true;
        break;
      }
    if (same_piece) continue;
    for (int k = 1; k < steps; ++k) {
      Vec x = lerp(a, b, double(k) / steps);
      require(domain_contains(d, x), ErrorCode::CurveExitsDomain,
              "curve segment exits the domain");
    }
  }
  return total;
}

PathBound shortest_path_bound(const Domain& d, const Vec& x1, const Vec& x2) {
  require(static_cast<int>(x1.size()) == d.dim &&
              static_cast<int>(x2.size()) == d.dim,
          ErrorCode::BadParameter, "endpoint dimension mismatch");
  require(domain_contains(d, x1) && domain_contains(d, x2),
          ErrorCode::OutsideDomain, "both endpoints must be interior");

  std::vector<int> c1 = containing_pieces(d, x1);
  std::vector<int> c2 = containing_pieces(d, x2);
  int np = static_cast<int>(d.pieces.size());
  std::vector<bool> s1(np, false), s2(np, false);
  for (int p : c1) s1[p] = true;
  for (int p : c2) s2[p] = true;
  for (int p : c1)
    if (s2[p])
      return finish_with_witness(d, vec_dist(x1, x2, d.norm), {x1, x2});

  for (const Piece& p : d.pieces)
    require(p.kind != PieceKind::Ball, ErrorCode::Unsupported,
            "multi-piece routing around euclidean balls is not supported");

  std::vector<AdjacencyEdge> edges = domain_adjacency(d);
  std::vector<std::vector<int>> adj(np);
  std::map<std::pair<int, int>, const Vec*> deep;
  for (const AdjacencyEdge& e : edges) {
    adj[e.p].push_back(e.q);
    adj[e.q].push_back(e.p);
    deep[{std::min(e.p, e.q), std::max(e.p, e.q)}] = &e.deep_point;
  }
  auto deep_point = [&](int p, int q) -> const Vec& {
    return *deep.at({std::min(p, q), std::max(p, q)});
  };

  std::vector<std::vector<int>> seqs;
  bool overflow = false;
  int steps = 0;
  for (int start : c1) {
    std::vector<bool> used(np, false);
    used[start] = true;
    std::vector<int> cur{start};
    dfs_paths(start, adj, s2, cur, used, seqs, steps, overflow);
    if (overflow) break;
  }

  if (overflow) {
    InterfaceRoute route = dijkstra_bound(d, edges, s1, s2, x1, x2);
    require(route.bound < kInf, ErrorCode::Unreachable,
            "no piece path connects the endpoints");
    std::vector<Vec> nodes{x1};
    for (int k : route.interfaces) nodes.push_back(edges[k].deep_point);
    nodes.push_back(x2);
    return finish_with_witness(d, route.bound, std::move(nodes));
  }

  require(!seqs.empty(), ErrorCode::Unreachable,
          "no piece path connects the endpoints");
  double best = kInf;
  std::vector<int> best_seq;
  std::vector<Vec> best_ys;
  for (const std::vector<int>& seq : seqs) {
    TourResult tr = tour_lp(d, seq, x1, x2);
    if (tr.feasible && tr.value < best) {
      best = tr.value;
      best_seq = seq;
      best_ys = std::move(tr.waypoints);
    }
  }
  require(best < kInf, ErrorCode::Unreachable,
          "no piece path admits a crossing placement");

  // Waypoints sit on interface boundaries; nudge toward the interface deep
  // points to get a strictly interior polyline.
  for (double theta = 1e-6; theta <= 0.11; theta *= 10.0) {
    std::vector<Vec> nodes{x1};
    for (std::size_t i = 0; i < best_ys.size(); ++i)
      nodes.push_back(
          lerp(best_ys[i], deep_point(best_seq[i], best_seq[i + 1]), theta));
    nodes.push_back(x2);
    try {
      return finish_with_witness(d, best, std::move(nodes));
    } catch (const Error&) {
    }
  }
  std::vector<Vec> nodes{x1};
  for (std::size_t i = 0; i + 1 < best_seq.size(); ++i)
    nodes.push_back(deep_point(best_seq[i], best_seq[i + 1]));
  nodes.push_back(x2);
  return finish_with_witness(d, best, std::move(nodes));
}

PathCertificate finite_path_length_certificate(const Domain& d,
                                               const Subset& d1) {
  if (d.name == "chain_boxes") {
    PathCertificate cert;
    cert.refuted = true;
    Vec origin(d.dim, 0.0);
    for (int j = 1; j <= d.chain_n; ++j) {
      Vec xj = chain_corner(d, j);
      PathBound pb = shortest_path_bound(d, origin, xj);
      cert.rows.push_back({j, std::move(xj), pb.lower_bound, 0.5 * j});
    }
    return cert;
  }

  double margin = subset_margin(d1, d);
  double tau = margin / 2.0;
  for (const Piece& p : d.pieces)
    tau = std::min(tau, piece_inradius(p, d.norm) / 2.0);
  for (const AdjacencyEdge& e : domain_adjacency(d))
    tau = std::min(tau, e.inradius / 2.0);
  require(tau > 0.0, ErrorCode::Internal, "degenerate shrink depth");

  std::vector<Piece> inner;
  double total = 0.0;
  for (const Piece& p : d.pieces) {
    Piece q = piece_shrink(p, tau, d.norm);
    total += piece_diameter(q, d.norm);
    inner.push_back(std::move(q));
  }
  PathCertificate cert;
  cert.d2 = subset_pieces(std::move(inner), d1.label + "_cert");
  cert.length_bound = total;
  return cert;
}

}  // namespace semiflow
