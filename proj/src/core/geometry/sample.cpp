#include "core/geometry/sample.hpp"

#include <algorithm>
#include <cmath>

#include "core/support/error.hpp"
#include "core/support/rng.hpp"

namespace semiflow {

namespace {

std::vector<Vec> lattice_points(const Subset& s, NormKind norm, int n) {
  auto [lo, hi] = subset_bbox(s);
  int dim = static_cast<int>(lo.size());
  int k = std::max(2, static_cast<int>(std::ceil(std::pow(double(n), 1.0 / dim))));
  if (dim == 1) k = std::max(2, n);
  for (int round = 0; round < 7; ++round) {
    std::vector<int> counts(dim, k);
    for (int c = 0; c < dim; ++c)
      if (hi[c] - lo[c] <= 0.0) counts[c] = 1;
    std::vector<Vec> pts;
    std::vector<int> idx(dim, 0);
    for (;;) {
      Vec x(dim);
      for (int c = 0; c < dim; ++c) {
        double t = counts[c] == 1 ? 0.5 : double(idx[c]) / (counts[c] - 1);
        x[c] = lo[c] + t * (hi[c] - lo[c]);
      }
      if (subset_contains(s, x, norm)) pts.push_back(std::move(x));
      int c = 0;
      while (c < dim && ++idx[c] == counts[c]) idx[c++] = 0;
      if (c == dim) break;
    }
    if (static_cast<int>(pts.size()) >= n) {
      pts.resize(n);
      return pts;
    }
    k = 2 * k - 1;
  }
  fail(ErrorCode::EmptySample, "grid strategy could not place the requested points");
}

std::vector<Vec> halton_points(const Subset& s, NormKind norm, int n,
                               std::uint64_t seed) {
  auto [lo, hi] = subset_bbox(s);
  int dim = static_cast<int>(lo.size());
  std::vector<Vec> pts;
  std::uint64_t index = seed * 7919 + 1;
  std::uint64_t budget = index + std::max<std::uint64_t>(100000, 10000ull * n);
  for (; index < budget && static_cast<int>(pts.size()) < n; ++index) {
    Vec x(dim);
    for (int c = 0; c < dim; ++c)
      x[c] = lo[c] + halton(index, halton_base(c)) * (hi[c] - lo[c]);
    if (subset_contains(s, x, norm)) pts.push_back(std::move(x));
  }
  require(static_cast<int>(pts.size()) >= n, ErrorCode::EmptySample,
          "quasi-random strategy could not place the requested points");
  return pts;
}

std::vector<Vec> make_points(const Subset& s, NormKind norm,
                             const std::string& strategy, int n) {
  if (s.is_points()) {
    require(static_cast<int>(s.pts.size()) >= n, ErrorCode::EmptySample,
            "point cloud smaller than the requested sample");
    std::vector<Vec> pts = s.pts;
    pts.resize(n);
    return pts;
  }
  if (strategy == "grid") return lattice_points(s, norm, n);
  fail(ErrorCode::BadParameter, "unknown sampling strategy '" + strategy + "'");
}

Vec random_direction(Rng& rng, int dim, NormKind norm) {
  for (;;) {
    Vec dir(dim);
    if (norm == NormKind::Euclidean)
      for (double& v : dir) v = rng.normal();
    else
      for (double& v : dir) v = rng.uniform(-1.0, 1.0);
    double len = vec_norm(dir, norm);
    if (len > 1e-6) return vec_scale(dir, 1.0 / len);
  }
}

}  // namespace

SampleSet draw_sample(const Subset& s, const Domain& d, double mu,
                      const std::string& strategy, int n_points, int n_pairs,
                      std::uint64_t seed) {
  require(n_points > 0, ErrorCode::BadParameter, "need at least one sample point");
  require(n_pairs >= 0, ErrorCode::BadParameter, "pair count must be nonnegative");
  if (n_pairs > 0) {
    require(mu > 0.0, ErrorCode::BadParameter, "pair sampling needs mu > 0");
    double margin = subset_margin(s, d);
    require(mu <= margin * (1.0 + 1e-12), ErrorCode::MarginViolation,
            "mu exceeds the certified subset margin");
  }

  SampleSet set;
  set.descriptor = {seed, n_points, n_pairs, mu, strategy};
  if (!s.is_points() && strategy == "quasi-random")
    set.points = halton_points(s, d.norm, n_points, seed);
  else
    set.points = make_points(s, d.norm, strategy, n_points);
  require(!set.points.empty(), ErrorCode::EmptySample, "no sample points produced");

  int dim = static_cast<int>(set.points.front().size());
  Rng rng(seed ^ 0x5bf0363517ull);
  int npts = static_cast<int>(set.points.size());
  // 9 scale rungs, mu down to 1e-8 mu, so every magnitude regime shows up at
  // every base point; the top rung is shaved to keep displaced points interior
  // when mu equals the margin exactly.
  for (int ip = 0; ip < n_pairs; ++ip) {
    const Vec& x = set.points[ip % npts];
    int li = ip / npts;
    int rung, sign_flip;
    if (dim == 1) {
      rung = (li / 2) % 9;
      sign_flip = li % 2;
    } else {
      rung = li % 9;
      sign_flip = 0;
    }
    double scale = mu * std::pow(10.0, -rung);
    if (rung == 0) scale *= (1.0 - 1e-9);
    Vec dir = dim == 1 ? Vec{sign_flip ? -1.0 : 1.0}
                       : random_direction(rng, dim, d.norm);
    Vec xt = vec_add(x, vec_scale(dir, scale));
    if (xt == x) {
      xt = vec_add(x, vec_scale(dir, mu * (1.0 - 1e-9)));
    }
    set.pairs.emplace_back(x, std::move(xt));
  }
  return set;
}

SampleSet draw_points(const Subset& s, const Domain& d,
                      const std::string& strategy, int n_points,
                      std::uint64_t seed) {
  SampleSet set;
  set.descriptor = {seed, n_points, 0, 0.0, strategy};
  if (!s.is_points() && strategy == "quasi-random")
    set.points = halton_points(s, d.norm, n_points, seed);
  else
    set.points = make_points(s, d.norm, strategy, n_points);
  require(!set.points.empty(), ErrorCode::EmptySample, "no sample points produced");
  return set;
}

}  // namespace semiflow
