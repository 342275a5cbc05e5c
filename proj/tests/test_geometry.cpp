#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "core/geometry/domain.hpp"
#include "core/geometry/sample.hpp"
#include "core/geometry/subset.hpp"
#include "core/support/error.hpp"

using namespace semiflow;

TEST_CASE("interval boundary distance") {
  Domain d = make_interval(-1.0, 1.0);
  CHECK(dist_to_boundary(d, {0.0}) == doctest::Approx(1.0));
  CHECK(dist_to_boundary(d, {0.8}) == doctest::Approx(0.2));
  CHECK(dist_to_boundary(d, {1.0}) == 0.0);
  CHECK_THROWS_AS(dist_to_boundary(d, {1.5}), Error);
  try {
    dist_to_boundary(d, {1.5});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutsideDomain);
  }
}

TEST_CASE("chain box boundary distance") {
  Domain d = make_chain_boxes_domain(1.0 / 3.0, 3);
  CHECK(dist_to_boundary(d, {0.5, 0.0, 0.0}) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("chain domain membership and shape") {
  Domain d2 = make_chain_boxes_domain(1.0 / 3.0, 2);
  CHECK(domain_contains(d2, {0.5, 0.0}));
  CHECK(domain_contains(d2, {1.0, 0.5}));
  CHECK(containing_pieces(d2, {1.0, 0.5}) == std::vector<int>{1});
  CHECK(!domain_contains(d2, {0.5, 0.5}));

  Domain d6 = make_chain_boxes_domain(1.0 / 3.0, 6);
  auto [lo, hi] = domain_bbox(d6);
  for (int c = 0; c < 6; ++c) {
    CHECK(lo[c] >= -4.0 / 3.0 - 1e-12);
    CHECK(hi[c] <= 4.0 / 3.0 + 1e-12);
  }
  auto edges = domain_adjacency(d6);
  CHECK(edges.size() == 5);  // only consecutive pieces meet
  for (const auto& e : edges) {
    CHECK(std::abs(e.p - e.q) == 1);
    CHECK(e.inradius == doctest::Approx(1.0 / 3.0));
  }
  CHECK(overlap_inradius(d6.pieces[0], d6.pieces[2], d6.norm) <= 0.0);

  CHECK_THROWS_AS(make_chain_boxes_domain(0.6, 4), Error);
  CHECK_THROWS_AS(make_chain_boxes_domain(0.25, 1), Error);
}

TEST_CASE("chain subdomain margin") {
  Domain d = make_chain_boxes_domain(1.0 / 3.0, 3);
  Domain inner = make_chain_boxes_domain(0.1, 3);
  Subset s = subset_pieces(inner.pieces, "inner_chain");
  CHECK(subset_margin(s, d) == doctest::Approx(7.0 / 30.0).epsilon(1e-9));
}

TEST_CASE("interval inflation") {
  Domain d = make_interval(-1.0, 1.0);
  Subset s = subset_box({-0.5}, {0.5});
  Subset big = inflate(s, d, 0.3);
  REQUIRE(big.pieces.size() == 1);
  CHECK(big.pieces[0].lo[0] == doctest::Approx(-0.8));
  CHECK(big.pieces[0].hi[0] == doctest::Approx(0.8));
  CHECK(subset_margin(big, d) == doctest::Approx(0.2));
  CHECK_THROWS_AS(inflate(s, d, 0.5), Error);
  try {
    inflate(s, d, 0.6);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MarginViolation);
  }
}

TEST_CASE("point inflation in the unit ball") {
  Domain d = make_ball({0.0, 0.0}, 1.0, NormKind::Euclidean);
  Subset s = subset_points({{0.0, 0.0}});
  Subset b = inflate(s, d, 0.25);
  REQUIRE(b.pieces.size() == 1);
  CHECK(b.pieces[0].kind == PieceKind::Ball);
  CHECK(b.pieces[0].radius == doctest::Approx(0.25));
  CHECK(subset_margin(b, d) == doctest::Approx(0.75));
}

TEST_CASE("inflation can merge pieces") {
  Domain d = make_interval(-1.0, 1.0);
  Subset s = subset_pieces({piece_box({-0.5}, {-0.1}), piece_box({0.1}, {0.5})},
                           "twin");
  Subset merged = inflate(s, d, 0.35);
  CHECK(subset_contains(merged, {0.0}, d.norm));  // gap closed
  double margin = subset_margin(merged, d);
  CHECK(margin == doctest::Approx(0.15).epsilon(1e-9));

  // brute-force margin over a dense membership grid
  double brute = 1e30;
  for (int k = -999; k <= 999; ++k) {
    Vec x{k * 1e-3};
    if (subset_contains(merged, x, d.norm))
      brute = std::min(brute, dist_to_boundary(d, x));
  }
  CHECK(margin <= brute + 1e-9);
  CHECK(brute <= margin + 2e-3);
}

TEST_CASE("inflation is monotone") {
  Domain d = make_box({-1.0, -1.0}, {1.0, 1.0}, NormKind::Sup);
  Subset s = subset_box({-0.3, -0.3}, {0.3, 0.3});
  Subset a = inflate(s, d, 0.1);
  Subset b = inflate(s, d, 0.2);
  SampleSet probe = draw_points(subset_box({-0.6, -0.6}, {0.6, 0.6}), d,
                                "quasi-random", 200, 11);
  for (const Vec& x : probe.points)
    if (subset_contains(a, x, d.norm)) CHECK(subset_contains(b, x, d.norm));
}

TEST_CASE("subset poking outside is rejected") {
  Domain d = make_interval(-1.0, 1.0);
  Subset s = subset_box({0.9}, {1.2});
  CHECK_THROWS_AS(subset_margin(s, d), Error);
}

TEST_CASE("grid sampling on an interval") {
  Domain d = make_interval(-1.0, 1.0);
  Subset s = subset_box({-0.5}, {0.5});
  SampleSet set = draw_points(s, d, "grid", 11, 3);
  REQUIRE(set.points.size() == 11);
  std::vector<double> xs;
  for (const Vec& p : set.points) xs.push_back(p[0]);
  std::sort(xs.begin(), xs.end());
  for (int i = 0; i <= 10; ++i)
    CHECK(std::abs(xs[i] - (-0.5 + 0.1 * i)) <= 1e-12);
}

TEST_CASE("pair constraints and determinism") {
  Domain d = make_box({-1.0, -1.0}, {1.0, 1.0}, NormKind::Sup);
  Subset s = subset_box({-0.4, -0.4}, {0.4, 0.4});
  SampleSet a = draw_sample(s, d, 0.2, "grid", 9, 40, 123);
  CHECK(a.points.size() == 9);
  CHECK(a.pairs.size() == 40);
  for (const auto& [x, xt] : a.pairs) {
    CHECK(subset_contains(s, x, d.norm));
    double r = vec_dist(x, xt, d.norm);
    CHECK(r > 0.0);
    CHECK(r <= 0.2 * (1.0 + 1e-12));
    CHECK(domain_contains(d, xt));
  }
  SampleSet b = draw_sample(s, d, 0.2, "grid", 9, 40, 123);
  CHECK(a.points == b.points);
  CHECK(a.pairs == b.pairs);
  SampleSet c = draw_sample(s, d, 0.2, "grid", 9, 40, 124);
  CHECK(a.pairs != c.pairs);
}

TEST_CASE("pair scales ladder down") {
  Domain d = make_interval(-1.0, 1.0);
  Subset s = subset_box({-0.5}, {0.5});
  SampleSet set = draw_sample(s, d, 0.1, "grid", 1, 18, 5);
  std::multiset<int> rungs;
  for (const auto& [x, xt] : set.pairs) {
    double r = std::abs(xt[0] - x[0]);
    rungs.insert(static_cast<int>(std::round(std::log10(0.1 / r))));
  }
  for (int k = 0; k <= 8; ++k) CHECK(rungs.count(k) == 2);  // both signs
}

TEST_CASE("quasi-random sampling stays inside") {
  Domain d = make_ball({0.0, 0.0}, 1.0, NormKind::Euclidean);
  Subset s = subset_ball({0.0, 0.0}, 0.5, NormKind::Euclidean);
  SampleSet set = draw_points(s, d, "quasi-random", 64, 9);
  CHECK(set.points.size() == 64);
  for (const Vec& p : set.points) CHECK(norm_euclidean(p) <= 0.5 + 1e-8);
}

TEST_CASE("sampling error cases") {
  Domain d = make_interval(-1.0, 1.0);
  Subset cloud = subset_points({{0.1}, {0.2}, {0.3}});
  CHECK_THROWS_AS(draw_points(cloud, d, "grid", 5, 1), Error);
  try {
    draw_points(cloud, d, "grid", 5, 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptySample);
  }
  Subset s = subset_box({-0.5}, {0.5});
  CHECK_THROWS_AS(draw_sample(s, d, 0.7, "grid", 3, 3, 1), Error);  // mu > margin
  CHECK_THROWS_AS(draw_points(s, d, "unheard-of", 3, 1), Error);
}

TEST_CASE("disconnected unions need the explicit flag") {
  std::vector<Piece> parts{piece_box({-1.0}, {-0.5}), piece_box({0.5}, {1.0})};
  CHECK_THROWS_AS(make_union(parts, NormKind::Sup), Error);
  Domain d = make_union(parts, NormKind::Sup, true);
  CHECK(!domain_connected(d));
}
