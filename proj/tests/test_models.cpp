#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "core/models/catalog.hpp"
#include "core/models/checks.hpp"
#include "core/models/expm.hpp"
#include "core/support/error.hpp"

using namespace semiflow;

namespace {

VectorField cubic_field() {
  VectorField field;
  field.f = [](const Vec& x) { return Vec{-x[0] * x[0] * x[0]}; };
  field.jacobian = [](const Vec& x) {
    Mat m(1, 1);
    m(0, 0) = -3.0 * x[0] * x[0];
    return m;
  };
  field.name = "cubic";
  return field;
}

}  // namespace

TEST_CASE("matrix exponential basics") {
  Mat A(2, 2);
  A(0, 1) = 1.0;
  A(1, 0) = -1.0;
  Mat E = expm(mat_scale(A, 0.3));
  CHECK(E(0, 0) == doctest::Approx(std::cos(0.3)).epsilon(1e-14));
  CHECK(E(0, 1) == doctest::Approx(std::sin(0.3)).epsilon(1e-14));
  CHECK(E(1, 0) == doctest::Approx(-std::sin(0.3)).epsilon(1e-14));

  Mat S(1, 1);
  S(0, 0) = -1e-8;
  CHECK(expm1m(S)(0, 0) == doctest::Approx(std::expm1(-1e-8)).epsilon(1e-14));

  Mat big(1, 1);
  big(0, 0) = 3.0;
  CHECK(expm(big)(0, 0) == doctest::Approx(std::exp(3.0)).epsilon(1e-13));
}

TEST_CASE("piecewise family frozen values") {
  SemigroupFamily fam = piecewise_decay_family();
  CHECK(evaluate(fam, 0.5, {0.8})[0] ==
        doctest::Approx(0.4708856846994462).epsilon(1e-13));
  CHECK(evaluate(fam, 1.0, {0.3})[0] ==
        doctest::Approx(0.04060058497098381).epsilon(1e-13));
  CHECK(evaluate(fam, 0.7, {0.8})[0] ==
        doctest::Approx(0.3156441138452563).epsilon(1e-13));
  // law through the seam
  Vec mid = evaluate(fam, 0.5, {0.8});
  CHECK(evaluate(fam, 0.2, mid)[0] ==
        doctest::Approx(evaluate(fam, 0.7, {0.8})[0]).epsilon(1e-13));
}

TEST_CASE("piecewise branch formulas agree on the seam") {
  for (double x : {0.55, 0.7, 0.8, 0.95}) {
    double seam = std::log(2.0 * x);
    double first = std::exp(-seam) * x;
    double second = 2.0 * std::exp(-2.0 * seam) * x * x;
    CHECK(std::abs(first - second) <= 1e-15);
    SemigroupFamily fam = piecewise_decay_family();
    CHECK(evaluate(fam, seam, {x})[0] == doctest::Approx(first).epsilon(1e-14));
  }
}

TEST_CASE("time zero is the identity") {
  SemigroupFamily fams[] = {piecewise_decay_family(), cubic_decay_family(),
                            rotation2d_family(1.0, 2.0)};
  for (const SemigroupFamily& fam : fams) {
    if (fam.domain.dim == 1) {
      for (int i = -50; i <= 50; ++i) {
        Vec x{i * 0.018};
        CHECK(evaluate(fam, 0.0, x) == x);
      }
    } else {
      CHECK(evaluate(fam, 0.0, {0.3, -0.7}) == Vec{0.3, -0.7});
    }
  }
}

TEST_CASE("linear family matches the scalar exponential") {
  Mat A(1, 1);
  A(0, 0) = -1.0;
  SemigroupFamily fam = linear_family(A, make_interval(-1.0, 1.0));
  for (double t : {0.0, 0.1, 0.7, 2.0})
    CHECK(evaluate(fam, t, {0.5})[0] ==
          doctest::Approx(0.5 * std::exp(-t)).epsilon(1e-13));
  CHECK(fam.has_derivative());
  CHECK(frechet_derivative(fam, 0.3, {0.5}, 1e-4).op(0, 0) ==
        doctest::Approx(std::exp(-0.3)).epsilon(1e-13));
}

TEST_CASE("rotation family traces the circle") {
  SemigroupFamily fam = rotation2d_family(1.0, 2.0);
  Vec y = evaluate(fam, 0.1, {1.0, 0.0});
  CHECK(y[0] == doctest::Approx(std::cos(0.1)).epsilon(1e-14));
  CHECK(y[1] == doctest::Approx(-std::sin(0.1)).epsilon(1e-14));
  // isometry never escapes
  CHECK_NOTHROW(evaluate(fam, 50.0, {1.2, 0.9}));
}

TEST_CASE("escape is reported") {
  Mat A(1, 1);
  A(0, 0) = 1.0;  // growth
  SemigroupFamily fam = linear_family(A, make_interval(-1.0, 1.0));
  CHECK_THROWS_AS(evaluate(fam, 1.0, {0.9}), Error);
  try {
    evaluate(fam, 1.0, {0.9});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TrajectoryEscape);
  }
  CHECK_THROWS_AS(evaluate(fam, 0.5, {1.5}), Error);  // OutsideDomain
}

TEST_CASE("flow family reproduces closed forms") {
  VectorField lin;
  lin.f = [](const Vec& x) { return Vec{-x[0]}; };
  lin.name = "decay";
  SemigroupFamily decay = flow_family(lin, make_interval(-1.0, 1.0));
  for (double t : {0.2, 1.0, 3.0})
    CHECK(evaluate(decay, t, {0.8})[0] ==
          doctest::Approx(0.8 * std::exp(-t)).epsilon(1e-8));

  SemigroupFamily cubic = flow_family(cubic_field(), make_interval(-1.0, 1.0));
  SemigroupFamily exact = cubic_decay_family();
  for (double t : {0.3, 1.0, 2.5}) {
    double got = evaluate(cubic, t, {0.7})[0];
    double want = evaluate(exact, t, {0.7})[0];
    CHECK(std::abs(got - want) <= 1e-8);
  }
}

TEST_CASE("flow escape carries a time") {
  VectorField grow;
  grow.f = [](const Vec& x) { return Vec{x[0]}; };
  SemigroupFamily fam = flow_family(grow, make_interval(-1.0, 1.0));
  try {
    evaluate(fam, 2.0, {0.5});
    FAIL("expected escape");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TrajectoryEscape);
    CHECK(std::string(e.what()).find("t=") != std::string::npos);
  }
}

TEST_CASE("stiff budget exhaustion fails loudly") {
  VectorField stiff;
  stiff.f = [](const Vec& x) { return Vec{-3e7 * x[0]}; };
  IntegratorConfig cfg;
  cfg.max_steps = 5000;
  SemigroupFamily fam = flow_family(stiff, make_interval(-1.0, 1.0), cfg);
  try {
    evaluate(fam, 1.0, {0.5});
    FAIL("expected stiffness failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StiffnessFailure);
  }
}

TEST_CASE("iterates") {
  Domain d = make_interval(-1.0, 1.0);
  auto ident = [](const Vec& x) { return x; };
  CHECK(iterate(ident, 7, {0.3}, d) == Vec{0.3});

  auto shrink = [](const Vec& x) { return Vec{0.9 * x[0]}; };
  CHECK(iterate(shrink, 3, {1.0 - 1e-12}, d)[0] == doctest::Approx(0.729));

  auto logistic = [](const Vec& x) { return Vec{x[0] + 0.1 * (1.0 - x[0] * x[0])}; };
  CHECK(iterate(logistic, 2, {0.0}, d)[0] == doctest::Approx(0.199).epsilon(1e-13));

  // composition associativity, exactly
  Vec a = iterate(logistic, 5, {0.2}, d);
  Vec b = iterate(logistic, 2, iterate(logistic, 3, {0.2}, d), d);
  CHECK(a == b);

  auto walk = [](const Vec& x) { return Vec{x[0] + 0.3}; };
  try {
    iterate(walk, 5, {0.5}, d);
    FAIL("expected escape");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TrajectoryEscape);
    CHECK(std::string(e.what()).find("iterate 2") != std::string::npos);
  }
}

TEST_CASE("law residuals across the catalog") {
  Domain d = make_interval(-1.0, 1.0);
  Subset grid = subset_box({-0.9}, {0.9});
  SampleSet sample = draw_points(grid, d, "grid", 101, 1);

  SemigroupFamily pw = piecewise_decay_family();
  for (double s : {0.1, 0.2, 0.5})
    for (double t : {0.1, 0.2, 0.5}) {
      ModulusReport rep = compose_residual(pw, s, t, sample);
      CHECK(rep.values[0] <= 1e-12);
    }

  Mat A(1, 1);
  A(0, 0) = -1.0;
  SemigroupFamily lin = linear_family(A, d);
  CHECK(compose_residual(lin, 0.4, 0.9, sample).values[0] <= 1e-13);

  SemigroupFamily broken = broken_shift_family();
  ModulusReport rep = compose_residual(broken, 0.1, 0.2, sample);
  CHECK(rep.values[0] == doctest::Approx(0.04).epsilon(1e-10));
  CHECK(rep.witnesses[0].value == rep.values[0]);
}

TEST_CASE("flow law residual stays near integrator tolerance") {
  SemigroupFamily cubic = flow_family(cubic_field(), make_interval(-1.0, 1.0));
  Domain d = cubic.domain;
  SampleSet sample = draw_points(subset_box({-0.8}, {0.8}), d, "grid", 9, 1);
  ModulusReport rep = compose_residual(cubic, 0.3, 0.4, sample);
  CHECK(rep.values[0] <= 2e-10);
}

TEST_CASE("frechet derivative of the piecewise family") {
  SemigroupFamily fam = piecewise_decay_family();
  FrechetResult fr = frechet_derivative(fam, 0.1, {0.3}, 1e-5);
  CHECK(fr.analytic);
  CHECK(fr.op(0, 0) == doctest::Approx(0.8187307530779818).epsilon(1e-12));
  FrechetResult fd = frechet_derivative(fam, 0.1, {0.3}, 1e-5, false);
  CHECK(!fd.analytic);
  CHECK(fd.op(0, 0) == doctest::Approx(0.8187307530779818).epsilon(1e-9));
  CHECK(fd.truncation_estimate <= 1e-9);
  CHECK_THROWS_AS(frechet_derivative(fam, 0.1, {0.999}, 1e-2, false), Error);
}

TEST_CASE("finite differences track the variational flow") {
  SemigroupFamily cubic = flow_family(cubic_field(), make_interval(-1.0, 1.0));
  REQUIRE(cubic.has_derivative());
  double step = 1e-3;
  FrechetResult an = frechet_derivative(cubic, 0.5, {0.4}, step);
  FrechetResult fd = frechet_derivative(cubic, 0.5, {0.4}, step, false);
  CHECK(std::abs(an.op(0, 0) - fd.op(0, 0)) <= 10.0 * step * step);
  // closed-form check of the variational solution
  double want = std::pow(1.0 + 2.0 * 0.5 * 0.16, -1.5);
  CHECK(an.op(0, 0) == doctest::Approx(want).epsilon(1e-8));
}

TEST_CASE("centered time differences avoid cancellation") {
  SemigroupFamily rot = rotation2d_family(1.0, 2.0);
  REQUIRE(static_cast<bool>(rot.centered_tdiff));
  Vec x{0.6, -0.2};
  double t = 0.4;
  for (double h : {1e-3, 1e-9}) {
    Vec fast = rot.centered_tdiff(t, h, x);
    Vec naive{evaluate(rot, t + h, x)[0] - evaluate(rot, t - h, x)[0],
              evaluate(rot, t + h, x)[1] - evaluate(rot, t - h, x)[1]};
    CHECK(vec_dist(fast, naive, NormKind::Sup) <= 2e-13);
    // magnitude ~ 2h ||Ax||
    CHECK(norm_euclidean(fast) ==
          doctest::Approx(2.0 * h * norm_euclidean(x)).epsilon(1e-5));
  }

  Mat A(1, 1);
  A(0, 0) = -1.0;
  SemigroupFamily lin = linear_family(A, make_interval(-1.0, 1.0));
  Vec diff = lin.centered_tdiff(0.3, 1e-9, {0.5});
  // exact: e^{-(t-h)} (e^{-2h} - 1) x, to first order -2h e^{-t} x
  CHECK(diff[0] ==
        doctest::Approx(-2e-9 * std::exp(-0.3) * 0.5).epsilon(1e-6));

  SemigroupFamily cub = cubic_decay_family();
  Vec dc = cub.centered_tdiff(0.5, 1e-9, {0.7});
  double denom = 1.0 + 2.0 * 0.5 * 0.49;
  CHECK(dc[0] == doctest::Approx(-2e-9 * 0.343 / std::pow(denom, 1.5))
                     .epsilon(1e-6));
}
