#include <doctest.h>

#include "curvlab/metric.hpp"
#include "oracles.hpp"

using namespace curvlab;

namespace {
constexpr double kTwoPi = 2.0 * M_PI;

ConformalMetric cone(double beta, double half = 1.0) {
  return builtin_metric("cone", {{"beta", beta}, {"half_extent", half}});
}
}  // namespace

TEST_CASE("eval_u: cone values and the at-atom error") {
  ConformalMetric g = cone(0.5);
  CHECK(g.eval_u({1.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(g.eval_u({std::exp(-1.0), 0.0}) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK_THROWS_AS(g.eval_u({0.0, 0.0}), Error);
}

TEST_CASE("eval_u superposes atoms") {
  ConformalMetric g = ConformalMetric::make(Background::plane({-1, -1, 1, 1}),
                                            {{{-0.5, 0.0}, 0.2}, {{0.5, 0.0}, 0.2}});
  CHECK(g.eval_u({0.0, 0.0}) == doctest::Approx(0.4 * std::log(0.5)).epsilon(1e-10));
}

TEST_CASE("metric invariant: beta must exceed -1 outside probe mode") {
  CHECK_THROWS_AS(
      ConformalMetric::make(Background::plane({-1, -1, 1, 1}), {{{0, 0}, -1.0}}), Error);
  ConformalMetric probe =
      ConformalMetric::make_probe(Background::plane({-1, -1, 1, 1}), {{{0, 0}, -1.5}});
  CHECK(probe.probe_only());
}

TEST_CASE("circle mean: radial symmetry, constants and the harmonic mean value property") {
  ConformalMetric g = cone(0.7);
  for (double r : {0.1, 0.37, 0.8})
    CHECK(circle_mean(g, {0, 0}, r) == doctest::Approx(0.7 * std::log(r)).epsilon(1e-8));

  DensityField c = DensityField::zeros({-1, -1}, 0.25, 9, 9);
  for (double& v : c.values) v = 2.5;
  ConformalMetric gc = ConformalMetric::make(Background::plane({-1, -1, 1, 1}), {}, c);
  CHECK(circle_mean(gc, {0.1, -0.2}, 0.3) == doctest::Approx(2.5).epsilon(1e-10));

  // off-center atom beta = 0.3 at (0.4, 0): mean over the unit circle around
  // the origin is beta log 1 = 0 by the mean value property of log
  ConformalMetric go =
      ConformalMetric::make(Background::plane({-2, -2, 2, 2}), {{{0.4, 0.0}, 0.3}});
  CHECK(circle_mean(go, {0, 0}, 1.0) == doctest::Approx(0.0).epsilon(1e-7));
  // and equals beta log|center - z| when the atom is outside the circle
  CHECK(circle_mean(go, {0, 0}, 0.2) == doctest::Approx(0.3 * std::log(0.4)).epsilon(1e-7));
  CHECK_THROWS_AS(circle_mean(go, {0, 0}, 0.4), Error);  // atom on the circle
}

TEST_CASE("disk mean: centered atom closed form and constants") {
  ConformalMetric g = cone(0.4);
  for (double r : {0.2, 0.5}) {
    double expected = 0.4 * (std::log(r) - 0.5);
    CHECK(disk_mean(g, {0, 0}, r) == doctest::Approx(expected).epsilon(1e-6));
    // independent oracle: radial quadrature of the disk average
    double brute = oracles::integrate_1d(
                       [&](double s) { return 0.4 * std::log(s) * kTwoPi * s; }, 1e-12, r) /
                   (M_PI * r * r);
    CHECK(disk_mean(g, {0, 0}, r) == doctest::Approx(brute).epsilon(1e-6));
  }

  DensityField c = DensityField::zeros({-1, -1}, 0.25, 9, 9);
  for (double& v : c.values) v = -1.25;
  ConformalMetric gc = ConformalMetric::make(Background::plane({-1, -1, 1, 1}), {}, c);
  CHECK(disk_mean(gc, {0.2, 0.1}, 0.3) == doctest::Approx(-1.25).epsilon(1e-9));

  // odd-part cancellation: linear smooth part averages to its center value
  DensityField lin = DensityField::zeros({-1, -1}, 0.125, 17, 17);
  for (int j = 0; j < lin.ny; ++j)
    for (int i = 0; i < lin.nx; ++i) lin.at(i, j) = 0.7 * lin.node(i, j).x;
  ConformalMetric gl = ConformalMetric::make(Background::plane({-1, -1, 1, 1}), {}, lin);
  CHECK(disk_mean(gl, {0.25, -0.25}, 0.25) == doctest::Approx(0.7 * 0.25).epsilon(1e-7));

  // off-center atom strictly inside the disk: closed form vs dense quadrature
  ConformalMetric go =
      ConformalMetric::make(Background::plane({-2, -2, 2, 2}), {{{0.1, 0.0}, 0.6}});
  double r = 0.5;
  double brute = oracles::disk_quadrature(
                     [&](Point p) {
                       double d = (p - Point{0.1, 0.0}).norm();
                       return 0.6 * std::log(std::max(d, 1e-9));
                     },
                     {0, 0}, r, 2000) /
                 (M_PI * r * r);
  CHECK(disk_mean(go, {0, 0}, r) == doctest::Approx(brute).epsilon(1e-3));
}

TEST_CASE("curvature_of: cones, quadratic smooth part, flat metric") {
  ConformalMetric g = cone(0.3);
  SignedMeasure mu = curvature_of(g);
  REQUIRE(mu.atoms.size() == 1);
  CHECK(mu.atoms[0].mass == doctest::Approx(-0.6 * M_PI));

  // smooth part a |x|^2: density = -Laplacian = -4a away from the boundary ring
  double a = 0.35;
  DensityField quad = DensityField::zeros({-1, -1}, 2.0 / 64.0, 65, 65);
  for (int j = 0; j < quad.ny; ++j)
    for (int i = 0; i < quad.nx; ++i) {
      Point p = quad.node(i, j);
      quad.at(i, j) = a * (p.x * p.x + p.y * p.y);
    }
  ConformalMetric gq = ConformalMetric::make(Background::plane({-1, -1, 1, 1}), {}, quad);
  SignedMeasure mq = curvature_of(gq);
  REQUIRE(mq.density.has_value());
  for (int j = 2; j < mq.density->ny - 2; j += 7)
    for (int i = 2; i < mq.density->nx - 2; i += 7)
      CHECK(mq.density->at(i, j) == doctest::Approx(-4.0 * a).epsilon(1e-9));

  ConformalMetric flat = ConformalMetric::make(Background::plane({-1, -1, 1, 1}), {});
  SignedMeasure mf = curvature_of(flat);
  CHECK(mf.atoms.empty());
  CHECK(!mf.density.has_value());
}

TEST_CASE("scaling: adding a constant to the smooth part shifts u and means, not curvature") {
  DensityField base = DensityField::zeros({-1, -1}, 0.125, 17, 17);
  for (int j = 0; j < base.ny; ++j)
    for (int i = 0; i < base.nx; ++i) base.at(i, j) = 0.1 * base.node(i, j).y;
  ConformalMetric g1 =
      ConformalMetric::make(Background::plane({-1, -1, 1, 1}), {{{0.3, 0.3}, 0.2}}, base);
  DensityField shifted = base;
  for (double& v : shifted.values) v += 1.7;
  ConformalMetric g2 =
      ConformalMetric::make(Background::plane({-1, -1, 1, 1}), {{{0.3, 0.3}, 0.2}}, shifted);

  Point p{-0.4, 0.2};
  CHECK(g2.eval_u(p) - g1.eval_u(p) == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(circle_mean(g2, {-0.2, 0.0}, 0.15) - circle_mean(g1, {-0.2, 0.0}, 0.15) ==
        doctest::Approx(1.7).epsilon(1e-9));
  CHECK(disk_mean(g2, {-0.2, 0.0}, 0.15) - disk_mean(g1, {-0.2, 0.0}, 0.15) ==
        doctest::Approx(1.7).epsilon(1e-9));
  SignedMeasure m1 = curvature_of(g1), m2 = curvature_of(g2);
  for (size_t k = 0; k < m1.density->values.size(); ++k)
    CHECK(m1.density->values[k] == doctest::Approx(m2.density->values[k]).epsilon(1e-9));
}

TEST_CASE("cylinder transform: cone profile and flat profile") {
  ConformalMetric g = cone(0.25, 1.2);
  CylinderMetric cyl = cylinder_transform(g, {0, 0}, 0.5, 3.0, 64);
  // v = -(1+beta) t, independent of theta
  for (int it = 0; it < cyl.nt; it += 9) {
    double t = cyl.t0 + (cyl.t1 - cyl.t0) * it / (cyl.nt - 1);
    for (int ith = 0; ith < cyl.ntheta; ith += 13)
      CHECK(cyl.at(it, ith) == doctest::Approx(-1.25 * t).epsilon(1e-10));
  }
  // int dv/dt over the circle
  CHECK(cyl.radial_profile_integral(cyl.nt / 2) ==
        doctest::Approx(-kTwoPi * 1.25).epsilon(1e-6));

  ConformalMetric flat = ConformalMetric::make(Background::plane({-2, -2, 2, 2}), {});
  CylinderMetric fc = cylinder_transform(flat, {0, 0}, 0.2, 1.0, 32);
  CHECK(fc.at(0, 0) == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(fc.radial_profile_integral(fc.nt / 2) == doctest::Approx(-kTwoPi).epsilon(1e-6));

  CHECK_THROWS_AS(cylinder_transform(cone(0.3, 0.5), {0, 0}, -0.5, 1.0, 16), Error);
}

TEST_CASE("metric JSON round trip across builtins") {
  for (const char* name : {"cone", "multicone", "hulin-troyanov", "abs-line", "torus-dipole"}) {
    nlohmann::json params = nlohmann::json::object();
    if (std::string(name) == "torus-dipole") params["resolution"] = 64;
    if (std::string(name) == "hulin-troyanov") params["samples"] = 65;
    if (std::string(name) == "abs-line") params["samples"] = 65;
    ConformalMetric g = builtin_metric(name, params);
    ConformalMetric back = metric_from_json(metric_to_json(g));
    CHECK(back.atoms.size() == g.atoms.size());
    CHECK(back.background.is_torus() == g.background.is_torus());
    Point probe = g.background.is_torus() ? Point{0.4, 0.3} : Point{0.31, 0.22};
    CHECK(back.eval_u(probe) == doctest::Approx(g.eval_u(probe)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(builtin_metric("no-such-metric", {}), Error);
}

TEST_CASE("abs-line curvature recovers its line mass in total variation") {
  ConformalMetric g = builtin_metric("abs-line", nlohmann::json::object());
  SignedMeasure mu = curvature_of(g);
  REQUIRE(mu.density.has_value());
  // reference: curvature -2 H^1 restricted to {x1 = 0}; compare over a band
  Region band = Rect{-0.5, -0.5, 0.5, 0.5};
  SignedMeasure reference;
  reference.lines.push_back({{0.0, -1.0}, {0.0, 1.0}, -2.0});
  double want = total_variation(reference, band);
  double got = total_variation(mu, band);
  CHECK(got == doctest::Approx(want).epsilon(0.05));
  CHECK(signed_mass(mu, band) == doctest::Approx(signed_mass(reference, band)).epsilon(0.05));
}

TEST_CASE("builtin catalog names every builtin") {
  std::string cat = builtin_catalog();
  for (const char* name : {"cone", "multicone", "hulin-troyanov", "abs-line", "torus-dipole"})
    CHECK(cat.find(name) != std::string::npos);
}
