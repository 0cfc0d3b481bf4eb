#include <doctest.h>

#include <random>

#include "curvlab/measure.hpp"
#include "oracles.hpp"

using namespace curvlab;

namespace {

SignedMeasure sine_density_measure() {
  DensityField d = DensityField::zeros({-1.0, -1.0}, 0.125, 17, 17);
  for (int j = 0; j < d.ny; ++j)
    for (int i = 0; i < d.nx; ++i) {
      Point p = d.node(i, j);
      d.at(i, j) = std::sin(3.0 * p.x) * std::cos(2.0 * p.y);
    }
  SignedMeasure mu;
  mu.density = d;
  return mu;
}

}  // namespace

TEST_CASE("jordan decomposition splits atoms by sign") {
  SignedMeasure mu = SignedMeasure::from_atoms({{{0, 0}, 1.0}, {{1, 0}, -2.0}});
  auto [pos, neg] = jordan_decompose(mu);
  REQUIRE(pos.atoms.size() == 1);
  REQUIRE(neg.atoms.size() == 1);
  CHECK(pos.atoms[0].mass == doctest::Approx(1.0));
  CHECK(neg.atoms[0].mass == doctest::Approx(2.0));
  CHECK(neg.atoms[0].location.x == doctest::Approx(1.0));
}

TEST_CASE("jordan decomposition of the zero measure") {
  SignedMeasure mu;
  auto [pos, neg] = jordan_decompose(mu);
  CHECK(pos.empty());
  CHECK(neg.empty());
}

TEST_CASE("jordan decomposition of an alternating density matches the per-sample oracle") {
  SignedMeasure mu = sine_density_measure();
  auto [pos, neg] = jordan_decompose(mu);
  REQUIRE(pos.density.has_value());
  REQUIRE(neg.density.has_value());
  for (size_t k = 0; k < mu.density->values.size(); ++k) {
    double v = mu.density->values[k];
    CHECK(pos.density->values[k] == doctest::Approx(std::max(v, 0.0)));
    CHECK(neg.density->values[k] == doctest::Approx(std::max(-v, 0.0)));
    CHECK(pos.density->values[k] - neg.density->values[k] == doctest::Approx(v));
  }
}

TEST_CASE("total variation counts atoms inside the region only") {
  SignedMeasure mu = SignedMeasure::from_atoms({{{0, 0}, 1.0}, {{0.5, 0}, -1.0}});
  CHECK(total_variation(mu, Disk{{0, 0}, 0.25}) == doctest::Approx(1.0));
  CHECK(total_variation(SignedMeasure{}, Disk{{0, 0}, 1.0}) == doctest::Approx(0.0));
}

TEST_CASE("line mass in the unit disk has the analytic chord length") {
  // density 2 along the segment x = 0 through the unit disk: chord length 2
  SignedMeasure mu;
  mu.lines.push_back({{0.0, -3.0}, {0.0, 3.0}, 2.0});
  CHECK(total_variation(mu, Disk{{0, 0}, 1.0}) == doctest::Approx(4.0).epsilon(1e-12));
  // rectangle clipping
  CHECK(total_variation(mu, Rect{-1.0, -0.5, 1.0, 0.75}) == doctest::Approx(2.5).epsilon(1e-12));
  // annulus: outer minus inner chord
  CHECK(total_variation(mu, AnnulusRegion{{0, 0}, 0.5, 1.0}) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("integrate_test evaluates Dirac parts exactly") {
  SignedMeasure mu = SignedMeasure::from_atoms({{{0.3, -0.2}, 1.7}});
  auto phi = [](Point p) { return p.x * p.x + 2.0 * p.y; };
  CHECK(integrate_test(mu, phi) == doctest::Approx(1.7 * phi({0.3, -0.2})));
}

TEST_CASE("integrate_test against phi = 1 returns the total mass") {
  SignedMeasure mu = sine_density_measure();
  mu.atoms = {{{0.1, 0.1}, 0.5}};
  double total = signed_mass(mu);
  CHECK(integrate_test(mu, [](Point) { return 1.0; }) == doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("integrate_test of x against a uniform density approximates 1/2") {
  // c = 1 on [0,1]^2: int x dx dy = 1/2 (midpoint rule is exact for linear phi)
  DensityField d = DensityField::zeros({0.0, 0.0}, 1.0 / 32.0, 33, 33);
  for (double& v : d.values) v = 1.0;
  SignedMeasure mu;
  mu.density = d;
  double val = integrate_test(mu, [](Point p) { return p.x; });
  // the node-centered grid covers slightly more than [0,1]^2; tolerance is
  // the half-cell overhang
  CHECK(val == doctest::Approx(0.5 * d.integral()).epsilon(1e-9));
}

TEST_CASE("point mass reads atoms only") {
  SignedMeasure mu = SignedMeasure::from_atoms({{{0, 0}, 2.0 * M_PI * 0.3}});
  CHECK(point_mass(mu, {0, 0}) == doctest::Approx(0.6 * M_PI));
  CHECK(point_mass(mu, {1, 1}) == 0.0);
  SignedMeasure dens = sine_density_measure();
  CHECK(point_mass(dens, {0.25, 0.25}) == 0.0);
}

TEST_CASE("jordan parts recombine: mass and variation identities on random rectangles") {
  SignedMeasure mu = sine_density_measure();
  mu.atoms = {{{0.31, 0.17}, 0.7}, {{-0.4, -0.6}, -1.1}};
  mu.lines.push_back({{-0.8, 0.8}, {0.8, 0.8}, -0.5});
  auto [pos, neg] = jordan_decompose(mu);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int k = 0; k < 24; ++k) {
    double x0 = unif(rng), x1 = unif(rng), y0 = unif(rng), y1 = unif(rng);
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    Region r = Rect{x0, y0, x1, y1};
    CHECK(signed_mass(pos, r) - signed_mass(neg, r) == doctest::Approx(signed_mass(mu, r)));
    CHECK(signed_mass(pos, r) + signed_mass(neg, r) ==
          doctest::Approx(total_variation(mu, r)).epsilon(1e-10));
  }
}

TEST_CASE("total variation is additive over a disjoint rectangle partition and monotone") {
  SignedMeasure mu = sine_density_measure();
  mu.atoms = {{{0.11, 0.23}, -0.9}};
  double whole = total_variation(mu, Rect{-1.0, -1.0, 1.0, 1.0});
  double parts = 0.0;
  // node-aligned partition so density samples fall in exactly one part
  double cut_x = -1.0 + 9.4 * 0.125, cut_y = -1.0 + 5.2 * 0.125;
  parts += total_variation(mu, Rect{-1.0, -1.0, cut_x, cut_y});
  parts += total_variation(mu, Rect{std::nextafter(cut_x, 2.0), -1.0, 1.0, cut_y});
  parts += total_variation(mu, Rect{-1.0, std::nextafter(cut_y, 2.0), cut_x, 1.0});
  parts += total_variation(mu, Rect{std::nextafter(cut_x, 2.0), std::nextafter(cut_y, 2.0), 1.0, 1.0});
  CHECK(parts == doctest::Approx(whole).epsilon(1e-9));
  CHECK(total_variation(mu, Rect{-0.5, -0.5, 0.5, 0.5}) <= whole + 1e-12);
}

TEST_CASE("integrate_test is linear across the jordan split for random test functions") {
  SignedMeasure mu = sine_density_measure();
  mu.atoms = {{{0.31, 0.17}, 0.7}, {{-0.4, -0.6}, -1.1}};
  auto [pos, neg] = jordan_decompose(mu);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    double a = unif(rng), b = unif(rng), c = unif(rng);
    auto phi = [&](Point p) { return a * p.x + b * p.y * p.y + c; };
    CHECK(integrate_test(mu, phi) ==
          doctest::Approx(integrate_test(pos, phi) - integrate_test(neg, phi)).epsilon(1e-10));
  }
}

TEST_CASE("measure JSON round trip") {
  SignedMeasure mu = sine_density_measure();
  mu.atoms = {{{0.25, -0.5}, 1.25}};
  mu.lines.push_back({{0.0, -1.0}, {0.0, 1.0}, 2.0});
  SignedMeasure back = measure_from_json(measure_to_json(mu));
  CHECK(back.atoms.size() == mu.atoms.size());
  CHECK(back.lines.size() == mu.lines.size());
  REQUIRE(back.density.has_value());
  CHECK(back.density->values == mu.density->values);
  CHECK(total_variation(back) == doctest::Approx(total_variation(mu)));
}

TEST_CASE("validation rejects duplicate atoms and empty segments") {
  CHECK_THROWS_AS(SignedMeasure::from_atoms({{{0, 0}, 1.0}, {{0, 0}, 2.0}}), Error);
  SignedMeasure mu;
  mu.lines.push_back({{0.2, 0.2}, {0.2, 0.2}, 1.0});
  CHECK_THROWS_AS(validate(mu), Error);
}
