#ifndef CURVLAB_APPROX_HPP
#define CURVLAB_APPROX_HPP

#include "curvlab/geodesic.hpp"
#include "curvlab/report.hpp"

namespace curvlab {

// Convolution of mu with the radial C^2 unit bump of radius eps; Jordan parts
// are mollified separately and recombined, so the result is density-only with
// the same total mass. When mu has no density grid a raster grid is placed
// over the support at spacing eps/8.
SignedMeasure mollify_measure(const SignedMeasure& mu, double eps,
                              std::optional<DensityField> raster_grid = {});

// u_eps = u * eta_eps, realized exactly: each atom's log term becomes the
// closed-form radial profile of (beta log)*eta_eps (unchanged outside the
// eps-disk by the mean value property); the result carries no atoms.
// Requires eps >= 2 * smooth grid spacing when a smooth part is present.
ConformalMetric mollify_metric(const ConformalMetric& g, double eps);

// Splitting construction for a mass-2pi atom: adds (1 - eta_delta) (1/k)
// log|x - z| to u, reducing the atom's mass to 2pi(1 - 1/k) inside D_delta
// while leaving the metric bit-identical outside D_{2delta}. Throws
// NotBorderlineAtom unless the target mass is within tol of 2pi.
ConformalMetric cone_split(const ConformalMetric& g, int atom_index, double delta, int k,
                           double mass_tol = 1e-6);

// For each eps in the schedule: sup and mean over the pairs of
// |d_{mollify(g,eps)}(x,y) - d_g(x,y)| on one shared grid.
ExperimentReport reshetnyak_experiment(const ConformalMetric& g, const GridGraph& graph,
                                       std::span<const double> eps_schedule,
                                       std::span<const std::pair<Point, Point>> pairs,
                                       int threads = 1);

struct GhostOptions {
  int local_cells = 128;
  int sample_count = 24;
  double corner_threshold = 0.05;
};

// diam(D_r(center), mollify(g, eps)) tabulated over (r, eps); the per-radius
// diameters for the smallest eps must decrease in r below the threshold.
ExperimentReport ghost_probe(const ConformalMetric& g, Point center,
                             std::span<const double> r_schedule,
                             std::span<const double> eps_schedule,
                             const GhostOptions& opt = {});

}  // namespace curvlab

#endif
