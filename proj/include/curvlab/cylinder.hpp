#ifndef CURVLAB_CYLINDER_HPP
#define CURVLAB_CYLINDER_HPP

#include "curvlab/geodesic.hpp"
#include "curvlab/report.hpp"

namespace curvlab {

// Distance between the circles of radius e^{-iL} and e^{-(i+1)L} around
// center, computed in disk coordinates on a local lattice.
double ring_distance(const ConformalMetric& g, Point center, int ring, double L,
                     const AnnulusOptions& opt = {});

// W^{1,1}-type estimate of Lambda for the cylinder potential v on unit blocks
// covering t in [t0, t1], inflated by 1.5x.
double estimate_lambda(const ConformalMetric& g, Point center, double t0, double t1);

struct ThreeCircleOptions {
  AnnulusOptions annulus;
  int diameter_samples = 12;
  std::optional<double> lambda_override;  // skip measurement when set
};

// Per-ring decay report: ring-distance, circle-length and meridian-length
// ratios against e^{-kappa L / 2}, and diam(Q_i)/ring-distance against the
// 2 e^{8 Lambda}(1 + 8 Lambda)/(1 - e^{-16 Lambda}) constant. Refuses with
// PreconditionFail when kappa >= (2pi - m)/(4pi). The three-circle
// admissibility scale L > 16 Lambda / kappa is reported as a `lemma_regime`
// flag, not enforced: it is astronomically large for any measured Lambda.
ExperimentReport three_circle_report(const ConformalMetric& g, Point center, double L,
                                     int n_rings, double kappa,
                                     const ThreeCircleOptions& opt = {});

// Ratio of ring distance to meridian length on one unit cylinder block;
// PASS when inside (e^{-8 Lambda - 1}, e^{8 Lambda + 1}).
struct BalancedRatio {
  double ratio = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool pass = false;
};
BalancedRatio balanced_ratio_check(const ConformalMetric& g, Point center, int ring_index,
                                   double lambda, const AnnulusOptions& opt = {});

struct CompletenessOptions {
  AnnulusOptions annulus{.local_cells = 128, .boundary_samples = 64};
  double block_log_width = 1.0;   // ladder ring width in -log r
  double growth_factor = 4.0;     // DIVERGENT when last/first exceeds this and increases
  double cauchy_rel_tol = 0.05;   // CONVERGENT when the last increment is this small
};

enum class CompletenessVerdict { Convergent, Divergent, Undecided };
const char* verdict_name(CompletenessVerdict v);

struct CompletenessResult {
  ExperimentReport report;
  CompletenessVerdict verdict = CompletenessVerdict::Undecided;
  double last_value = 0.0;
};

// Table of d_g(boundary D_delta, boundary D_r) over the decreasing r
// schedule. Distances accumulate over a ladder of concentric ring blocks,
// each solved on its own scale-adapted local lattice, so radii far below any
// single grid's resolution remain reachable.
CompletenessResult completeness_probe(const ConformalMetric& g, Point center, double delta,
                                      std::span<const double> r_schedule,
                                      const CompletenessOptions& opt = {});

}  // namespace curvlab

#endif
