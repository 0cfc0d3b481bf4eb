#ifndef CURVLAB_METRIC_HPP
#define CURVLAB_METRIC_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "curvlab/measure.hpp"

namespace curvlab {

// Cone point: u gains beta * log|x - z| near z; curvature mass is -2*pi*beta.
struct ConePoint {
  Point location;
  double beta = 0.0;
};

// Closed-form radial additions to u. These carry structure that bilinear
// samples cannot (exact cancellation outside a cutoff, log-log cusps, the
// smooth profile of a mollified cone), so they are evaluated analytically.
struct MollifiedLogTerm {  // beta * (log * eta_eps)(|x - c|); equals beta*log r outside eps
  Point center;
  double beta = 0.0;
  double eps = 0.0;
};
struct ConeSplitTerm {  // (1 - eta_delta(r)) * amount * log r; identically 0 for r >= 2*delta
  Point center;
  double amount = 0.0;
  double delta = 0.0;
};
struct LogLogTerm {  // coeff * log|log r|, valid for r < 1
  Point center;
  double coeff = 0.0;
};
using RadialTerm = std::variant<MollifiedLogTerm, ConeSplitTerm, LogLogTerm>;

// g = e^{2u} g0 with u = sum_i beta_i log|x - z_i|  (nearest image on the
// torus) + bilinear smooth part + analytic radial terms. Immutable after
// construction; evaluation is read-only and thread-safe.
class ConformalMetric {
public:
  Background background;
  std::vector<ConePoint> atoms;
  std::optional<DensityField> smooth_part;
  std::vector<RadialTerm> extras;

  // Validates beta_i > -1 (equivalently atom mass < 2pi), distinct atom
  // locations and finite samples.
  static ConformalMetric make(Background bg, std::vector<ConePoint> atoms,
                              std::optional<DensityField> smooth = {},
                              std::vector<RadialTerm> extras = {});
  // Same, but admits beta <= -1 for the completeness experiments that probe
  // masses at and beyond 2pi.
  static ConformalMetric make_probe(Background bg, std::vector<ConePoint> atoms,
                                    std::optional<DensityField> smooth = {},
                                    std::vector<RadialTerm> extras = {});

  bool probe_only() const { return probe_only_; }

  double eval_u(Point x) const;  // throws EvalAtAtom at atom locations
  Vec2 displacement(Point from, Point to) const { return background.displacement(from, to); }
  double dist0(Point a, Point b) const { return background.base_dist(a, b); }

  // Distance from x to the nearest atom (nearest image on the torus);
  // +inf when there are no atoms.
  double atom_distance(Point x) const;
  int nearest_atom(Point x) const;  // -1 when none

  // u minus the atoms' log terms; finite everywhere, used by quadratures that
  // treat the atom factor in closed form.
  double eval_u_regular(Point x) const;

private:
  bool probe_only_ = false;
};

// Mean of u over the circle of radius r (adaptive quadrature to 1e-8
// relative). Throws AtomOnCircle if an atom sits on the circle within 1e-9.
double circle_mean(const ConformalMetric& g, Point center, double r);

// Area average of u over D_r(center); atom terms in closed form (the mean of
// beta log|x-z| over the disk is exact for z inside or outside), the rest by
// polar quadrature.
double disk_mean(const ConformalMetric& g, Point center, double r);

// Curvature measure of g: atoms of mass -2*pi*beta_i plus the negated 5-point
// discrete Laplacian of the smooth part (boundary ring excluded). Analytic
// extras contribute where they can be differenced on the grid.
SignedMeasure curvature_of(const ConformalMetric& g);

// v(theta, t) = u(center + e^{-t} e^{i theta}) - t on the logarithmic
// cylinder; a center atom of exponent beta contributes -(1+beta) t.
struct CylinderMetric {
  Point center;
  double t0 = 0.0, t1 = 0.0;
  int nt = 0, ntheta = 0;
  std::vector<double> v;  // v[it*ntheta + ith], theta = 2*pi*ith/ntheta
  double at(int it, int ith) const { return v[static_cast<size_t>(it) * ntheta + ith]; }
  // int_{S^1} dv/dt dtheta at row it (central differences in t).
  double radial_profile_integral(int it) const;
};
CylinderMetric cylinder_transform(const ConformalMetric& g, Point center, double t0, double t1,
                                  int resolution);

nlohmann::json metric_to_json(const ConformalMetric& g);
ConformalMetric metric_from_json(const nlohmann::json& j);

// Builtin catalog: cone, multicone, hulin-troyanov, abs-line, torus-dipole
// (plus probe-only variants used by the completeness and splitting
// experiments). Parameters are a JSON object, e.g. {"beta": 0.3}.
ConformalMetric builtin_metric(const std::string& name, const nlohmann::json& params);
std::string builtin_catalog();

}  // namespace curvlab

#endif
