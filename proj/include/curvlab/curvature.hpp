#ifndef CURVLAB_CURVATURE_HPP
#define CURVLAB_CURVATURE_HPP

#include "curvlab/metric.hpp"

namespace curvlab {

// lambda(r) = r * du*/dr by centered differences of the circle mean u* at
// radii r(1 +- delta). For a cone of exponent beta centered here this is beta
// for every r.
double radial_flux(const ConformalMetric& g, Point center, double r, double delta = 0.02);

// Annulus form of Gauss-Bonnet: lambda(t) - lambda(s) = -K_g(D_t \ D_s)/2pi.
// The -1/(2pi) normalization is the one consistent with the point-mass limit
// K({0}) = -2pi lim_{r->0} r du*/dr used below.
struct GbCheck {
  double lhs = 0.0;       // lambda(t) - lambda(s)
  double rhs = 0.0;       // -K_g(annulus)/2pi
  double residual = 0.0;  // |lhs - rhs|
  double scale = 0.0;     // |lambda(t)| + |lambda(s)| + 1
  bool pass = false;      // residual <= 1% of scale
};
GbCheck gb_annulus_check(const ConformalMetric& g, Point center, double s, double t);

// K_g({center}) = -2pi lim r * du*/dr: evaluated at r = 8h with Richardson
// extrapolation from {8h, 16h}.
double point_mass_detect(const ConformalMetric& g, Point center, double h);

// Radial C^2 test bump amplitude * (1 - (|x-c|/radius)^2)^3.
struct SmoothBump {
  Point center;
  double radius = 1.0;
  double amplitude = 1.0;
  double operator()(Point p) const;
  double value_at(Point p, const Background& bg) const;
  Vec2 grad(Point p) const;
  Vec2 grad_at(Point p, const Background& bg) const;
  double max_abs() const { return std::abs(amplitude); }
};

// | int grad(phi) . grad(u) - integrate_test(curvature_of(g), phi) | with the
// atom part of grad(u) in closed form. The flat-background weak identity.
struct WeakIdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};
WeakIdentityCheck weak_laplacian_check(const ConformalMetric& g, const SmoothBump& phi,
                                       int quad_cells = 512);

}  // namespace curvlab

#endif
