#ifndef CURVLAB_POTENTIAL_HPP
#define CURVLAB_POTENTIAL_HPP

#include "curvlab/measure.hpp"

namespace curvlab {

// Logarithmic potential I_mu(x) = -(1/2pi) * int log|x-y| dmu(y) on the plane.
// Atom contributions are closed-form, the density part uses midpoint
// quadrature with the exact self-cell integral, line parts use adaptive 1-D
// quadrature. Throws EvalAtAtom when x coincides with an atom location.
double log_potential(const SignedMeasure& mu, Point x);

// Gradient of I_mu; the atom part is -(m/2pi) (x-z)/|x-z|^2, matching central
// finite differences of log_potential.
Vec2 grad_log_potential(const SignedMeasure& mu, Point x);

// r^(q-2) * int_disk |grad I_mu|^q, sampled on a subgrid with atom cores
// integrated in closed form. q in [1,2).
double wq_seminorm(const SignedMeasure& mu, const Disk& disk, double q, int subgrid_n = 128);

// int_disk exp(p |I_mu|) with atom cores handled by closed-form radial
// integration of |x-z|^(-p|m|/2pi). Throws Divergent when p|m| >= 4pi for
// some atom.
double exp_integrability(const SignedMeasure& mu, double p, const Disk& disk, int subgrid_n = 192);

// Spectral periodic Poisson solve on the unit torus: returns grid samples of
// the zero-mean u with -Delta u = mu (weakly), where atoms are rasterized as
// radial C^2 bumps of radius 3*spacing. Throws NonzeroTotalMass unless
// mu(T^2) = 0 within 1e-10, NoDensityRepresentable when grid_resolution < 16.
DensityField torus_potential(const SignedMeasure& mu, int grid_resolution);

// Same solve, but split for the metric module: exact atom exponents plus the
// globally smooth remainder R = U - sum_i beta_i * (log * eta)(|x - z_i|_NI),
// so that u(x) = sum_i beta_i log|x - z_i|_NI + R(x) reproduces the true
// singularities while R stays finite and sampleable everywhere.
struct TorusPotentialParts {
  DensityField u_samples;   // mollified solve, as returned by torus_potential
  DensityField remainder;   // R above
  std::vector<std::pair<Point, double>> atom_betas;  // (location, beta = -mass/2pi)
};
TorusPotentialParts torus_potential_parts(const SignedMeasure& mu, int grid_resolution);

// Unit-mass radial C^2 bump eta(s) = (4/pi)(1-s^2)^3 on [0,1], scaled to
// radius eps. Shared by mollification and the torus solver.
double bump_value(double s);                 // unit scale, s = r/eps; 0 outside [0,1]
double bump_mass_within(double s);           // mass of the unit bump inside radius s
double log_bump_convolution(double s);       // (log * eta)(s) at unit scale; log(s) for s >= 1

// (log * eta_eps)(r) = log(eps) + log_bump_convolution(r/eps) for r < eps.
double mollified_log(double r, double eps);

}  // namespace curvlab

#endif
