#ifndef CURVLAB_QUADRATURE_HPP
#define CURVLAB_QUADRATURE_HPP

#include <functional>

#include "curvlab/geometry.hpp"

namespace curvlab {

// Adaptive Gauss-Legendre quadrature of f over [a,b]. Panels are halved until
// the 8-point rule agrees with its two-panel refinement to rel_tol.
double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-6, int max_depth = 28);

// Like adaptive_quadrature but with caller-provided interior break points
// (used to pre-split at parameters of closest approach to atoms).
double adaptive_quadrature_split(const std::function<double(double)>& f, double a, double b,
                                 const std::vector<double>& breaks, double rel_tol = 1e-6,
                                 int max_depth = 28);

// Quadrature of a 2*pi-periodic function by doubling trapezoid sums until the
// relative change drops below rel_tol. Trapezoid rule is spectrally accurate
// for smooth periodic integrands.
double periodic_quadrature(const std::function<double(double)>& f, double rel_tol = 1e-8,
                           int min_samples = 64, int max_samples = 1 << 16);

// Fixed-order Gauss-Legendre nodes/weights on [-1,1].
struct GaussRule {
  const double* nodes;
  const double* weights;
  int order;
};
GaussRule gauss_rule_4();
GaussRule gauss_rule_8();

// Exact integral of log|y| over a square cell of side h centered at the origin.
double log_kernel_self_cell(double h);

// int_0^r s^beta ds for beta > -1.
inline double power_segment_integral(double r, double beta) {
  return std::pow(r, 1.0 + beta) / (1.0 + beta);
}

}  // namespace curvlab

#endif
