#include "curvlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace curvlab {

namespace {

const double kGauss4Nodes[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                0.8611363115940526};
const double kGauss4Weights[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                  0.3478548451374538};

const double kGauss8Nodes[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                0.7966664774136267,  0.9602898564975363};
const double kGauss8Weights[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                  0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                  0.2223810344533745, 0.1012285362903763};

double gauss8(const std::function<double(double)>& f, double a, double b) {
  double mid = 0.5 * (a + b);
  double half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 8; ++i) s += kGauss8Weights[i] * f(mid + half * kGauss8Nodes[i]);
  return s * half;
}

double adaptive_step(const std::function<double(double)>& f, double a, double b, double whole,
                     double abs_tol, int depth, int max_depth) {
  double mid = 0.5 * (a + b);
  double left = gauss8(f, a, mid);
  double right = gauss8(f, mid, b);
  double refined = left + right;
  if (depth >= max_depth || std::abs(refined - whole) <= abs_tol) return refined;
  return adaptive_step(f, a, mid, left, 0.5 * abs_tol, depth + 1, max_depth) +
         adaptive_step(f, mid, b, right, 0.5 * abs_tol, depth + 1, max_depth);
}

}  // namespace

GaussRule gauss_rule_4() { return {kGauss4Nodes, kGauss4Weights, 4}; }
GaussRule gauss_rule_8() { return {kGauss8Nodes, kGauss8Weights, 8}; }

double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, int max_depth) {
  if (!(b > a)) return 0.0;
  double whole = gauss8(f, a, b);
  double scale = std::max(std::abs(whole), 1e-300);
  return adaptive_step(f, a, b, whole, rel_tol * scale, 0, max_depth);
}

double adaptive_quadrature_split(const std::function<double(double)>& f, double a, double b,
                                 const std::vector<double>& breaks, double rel_tol,
                                 int max_depth) {
  std::vector<double> pts;
  pts.push_back(a);
  for (double t : breaks)
    if (t > a + 1e-15 && t < b - 1e-15) pts.push_back(t);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    total += adaptive_quadrature(f, pts[i], pts[i + 1], rel_tol, max_depth);
  return total;
}

double periodic_quadrature(const std::function<double(double)>& f, double rel_tol,
                           int min_samples, int max_samples) {
  const double two_pi = 2.0 * M_PI;
  int n = min_samples;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += f(two_pi * i / n);
  double prev = sum * two_pi / n;
  while (n < max_samples) {
    // add the midpoints of the current sampling
    double add = 0.0;
    for (int i = 0; i < n; ++i) add += f(two_pi * (i + 0.5) / n);
    sum += add;
    n *= 2;
    double cur = sum * two_pi / n;
    if (std::abs(cur - prev) <= rel_tol * (std::abs(cur) + 1e-14)) return cur;
    prev = cur;
  }
  return prev;
}

double log_kernel_self_cell(double h) {
  // int over [0,a]^2 of log(x^2+y^2) dx dy = a^2 (log(2 a^2) - 3 + pi/2);
  // the cell integral of log|y| is four quadrants of half that, a = h/2.
  double a = 0.5 * h;
  return 2.0 * a * a * (std::log(2.0 * a * a) - 3.0 + M_PI / 2.0);
}

}  // namespace curvlab
