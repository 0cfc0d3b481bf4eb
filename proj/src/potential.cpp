#include "curvlab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "curvlab/fft.hpp"
#include "curvlab/quadrature.hpp"

namespace curvlab {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;

void require_off_atoms(const SignedMeasure& mu, Point x) {
  for (const Atom& a : mu.atoms)
    if ((x - a.location).norm() < 1e-12)
      throw Error(ErrorCode::EvalAtAtom, "potential evaluated at an atom location");
}

// Closest-approach parameter of x to segment [a,b], in arclength.
double closest_param(Point a, Point b, Point x) {
  Vec2 d = b - a;
  double len2 = d.norm2();
  if (len2 == 0.0) return 0.0;
  double t = std::clamp((x - a).dot(d) / len2, 0.0, 1.0);
  return t * std::sqrt(len2);
}

}  // namespace

double bump_value(double s) {
  if (s >= 1.0) return 0.0;
  double w = 1.0 - s * s;
  return (4.0 / M_PI) * w * w * w;
}

double bump_mass_within(double s) {
  if (s >= 1.0) return 1.0;
  double w = 1.0 - s * s;
  return 1.0 - w * w * w * w;
}

double log_bump_convolution(double s) {
  if (s >= 1.0) return std::log(s);
  // F(t) = int 8 t (1-t^2)^3 log t dt, the radial moment of the bump.
  auto F = [](double t) {
    if (t <= 0.0) return 0.0;
    double t2 = t * t, t4 = t2 * t2, t6 = t4 * t2, t8 = t4 * t4;
    double lt = std::log(t);
    return 4.0 * t2 * lt - 2.0 * t2 - 6.0 * t4 * lt + 1.5 * t4 + 4.0 * t6 * lt - (2.0 / 3.0) * t6 -
           t8 * lt + 0.125 * t8;
  };
  double inner = (s > 0.0) ? bump_mass_within(s) * std::log(s) : 0.0;
  return inner + F(1.0) - F(s);
}

double mollified_log(double r, double eps) {
  if (r >= eps) return std::log(r);
  return std::log(eps) + log_bump_convolution(r / eps);
}

double log_potential(const SignedMeasure& mu, Point x) {
  require_off_atoms(mu, x);
  double total = 0.0;
  for (const Atom& a : mu.atoms) total += a.mass * std::log((x - a.location).norm());
  if (mu.density) {
    const DensityField& d = *mu.density;
    double cell = d.cell_area();
    double self_cell = log_kernel_self_cell(d.spacing);
    double s = 0.0;
    for (int j = 0; j < d.ny; ++j)
      for (int i = 0; i < d.nx; ++i) {
        double v = d.at(i, j);
        if (v == 0.0) continue;
        double r = (x - d.node(i, j)).norm();
        if (r < 0.5 * d.spacing)
          s += v * self_cell;
        else
          s += v * std::log(r) * cell;
      }
    total += s;
  }
  for (const LineMass& l : mu.lines) {
    double len = l.length();
    double split = closest_param(l.a, l.b, x);
    total += l.linear_density *
             adaptive_quadrature_split(
                 [&](double t) {
                   double r = (x - lerp(l.a, l.b, t / len)).norm();
                   return std::log(std::max(r, 1e-300));
                 },
                 0.0, len, {split}, 1e-9);
  }
  return -total / kTwoPi;
}

Vec2 grad_log_potential(const SignedMeasure& mu, Point x) {
  require_off_atoms(mu, x);
  Vec2 total{0.0, 0.0};
  for (const Atom& a : mu.atoms) {
    Vec2 d = x - a.location;
    total = total + d * (a.mass / d.norm2());
  }
  if (mu.density) {
    const DensityField& d = *mu.density;
    double cell = d.cell_area();
    for (int j = 0; j < d.ny; ++j)
      for (int i = 0; i < d.nx; ++i) {
        double v = d.at(i, j);
        if (v == 0.0) continue;
        Vec2 dx = x - d.node(i, j);
        double r2 = dx.norm2();
        if (r2 < 0.25 * d.spacing * d.spacing) continue;  // self cell: symmetric, ~0
        total = total + dx * (v * cell / r2);
      }
  }
  for (const LineMass& l : mu.lines) {
    double len = l.length();
    double split = closest_param(l.a, l.b, x);
    for (int comp = 0; comp < 2; ++comp) {
      double val = adaptive_quadrature_split(
          [&](double t) {
            Vec2 dx = x - lerp(l.a, l.b, t / len);
            double r2 = std::max(dx.norm2(), 1e-300);
            return (comp == 0 ? dx.x : dx.y) / r2;
          },
          0.0, len, {split}, 1e-8);
      (comp == 0 ? total.x : total.y) += l.linear_density * val;
    }
  }
  return total * (-1.0 / kTwoPi);
}

double wq_seminorm(const SignedMeasure& mu, const Disk& disk, double q, int subgrid_n) {
  if (q < 1.0 || q >= 2.0) throw Error(ErrorCode::InvalidArgument, "wq_seminorm needs q in [1,2)");
  if (mu.empty()) return 0.0;
  double r = disk.radius;
  double cell = 2.0 * r / subgrid_n;
  double cell_area = cell * cell;
  double hole = 2.0 * cell * M_SQRT2;

  double sum = 0.0;
  for (int j = 0; j < subgrid_n; ++j)
    for (int i = 0; i < subgrid_n; ++i) {
      Point p{disk.center.x - r + (i + 0.5) * cell, disk.center.y - r + (j + 0.5) * cell};
      if ((p - disk.center).norm() > r) continue;
      bool in_hole = false;
      for (const Atom& a : mu.atoms)
        if ((p - a.location).norm() < hole) {
          in_hole = true;
          break;
        }
      if (in_hole) continue;
      sum += std::pow(grad_log_potential(mu, p).norm(), q) * cell_area;
    }
  // atom cores in closed form: |grad| ~ (|m|/2pi)/s near the atom
  for (const Atom& a : mu.atoms) {
    if ((a.location - disk.center).norm() > r) continue;
    double c = std::abs(a.mass) / kTwoPi;
    sum += kTwoPi * std::pow(c, q) * std::pow(hole, 2.0 - q) / (2.0 - q);
  }
  return std::pow(r, q - 2.0) * sum;
}

double exp_integrability(const SignedMeasure& mu, double p, const Disk& disk, int subgrid_n) {
  for (const Atom& a : mu.atoms)
    if (p * std::abs(a.mass) >= 4.0 * M_PI)
      throw Error(ErrorCode::Divergent, "exp_integrability: p*|m| >= 4*pi at an atom");
  double r = disk.radius;
  double cell = 2.0 * r / subgrid_n;
  double cell_area = cell * cell;
  double hole = 2.0 * cell * M_SQRT2;

  double sum = 0.0;
  for (int j = 0; j < subgrid_n; ++j)
    for (int i = 0; i < subgrid_n; ++i) {
      Point pt{disk.center.x - r + (i + 0.5) * cell, disk.center.y - r + (j + 0.5) * cell};
      if ((pt - disk.center).norm() > r) continue;
      bool in_hole = false;
      for (const Atom& a : mu.atoms)
        if ((pt - a.location).norm() < hole) {
          in_hole = true;
          break;
        }
      if (in_hole) continue;
      sum += std::exp(p * std::abs(log_potential(mu, pt))) * cell_area;
    }
  // atom cores: e^{p|I|} ~ e^{p|I_rest(z)|} s^{-p|m|/2pi}
  for (const Atom& a : mu.atoms) {
    if ((a.location - disk.center).norm() > r) continue;
    SignedMeasure rest = mu;
    rest.atoms.erase(
        std::remove_if(rest.atoms.begin(), rest.atoms.end(),
                       [&](const Atom& b) { return (b.location - a.location).norm() < 1e-12; }),
        rest.atoms.end());
    double i_rest = rest.empty() ? 0.0 : std::abs(log_potential(rest, a.location));
    double alpha = p * std::abs(a.mass) / kTwoPi;  // < 2 by the check above
    sum += std::exp(p * i_rest) * kTwoPi * std::pow(hole, 2.0 - alpha) / (2.0 - alpha);
  }
  return sum;
}

namespace {

// Rasterize mu on an n*n unit-torus grid: atoms as radial C^2 bumps of radius
// 3/n, density by periodic interpolation.
std::vector<double> rasterize_torus(const SignedMeasure& mu, int n) {
  std::vector<double> f(static_cast<size_t>(n) * n, 0.0);
  double h = 1.0 / n;
  Background torus = Background::torus();
  for (const Atom& a : mu.atoms) {
    double rb = 3.0 * h;
    Point z = torus.canonical(a.location);
    int i0 = static_cast<int>(std::floor(z.x / h));
    int j0 = static_cast<int>(std::floor(z.y / h));
    int span = 4;
    for (int dj = -span; dj <= span; ++dj)
      for (int di = -span; di <= span; ++di) {
        int i = ((i0 + di) % n + n) % n;
        int j = ((j0 + dj) % n + n) % n;
        Point node{i * h, j * h};
        double r = torus.displacement(node, z).norm();
        f[static_cast<size_t>(j) * n + i] += a.mass * bump_value(r / rb) / (rb * rb);
      }
  }
  if (mu.density) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        f[static_cast<size_t>(j) * n + i] += mu.density->interpolate_periodic({i * h, j * h});
  }
  return f;
}

DensityField spectral_solve_torus(std::vector<double> f, int n) {
  std::vector<std::complex<double>> grid(f.size());
  for (size_t k = 0; k < f.size(); ++k) grid[k] = f[k];
  fft2_inplace(grid, n, false);
  for (int j = 0; j < n; ++j) {
    int kj = (j <= n / 2) ? j : j - n;
    for (int i = 0; i < n; ++i) {
      int ki = (i <= n / 2) ? i : i - n;
      size_t idx = static_cast<size_t>(j) * n + i;
      if (ki == 0 && kj == 0) {
        grid[idx] = 0.0;  // zero-mean gauge
        continue;
      }
      double lam = 4.0 * M_PI * M_PI * (static_cast<double>(ki) * ki + static_cast<double>(kj) * kj);
      grid[idx] /= lam;
    }
  }
  fft2_inplace(grid, n, true);
  DensityField u = DensityField::zeros({0.0, 0.0}, 1.0 / n, n, n);
  for (size_t k = 0; k < grid.size(); ++k) u.values[k] = grid[k].real();
  return u;
}

int effective_resolution(int requested) {
  if (requested < 16)
    throw Error(ErrorCode::NoDensityRepresentable, "torus grid resolution must be >= 16");
  int n = 16;
  while (n < requested) n <<= 1;
  return n;
}

}  // namespace

DensityField torus_potential(const SignedMeasure& mu, int grid_resolution) {
  int n = effective_resolution(grid_resolution);
  double total = signed_mass(mu);
  if (std::abs(total) > 1e-10)
    throw Error(ErrorCode::NonzeroTotalMass, "torus potential requires mu(T^2) = 0");
  if (mu.empty()) return DensityField::zeros({0.0, 0.0}, 1.0 / n, n, n);
  return spectral_solve_torus(rasterize_torus(mu, n), n);
}

TorusPotentialParts torus_potential_parts(const SignedMeasure& mu, int grid_resolution) {
  int n = effective_resolution(grid_resolution);
  TorusPotentialParts parts;
  parts.u_samples = torus_potential(mu, n);
  parts.remainder = parts.u_samples;
  double h = 1.0 / n;
  double rb = 3.0 * h;
  Background torus = Background::torus();
  for (const Atom& a : mu.atoms) {
    Point z = torus.canonical(a.location);
    double beta = -a.mass / kTwoPi;
    parts.atom_betas.emplace_back(z, beta);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        double r = torus.displacement({i * h, j * h}, z).norm();
        parts.remainder.at(i, j) -= beta * mollified_log(r, rb);
      }
  }
  return parts;
}

}  // namespace curvlab
