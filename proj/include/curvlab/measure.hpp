#ifndef CURVLAB_MEASURE_HPP
#define CURVLAB_MEASURE_HPP

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "curvlab/geometry.hpp"

namespace curvlab {

// Dirac point mass: location and signed curvature mass in radians.
struct Atom {
  Point location;
  double mass = 0.0;
};

// Rectangular grid of curvature-per-area samples. values[j*nx + i] sits at
// origin + (i*spacing, j*spacing).
struct DensityField {
  Point origin;
  double spacing = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;

  static DensityField zeros(Point origin, double spacing, int nx, int ny);

  double at(int i, int j) const { return values[static_cast<size_t>(j) * nx + i]; }
  double& at(int i, int j) { return values[static_cast<size_t>(j) * nx + i]; }
  Point node(int i, int j) const { return {origin.x + i * spacing, origin.y + j * spacing}; }
  double cell_area() const { return spacing * spacing; }

  // Bilinear interpolation, clamped to the sample rectangle.
  double interpolate(Point p) const;
  // Bilinear interpolation with periodic wrap (unit torus grids).
  double interpolate_periodic(Point p) const;

  // Midpoint-rule integral of the samples.
  double integral() const;
  double mean() const;
};

// Uniform 1-dimensional mass along a straight segment.
struct LineMass {
  Point a;
  Point b;
  double linear_density = 0.0;
  double length() const { return (b - a).norm(); }
};

// A signed Radon measure split into an atomic part, an absolutely continuous
// part and a 1-dimensional part. Immutable by convention after construction;
// all operations below are read-only.
struct SignedMeasure {
  std::vector<Atom> atoms;
  std::optional<DensityField> density;
  std::vector<LineMass> lines;

  static SignedMeasure from_atoms(std::vector<Atom> atoms);
  bool empty() const { return atoms.empty() && !density && lines.empty(); }
};

// Validates the type invariants (finite values, distinct atom locations,
// nonzero atom masses, nonzero segments). Throws InvalidArgument.
void validate(const SignedMeasure& mu);

// Jordan decomposition (mu+, mu-): componentwise sign split, mutually
// singular on atoms and per-sample on the density grid.
std::pair<SignedMeasure, SignedMeasure> jordan_decompose(const SignedMeasure& mu);

double total_variation(const SignedMeasure& mu, const Region& region);
double total_variation(const SignedMeasure& mu);
double signed_mass(const SignedMeasure& mu, const Region& region);
double signed_mass(const SignedMeasure& mu);

// integral of phi against mu: sum of atom masses times phi, midpoint
// quadrature of phi * density, Gauss-Legendre line integrals of phi * density.
double integrate_test(const SignedMeasure& mu, const std::function<double(Point)>& phi);

// Atom mass at x (exact location match within 1e-12); density and line parts
// contribute nothing to points.
double point_mass(const SignedMeasure& mu, Point x);

nlohmann::json measure_to_json(const SignedMeasure& mu);
SignedMeasure measure_from_json(const nlohmann::json& j);

nlohmann::json density_to_json(const DensityField& f);
DensityField density_from_json(const nlohmann::json& j);

}  // namespace curvlab

#endif
