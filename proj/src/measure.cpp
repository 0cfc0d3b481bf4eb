#include "curvlab/measure.hpp"

#include <algorithm>
#include <cmath>

#include "curvlab/quadrature.hpp"

namespace curvlab {

DensityField DensityField::zeros(Point origin, double spacing, int nx, int ny) {
  DensityField f;
  f.origin = origin;
  f.spacing = spacing;
  f.nx = nx;
  f.ny = ny;
  f.values.assign(static_cast<size_t>(nx) * ny, 0.0);
  return f;
}

double DensityField::interpolate(Point p) const {
  double fx = (p.x - origin.x) / spacing;
  double fy = (p.y - origin.y) / spacing;
  fx = std::clamp(fx, 0.0, static_cast<double>(nx - 1));
  fy = std::clamp(fy, 0.0, static_cast<double>(ny - 1));
  int i = std::min(static_cast<int>(fx), nx - 2);
  int j = std::min(static_cast<int>(fy), ny - 2);
  i = std::max(i, 0);
  j = std::max(j, 0);
  double tx = fx - i;
  double ty = fy - j;
  return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) +
         (1 - tx) * ty * at(i, j + 1) + tx * ty * at(i + 1, j + 1);
}

double DensityField::interpolate_periodic(Point p) const {
  double fx = (p.x - origin.x) / spacing;
  double fy = (p.y - origin.y) / spacing;
  fx -= nx * std::floor(fx / nx);
  fy -= ny * std::floor(fy / ny);
  double tx = fx - std::floor(fx);
  double ty = fy - std::floor(fy);
  int i = static_cast<int>(std::floor(fx)) % nx;
  int j = static_cast<int>(std::floor(fy)) % ny;
  int i1 = (i + 1) % nx;
  int j1 = (j + 1) % ny;
  return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i1, j) +
         (1 - tx) * ty * at(i, j1) + tx * ty * at(i1, j1);
}

double DensityField::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * cell_area();
}

double DensityField::mean() const {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

SignedMeasure SignedMeasure::from_atoms(std::vector<Atom> atoms) {
  SignedMeasure mu;
  mu.atoms = std::move(atoms);
  validate(mu);
  return mu;
}

void validate(const SignedMeasure& mu) {
  for (size_t i = 0; i < mu.atoms.size(); ++i) {
    const Atom& a = mu.atoms[i];
    if (!std::isfinite(a.location.x) || !std::isfinite(a.location.y) || !std::isfinite(a.mass))
      throw Error(ErrorCode::InvalidArgument, "atom with non-finite fields");
    if (a.mass == 0.0) throw Error(ErrorCode::InvalidArgument, "atom with zero mass");
    for (size_t k = 0; k < i; ++k) {
      if ((a.location - mu.atoms[k].location).norm() < 1e-12)
        throw Error(ErrorCode::InvalidArgument, "duplicate atom locations");
    }
  }
  if (mu.density) {
    const auto& d = *mu.density;
    if (d.nx < 2 || d.ny < 2 || d.spacing <= 0.0)
      throw Error(ErrorCode::InvalidArgument, "density grid must be at least 2x2");
    if (d.values.size() != static_cast<size_t>(d.nx) * d.ny)
      throw Error(ErrorCode::InvalidArgument, "density sample count mismatch");
    for (double v : d.values)
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite density sample");
  }
  for (const LineMass& l : mu.lines) {
    if ((l.b - l.a).norm() <= 0.0)
      throw Error(ErrorCode::InvalidArgument, "line mass with zero-length segment");
    if (!std::isfinite(l.linear_density))
      throw Error(ErrorCode::InvalidArgument, "non-finite line density");
  }
}

std::pair<SignedMeasure, SignedMeasure> jordan_decompose(const SignedMeasure& mu) {
  SignedMeasure pos, neg;
  for (const Atom& a : mu.atoms) {
    if (a.mass > 0.0)
      pos.atoms.push_back(a);
    else
      neg.atoms.push_back({a.location, -a.mass});
  }
  if (mu.density) {
    DensityField p = *mu.density;
    DensityField n = *mu.density;
    for (size_t i = 0; i < p.values.size(); ++i) {
      double v = mu.density->values[i];
      p.values[i] = std::max(v, 0.0);
      n.values[i] = std::max(-v, 0.0);
    }
    pos.density = std::move(p);
    neg.density = std::move(n);
  }
  for (const LineMass& l : mu.lines) {
    if (l.linear_density > 0.0)
      pos.lines.push_back(l);
    else if (l.linear_density < 0.0)
      neg.lines.push_back({l.a, l.b, -l.linear_density});
  }
  return {std::move(pos), std::move(neg)};
}

namespace {

// Accumulate atom, density and line contributions against region membership;
// weight(v) maps a signed contribution to what is summed (|v| or v).
template <typename Weight>
double accumulate(const SignedMeasure& mu, const Region* region, Weight weight) {
  double total = 0.0;
  for (const Atom& a : mu.atoms) {
    if (!region || region_contains(*region, a.location)) total += weight(a.mass);
  }
  if (mu.density) {
    const DensityField& d = *mu.density;
    double cell = d.cell_area();
    for (int j = 0; j < d.ny; ++j)
      for (int i = 0; i < d.nx; ++i) {
        if (!region || region_contains(*region, d.node(i, j))) total += weight(d.at(i, j)) * cell;
      }
  }
  for (const LineMass& l : mu.lines) {
    double len = region ? segment_length_in_region(l.a, l.b, *region) : l.length();
    total += weight(l.linear_density) * len;
  }
  return total;
}

}  // namespace

double total_variation(const SignedMeasure& mu, const Region& region) {
  return accumulate(mu, &region, [](double v) { return std::abs(v); });
}

double total_variation(const SignedMeasure& mu) {
  return accumulate(mu, nullptr, [](double v) { return std::abs(v); });
}

double signed_mass(const SignedMeasure& mu, const Region& region) {
  return accumulate(mu, &region, [](double v) { return v; });
}

double signed_mass(const SignedMeasure& mu) {
  return accumulate(mu, nullptr, [](double v) { return v; });
}

double integrate_test(const SignedMeasure& mu, const std::function<double(Point)>& phi) {
  double total = 0.0;
  for (const Atom& a : mu.atoms) total += a.mass * phi(a.location);
  if (mu.density) {
    const DensityField& d = *mu.density;
    double cell = d.cell_area();
    double s = 0.0;
    for (int j = 0; j < d.ny; ++j)
      for (int i = 0; i < d.nx; ++i) s += d.at(i, j) * phi(d.node(i, j));
    total += s * cell;
  }
  for (const LineMass& l : mu.lines) {
    double len = l.length();
    total += l.linear_density *
             adaptive_quadrature([&](double t) { return phi(lerp(l.a, l.b, t / len)); }, 0.0, len,
                                 1e-9);
  }
  return total;
}

double point_mass(const SignedMeasure& mu, Point x) {
  for (const Atom& a : mu.atoms)
    if ((a.location - x).norm() < 1e-12) return a.mass;
  return 0.0;
}

nlohmann::json density_to_json(const DensityField& f) {
  return nlohmann::json{{"origin", {f.origin.x, f.origin.y}},
                        {"spacing", f.spacing},
                        {"nx", f.nx},
                        {"ny", f.ny},
                        {"values", f.values}};
}

DensityField density_from_json(const nlohmann::json& j) {
  DensityField f;
  f.origin = {j.at("origin").at(0).get<double>(), j.at("origin").at(1).get<double>()};
  f.spacing = j.at("spacing").get<double>();
  f.nx = j.at("nx").get<int>();
  f.ny = j.at("ny").get<int>();
  f.values = j.at("values").get<std::vector<double>>();
  if (f.values.size() != static_cast<size_t>(f.nx) * f.ny)
    throw Error(ErrorCode::InvalidArgument, "density JSON: values size mismatch");
  return f;
}

nlohmann::json measure_to_json(const SignedMeasure& mu) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const Atom& a : mu.atoms)
    atoms.push_back({{"x", a.location.x}, {"y", a.location.y}, {"mass", a.mass}});
  nlohmann::json lines = nlohmann::json::array();
  for (const LineMass& l : mu.lines)
    lines.push_back({{"x0", l.a.x},
                     {"y0", l.a.y},
                     {"x1", l.b.x},
                     {"y1", l.b.y},
                     {"density", l.linear_density}});
  nlohmann::json j{{"atoms", atoms}, {"lines", lines}};
  if (mu.density) j["density"] = density_to_json(*mu.density);
  return j;
}

SignedMeasure measure_from_json(const nlohmann::json& j) {
  SignedMeasure mu;
  for (const auto& a : j.value("atoms", nlohmann::json::array()))
    mu.atoms.push_back({{a.at("x").get<double>(), a.at("y").get<double>()},
                        a.at("mass").get<double>()});
  for (const auto& l : j.value("lines", nlohmann::json::array()))
    mu.lines.push_back({{l.at("x0").get<double>(), l.at("y0").get<double>()},
                        {l.at("x1").get<double>(), l.at("y1").get<double>()},
                        l.at("density").get<double>()});
  if (j.contains("density")) mu.density = density_from_json(j.at("density"));
  validate(mu);
  return mu;
}

}  // namespace curvlab
