#include "curvlab/approx.hpp"

#include <algorithm>
#include <cmath>

#include "curvlab/potential.hpp"

namespace curvlab {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;

// Discrete convolution of grid samples with the radial bump, kernel samples
// renormalized so the discrete mass is conserved exactly.
DensityField convolve_grid(const DensityField& f, double eps) {
  int reach = static_cast<int>(std::ceil(eps / f.spacing));
  std::vector<double> kernel;
  double ksum = 0.0;
  for (int dj = -reach; dj <= reach; ++dj)
    for (int di = -reach; di <= reach; ++di) {
      double r = f.spacing * std::hypot(di, dj);
      double v = bump_value(r / eps);
      kernel.push_back(v);
      ksum += v;
    }
  for (double& v : kernel) v /= ksum;

  DensityField out = DensityField::zeros(f.origin, f.spacing, f.nx, f.ny);
  for (int j = 0; j < f.ny; ++j)
    for (int i = 0; i < f.nx; ++i) {
      double v = f.at(i, j);
      if (v == 0.0) continue;
      size_t k = 0;
      for (int dj = -reach; dj <= reach; ++dj)
        for (int di = -reach; di <= reach; ++di, ++k) {
          int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= f.nx || jj >= f.ny) continue;
          out.at(ii, jj) += v * kernel[k];
        }
    }
  return out;
}

void splat_atom(DensityField& out, Point z, double mass, double eps) {
  int reach = static_cast<int>(std::ceil(eps / out.spacing)) + 1;
  int i0 = static_cast<int>(std::round((z.x - out.origin.x) / out.spacing));
  int j0 = static_cast<int>(std::round((z.y - out.origin.y) / out.spacing));
  std::vector<std::pair<size_t, double>> splat;
  double wsum = 0.0;
  for (int dj = -reach; dj <= reach; ++dj)
    for (int di = -reach; di <= reach; ++di) {
      int i = i0 + di, j = j0 + dj;
      if (i < 0 || j < 0 || i >= out.nx || j >= out.ny) continue;
      double r = (out.node(i, j) - z).norm();
      double w = bump_value(r / eps);
      if (w <= 0.0) continue;
      splat.emplace_back(static_cast<size_t>(j) * out.nx + i, w);
      wsum += w;
    }
  if (splat.empty() || wsum <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "atom outside the mollification raster");
  double cell = out.cell_area();
  for (auto& [idx, w] : splat) out.values[idx] += mass * w / (wsum * cell);
}

void splat_line(DensityField& out, const LineMass& l, double eps) {
  // 1-D quadrature along the segment of bump splats; conserves mass by
  // normalizing each splat.
  double len = l.length();
  int steps = std::max(8, static_cast<int>(std::ceil(4.0 * len / eps)));
  double ds = len / steps;
  for (int k = 0; k < steps; ++k) {
    Point p = lerp(l.a, l.b, (k + 0.5) / steps);
    splat_atom(out, p, l.linear_density * ds, eps);
  }
}

DensityField default_raster(const SignedMeasure& mu, double eps) {
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  auto grow = [&](Point p) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  };
  for (const Atom& a : mu.atoms) grow(a.location);
  for (const LineMass& l : mu.lines) {
    grow(l.a);
    grow(l.b);
  }
  if (mu.density) {
    grow(mu.density->origin);
    grow(mu.density->node(mu.density->nx - 1, mu.density->ny - 1));
  }
  if (x0 > x1) throw Error(ErrorCode::InvalidArgument, "cannot mollify the empty measure");
  double pad = 2.0 * eps;
  double spacing = eps / 8.0;
  int nx = static_cast<int>(std::ceil((x1 - x0 + 2 * pad) / spacing)) + 1;
  int ny = static_cast<int>(std::ceil((y1 - y0 + 2 * pad) / spacing)) + 1;
  return DensityField::zeros({x0 - pad, y0 - pad}, spacing, std::max(nx, 2), std::max(ny, 2));
}

}  // namespace

SignedMeasure mollify_measure(const SignedMeasure& mu, double eps,
                              std::optional<DensityField> raster_grid) {
  if (eps <= 0.0) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  if (mu.density && eps < 2.0 * mu.density->spacing)
    throw Error(ErrorCode::PreconditionFail, "eps must be >= 2x the density grid spacing");
  if (mu.empty()) {
    SignedMeasure out;
    out.density = raster_grid ? *raster_grid : DensityField::zeros({0, 0}, eps / 8.0, 2, 2);
    return out;
  }
  auto [pos, neg] = jordan_decompose(mu);
  DensityField base = raster_grid ? *raster_grid
                      : mu.density ? DensityField::zeros(mu.density->origin, mu.density->spacing,
                                                         mu.density->nx, mu.density->ny)
                                   : default_raster(mu, eps);
  auto mollify_part = [&](const SignedMeasure& part, double sign, DensityField& acc) {
    if (part.density) {
      DensityField d = convolve_grid(*part.density, eps);
      for (int j = 0; j < acc.ny; ++j)
        for (int i = 0; i < acc.nx; ++i) acc.at(i, j) += sign * d.interpolate(acc.node(i, j));
    }
    DensityField tmp = DensityField::zeros(base.origin, base.spacing, base.nx, base.ny);
    for (const Atom& a : part.atoms) splat_atom(tmp, a.location, a.mass, eps);
    for (const LineMass& l : part.lines) splat_line(tmp, l, eps);
    for (size_t k = 0; k < acc.values.size(); ++k) acc.values[k] += sign * tmp.values[k];
  };
  DensityField acc = base;
  mollify_part(pos, 1.0, acc);
  mollify_part(neg, -1.0, acc);
  SignedMeasure out;
  out.density = std::move(acc);
  return out;
}

ConformalMetric mollify_metric(const ConformalMetric& g, double eps) {
  if (eps <= 0.0) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  if (g.smooth_part && eps < 2.0 * g.smooth_part->spacing)
    throw Error(ErrorCode::PreconditionFail, "eps must be >= 2x the smooth grid spacing");
  std::vector<RadialTerm> extras = g.extras;
  for (const ConePoint& a : g.atoms) extras.push_back(MollifiedLogTerm{a.location, a.beta, eps});
  std::optional<DensityField> smooth = g.smooth_part;
  return g.probe_only()
             ? ConformalMetric::make_probe(g.background, {}, std::move(smooth), std::move(extras))
             : ConformalMetric::make(g.background, {}, std::move(smooth), std::move(extras));
}

ConformalMetric cone_split(const ConformalMetric& g, int atom_index, double delta, int k,
                           double mass_tol) {
  if (atom_index < 0 || atom_index >= static_cast<int>(g.atoms.size()))
    throw Error(ErrorCode::InvalidArgument, "atom index out of range");
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "k must be >= 2");
  const ConePoint& target = g.atoms[atom_index];
  double mass = -kTwoPi * target.beta;
  if (!(mass <= kTwoPi + mass_tol && mass >= kTwoPi - mass_tol))
    throw Error(ErrorCode::NotBorderlineAtom, "cone_split needs an atom of mass 2*pi");
  for (size_t j = 0; j < g.atoms.size(); ++j) {
    if (static_cast<int>(j) == atom_index) continue;
    if (g.background.base_dist(target.location, g.atoms[j].location) <= 2.0 * delta)
      throw Error(ErrorCode::PreconditionFail, "another atom inside the splitting disk");
  }
  std::vector<RadialTerm> extras = g.extras;
  extras.push_back(ConeSplitTerm{target.location, 1.0 / k, delta});
  return ConformalMetric::make_probe(g.background, g.atoms, g.smooth_part, std::move(extras));
}

ExperimentReport reshetnyak_experiment(const ConformalMetric& g, const GridGraph& graph,
                                       std::span<const double> eps_schedule,
                                       std::span<const std::pair<Point, Point>> pairs,
                                       int threads) {
  for (size_t i = 1; i < eps_schedule.size(); ++i)
    if (!(eps_schedule[i] < eps_schedule[i - 1]))
      throw Error(ErrorCode::PreconditionFail, "eps schedule must be decreasing");

  // distinct sources, so several pairs can share one solve
  std::vector<Point> sources;
  std::vector<std::pair<size_t, Point>> queries;  // (source index, target)
  for (const auto& [x, y] : pairs) {
    size_t si = sources.size();
    for (size_t s = 0; s < sources.size(); ++s)
      if ((sources[s] - x).norm() < 1e-14) {
        si = s;
        break;
      }
    if (si == sources.size()) sources.push_back(x);
    queries.emplace_back(si, y);
  }

  auto solve_all = [&](const ConformalMetric& metric) {
    DistanceSolver solver(graph, metric);
    solver.prefill(threads);
    std::vector<DistanceField> fields;
    fields.reserve(sources.size());
    for (Point s : sources) fields.push_back(solver.solve(s));
    std::vector<double> d(queries.size());
    for (size_t qi = 0; qi < queries.size(); ++qi)
      d[qi] = fields[queries[qi].first].at(queries[qi].second);
    return d;
  };

  std::vector<double> base = solve_all(g);
  ExperimentReport report("converge");
  report.set_columns({"eps", "sup_err", "mean_err"});
  for (double eps : eps_schedule) {
    std::vector<double> approx = solve_all(mollify_metric(g, eps));
    double sup = 0.0, mean = 0.0;
    for (size_t qi = 0; qi < queries.size(); ++qi) {
      double e = std::abs(approx[qi] - base[qi]);
      sup = std::max(sup, e);
      mean += e;
    }
    mean /= static_cast<double>(queries.size());
    report.add_row({eps, sup, mean});
  }
  return report;
}

ExperimentReport ghost_probe(const ConformalMetric& g, Point center,
                             std::span<const double> r_schedule,
                             std::span<const double> eps_schedule, const GhostOptions& opt) {
  int ai = g.nearest_atom(center);
  if (ai < 0 || g.background.base_dist(center, g.atoms[ai].location) > 1e-9)
    throw Error(ErrorCode::PreconditionFail, "ghost probe center must be an atom");
  double mass = -kTwoPi * g.atoms[ai].beta;
  if (!(mass < kTwoPi))
    throw Error(ErrorCode::PreconditionFail, "ghost probe needs atom mass < 2*pi");

  ExperimentReport report("ghost");
  report.set_columns({"r", "eps", "diam", "decreasing", "pass"});
  double smallest_eps = eps_schedule.back();
  double prev_diam_smallest = -1.0;
  bool all_pass = true;
  for (double r : r_schedule) {
    for (double eps : eps_schedule) {
      ConformalMetric ge = mollify_metric(g, eps);
      DiameterOptions dopt;
      dopt.local_cells = opt.local_cells;
      dopt.sample_count = opt.sample_count;
      DiameterEstimate est = diameter(ge, Disk{center, r}, dopt);
      bool is_smallest = std::abs(eps - smallest_eps) < 1e-15;
      bool decreasing = true;
      if (is_smallest) {
        decreasing = prev_diam_smallest < 0.0 || est.lower < prev_diam_smallest;
        prev_diam_smallest = est.lower;
        all_pass = all_pass && decreasing;
      }
      report.add_row({r, eps, est.lower, decreasing, true});
    }
  }
  bool corner_ok = prev_diam_smallest >= 0.0 && prev_diam_smallest < opt.corner_threshold;
  all_pass = all_pass && corner_ok;
  report.add_row({r_schedule.back(), smallest_eps, prev_diam_smallest, corner_ok, all_pass});
  return report;
}

}  // namespace curvlab
