#include "curvlab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "curvlab/potential.hpp"
#include "curvlab/quadrature.hpp"

namespace curvlab {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;

// C^1 cutoff: 0 for r <= delta, 1 for r >= 2*delta, smoothstep between;
// |eta'| <= 1.5/delta < 2/delta.
double cutoff_eta(double r, double delta) {
  if (r <= delta) return 0.0;
  if (r >= 2.0 * delta) return 1.0;
  double s = (r - delta) / delta;
  return s * s * (3.0 - 2.0 * s);
}

double radial_term_value(const RadialTerm& term, double r) {
  if (const auto* m = std::get_if<MollifiedLogTerm>(&term))
    return m->beta * mollified_log(r, m->eps);
  if (const auto* c = std::get_if<ConeSplitTerm>(&term)) {
    if (r >= 2.0 * c->delta) return 0.0;
    return (1.0 - cutoff_eta(r, c->delta)) * c->amount * std::log(r);
  }
  const auto& ll = std::get<LogLogTerm>(term);
  return ll.coeff * std::log(std::abs(std::log(r)));
}

Point radial_term_center(const RadialTerm& term) {
  return std::visit([](const auto& t) { return t.center; }, term);
}

ConformalMetric build(Background bg, std::vector<ConePoint> atoms,
                      std::optional<DensityField> smooth, std::vector<RadialTerm> extras,
                      bool probe) {
  for (size_t i = 0; i < atoms.size(); ++i) {
    const ConePoint& a = atoms[i];
    if (!std::isfinite(a.beta) || !std::isfinite(a.location.x) || !std::isfinite(a.location.y))
      throw Error(ErrorCode::InvalidArgument, "atom with non-finite fields");
    if (!probe && a.beta <= -1.0)
      throw Error(ErrorCode::InvalidArgument,
                  "atom exponent must be > -1 (mass < 2*pi); use the probe constructor for "
                  "borderline metrics");
    for (size_t k = 0; k < i; ++k)
      if (bg.base_dist(a.location, atoms[k].location) < 1e-12)
        throw Error(ErrorCode::InvalidArgument, "duplicate atom locations");
  }
  if (smooth) {
    for (double v : smooth->values)
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite smooth sample");
  }
  ConformalMetric g;
  g.background = bg;
  g.atoms = std::move(atoms);
  g.smooth_part = std::move(smooth);
  g.extras = std::move(extras);
  return g;
}

}  // namespace

ConformalMetric ConformalMetric::make(Background bg, std::vector<ConePoint> atoms,
                                      std::optional<DensityField> smooth,
                                      std::vector<RadialTerm> extras) {
  return build(std::move(bg), std::move(atoms), std::move(smooth), std::move(extras), false);
}

ConformalMetric ConformalMetric::make_probe(Background bg, std::vector<ConePoint> atoms,
                                            std::optional<DensityField> smooth,
                                            std::vector<RadialTerm> extras) {
  ConformalMetric g =
      build(std::move(bg), std::move(atoms), std::move(smooth), std::move(extras), true);
  g.probe_only_ = true;
  return g;
}

double ConformalMetric::atom_distance(Point x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const ConePoint& a : atoms) best = std::min(best, background.base_dist(x, a.location));
  return best;
}

int ConformalMetric::nearest_atom(Point x) const {
  int best = -1;
  double bd = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < atoms.size(); ++i) {
    double d = background.base_dist(x, atoms[i].location);
    if (d < bd) {
      bd = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

double ConformalMetric::eval_u_regular(Point x) const {
  double u = 0.0;
  if (smooth_part) {
    u += background.is_torus() ? smooth_part->interpolate_periodic(x)
                               : smooth_part->interpolate(x);
  }
  for (const RadialTerm& term : extras) {
    double r = background.base_dist(x, radial_term_center(term));
    u += radial_term_value(term, r);
  }
  return u;
}

double ConformalMetric::eval_u(Point x) const {
  double u = 0.0;
  for (const ConePoint& a : atoms) {
    double r = background.base_dist(x, a.location);
    // exact-hit guard; kept far below any probe scale so the completeness
    // experiments can evaluate u at radii like 1e-120
    if (r < 1e-300) throw Error(ErrorCode::EvalAtAtom, "eval_u at an atom location");
    u += a.beta * std::log(r);
  }
  return u + eval_u_regular(x);
}

double circle_mean(const ConformalMetric& g, Point center, double r) {
  for (const ConePoint& a : g.atoms)
    if (std::abs(g.background.base_dist(center, a.location) - r) < 1e-9 * std::max(r, 1.0))
      throw Error(ErrorCode::AtomOnCircle, "atom on quadrature circle");
  return periodic_quadrature(
             [&](double th) {
               return g.eval_u({center.x + r * std::cos(th), center.y + r * std::sin(th)});
             },
             1e-8) /
         kTwoPi;
}

double disk_mean(const ConformalMetric& g, Point center, double r) {
  // atom log terms in closed form: the disk average of log|x-z| is
  //   log d              for d = |center-z| >= r  (mean value property)
  //   log r - (1 - d^2/r^2)/2   for d < r.
  double mean = 0.0;
  for (const ConePoint& a : g.atoms) {
    double d = g.background.base_dist(center, a.location);
    if (d >= r)
      mean += a.beta * std::log(d);
    else
      mean += a.beta * (std::log(r) - 0.5 * (1.0 - (d * d) / (r * r)));
  }
  // remaining part by polar quadrature (Gauss in radius, trapezoid in angle)
  GaussRule rule = gauss_rule_8();
  double acc = 0.0;
  for (int band = 0; band < 4; ++band) {
    double r0 = r * band / 4.0, r1 = r * (band + 1) / 4.0;
    for (int k = 0; k < rule.order; ++k) {
      double rad = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * rule.nodes[k];
      double ring = periodic_quadrature(
          [&](double th) {
            return g.eval_u_regular(
                {center.x + rad * std::cos(th), center.y + rad * std::sin(th)});
          },
          1e-7, 32);
      acc += rule.weights[k] * 0.5 * (r1 - r0) * ring * rad;
    }
  }
  return mean + acc / (M_PI * r * r);
}

SignedMeasure curvature_of(const ConformalMetric& g) {
  SignedMeasure mu;
  for (const ConePoint& a : g.atoms) {
    if (a.beta != 0.0) mu.atoms.push_back({a.location, -kTwoPi * a.beta});
  }
  if (!g.smooth_part) return mu;

  const DensityField& s = *g.smooth_part;
  bool wrap = g.background.is_torus();

  // On the torus the stored remainder and the analytic nearest-image log
  // terms carry mutually cancelling kinks along the image cut loci, so the
  // Laplacian must difference the assembled u (atom cores excluded); on the
  // plane the samples already are the smooth component of u.
  bool assemble = wrap && !g.atoms.empty();
  DensityField w = s;
  if (assemble) {
    for (int j = 0; j < s.ny; ++j)
      for (int i = 0; i < s.nx; ++i) {
        Point p = s.node(i, j);
        double add = 0.0;
        for (const ConePoint& a : g.atoms) {
          double r = g.background.base_dist(p, a.location);
          add += a.beta * std::log(std::max(r, 1e-300));
        }
        w.at(i, j) += add;
      }
  }

  DensityField d = DensityField::zeros(s.origin, s.spacing, s.nx, s.ny);
  double h2 = s.spacing * s.spacing;
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i) {
      if (!wrap && (i == 0 || j == 0 || i == s.nx - 1 || j == s.ny - 1)) continue;
      if (assemble && g.atom_distance(s.node(i, j)) < 3.0 * s.spacing) continue;
      int im = wrap ? (i + s.nx - 1) % s.nx : i - 1;
      int ip = wrap ? (i + 1) % s.nx : i + 1;
      int jm = wrap ? (j + s.ny - 1) % s.ny : j - 1;
      int jp = wrap ? (j + 1) % s.ny : j + 1;
      double lap = (w.at(ip, j) + w.at(im, j) + w.at(i, jp) + w.at(i, jm) - 4.0 * w.at(i, j)) / h2;
      d.at(i, j) = -lap;
    }
  mu.density = std::move(d);
  return mu;
}

double CylinderMetric::radial_profile_integral(int it) const {
  if (it <= 0 || it >= nt - 1) throw Error(ErrorCode::InvalidArgument, "interior row required");
  double dt = (t1 - t0) / (nt - 1);
  double sum = 0.0;
  for (int k = 0; k < ntheta; ++k) sum += (at(it + 1, k) - at(it - 1, k)) / (2.0 * dt);
  return sum * kTwoPi / ntheta;
}

CylinderMetric cylinder_transform(const ConformalMetric& g, Point center, double t0, double t1,
                                  int resolution) {
  if (!(t1 > t0)) throw Error(ErrorCode::InvalidArgument, "cylinder needs t1 > t0");
  double r_outer = std::exp(-t0);
  if (!g.background.is_torus()) {
    Point c = center;
    Rect e = g.background.extent;
    if (c.x - r_outer < e.x0 || c.x + r_outer > e.x1 || c.y - r_outer < e.y0 ||
        c.y + r_outer > e.y1)
      throw Error(ErrorCode::AnnulusOutOfDomain, "cylinder annulus leaves the domain");
  }
  CylinderMetric cyl;
  cyl.center = center;
  cyl.t0 = t0;
  cyl.t1 = t1;
  cyl.nt = resolution;
  cyl.ntheta = resolution;
  cyl.v.resize(static_cast<size_t>(resolution) * resolution);
  for (int it = 0; it < resolution; ++it) {
    double t = t0 + (t1 - t0) * it / (resolution - 1);
    double r = std::exp(-t);
    for (int ith = 0; ith < resolution; ++ith) {
      double th = kTwoPi * ith / resolution;
      Point x{center.x + r * std::cos(th), center.y + r * std::sin(th)};
      cyl.v[static_cast<size_t>(it) * resolution + ith] = g.eval_u(x) - t;
    }
  }
  return cyl;
}

nlohmann::json metric_to_json(const ConformalMetric& g) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const ConePoint& a : g.atoms)
    atoms.push_back({{"x", a.location.x}, {"y", a.location.y}, {"beta", a.beta}});
  nlohmann::json j{
      {"background",
       {{"kind", g.background.is_torus() ? "flat-torus" : "plane-rectangle"},
        {"extent",
         {g.background.extent.x0, g.background.extent.y0, g.background.extent.x1,
          g.background.extent.y1}}}},
      {"atoms", atoms}};
  if (g.smooth_part) j["smooth_part"] = density_to_json(*g.smooth_part);
  if (!g.extras.empty()) {
    nlohmann::json extras = nlohmann::json::array();
    for (const RadialTerm& term : g.extras) {
      if (const auto* m = std::get_if<MollifiedLogTerm>(&term))
        extras.push_back({{"kind", "mollified-log"},
                          {"x", m->center.x},
                          {"y", m->center.y},
                          {"beta", m->beta},
                          {"eps", m->eps}});
      else if (const auto* c = std::get_if<ConeSplitTerm>(&term))
        extras.push_back({{"kind", "cone-split"},
                          {"x", c->center.x},
                          {"y", c->center.y},
                          {"amount", c->amount},
                          {"delta", c->delta}});
      else {
        const auto& ll = std::get<LogLogTerm>(term);
        extras.push_back(
            {{"kind", "log-log"}, {"x", ll.center.x}, {"y", ll.center.y}, {"coeff", ll.coeff}});
      }
    }
    j["extras"] = extras;
  }
  if (g.probe_only()) j["probe_only"] = true;
  return j;
}

ConformalMetric metric_from_json(const nlohmann::json& j) {
  const auto& bgj = j.at("background");
  Background bg;
  std::string kind = bgj.at("kind").get<std::string>();
  if (kind == "flat-torus") {
    bg = Background::torus();
  } else if (kind == "plane-rectangle") {
    const auto& e = bgj.at("extent");
    bg = Background::plane(
        {e.at(0).get<double>(), e.at(1).get<double>(), e.at(2).get<double>(), e.at(3).get<double>()});
  } else {
    throw Error(ErrorCode::ConfigError, "unknown background kind: " + kind);
  }
  std::vector<ConePoint> atoms;
  for (const auto& a : j.value("atoms", nlohmann::json::array()))
    atoms.push_back(
        {{a.at("x").get<double>(), a.at("y").get<double>()}, a.at("beta").get<double>()});
  std::optional<DensityField> smooth;
  if (j.contains("smooth_part")) smooth = density_from_json(j.at("smooth_part"));
  std::vector<RadialTerm> extras;
  for (const auto& t : j.value("extras", nlohmann::json::array())) {
    std::string k = t.at("kind").get<std::string>();
    Point c{t.at("x").get<double>(), t.at("y").get<double>()};
    if (k == "mollified-log")
      extras.push_back(MollifiedLogTerm{c, t.at("beta").get<double>(), t.at("eps").get<double>()});
    else if (k == "cone-split")
      extras.push_back(ConeSplitTerm{c, t.at("amount").get<double>(), t.at("delta").get<double>()});
    else if (k == "log-log")
      extras.push_back(LogLogTerm{c, t.at("coeff").get<double>()});
    else
      throw Error(ErrorCode::ConfigError, "unknown extra kind: " + k);
  }
  bool probe = j.value("probe_only", false);
  return probe ? ConformalMetric::make_probe(bg, std::move(atoms), std::move(smooth),
                                             std::move(extras))
               : ConformalMetric::make(bg, std::move(atoms), std::move(smooth), std::move(extras));
}

namespace {

DensityField sample_loglog(Rect extent, int n, Point center, double coeff) {
  double h = extent.width() / (n - 1);
  DensityField f = DensityField::zeros({extent.x0, extent.y0}, h, n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double r = (f.node(i, j) - center).norm();
      r = std::max(r, 0.5 * h);  // the cusp itself lives on the atom
      f.at(i, j) = coeff * std::log(std::abs(std::log(std::min(r, 0.999))));
    }
  return f;
}

DensityField sample_abs_line(Rect extent, int n) {
  double h = extent.width() / (n - 1);
  DensityField f = DensityField::zeros({extent.x0, extent.y0}, h, n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) f.at(i, j) = std::abs(f.node(i, j).x);
  return f;
}

}  // namespace

ConformalMetric builtin_metric(const std::string& name, const nlohmann::json& params_in) {
  const nlohmann::json params =
      params_in.is_null() ? nlohmann::json::object() : params_in;
  auto num = [&](const char* key, double dflt) { return params.value(key, dflt); };
  if (name == "cone") {
    double beta = num("beta", 0.3);
    double half = num("half_extent", 1.0);
    Rect extent{-half, -half, half, half};
    if (beta <= -1.0) {
      // probe-only regime: mass >= 2*pi; keep the domain inside the unit disk
      half = num("half_extent", 0.7);
      return ConformalMetric::make_probe(Background::plane({-half, -half, half, half}),
                                         {{{0.0, 0.0}, beta}});
    }
    return ConformalMetric::make(Background::plane(extent), {{{0.0, 0.0}, beta}});
  }
  if (name == "multicone") {
    std::vector<ConePoint> atoms;
    if (params.contains("atoms")) {
      for (const auto& a : params.at("atoms")) {
        if (a.is_array())  // [x, y, beta]
          atoms.push_back(
              {{a.at(0).get<double>(), a.at(1).get<double>()}, a.at(2).get<double>()});
        else
          atoms.push_back(
              {{a.at("x").get<double>(), a.at("y").get<double>()}, a.at("beta").get<double>()});
      }
    } else {
      atoms = {{{-0.5, 0.0}, 0.2}, {{0.5, 0.0}, 0.2}};
    }
    double half = num("half_extent", 1.0);
    return ConformalMetric::make(Background::plane({-half, -half, half, half}), std::move(atoms));
  }
  if (name == "hulin-troyanov") {
    // u = -log|z| - a log|log|z||; domain kept inside the unit disk.
    double a = num("a", 1.5);
    double half = num("half_extent", 0.7);
    Rect extent{-half, -half, half, half};
    bool analytic = params.value("analytic", false);
    if (analytic) {
      return ConformalMetric::make_probe(Background::plane(extent), {{{0.0, 0.0}, -1.0}}, {},
                                         {LogLogTerm{{0.0, 0.0}, -a}});
    }
    int n = params.value("samples", 513);
    return ConformalMetric::make_probe(Background::plane(extent), {{{0.0, 0.0}, -1.0}},
                                       sample_loglog(extent, n, {0.0, 0.0}, -a));
  }
  if (name == "abs-line") {
    double half = num("half_extent", 1.0);
    Rect extent{-half, -half, half, half};
    int n = params.value("samples", 513);
    return ConformalMetric::make(Background::plane(extent), {}, sample_abs_line(extent, n));
  }
  if (name == "torus-dipole") {
    double mass = num("mass", 0.8 * M_PI);
    int n = params.value("resolution", 256);
    SignedMeasure mu;
    mu.atoms = {{{0.25, 0.5}, mass}, {{0.75, 0.5}, -mass}};
    TorusPotentialParts parts = torus_potential_parts(mu, n);
    std::vector<ConePoint> atoms;
    for (const auto& [z, beta] : parts.atom_betas) atoms.push_back({z, beta});
    return ConformalMetric::make(Background::torus(), std::move(atoms),
                                 std::move(parts.remainder));
  }
  throw Error(ErrorCode::ConfigError, "unknown builtin metric: " + name);
}

std::string builtin_catalog() {
  std::ostringstream out;
  out << "builtin metrics:\n"
      << "  cone            beta (default 0.3), half_extent; single cone point at the origin,\n"
      << "                  u = beta log|x|, curvature mass -2*pi*beta (probe regime for beta <= -1)\n"
      << "  multicone       atoms = [{x,y,beta},...]; superposed cone points\n"
      << "  hulin-troyanov  a (default 1.5); u = -log|z| - a log|log|z||, a 2*pi cusp with a\n"
      << "                  log-log correction (analytic=true for the probe variant)\n"
      << "  abs-line        u = |x1|; curvature concentrates on the line x1 = 0\n"
      << "  torus-dipole    mass (default 0.8*pi), resolution; opposite atoms at (1/4,1/2),\n"
      << "                  (3/4,1/2) on the unit torus via the spectral solve\n";
  return out.str();
}

}  // namespace curvlab
