#include "curvlab/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <thread>

#include "curvlab/quadrature.hpp"

namespace curvlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Directions come in (d, -d) pairs so that edge weights can be cached once
// per undirected edge. All stencils are symmetric under negation and 90
// degree rotation.
const StencilDir kDirs32[32] = {
    {1, 0},  {-1, 0},  {0, 1},  {0, -1},  {1, 1},  {-1, -1}, {1, -1}, {-1, 1},
    {2, 1},  {-2, -1}, {1, 2},  {-1, -2}, {2, -1}, {-2, 1},  {1, -2}, {-1, 2},
    {3, 1},  {-3, -1}, {1, 3},  {-1, -3}, {3, -1}, {-3, 1},  {1, -3}, {-1, 3},
    {3, 2},  {-3, -2}, {2, 3},  {-2, -3}, {3, -2}, {-3, 2},  {2, -3}, {-2, 3}};

}  // namespace

std::span<const StencilDir> stencilDirsChecked(int stencil) {
  if (stencil == 8) return {kDirs32, 8};
  if (stencil == 16) return {kDirs32, 16};
  if (stencil == 32) return {kDirs32, 32};
  throw Error(ErrorCode::InvalidArgument, "stencil must be 8, 16 or 32");
}

std::span<const StencilDir> stencil_dirs(int stencil) { return stencilDirsChecked(stencil); }

GridGraph::GridGraph(const Background& bg, int cells_per_side, int stencil)
    : bg_(bg), stencil_(stencil) {
  stencilDirsChecked(stencil);
  if (cells_per_side < 8) throw Error(ErrorCode::InvalidArgument, "grid too coarse");
  wrap_ = bg.is_torus();
  if (wrap_) {
    nx_ = cells_per_side;
    ny_ = cells_per_side;
    h_ = 1.0 / cells_per_side;
  } else {
    nx_ = cells_per_side + 1;
    double w = bg.extent.width(), hgt = bg.extent.height();
    h_ = w / cells_per_side;
    ny_ = static_cast<int>(std::lround(hgt / h_)) + 1;
  }
}

Point GridGraph::lattice_pos(int idx) const {
  int i = idx % nx_;
  int j = idx / nx_;
  return {bg_.extent.x0 + i * h_, bg_.extent.y0 + j * h_};
}

Point GridGraph::node_pos(int idx) const {
  for (const auto& [k, p] : relocations_)
    if (k == idx) return p;
  return lattice_pos(idx);
}

int GridGraph::nearest_node(Point p) const {
  double fx = (p.x - bg_.extent.x0) / h_;
  double fy = (p.y - bg_.extent.y0) / h_;
  int i, j;
  if (wrap_) {
    i = static_cast<int>(std::lround(fx)) % nx_;
    j = static_cast<int>(std::lround(fy)) % ny_;
    i = (i + nx_) % nx_;
    j = (j + ny_) % ny_;
  } else {
    i = std::clamp(static_cast<int>(std::lround(fx)), 0, nx_ - 1);
    j = std::clamp(static_cast<int>(std::lround(fy)), 0, ny_ - 1);
  }
  return node_index(i, j);
}

int GridGraph::neighbor(int idx, StencilDir d) const {
  int i = idx % nx_ + d.dx;
  int j = idx / nx_ + d.dy;
  if (wrap_) {
    i = (i % nx_ + nx_) % nx_;
    j = (j % ny_ + ny_) % ny_;
    return node_index(i, j);
  }
  if (i < 0 || i >= nx_ || j < 0 || j >= ny_) return -1;
  return node_index(i, j);
}

void GridGraph::bind_atoms(const ConformalMetric& g) {
  for (const ConePoint& a : g.atoms) {
    Point z = bg_.is_torus() ? bg_.canonical(a.location) : a.location;
    if (!wrap_ && !bg_.extent.contains(z)) continue;
    int idx = nearest_node(z);
    bool found = false;
    for (auto& [k, p] : relocations_)
      if (k == idx) {
        p = z;
        found = true;
      }
    if (!found) relocations_.emplace_back(idx, z);
  }
}

std::vector<int> GridGraph::nearest_nodes(Point p, int k) const {
  double fx = (p.x - bg_.extent.x0) / h_;
  double fy = (p.y - bg_.extent.y0) / h_;
  int ci = static_cast<int>(std::floor(fx));
  int cj = static_cast<int>(std::floor(fy));
  std::vector<std::pair<double, int>> cand;
  for (int dj = -3; dj <= 4; ++dj)
    for (int di = -3; di <= 4; ++di) {
      int i = ci + di, j = cj + dj;
      if (wrap_) {
        i = (i % nx_ + nx_) % nx_;
        j = (j % ny_ + ny_) % ny_;
      } else if (i < 0 || i >= nx_ || j < 0 || j >= ny_) {
        continue;
      }
      int idx = node_index(i, j);
      double d = bg_.displacement(p, node_pos(idx)).norm();
      cand.emplace_back(d, idx);
    }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end(),
                         [](const auto& a, const auto& b) { return a.second == b.second; }),
             cand.end());
  std::vector<int> out;
  for (const auto& [d, idx] : cand) {
    out.push_back(idx);
    if (static_cast<int>(out.size()) >= k) break;
  }
  return out;
}

namespace {

// The exponent the metric actually carries at atom ai: the atom's beta plus
// any cone-split amount anchored at the same center (the split term behaves
// as amount * log r inside its delta-disk).
double effective_exponent(const ConformalMetric& g, int ai) {
  double beta = g.atoms[ai].beta;
  for (const RadialTerm& term : g.extras) {
    if (const auto* c = std::get_if<ConeSplitTerm>(&term)) {
      if (g.background.base_dist(c->center, g.atoms[ai].location) < 1e-12) beta += c->amount;
    }
  }
  return beta;
}

// e^{u - beta_eff log s} near atom ai: the atom's own log factor (and the
// pure-log core of a co-located split term) removed; finite at s = 0.
double rest_factor(const ConformalMetric& g, Point x, int skip_atom) {
  Point z = g.atoms[skip_atom].location;
  double u = g.eval_u_regular(x);
  for (size_t j = 0; j < g.atoms.size(); ++j) {
    if (j == static_cast<size_t>(skip_atom)) continue;
    u += g.atoms[j].beta * std::log(g.background.base_dist(x, g.atoms[j].location));
  }
  for (const RadialTerm& term : g.extras) {
    if (const auto* c = std::get_if<ConeSplitTerm>(&term)) {
      if (g.background.base_dist(c->center, z) < 1e-12) {
        // eval_u_regular added (1-eta) amount log r; convert to -eta amount log r
        double r = g.background.base_dist(x, z);
        u -= c->amount * std::log(std::max(r, 1e-300));
      }
    }
  }
  return std::exp(u);
}

// Weight of a segment with atom `ai` exactly at its start: int_0^len s^beta *
// f(s) ds with the atom factor integrated in closed form on dyadic panels and
// f (the remaining factor) averaged per panel.
double atom_endpoint_weight(const ConformalMetric& g, int ai, Point start, Vec2 dir_unit,
                            double len) {
  double beta = effective_exponent(g, ai);
  if (beta <= -1.0) return kInf;  // mass >= 2*pi: the atom is at infinite distance
  GaussRule rule = gauss_rule_4();
  double total = 0.0;
  double hi = len;
  const int kPanels = 40;
  for (int k = 0; k < kPanels && hi > 0.0; ++k) {
    double lo = (k == kPanels - 1) ? 0.0 : 0.5 * hi;
    double fmean = 0.0;
    for (int q = 0; q < rule.order; ++q) {
      double s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[q];
      fmean += 0.5 * rule.weights[q] * rest_factor(g, start + dir_unit * s, ai);
    }
    double atom_part = (std::pow(hi, 1.0 + beta) - std::pow(lo, 1.0 + beta)) / (1.0 + beta);
    total += atom_part * fmean;
    hi = lo;
  }
  return total;
}

double segment_weight(const ConformalMetric& g, Point p, Point q);

// Splits [p,q] where atoms sit on the segment, then integrates.
double segment_weight_with_atoms(const ConformalMetric& g, Point p, Point q) {
  Vec2 d = q - p;
  double len = d.norm();
  if (len == 0.0) return 0.0;
  Vec2 unit = d * (1.0 / len);
  double on_tol = 1e-9 * len;  // relative, so deep probe scales stay sound

  // interior atom on the segment: split there
  for (size_t i = 0; i < g.atoms.size(); ++i) {
    Vec2 za = g.background.displacement(p, g.atoms[i].location);
    double t = za.dot(unit);
    if (t <= on_tol || t >= len - on_tol) continue;
    Vec2 perp = za - unit * t;
    if (perp.norm() < on_tol) {
      Point mid = p + unit * t;
      return segment_weight_with_atoms(g, p, mid) + segment_weight_with_atoms(g, mid, q);
    }
  }
  // atom at an endpoint: closed-form atom factor
  for (size_t i = 0; i < g.atoms.size(); ++i) {
    if (g.background.base_dist(p, g.atoms[i].location) < on_tol)
      return atom_endpoint_weight(g, static_cast<int>(i), p, unit, len);
    if (g.background.base_dist(q, g.atoms[i].location) < on_tol)
      return atom_endpoint_weight(g, static_cast<int>(i), q, unit * -1.0, len);
  }
  return segment_weight(g, p, q);
}

// No atom on the segment: adaptive quadrature with panels pre-split at the
// closest approach to nearby atoms.
double segment_weight(const ConformalMetric& g, Point p, Point q) {
  Vec2 d = q - p;
  double len = d.norm();
  if (len == 0.0) return 0.0;
  Vec2 unit = d * (1.0 / len);
  std::vector<double> breaks;
  for (const ConePoint& a : g.atoms) {
    Vec2 za = g.background.displacement(p, a.location);
    double t = std::clamp(za.dot(unit), 0.0, len);
    double dist = (za - unit * t).norm();
    if (dist < 4.0 * len && t > 0.0 && t < len) breaks.push_back(t);
  }
  auto f = [&](double s) { return std::exp(g.eval_u(p + unit * s)); };
  return adaptive_quadrature_split(f, 0.0, len, breaks, 1e-6);
}

}  // namespace

double edge_weight(const ConformalMetric& g, Point p, Point q) {
  if (!g.background.is_torus()) {
    Rect e = g.background.extent.inflated(1e-9);
    if (!e.contains(p) || !e.contains(q))
      throw Error(ErrorCode::SegmentOutOfDomain, "segment endpoint outside the domain");
  } else {
    q = p + g.background.displacement(p, q);
  }
  return segment_weight_with_atoms(g, p, q);
}

double DistanceField::at(Point p) const {
  const GridGraph& gg = *graph;
  double fx = (p.x - gg.background().extent.x0) / gg.spacing();
  double fy = (p.y - gg.background().extent.y0) / gg.spacing();
  int i, j;
  double tx, ty;
  if (gg.wrap()) {
    fx -= gg.nx() * std::floor(fx / gg.nx());
    fy -= gg.ny() * std::floor(fy / gg.ny());
    i = static_cast<int>(std::floor(fx)) % gg.nx();
    j = static_cast<int>(std::floor(fy)) % gg.ny();
    tx = fx - std::floor(fx);
    ty = fy - std::floor(fy);
  } else {
    fx = std::clamp(fx, 0.0, gg.nx() - 1.0);
    fy = std::clamp(fy, 0.0, gg.ny() - 1.0);
    i = std::min(static_cast<int>(fx), gg.nx() - 2);
    j = std::min(static_cast<int>(fy), gg.ny() - 2);
    i = std::max(i, 0);
    j = std::max(j, 0);
    tx = fx - i;
    ty = fy - j;
  }
  int i1 = gg.wrap() ? (i + 1) % gg.nx() : i + 1;
  int j1 = gg.wrap() ? (j + 1) % gg.ny() : j + 1;
  double v00 = values[gg.node_index(i, j)];
  double v10 = values[gg.node_index(i1, j)];
  double v01 = values[gg.node_index(i, j1)];
  double v11 = values[gg.node_index(i1, j1)];
  double vmax = std::max({v00, v10, v01, v11});
  if (!std::isfinite(vmax)) {
    // fall back to the nearest finite corner
    double best = kInf;
    for (double v : {v00, v10, v01, v11}) best = std::min(best, v);
    return best;
  }
  return (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 + (1 - tx) * ty * v01 + tx * ty * v11;
}

std::vector<Point> DistanceField::path_from(Point p) const {
  std::vector<Point> path;
  int idx = graph->nearest_node(p);
  while (idx >= 0 && std::isfinite(values[idx])) {
    path.push_back(graph->node_pos(idx));
    idx = pred[idx];
  }
  std::reverse(path.begin(), path.end());
  return path;
}

double DistanceField::max_finite() const {
  double m = 0.0;
  for (double v : values)
    if (std::isfinite(v)) m = std::max(m, v);
  return m;
}

DistanceSolver::DistanceSolver(const GridGraph& graph, const ConformalMetric& g,
                               std::optional<Region> restriction,
                               std::optional<Region> forbidden)
    : graph_(graph), g_(g), restriction_(std::move(restriction)),
      forbidden_(std::move(forbidden)) {
  int n = graph_.node_count();
  admissible_.assign(n, 1);
  if (restriction_ || forbidden_) {
    for (int i = 0; i < n; ++i) {
      Point p = graph_.node_pos(i);
      bool ok = !restriction_ || region_contains(*restriction_, p);
      if (ok && forbidden_ && region_contains(*forbidden_, p)) ok = false;
      admissible_[i] = ok ? 1 : 0;
    }
  }
  int half = graph_.stencil() / 2;
  cache_.assign(static_cast<size_t>(n) * half, std::numeric_limits<double>::quiet_NaN());
}

bool DistanceSolver::node_admissible(int idx) const { return admissible_[idx] != 0; }

namespace {

bool segment_enters_region(Point a, Point b, const Region& region) {
  if (const auto* d = std::get_if<Disk>(&region)) return segment_intersects_disk(a, b, *d);
  if (const auto* r = std::get_if<Rect>(&region))
    return segment_length_in_region(a, b, *r) > 1e-14;
  const auto& ann = std::get<AnnulusRegion>(region);
  return segment_intersects_disk(a, b, Disk{ann.center, ann.r_outer}) &&
         segment_length_in_region(a, b, ann) > 1e-14;
}

// Edges may not shortcut through the inner hole of an annulus restriction or
// through an explicitly forbidden region.
bool edge_admissible(const std::optional<Region>& restriction,
                     const std::optional<Region>& forbidden, const Background& bg, Point a,
                     Point b) {
  if (!restriction && !forbidden) return true;
  if (bg.is_torus()) b = a + bg.displacement(a, b);
  if (restriction) {
    const auto* ann = std::get_if<AnnulusRegion>(&*restriction);
    if (ann && ann->r_inner > 0.0 &&
        segment_intersects_disk(a, b, Disk{ann->center, ann->r_inner}))
      return false;
  }
  if (forbidden && segment_enters_region(a, b, *forbidden)) return false;
  return true;
}

}  // namespace

double DistanceSolver::cached_weight(int idx, int dir_index, int nbr) const {
  if (dir_index & 1) {
    // the pair (d, -d) shares one cached slot, keyed at the other endpoint
    return cached_weight(nbr, dir_index - 1, idx);
  }
  size_t key = static_cast<size_t>(idx) * (graph_.stencil() / 2) + dir_index / 2;
  double w = cache_[key];
  if (std::isnan(w)) {
    Point a = graph_.node_pos(idx);
    Point b = graph_.node_pos(nbr);
    if (!edge_admissible(restriction_, forbidden_, graph_.background(), a, b)) {
      w = kInf;
    } else {
      w = edge_weight(g_, a, b);
    }
    cache_[key] = w;
  }
  return w;
}

void DistanceSolver::prefill(int threads) const {
  auto dirs = stencil_dirs(graph_.stencil());
  int n = graph_.node_count();
  auto work = [&](int lo, int hi) {
    for (int idx = lo; idx < hi; ++idx) {
      if (!admissible_[idx]) continue;
      for (size_t k = 0; k < dirs.size(); k += 2) {
        int v = graph_.neighbor(idx, dirs[k]);
        if (v < 0 || !admissible_[v]) continue;
        cached_weight(idx, static_cast<int>(k), v);
      }
    }
  };
  threads = std::max(threads, 1);
  if (threads == 1) {
    work(0, n);
    return;
  }
  std::vector<std::thread> pool;
  int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back(work, t * chunk, std::min(n, (t + 1) * chunk));
  for (auto& th : pool) th.join();
}

DistanceField DistanceSolver::solve(Point source) const {
  Point s = source;
  return solve(std::span<const Point>(&s, 1));
}

DistanceField DistanceSolver::solve(std::span<const Point> sources) const {
  const int n = graph_.node_count();
  auto dirs = stencil_dirs(graph_.stencil());
  DistanceField field;
  field.graph = &graph_;
  field.sources.assign(sources.begin(), sources.end());
  field.values.assign(n, kInf);
  field.pred.assign(n, -1);

  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;

  for (Point src : sources) {
    if (!g_.background.contains(src))
      throw Error(ErrorCode::SourceOutOfDomain, "source outside the domain");
    int exact = graph_.nearest_node(src);
    if (graph_.background().displacement(src, graph_.node_pos(exact)).norm() <
        1e-9 * graph_.spacing()) {
      if (node_admissible(exact) && field.values[exact] > 0.0) {
        field.values[exact] = 0.0;
        heap.emplace(0.0, exact);
      }
      continue;
    }
    for (int idx : graph_.nearest_nodes(src, 16)) {
      if (!node_admissible(idx)) continue;
      Point np = graph_.node_pos(idx);
      if (!edge_admissible(restriction_, forbidden_, graph_.background(), src, np)) continue;
      double w = edge_weight(g_, src, np);
      if (w < field.values[idx]) {
        field.values[idx] = w;
        heap.emplace(w, idx);
      }
    }
  }

  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > field.values[u]) continue;
    for (size_t k = 0; k < dirs.size(); ++k) {
      int v = graph_.neighbor(u, dirs[k]);
      if (v < 0 || !admissible_[v]) continue;
      double w = cached_weight(u, static_cast<int>(k), v);
      if (!std::isfinite(w)) continue;
      double alt = d + w;
      if (alt < field.values[v]) {
        field.values[v] = alt;
        field.pred[v] = u;
        heap.emplace(alt, v);
      }
    }
  }
  return field;
}

DistanceField distance_field(const ConformalMetric& g, const GridGraph& graph, Point source) {
  return DistanceSolver(graph, g).solve(source);
}

double distance(const ConformalMetric& g, const GridGraph& graph, Point x, Point y) {
  DistanceField f = distance_field(g, graph, x);
  return f.at(y);
}

double curve_length(const ConformalMetric& g, std::span<const Point> polyline) {
  double total = 0.0;
  for (size_t i = 0; i + 1 < polyline.size(); ++i)
    total += edge_weight(g, polyline[i], polyline[i + 1]);
  return total;
}

double circle_length(const ConformalMetric& g, Point center, double r) {
  for (const ConePoint& a : g.atoms)
    if (std::abs(g.background.base_dist(center, a.location) - r) < 1e-9 * std::max(r, 1.0))
      throw Error(ErrorCode::AtomOnCircle, "atom on the circle");
  return r * periodic_quadrature(
                 [&](double th) {
                   return std::exp(
                       g.eval_u({center.x + r * std::cos(th), center.y + r * std::sin(th)}));
                 },
                 1e-7);
}

namespace {

std::vector<Point> circle_points(Point c, double r, int count) {
  std::vector<Point> pts;
  for (int k = 0; k < count; ++k) {
    double th = 2.0 * M_PI * k / count;
    pts.push_back({c.x + r * std::cos(th), c.y + r * std::sin(th)});
  }
  return pts;
}

std::vector<Point> boundary_points(const Region& region, int count) {
  if (const auto* d = std::get_if<Disk>(&region))
    return circle_points(d->center, d->radius, count);
  if (const auto* a = std::get_if<AnnulusRegion>(&region)) {
    std::vector<Point> pts = circle_points(a->center, a->r_outer, (count + 1) / 2);
    if (a->r_inner > 0.0) {
      for (Point p : circle_points(a->center, a->r_inner, count / 2)) pts.push_back(p);
    }
    return pts;
  }
  const auto& r = std::get<Rect>(region);
  std::vector<Point> pts;
  double per = 2.0 * (r.width() + r.height());
  for (int k = 0; k < count; ++k) {
    double s = per * k / count;
    if (s < r.width())
      pts.push_back({r.x0 + s, r.y0});
    else if ((s -= r.width()) < r.height())
      pts.push_back({r.x1, r.y0 + s});
    else if ((s -= r.height()) < r.width())
      pts.push_back({r.x1 - s, r.y1});
    else
      pts.push_back({r.x0, r.y1 - (s - r.width())});
  }
  return pts;
}

// Local lattice covering the region, restricted to it; atoms bound.
struct LocalPatch {
  GridGraph graph;
  std::unique_ptr<DistanceSolver> solver;
  LocalPatch(Background bg, int cells, int stencil) : graph(bg, cells, stencil) {}
};

std::unique_ptr<LocalPatch> make_local(const ConformalMetric& g, const Region& region, int cells,
                                       int stencil, std::optional<Region> forbidden = {}) {
  Rect b = region_bounds(region);
  double margin = 1.5 * std::max(b.width(), b.height()) / cells;
  Rect box = b.inflated(margin);
  if (!g.background.is_torus()) {
    Rect e = g.background.extent;
    box = {std::max(box.x0, e.x0), std::max(box.y0, e.y0), std::min(box.x1, e.x1),
           std::min(box.y1, e.y1)};
  }
  auto patch = std::make_unique<LocalPatch>(Background::plane(box), cells, stencil);
  patch->graph.bind_atoms(g);
  patch->solver =
      std::make_unique<DistanceSolver>(patch->graph, g, region, std::move(forbidden));
  return patch;
}

// Value of the field at an off-lattice point, attached by direct edges to the
// nearest admissible nodes.
double query_attached(const DistanceSolver& solver, const ConformalMetric& g,
                      const std::optional<Region>& restriction,
                      const std::optional<Region>& forbidden, const DistanceField& field,
                      Point p) {
  double best = kInf;
  for (int idx : solver.graph().nearest_nodes(p, 16)) {
    if (!solver.node_admissible(idx)) continue;
    double dv = field.values[idx];
    if (!std::isfinite(dv)) continue;
    Point np = solver.graph().node_pos(idx);
    if (!edge_admissible(restriction, forbidden, solver.graph().background(), p, np)) continue;
    best = std::min(best, dv + edge_weight(g, p, np));
  }
  return best;
}

}  // namespace

double annulus_distance(const ConformalMetric& g, const Region& inner, const Region& outer,
                        const AnnulusOptions& opt) {
  Rect bi = region_bounds(inner);
  Rect bo = region_bounds(outer);
  if (bi.x0 < bo.x0 - 1e-12 || bi.y0 < bo.y0 - 1e-12 || bi.x1 > bo.x1 + 1e-12 ||
      bi.y1 > bo.y1 + 1e-12)
    throw Error(ErrorCode::AnnulusOutOfDomain, "inner region must lie inside the outer one");
  if (!g.background.is_torus()) {
    Rect e = g.background.extent.inflated(1e-9);
    if (!e.contains({bo.x0, bo.y0}) || !e.contains({bo.x1, bo.y1}))
      throw Error(ErrorCode::AnnulusOutOfDomain, "outer region leaves the domain");
  }

  // between-region band: the annulus form when the disks are concentric,
  // otherwise an explicit outer restriction plus a forbidden interior
  std::optional<Region> restriction;
  std::optional<Region> forbidden;
  const auto* di = std::get_if<Disk>(&inner);
  const auto* douter = std::get_if<Disk>(&outer);
  if (di && douter && (di->center - douter->center).norm() < 1e-12) {
    if (di->radius >= douter->radius) return 0.0;
    restriction = AnnulusRegion{di->center, di->radius, douter->radius};
  } else {
    restriction = outer;
    forbidden = inner;
  }

  auto patch = make_local(g, *restriction, opt.local_cells, opt.stencil, forbidden);
  DistanceSolver& solver = *patch->solver;

  std::vector<Point> src = boundary_points(inner, opt.boundary_samples);
  DistanceField field = solver.solve(src);

  double best = kInf;
  for (Point p : boundary_points(outer, opt.boundary_samples))
    best = std::min(best, query_attached(solver, g, restriction, forbidden, field, p));
  return best;
}

double ball_area(const ConformalMetric& g, const GridGraph& graph, Point center, double R) {
  DistanceField field = DistanceSolver(graph, g).solve(center);
  double h = graph.spacing();
  double core_radius = 2.0 * h;
  double area = 0.0;
  for (int idx = 0; idx < graph.node_count(); ++idx) {
    if (!(field.values[idx] < R)) continue;
    int i = idx % graph.nx(), j = idx / graph.nx();
    if (!graph.wrap() && (i == 0 || j == 0 || i == graph.nx() - 1 || j == graph.ny() - 1))
      throw Error(ErrorCode::RegionOutOfDomain, "metric ball reaches the domain boundary");
    Point p = graph.node_pos(idx);
    if (g.atom_distance(p) < core_radius) continue;  // replaced by the ring integral below
    area += std::exp(2.0 * g.eval_u(p)) * h * h;
  }
  for (size_t ai = 0; ai < g.atoms.size(); ++ai) {
    const ConePoint& a = g.atoms[ai];
    int anode = graph.nearest_node(a.location);
    if (!(field.values[anode] < R)) continue;
    double rest = g.eval_u_regular(a.location);
    for (size_t j = 0; j < g.atoms.size(); ++j)
      if (j != ai)
        rest += g.atoms[j].beta *
                std::log(g.background.base_dist(a.location, g.atoms[j].location));
    double expo = 2.0 * a.beta + 2.0;
    area += std::exp(2.0 * rest) * 2.0 * M_PI * std::pow(core_radius, expo) / expo;
  }
  return area;
}

DiameterEstimate diameter(const ConformalMetric& g, const Region& region,
                          const DiameterOptions& opt) {
  auto patch = make_local(g, region, opt.local_cells, opt.stencil);
  DistanceSolver& solver = *patch->solver;
  const GridGraph& lg = patch->graph;

  int nb = std::max(opt.sample_count / 2, 4);
  std::vector<Point> samples = boundary_points(region, nb);
  nb = static_cast<int>(samples.size());
  // interior samples: a deterministic coarse sweep of admissible nodes
  std::vector<int> interior;
  for (int idx = 0; idx < lg.node_count(); ++idx)
    if (solver.node_admissible(idx)) interior.push_back(idx);
  size_t want = static_cast<size_t>(std::max(opt.sample_count - nb, 0));
  if (want > 0 && !interior.empty()) {
    size_t stride = std::max<size_t>(interior.size() / want, 1);
    for (size_t k = 0; k < interior.size() && samples.size() <
                                                  static_cast<size_t>(opt.sample_count);
         k += stride)
      samples.push_back(lg.node_pos(interior[k]));
  }

  DiameterEstimate est;
  std::optional<Region> restriction = region;
  for (size_t i = 0; i + 1 < samples.size(); ++i) {
    DistanceField f = solver.solve(samples[i]);
    for (size_t j = i + 1; j < samples.size(); ++j) {
      double d = query_attached(solver, g, restriction, {}, f, samples[j]);
      if (std::isfinite(d)) est.lower = std::max(est.lower, d);
    }
  }

  // upper bound: 2 sup_x d(x, boundary) + boundary length
  DistanceField fb = solver.solve(std::span<const Point>(samples.data(), nb));
  double sup_inner = 0.0;
  for (int idx = 0; idx < lg.node_count(); ++idx)
    if (solver.node_admissible(idx) && std::isfinite(fb.values[idx]))
      sup_inner = std::max(sup_inner, fb.values[idx]);
  double boundary_len = 0.0;
  if (const auto* d = std::get_if<Disk>(&region)) {
    boundary_len = circle_length(g, d->center, d->radius);
  } else if (const auto* a = std::get_if<AnnulusRegion>(&region)) {
    boundary_len = circle_length(g, a->center, a->r_outer);
    if (a->r_inner > 0.0) boundary_len += circle_length(g, a->center, a->r_inner);
  } else {
    std::vector<Point> per = boundary_points(region, 256);
    per.push_back(per.front());
    boundary_len = curve_length(g, per);
  }
  est.upper = 2.0 * sup_inner + boundary_len;
  return est;
}

AString build_a_string(std::span<const Point> curve, double a, const Background& bg) {
  if (a <= 0.0) throw Error(ErrorCode::InvalidArgument, "a must be positive");
  if (curve.size() < 2) throw Error(ErrorCode::CurveTooShort, "curve needs at least 2 points");
  double total = 0.0;
  for (size_t i = 0; i + 1 < curve.size(); ++i) total += bg.base_dist(curve[i], curve[i + 1]);
  if (total <= a) throw Error(ErrorCode::CurveTooShort, "curve shorter than a");

  // arc-length parametrization over the polyline
  std::vector<double> cum(curve.size(), 0.0);
  for (size_t i = 1; i < curve.size(); ++i)
    cum[i] = cum[i - 1] + bg.base_dist(curve[i - 1], curve[i]);
  auto eval = [&](double s) -> Point {
    auto it = std::upper_bound(cum.begin(), cum.end(), s);
    size_t i = std::min<size_t>(it - cum.begin(), curve.size() - 1);
    if (i == 0) return curve[0];
    double seg = cum[i] - cum[i - 1];
    double t = seg > 0.0 ? (s - cum[i - 1]) / seg : 0.0;
    Vec2 step = bg.displacement(curve[i - 1], curve[i]);
    return curve[i - 1] + step * t;
  };

  AString out;
  out.a = a;
  out.points.push_back(curve[0]);
  double cursor = 0.0;
  const double end = cum.back();
  while (true) {
    Point last = out.points.back();
    // first parameter >= cursor with base distance a from `last`
    double lo = cursor, hi = -1.0;
    double probe = cursor;
    double step = a * 0.25;
    while (probe < end) {
      probe = std::min(probe + step, end);
      double d = bg.base_dist(last, eval(probe));
      if (d >= a) {
        hi = probe;
        break;
      }
      lo = probe;
    }
    if (hi < 0.0) break;  // never reaches distance a again
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      if (bg.base_dist(last, eval(mid)) >= a)
        hi = mid;
      else
        lo = mid;
    }
    cursor = hi;
    if (cursor >= end - 1e-12) break;
    out.points.push_back(eval(cursor));
  }

  Point endpoint = eval(end);
  double gap = bg.base_dist(out.points.back(), endpoint);
  if (gap < a && out.points.size() > 1) out.points.pop_back();  // merge into the endpoint
  out.points.push_back(endpoint);
  return out;
}

double string_estimate(const ConformalMetric& g, const AString& alpha, double r) {
  double total = 0.0;
  for (size_t i = 0; i + 1 < alpha.points.size(); ++i) {
    double mean = disk_mean(g, alpha.points[i], r);
    total += std::exp(mean) * g.dist0(alpha.points[i], alpha.points[i + 1]);
  }
  return total;
}

}  // namespace curvlab
