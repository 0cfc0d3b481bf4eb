#ifndef CURVLAB_GEODESIC_HPP
#define CURVLAB_GEODESIC_HPP

#include <memory>
#include <span>
#include <vector>

#include "curvlab/metric.hpp"

namespace curvlab {

struct StencilDir {
  int dx;
  int dy;
};

// 8 = king moves, 16 = king + knight, 32 adds (3,1)- and (3,2)-type moves.
std::span<const StencilDir> stencil_dirs(int stencil);

// Node lattice with spacing h over a rectangle (or the unit torus, wrapped).
// The node nearest each bound atom is relocated exactly onto the atom so that
// radial closed-form edge weights apply.
class GridGraph {
public:
  GridGraph(const Background& bg, int cells_per_side, int stencil);

  const Background& background() const { return bg_; }
  int stencil() const { return stencil_; }
  double spacing() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int node_count() const { return nx_ * ny_; }
  bool wrap() const { return wrap_; }

  int node_index(int i, int j) const { return j * nx_ + i; }
  Point node_pos(int idx) const;
  Point lattice_pos(int idx) const;  // position ignoring relocation
  int nearest_node(Point p) const;
  // Neighbor across dir, or -1 when it leaves the lattice (plane case).
  int neighbor(int idx, StencilDir d) const;

  // Relocate the nearest node onto each atom of g.
  void bind_atoms(const ConformalMetric& g);
  const std::vector<std::pair<int, Point>>& relocations() const { return relocations_; }

  // k nearest nodes to p (by lattice position), for off-lattice attachment.
  std::vector<int> nearest_nodes(Point p, int k) const;

private:
  Background bg_;
  int stencil_;
  double h_;
  int nx_, ny_;
  bool wrap_;
  std::vector<std::pair<int, Point>> relocations_;
};

// Weight of the straight segment [p,q]: adaptive Gauss-Legendre quadrature of
// e^{u} with panels split at the closest approach to each nearby atom;
// segments starting at an atom integrate the atom factor s^beta in closed
// form times the panel mean of the remaining factor. Relative tolerance 1e-6.
double edge_weight(const ConformalMetric& g, Point p, Point q);

struct DistanceField {
  std::vector<double> values;  // per node; +inf where unreachable
  std::vector<int> pred;       // predecessor node, -1 at sources
  const GridGraph* graph = nullptr;
  std::vector<Point> sources;

  double at_node(int idx) const { return values[idx]; }
  // Bilinear interpolation between the 4 surrounding nodes.
  double at(Point p) const;
  // Predecessor-path polyline from the nearest node of p back to a source.
  std::vector<Point> path_from(Point p) const;
  double max_finite() const;
};

// Binds a graph, a metric and an optional region restriction; caches edge
// weights so repeated solves over the same pair are cheap. Solves are
// sequential and deterministic (ties broken by node index).
class DistanceSolver {
public:
  // Nodes must lie in `restriction` (when given) and outside `forbidden`;
  // edges may not cut through `forbidden` (or through the inner hole of an
  // annulus restriction).
  DistanceSolver(const GridGraph& graph, const ConformalMetric& g,
                 std::optional<Region> restriction = {},
                 std::optional<Region> forbidden = {});

  // Multi-source Dijkstra; off-lattice sources attach by direct edges to the
  // 16 nearest admissible nodes.
  DistanceField solve(std::span<const Point> sources) const;
  DistanceField solve(Point source) const;

  // Computes every edge weight up front, split across threads. Each cache
  // slot is computed independently, so the result does not depend on the
  // thread count. Solves on a prefilled solver are pure graph traversals.
  void prefill(int threads = 1) const;

  bool node_admissible(int idx) const;
  const GridGraph& graph() const { return graph_; }

private:
  double cached_weight(int idx, int dir_index, int nbr) const;

  const GridGraph& graph_;
  const ConformalMetric& g_;
  std::optional<Region> restriction_;
  std::optional<Region> forbidden_;
  std::vector<char> admissible_;
  mutable std::vector<double> cache_;  // canonical (node, dir) -> weight; NaN = unset
};

DistanceField distance_field(const ConformalMetric& g, const GridGraph& graph, Point source);
double distance(const ConformalMetric& g, const GridGraph& graph, Point x, Point y);

double curve_length(const ConformalMetric& g, std::span<const Point> polyline);
double circle_length(const ConformalMetric& g, Point center, double r);

struct AnnulusOptions {
  int local_cells = 256;      // local lattice resolution across the outer box
  int boundary_samples = 96;  // discretization of each boundary circle
  int stencil = 16;
};

// d_g(inner boundary, outer boundary) restricted to outer \ inner, by
// multi-source Dijkstra on a local lattice scaled to the outer region.
double annulus_distance(const ConformalMetric& g, const Region& inner, const Region& outer,
                        const AnnulusOptions& opt = {});

// Area of the metric ball B_R(center): sum of e^{2u} h^2 over nodes with
// distance < R, atom cores replaced by closed-form ring integrals.
double ball_area(const ConformalMetric& g, const GridGraph& graph, Point center, double R);

struct DiameterOptions {
  int sample_count = 64;
  int local_cells = 192;
  int stencil = 16;
};
struct DiameterEstimate {
  double lower = 0.0;  // max pairwise restricted distance over the sample set
  double upper = 0.0;  // 2 sup_x d(x, boundary) + boundary length
};
DiameterEstimate diameter(const ConformalMetric& g, const Region& region,
                          const DiameterOptions& opt = {});

// Ordered points with consecutive base distances in [a, 2a].
struct AString {
  std::vector<Point> points;
  double a = 0.0;
};

// Greedy construction along the polyline: emit the first point at base
// distance exactly a from the previous one (bisection on the parameter); a
// final gap < a is merged into the endpoint. Throws CurveTooShort.
AString build_a_string(std::span<const Point> curve, double a, const Background& bg);

// sum_i e^{disk_mean(g, P_i, r)} * d0(P_i, P_{i+1}) - the local estimator of
// the g-length of the string.
double string_estimate(const ConformalMetric& g, const AString& alpha, double r);

}  // namespace curvlab

#endif
