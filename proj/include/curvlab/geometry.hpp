#ifndef CURVLAB_GEOMETRY_HPP
#define CURVLAB_GEOMETRY_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

namespace curvlab {

enum class ErrorCode {
  InvalidArgument,
  ConfigError,
  IoError,
  EvalAtAtom,
  AtomOnCircle,
  SegmentOutOfDomain,
  SourceOutOfDomain,
  AnnulusOutOfDomain,
  RegionOutOfDomain,
  NonzeroTotalMass,
  NoDensityRepresentable,
  Divergent,
  NotBorderlineAtom,
  CurveTooShort,
  PreconditionFail,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  double norm2() const { return x * x + y * y; }
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator-(Point o) const { return {x - o.x, y - o.y}; }
  Point operator+(Vec2 v) const { return {x + v.x, y + v.y}; }
};

inline Point lerp(Point a, Point b, double t) {
  return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  Point center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
  bool contains(Point p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  Rect inflated(double m) const { return {x0 - m, y0 - m, x1 + m, y1 + m}; }
};

struct Disk {
  Point center;
  double radius = 0.0;
  bool contains(Point p) const { return (p - center).norm() <= radius; }
};

struct AnnulusRegion {
  Point center;
  double r_inner = 0.0;
  double r_outer = 0.0;
  bool contains(Point p) const {
    double d = (p - center).norm();
    return d >= r_inner && d <= r_outer;
  }
};

// Regions are restricted to disks, rectangles and annuli; every statement the
// experiments exercise is phrased over these.
using Region = std::variant<Disk, Rect, AnnulusRegion>;

bool region_contains(const Region& region, Point p);
Rect region_bounds(const Region& region);

// Length of the portion of segment [a,b] inside the region, computed by
// analytic clipping (never by sampling).
double segment_length_in_region(Point a, Point b, const Region& region);

// True if the open segment (a,b) meets the open disk.
bool segment_intersects_disk(Point a, Point b, const Disk& disk);

enum class BackgroundKind { PlaneRect, FlatTorus };

struct Background {
  BackgroundKind kind = BackgroundKind::PlaneRect;
  Rect extent{-1.0, -1.0, 1.0, 1.0};  // torus always uses the unit square

  static Background plane(Rect r) { return Background{BackgroundKind::PlaneRect, r}; }
  static Background torus() { return Background{BackgroundKind::FlatTorus, Rect{0.0, 0.0, 1.0, 1.0}}; }

  bool is_torus() const { return kind == BackgroundKind::FlatTorus; }

  // Canonical representative in [0,1)x[0,1) on the torus; identity on the plane.
  Point canonical(Point p) const {
    if (!is_torus()) return p;
    double fx = p.x - std::floor(p.x);
    double fy = p.y - std::floor(p.y);
    if (fx >= 1.0) fx = 0.0;
    if (fy >= 1.0) fy = 0.0;
    return {fx, fy};
  }

  // Displacement from -> to, taking the nearest image on the torus.
  Vec2 displacement(Point from, Point to) const {
    Vec2 d = to - from;
    if (is_torus()) {
      d.x -= std::round(d.x);
      d.y -= std::round(d.y);
    }
    return d;
  }

  double base_dist(Point a, Point b) const { return displacement(a, b).norm(); }

  bool contains(Point p) const { return is_torus() ? true : extent.contains(p); }
};

}  // namespace curvlab

#endif
