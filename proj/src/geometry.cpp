#include "curvlab/geometry.hpp"

#include <algorithm>

namespace curvlab {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EvalAtAtom: return "EvalAtAtom";
    case ErrorCode::AtomOnCircle: return "AtomOnCircle";
    case ErrorCode::SegmentOutOfDomain: return "SegmentOutOfDomain";
    case ErrorCode::SourceOutOfDomain: return "SourceOutOfDomain";
    case ErrorCode::AnnulusOutOfDomain: return "AnnulusOutOfDomain";
    case ErrorCode::RegionOutOfDomain: return "RegionOutOfDomain";
    case ErrorCode::NonzeroTotalMass: return "NonzeroTotalMass";
    case ErrorCode::NoDensityRepresentable: return "NoDensityRepresentable";
    case ErrorCode::Divergent: return "Divergent";
    case ErrorCode::NotBorderlineAtom: return "NotBorderlineAtom";
    case ErrorCode::CurveTooShort: return "CurveTooShort";
    case ErrorCode::PreconditionFail: return "PreconditionFail";
  }
  return "Unknown";
}

bool region_contains(const Region& region, Point p) {
  return std::visit([&](const auto& r) { return r.contains(p); }, region);
}

Rect region_bounds(const Region& region) {
  if (const auto* d = std::get_if<Disk>(&region)) {
    return {d->center.x - d->radius, d->center.y - d->radius, d->center.x + d->radius,
            d->center.y + d->radius};
  }
  if (const auto* a = std::get_if<AnnulusRegion>(&region)) {
    return {a->center.x - a->r_outer, a->center.y - a->r_outer, a->center.x + a->r_outer,
            a->center.y + a->r_outer};
  }
  return std::get<Rect>(region);
}

namespace {

// Parameter interval [t0,t1] of segment a + t(b-a) inside the disk, empty as
// (1,0) when it misses.
std::pair<double, double> segment_disk_interval(Point a, Point b, const Disk& disk) {
  Vec2 d = b - a;
  Vec2 f = a - disk.center;
  double A = d.norm2();
  if (A == 0.0) return {1.0, 0.0};
  double B = 2.0 * f.dot(d);
  double C = f.norm2() - disk.radius * disk.radius;
  double disc = B * B - 4.0 * A * C;
  if (disc <= 0.0) return {1.0, 0.0};
  double sq = std::sqrt(disc);
  double t0 = (-B - sq) / (2.0 * A);
  double t1 = (-B + sq) / (2.0 * A);
  t0 = std::max(t0, 0.0);
  t1 = std::min(t1, 1.0);
  return {t0, t1};
}

double segment_length_in_disk(Point a, Point b, const Disk& disk) {
  auto [t0, t1] = segment_disk_interval(a, b, disk);
  if (t1 <= t0) return 0.0;
  return (t1 - t0) * (b - a).norm();
}

double segment_length_in_rect(Point a, Point b, const Rect& rect) {
  // Liang-Barsky clip.
  double t0 = 0.0, t1 = 1.0;
  Vec2 d = b - a;
  auto clip = [&](double p, double q) {
    if (p == 0.0) return q >= 0.0;
    double r = q / p;
    if (p < 0.0) {
      if (r > t1) return false;
      t0 = std::max(t0, r);
    } else {
      if (r < t0) return false;
      t1 = std::min(t1, r);
    }
    return true;
  };
  if (!clip(-d.x, a.x - rect.x0)) return 0.0;
  if (!clip(d.x, rect.x1 - a.x)) return 0.0;
  if (!clip(-d.y, a.y - rect.y0)) return 0.0;
  if (!clip(d.y, rect.y1 - a.y)) return 0.0;
  if (t1 <= t0) return 0.0;
  return (t1 - t0) * d.norm();
}

}  // namespace

double segment_length_in_region(Point a, Point b, const Region& region) {
  if (const auto* disk = std::get_if<Disk>(&region)) return segment_length_in_disk(a, b, *disk);
  if (const auto* rect = std::get_if<Rect>(&region)) return segment_length_in_rect(a, b, *rect);
  const auto& ann = std::get<AnnulusRegion>(region);
  double outer = segment_length_in_disk(a, b, Disk{ann.center, ann.r_outer});
  double inner = segment_length_in_disk(a, b, Disk{ann.center, ann.r_inner});
  return outer - inner;
}

bool segment_intersects_disk(Point a, Point b, const Disk& disk) {
  auto [t0, t1] = segment_disk_interval(a, b, disk);
  return t1 > t0 + 1e-14;
}

}  // namespace curvlab
