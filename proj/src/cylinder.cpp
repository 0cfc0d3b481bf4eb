#include "curvlab/cylinder.hpp"

#include <algorithm>
#include <cmath>

namespace curvlab {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

double ring_distance(const ConformalMetric& g, Point center, int ring, double L,
                     const AnnulusOptions& opt) {
  if (ring < 0 || L <= 0.0) throw Error(ErrorCode::InvalidArgument, "ring >= 0 and L > 0");
  double r_out = std::exp(-ring * L);
  double r_in = std::exp(-(ring + 1) * L);
  return annulus_distance(g, Disk{center, r_in}, Disk{center, r_out}, opt);
}

double estimate_lambda(const ConformalMetric& g, Point center, double t0, double t1) {
  const int nt = 48, nth = 64;
  double best = 0.0;
  for (double tb = t0; tb + 1.0 <= t1 + 1e-9; tb += 1.0) {
    double dt = 1.0 / nt;
    double dth = kTwoPi / nth;
    // v on the block, one guard row on each side in t
    std::vector<double> v(static_cast<size_t>(nt + 2) * nth);
    for (int it = 0; it < nt + 2; ++it) {
      double t = tb + (it - 1) * dt;
      double r = std::exp(-t);
      for (int ith = 0; ith < nth; ++ith) {
        double th = kTwoPi * ith / nth;
        v[static_cast<size_t>(it) * nth + ith] =
            g.eval_u({center.x + r * std::cos(th), center.y + r * std::sin(th)}) - t;
      }
    }
    double integral = 0.0;
    for (int it = 1; it <= nt; ++it)
      for (int ith = 0; ith < nth; ++ith) {
        int thm = (ith + nth - 1) % nth, thp = (ith + 1) % nth;
        double vt = (v[(it + 1) * static_cast<size_t>(nth) + ith] -
                     v[(it - 1) * static_cast<size_t>(nth) + ith]) /
                    (2.0 * dt);
        double vth = (v[it * static_cast<size_t>(nth) + thp] -
                      v[it * static_cast<size_t>(nth) + thm]) /
                     (2.0 * dth);
        integral += std::hypot(vt, vth) * dt * dth;
      }
    best = std::max(best, integral);
  }
  return 1.5 * best;
}

ExperimentReport three_circle_report(const ConformalMetric& g, Point center, double L,
                                     int n_rings, double kappa, const ThreeCircleOptions& opt) {
  if (n_rings < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 rings");
  double mass = 0.0;
  int ai = g.nearest_atom(center);
  if (ai >= 0 && g.background.base_dist(center, g.atoms[ai].location) < 1e-9)
    mass = -kTwoPi * g.atoms[ai].beta;
  if (!(mass < kTwoPi))
    throw Error(ErrorCode::PreconditionFail, "three-circle center must carry mass < 2*pi");
  if (!(kappa > 0.0) || kappa >= (kTwoPi - mass) / (4.0 * M_PI))
    throw Error(ErrorCode::PreconditionFail,
                "kappa must satisfy 0 < kappa < (2*pi - m)/(4*pi)");

  double lambda = opt.lambda_override ? *opt.lambda_override
                                      : estimate_lambda(g, center, 0.0, (n_rings + 1) * L);
  double decay_bound = std::exp(-0.5 * kappa * L);
  double diam_bound =
      2.0 * std::exp(8.0 * lambda) * (1.0 + 8.0 * lambda) / (1.0 - std::exp(-16.0 * lambda));
  bool lemma_regime = L > 16.0 * lambda / kappa;

  // measure all rings once
  std::vector<double> ring_d(n_rings + 1), circ(n_rings + 2), merid(n_rings + 1),
      diam_lower(n_rings + 1);
  for (int i = 0; i <= n_rings; ++i) {
    ring_d[i] = ring_distance(g, center, i, L, opt.annulus);
    double r_hi = std::exp(-i * L), r_lo = std::exp(-(i + 1) * L);
    Point a{center.x + r_lo, center.y}, b{center.x + r_hi, center.y};
    merid[i] = curve_length(g, std::vector<Point>{a, b});
    DiameterOptions dopt;
    dopt.sample_count = opt.diameter_samples;
    dopt.local_cells = opt.annulus.local_cells;
    dopt.stencil = opt.annulus.stencil;
    diam_lower[i] = diameter(g, AnnulusRegion{center, r_lo, r_hi}, dopt).lower;
  }
  for (int i = 0; i <= n_rings + 1; ++i) circ[i] = circle_length(g, center, std::exp(-i * L));

  ExperimentReport report("three-circle");
  report.set_columns(
      {"ring", "check", "d_ring", "l_circle", "l_meridian", "diam", "ratio", "bound", "pass"});
  for (int i = 1; i <= n_rings; ++i) {
    double d0 = ring_d[i - 1], d1 = ring_d[i];
    double c0 = circ[i], c1 = circ[i + 1];
    double m0 = merid[i - 1], m1 = merid[i];
    double dia = diam_lower[i - 1];
    auto row = [&](const char* check, double ratio, double bound) {
      report.add_row({static_cast<long long>(i), std::string(check), d1, c1, m1, dia, ratio,
                      bound, ratio < bound});
    };
    row("decay.SS", d1 / d0, decay_bound);
    row("decay.S", c1 / c0, decay_bound);
    row("decay.L", m1 / m0, decay_bound);
    row("decay.diam", dia / d0, diam_bound);
  }
  report.set_config({{"kappa", kappa},
                     {"L", L},
                     {"lambda", lambda},
                     {"mass", mass},
                     {"lemma_regime", lemma_regime},
                     {"n_rings", n_rings}});
  return report;
}

BalancedRatio balanced_ratio_check(const ConformalMetric& g, Point center, int ring_index,
                                   double lambda, const AnnulusOptions& opt) {
  double r_hi = std::exp(-static_cast<double>(ring_index));
  double r_lo = std::exp(-static_cast<double>(ring_index + 1));
  double d = annulus_distance(g, Disk{center, r_lo}, Disk{center, r_hi}, opt);
  Point a{center.x + r_lo, center.y}, b{center.x + r_hi, center.y};
  double meridian = curve_length(g, std::vector<Point>{a, b});
  BalancedRatio out;
  out.ratio = d / meridian;
  out.lower = std::exp(-8.0 * lambda - 1.0);
  out.upper = std::exp(8.0 * lambda + 1.0);
  out.pass = out.ratio > out.lower && out.ratio < out.upper;
  return out;
}

const char* verdict_name(CompletenessVerdict v) {
  switch (v) {
    case CompletenessVerdict::Convergent: return "CONVERGENT";
    case CompletenessVerdict::Divergent: return "DIVERGENT";
    case CompletenessVerdict::Undecided: return "UNDECIDED";
  }
  return "UNDECIDED";
}

CompletenessResult completeness_probe(const ConformalMetric& g, Point center, double delta,
                                      std::span<const double> r_schedule,
                                      const CompletenessOptions& opt) {
  if (r_schedule.empty()) throw Error(ErrorCode::InvalidArgument, "empty radius schedule");
  for (size_t i = 0; i < r_schedule.size(); ++i) {
    if (!(r_schedule[i] > 0.0 && r_schedule[i] < delta))
      throw Error(ErrorCode::PreconditionFail, "schedule radii must lie in (0, delta)");
    if (i > 0 && !(r_schedule[i] < r_schedule[i - 1]))
      throw Error(ErrorCode::PreconditionFail, "schedule must decrease");
  }

  // ladder rungs: geometric blocks from delta down, merged with the scheduled
  // radii; distances accumulate block by block
  std::vector<double> rungs{delta};
  {
    double r_min = r_schedule.back();
    for (double r = delta * std::exp(-opt.block_log_width); r > r_min * (1.0 + 1e-9);
         r *= std::exp(-opt.block_log_width))
      rungs.push_back(r);
    for (double r : r_schedule) rungs.push_back(r);
    std::sort(rungs.begin(), rungs.end(), std::greater<double>());
    rungs.erase(std::unique(rungs.begin(), rungs.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-9 * a; }),
                rungs.end());
  }

  ExperimentReport report("completeness");
  report.set_columns({"r", "distance", "increment"});
  std::vector<double> values;
  double acc = 0.0;
  size_t sched = 0;
  double prev_value = 0.0;
  for (size_t k = 0; k + 1 < rungs.size() && sched < r_schedule.size(); ++k) {
    acc += annulus_distance(g, Disk{center, rungs[k + 1]}, Disk{center, rungs[k]}, opt.annulus);
    if (std::abs(rungs[k + 1] - r_schedule[sched]) < 1e-12 * r_schedule[sched]) {
      report.add_row({r_schedule[sched], acc, acc - prev_value});
      values.push_back(acc);
      prev_value = acc;
      ++sched;
    }
  }

  CompletenessResult result{std::move(report), CompletenessVerdict::Undecided,
                            values.empty() ? 0.0 : values.back()};
  if (values.size() >= 2) {
    bool increasing = true;
    for (size_t i = 1; i < values.size(); ++i) increasing = increasing && values[i] > values[i - 1];
    double growth = values.back() / std::max(values.front(), 1e-300);
    double last_inc = values.back() - values[values.size() - 2];
    if (increasing && growth > opt.growth_factor)
      result.verdict = CompletenessVerdict::Divergent;
    else if (last_inc <= opt.cauchy_rel_tol * std::max(values.back(), 1e-300))
      result.verdict = CompletenessVerdict::Convergent;
  }
  return result;
}

}  // namespace curvlab
