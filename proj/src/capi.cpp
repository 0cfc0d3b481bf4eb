#include "curvlab/curvlab.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "curvlab/curvature.hpp"
#include "curvlab/geodesic.hpp"
#include "curvlab/metric.hpp"
#include "curvlab/potential.hpp"
#include "curvlab/scenario.hpp"

using namespace curvlab;

struct curvlab_metric {
  ConformalMetric impl;
};
struct curvlab_measure {
  SignedMeasure impl;
};
struct curvlab_field {
  GridGraph graph;
  DistanceField field;
  curvlab_field(const ConformalMetric& g, int cells, int stencil)
      : graph(g.background, cells, stencil) {}
};

namespace {

thread_local std::string t_last_error;

curvlab_status code_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return CURVLAB_E_INVALID_ARGUMENT;
    case ErrorCode::ConfigError: return CURVLAB_E_CONFIG;
    case ErrorCode::IoError: return CURVLAB_E_IO;
    case ErrorCode::EvalAtAtom: return CURVLAB_E_EVAL_AT_ATOM;
    case ErrorCode::AtomOnCircle: return CURVLAB_E_ATOM_ON_CIRCLE;
    case ErrorCode::SegmentOutOfDomain: return CURVLAB_E_SEGMENT_OUT_OF_DOMAIN;
    case ErrorCode::SourceOutOfDomain: return CURVLAB_E_SOURCE_OUT_OF_DOMAIN;
    case ErrorCode::AnnulusOutOfDomain: return CURVLAB_E_ANNULUS_OUT_OF_DOMAIN;
    case ErrorCode::RegionOutOfDomain: return CURVLAB_E_REGION_OUT_OF_DOMAIN;
    case ErrorCode::NonzeroTotalMass: return CURVLAB_E_NONZERO_TOTAL_MASS;
    case ErrorCode::NoDensityRepresentable: return CURVLAB_E_NO_DENSITY_REPRESENTABLE;
    case ErrorCode::Divergent: return CURVLAB_E_DIVERGENT;
    case ErrorCode::NotBorderlineAtom: return CURVLAB_E_NOT_BORDERLINE_ATOM;
    case ErrorCode::CurveTooShort: return CURVLAB_E_CURVE_TOO_SHORT;
    case ErrorCode::PreconditionFail: return CURVLAB_E_PRECONDITION;
  }
  return CURVLAB_E_INTERNAL;
}

template <typename Fn>
curvlab_status wrap(Fn&& fn) {
  try {
    fn();
    return CURVLAB_OK;
  } catch (const Error& e) {
    t_last_error = e.what();
    return code_of(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return CURVLAB_E_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return CURVLAB_E_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

curvlab_grid_options normalize(const curvlab_grid_options* opt) {
  curvlab_grid_options o{0, 0};
  if (opt) o = *opt;
  if (o.cells <= 0) o.cells = 512;
  if (o.stencil <= 0) o.stencil = 16;
  return o;
}

}  // namespace

extern "C" {

const char* curvlab_last_error(void) { return t_last_error.c_str(); }

const char* curvlab_status_name(curvlab_status status) {
  switch (status) {
    case CURVLAB_OK: return "ok";
    case CURVLAB_E_INVALID_ARGUMENT: return "invalid-argument";
    case CURVLAB_E_CONFIG: return "config-error";
    case CURVLAB_E_IO: return "io-error";
    case CURVLAB_E_EVAL_AT_ATOM: return "eval-at-atom";
    case CURVLAB_E_ATOM_ON_CIRCLE: return "atom-on-circle";
    case CURVLAB_E_SEGMENT_OUT_OF_DOMAIN: return "segment-out-of-domain";
    case CURVLAB_E_SOURCE_OUT_OF_DOMAIN: return "source-out-of-domain";
    case CURVLAB_E_ANNULUS_OUT_OF_DOMAIN: return "annulus-out-of-domain";
    case CURVLAB_E_REGION_OUT_OF_DOMAIN: return "region-out-of-domain";
    case CURVLAB_E_NONZERO_TOTAL_MASS: return "nonzero-total-mass";
    case CURVLAB_E_NO_DENSITY_REPRESENTABLE: return "no-density-representable";
    case CURVLAB_E_DIVERGENT: return "divergent";
    case CURVLAB_E_NOT_BORDERLINE_ATOM: return "not-borderline-atom";
    case CURVLAB_E_CURVE_TOO_SHORT: return "curve-too-short";
    case CURVLAB_E_PRECONDITION: return "precondition-fail";
    case CURVLAB_E_ASSERTION_FAILED: return "assertion-failed";
    default: return "internal-error";
  }
}

void curvlab_string_free(char* s) { std::free(s); }

curvlab_status curvlab_metric_create_builtin(const char* name, const char* params_json,
                                             curvlab_metric** out) {
  return wrap([&] {
    if (!name || !out) throw Error(ErrorCode::InvalidArgument, "null argument");
    nlohmann::json params = nlohmann::json::object();
    if (params_json && params_json[0] != '\0') params = nlohmann::json::parse(params_json);
    *out = new curvlab_metric{builtin_metric(name, params)};
  });
}

curvlab_status curvlab_metric_from_json(const char* json_text, curvlab_metric** out) {
  return wrap([&] {
    if (!json_text || !out) throw Error(ErrorCode::InvalidArgument, "null argument");
    *out = new curvlab_metric{metric_from_json(nlohmann::json::parse(json_text))};
  });
}

curvlab_status curvlab_metric_to_json(const curvlab_metric* m, char** out_json) {
  return wrap([&] {
    if (!m || !out_json) throw Error(ErrorCode::InvalidArgument, "null argument");
    *out_json = dup_string(metric_to_json(m->impl).dump());
  });
}

void curvlab_metric_free(curvlab_metric* m) { delete m; }

curvlab_status curvlab_metric_eval_u(const curvlab_metric* m, double x, double y, double* out) {
  return wrap([&] {
    if (!m || !out) throw Error(ErrorCode::InvalidArgument, "null argument");
    *out = m->impl.eval_u({x, y});
  });
}

curvlab_status curvlab_metric_circle_mean(const curvlab_metric* m, double cx, double cy,
                                          double r, double* out) {
  return wrap([&] {
    if (!m || !out) throw Error(ErrorCode::InvalidArgument, "null argument");
    *out = circle_mean(m->impl, {cx, cy}, r);
  });
}

curvlab_status curvlab_metric_point_mass_detect(const curvlab_metric* m, double cx, double cy,
                                                double h, double* out) {
  return wrap([&] {
    if (!m || !out) throw Error(ErrorCode::InvalidArgument, "null argument");
    *out = point_mass_detect(m->impl, {cx, cy}, h);
  });
}

curvlab_status curvlab_metric_curvature(const curvlab_metric* m, char** out_measure_json) {
  return wrap([&] {
    if (!m || !out_measure_json) throw Error(ErrorCode::InvalidArgument, "null argument");
    *out_measure_json = dup_string(measure_to_json(curvature_of(m->impl)).dump());
  });
}

curvlab_status curvlab_measure_from_json(const char* json_text, curvlab_measure** out) {
  return wrap([&] {
    if (!json_text || !out) throw Error(ErrorCode::InvalidArgument, "null argument");
    *out = new curvlab_measure{measure_from_json(nlohmann::json::parse(json_text))};
  });
}

curvlab_status curvlab_measure_to_json(const curvlab_measure* mu, char** out_json) {
  return wrap([&] {
    if (!mu || !out_json) throw Error(ErrorCode::InvalidArgument, "null argument");
    *out_json = dup_string(measure_to_json(mu->impl).dump());
  });
}

void curvlab_measure_free(curvlab_measure* mu) { delete mu; }

curvlab_status curvlab_measure_total_variation(const curvlab_measure* mu, double* out) {
  return wrap([&] {
    if (!mu || !out) throw Error(ErrorCode::InvalidArgument, "null argument");
    *out = total_variation(mu->impl);
  });
}

curvlab_status curvlab_measure_log_potential(const curvlab_measure* mu, double x, double y,
                                             double* out) {
  return wrap([&] {
    if (!mu || !out) throw Error(ErrorCode::InvalidArgument, "null argument");
    *out = log_potential(mu->impl, {x, y});
  });
}

curvlab_status curvlab_distance(const curvlab_metric* m, double x0, double y0, double x1,
                                double y1, const curvlab_grid_options* opt, double* out) {
  return wrap([&] {
    if (!m || !out) throw Error(ErrorCode::InvalidArgument, "null argument");
    curvlab_grid_options o = normalize(opt);
    GridGraph graph(m->impl.background, o.cells, o.stencil);
    graph.bind_atoms(m->impl);
    *out = distance(m->impl, graph, {x0, y0}, {x1, y1});
  });
}

curvlab_status curvlab_distance_field(const curvlab_metric* m, double src_x, double src_y,
                                      const curvlab_grid_options* opt, curvlab_field** out) {
  return wrap([&] {
    if (!m || !out) throw Error(ErrorCode::InvalidArgument, "null argument");
    curvlab_grid_options o = normalize(opt);
    auto* f = new curvlab_field(m->impl, o.cells, o.stencil);
    try {
      f->graph.bind_atoms(m->impl);
      f->field = DistanceSolver(f->graph, m->impl).solve(Point{src_x, src_y});
      f->field.graph = &f->graph;
    } catch (...) {
      delete f;
      throw;
    }
    *out = f;
  });
}

void curvlab_field_free(curvlab_field* f) { delete f; }

curvlab_status curvlab_field_size(const curvlab_field* f, int* nx, int* ny) {
  return wrap([&] {
    if (!f || !nx || !ny) throw Error(ErrorCode::InvalidArgument, "null argument");
    *nx = f->graph.nx();
    *ny = f->graph.ny();
  });
}

curvlab_status curvlab_field_value(const curvlab_field* f, int i, int j, double* out) {
  return wrap([&] {
    if (!f || !out) throw Error(ErrorCode::InvalidArgument, "null argument");
    if (i < 0 || j < 0 || i >= f->graph.nx() || j >= f->graph.ny())
      throw Error(ErrorCode::InvalidArgument, "node index out of range");
    *out = f->field.values[f->graph.node_index(i, j)];
  });
}

curvlab_status curvlab_field_at(const curvlab_field* f, double x, double y, double* out) {
  return wrap([&] {
    if (!f || !out) throw Error(ErrorCode::InvalidArgument, "null argument");
    *out = f->field.at({x, y});
  });
}

curvlab_status curvlab_field_export(const curvlab_field* f, const char* csv_path,
                                    const char* json_sidecar_path) {
  return wrap([&] {
    if (!f || !csv_path) throw Error(ErrorCode::InvalidArgument, "null argument");
    FILE* csv = std::fopen(csv_path, "wb");
    if (!csv) throw Error(ErrorCode::IoError, std::string("cannot write ") + csv_path);
    std::fputs("x,y,value\n", csv);
    for (int idx = 0; idx < f->graph.node_count(); ++idx) {
      Point p = f->graph.node_pos(idx);
      std::fprintf(csv, "%.10g,%.10g,%.10g\n", p.x, p.y, f->field.values[idx]);
    }
    std::fclose(csv);
    if (json_sidecar_path) {
      nlohmann::json sidecar{{"h", f->graph.spacing()},
                             {"stencil", f->graph.stencil()},
                             {"nx", f->graph.nx()},
                             {"ny", f->graph.ny()}};
      nlohmann::json sources = nlohmann::json::array();
      for (Point s : f->field.sources) sources.push_back({s.x, s.y});
      sidecar["source"] = sources;
      FILE* js = std::fopen(json_sidecar_path, "wb");
      if (!js) throw Error(ErrorCode::IoError, std::string("cannot write ") + json_sidecar_path);
      std::string text = sidecar.dump(2);
      std::fwrite(text.data(), 1, text.size(), js);
      std::fputc('\n', js);
      std::fclose(js);
    }
  });
}

curvlab_status curvlab_run_scenario(const char* scenario_path, const char* out_dir,
                                    const curvlab_run_options* opt) {
  bool all_pass = false;
  curvlab_status status = wrap([&] {
    if (!scenario_path || !out_dir) throw Error(ErrorCode::InvalidArgument, "null argument");
    ScenarioOverrides ov;
    if (opt) {
      ov.stencil = opt->stencil;
      ov.grid = opt->grid;
      ov.threads = opt->threads;
    }
    all_pass = run_scenario(scenario_path, out_dir, ov).all_pass;
  });
  if (status != CURVLAB_OK) return status;
  if (!all_pass) {
    t_last_error = "scenario assertions failed";
    return CURVLAB_E_ASSERTION_FAILED;
  }
  return CURVLAB_OK;
}

curvlab_status curvlab_list_builtins(char** out_text) {
  return wrap([&] {
    if (!out_text) throw Error(ErrorCode::InvalidArgument, "null argument");
    *out_text = dup_string(builtin_catalog());
  });
}

}  // extern "C"
