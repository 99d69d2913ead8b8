#include "holo/holo.h"

#include <cmath>
#include <exception>
#include <string>

#include "holo/fixtures.hpp"
#include "holo/runner.hpp"
#include "holo/transport.hpp"

struct holo_fixture {
  holo::Fixture fixture;
};

struct holo_report {
  holo::RunResult result;
};

namespace {

thread_local std::string last_error;

holo_status status_of(holo::ErrorCode code) {
  using holo::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return HOLO_ERR_INVALID_ARGUMENT;
    case ErrorCode::OutsideDomain: return HOLO_ERR_OUTSIDE_DOMAIN;
    case ErrorCode::SingularMatrix: return HOLO_ERR_SINGULAR_MATRIX;
    case ErrorCode::IndefiniteNorm: return HOLO_ERR_INDEFINITE_NORM;
    case ErrorCode::NumericalBlowup: return HOLO_ERR_NUMERICAL_BLOWUP;
    case ErrorCode::Incompatible: return HOLO_ERR_INCOMPATIBLE;
    case ErrorCode::CoverageGap: return HOLO_ERR_COVERAGE_GAP;
    case ErrorCode::Precondition: return HOLO_ERR_PRECONDITION;
    case ErrorCode::Config: return HOLO_ERR_CONFIG;
  }
  return HOLO_ERR_INTERNAL;
}

template <class F>
holo_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return HOLO_OK;
  } catch (const holo::Error& e) {
    last_error = std::string(holo::to_string(e.code())) + ": " + e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return HOLO_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return HOLO_ERR_INTERNAL;
  }
}

holo_status null_argument() {
  last_error = "null argument";
  return HOLO_ERR_INVALID_ARGUMENT;
}

holo::RunOverrides overrides_of(const holo_options* o) {
  holo::RunOverrides r;
  if (!o) return r;
  if (o->set & HOLO_OPT_STEP) r.step = o->step;
  if (o->set & HOLO_OPT_TOLERANCE) r.tolerance = o->tolerance;
  if (o->set & HOLO_OPT_CURVES) r.curves = o->curves;
  if (o->set & HOLO_OPT_VECTORS) r.vectors = o->vectors;
  if (o->set & HOLO_OPT_SEED) r.seed = o->seed;
  return r;
}

holo::Vector point(const double* p, int n) {
  holo::Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = p[i];
  return v;
}

}  // namespace

extern "C" {

const char* holo_version(void) { return "1.0.0"; }

const char* holo_last_error(void) { return last_error.c_str(); }

holo_options holo_options_default(void) {
  const holo::RunOptions d;
  return holo_options{d.step, d.tolerance, d.curves, d.vectors, d.seed, 0u};
}

const char* holo_fixture_names(void) {
  static const std::string names = [] {
    std::string s;
    for (const auto& n : holo::fixture_names()) s += n + "\n";
    return s;
  }();
  return names.c_str();
}

holo_status holo_fixture_open(const char* name, holo_fixture** out) {
  if (!name || !out) return null_argument();
  return guarded([&] { *out = new holo_fixture{holo::fixture_by_name(name)}; });
}

void holo_fixture_close(holo_fixture* fixture) { delete fixture; }

const char* holo_fixture_name(const holo_fixture* fixture) {
  return fixture ? fixture->fixture.name.c_str() : "";
}

int holo_fixture_dimension(const holo_fixture* fixture) { return fixture ? fixture->fixture.dimension() : 0; }

holo_status holo_fixture_torsion(const holo_fixture* fixture, const double* p, double* out) {
  if (!fixture || !p || !out) return null_argument();
  return guarded([&] {
    const auto& fx = fixture->fixture;
    const int n = fx.dimension();
    const holo::Vector t = holo::torsion(fx.connection, fx.frame.field(0), fx.frame.field(1), {point(p, n)}).components;
    for (int i = 0; i < n; ++i) out[i] = t[i];
  });
}

holo_status holo_fixture_transport(const holo_fixture* fixture, const double* p, const double* q, double step,
                                   double* out) {
  if (!fixture || !p || !q || !out) return null_argument();
  return guarded([&] {
    const auto& fx = fixture->fixture;
    const int n = fx.dimension();
    const auto t = holo::parallel_transport(fx.connection, holo::Curve::segment(point(p, n), point(q, n)), 1.0,
                                            step > 0.0 ? step : holo::kDefaultStep);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[i * n + j] = t.matrix(i, j);
  });
}

holo_status holo_fixture_norm(const holo_fixture* fixture, const double* p, const double* v, double* out) {
  if (!fixture || !p || !v || !out) return null_argument();
  return guarded([&] {
    const int n = fixture->fixture.dimension();
    *out = fixture->fixture.norm(point(p, n), point(v, n));
  });
}

holo_status holo_verify(const char* fixture, const holo_options* options, holo_report** out) {
  if (!fixture || !out) return null_argument();
  return guarded([&] {
    const holo::RunOptions o = overrides_of(options).apply(holo::RunOptions{});
    *out = new holo_report{holo::run_verify(fixture, o)};
  });
}

holo_status holo_run_check(const char* config_json, const holo_options* options, holo_report** out) {
  if (!config_json || !out) return null_argument();
  return guarded([&] { *out = new holo_report{holo::run_check(config_json, overrides_of(options))}; });
}

holo_status holo_synthesize(const char* config_json, const holo_options* options, holo_report** out) {
  if (!config_json || !out) return null_argument();
  return guarded([&] { *out = new holo_report{holo::run_synthesize(config_json, overrides_of(options))}; });
}

holo_status holo_isometry_group(const char* norm_spec_json, holo_report** out) {
  if (!norm_spec_json || !out) return null_argument();
  return guarded([&] { *out = new holo_report{holo::run_isometry_group(norm_spec_json)}; });
}

int holo_report_passed(const holo_report* report) { return report && report->result.pass ? 1 : 0; }

const char* holo_report_json(const holo_report* report) { return report ? report->result.json.c_str() : ""; }

const char* holo_report_output_path(const holo_report* report) {
  return report ? report->result.output_path.c_str() : "";
}

void holo_report_free(holo_report* report) { delete report; }

}  // extern "C"
