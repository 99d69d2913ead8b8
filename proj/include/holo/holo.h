#ifndef HOLO_H
#define HOLO_H

/* C interface to the holonomy toolkit. All handles are opaque; every
 * function returning holo_status leaves a message retrievable through
 * holo_last_error() on failure (thread-local, valid until the next call). */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(HOLO_BUILDING_LIBRARY)
#    define HOLO_API __declspec(dllexport)
#  else
#    define HOLO_API __declspec(dllimport)
#  endif
#else
#  define HOLO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum holo_status {
  HOLO_OK = 0,
  HOLO_ERR_INVALID_ARGUMENT = 1,
  HOLO_ERR_OUTSIDE_DOMAIN = 2,
  HOLO_ERR_SINGULAR_MATRIX = 3,
  HOLO_ERR_INDEFINITE_NORM = 4,
  HOLO_ERR_NUMERICAL_BLOWUP = 5,
  HOLO_ERR_INCOMPATIBLE = 6,
  HOLO_ERR_COVERAGE_GAP = 7,
  HOLO_ERR_PRECONDITION = 8,
  HOLO_ERR_CONFIG = 9,
  HOLO_ERR_INTERNAL = 10
} holo_status;

typedef struct holo_fixture holo_fixture;
typedef struct holo_report holo_report;

/* Bits of holo_options.set: which fields override config-file values. */
enum {
  HOLO_OPT_STEP = 1u << 0,
  HOLO_OPT_TOLERANCE = 1u << 1,
  HOLO_OPT_CURVES = 1u << 2,
  HOLO_OPT_VECTORS = 1u << 3,
  HOLO_OPT_SEED = 1u << 4
};

typedef struct holo_options {
  double step;
  double tolerance;
  int curves;
  int vectors;
  uint64_t seed;
  unsigned set;
} holo_options;

HOLO_API const char* holo_version(void);
HOLO_API const char* holo_last_error(void);
HOLO_API holo_options holo_options_default(void);

/* Newline-separated list of built-in fixture names. */
HOLO_API const char* holo_fixture_names(void);
HOLO_API holo_status holo_fixture_open(const char* name, holo_fixture** out);
HOLO_API void holo_fixture_close(holo_fixture* fixture);
HOLO_API const char* holo_fixture_name(const holo_fixture* fixture);
HOLO_API int holo_fixture_dimension(const holo_fixture* fixture);
/* Coordinate components of T(E_1, E_2) at p; out has dimension entries. */
HOLO_API holo_status holo_fixture_torsion(const holo_fixture* fixture, const double* p, double* out);
/* Transport matrix along the straight segment p -> q, row-major n*n. */
HOLO_API holo_status holo_fixture_transport(const holo_fixture* fixture, const double* p, const double* q,
                                            double step, double* out);
HOLO_API holo_status holo_fixture_norm(const holo_fixture* fixture, const double* p, const double* v, double* out);

/* Report-producing commands. On HOLO_OK *out owns a report to be freed. */
HOLO_API holo_status holo_verify(const char* fixture, const holo_options* options, holo_report** out);
HOLO_API holo_status holo_run_check(const char* config_json, const holo_options* options, holo_report** out);
HOLO_API holo_status holo_synthesize(const char* config_json, const holo_options* options, holo_report** out);
HOLO_API holo_status holo_isometry_group(const char* norm_spec_json, holo_report** out);

HOLO_API int holo_report_passed(const holo_report* report);
HOLO_API const char* holo_report_json(const holo_report* report);
/* Output path requested by the config, or "" when none. */
HOLO_API const char* holo_report_output_path(const holo_report* report);
HOLO_API void holo_report_free(holo_report* report);

#ifdef __cplusplus
}
#endif

#endif
