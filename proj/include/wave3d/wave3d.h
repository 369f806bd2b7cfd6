/* Public C interface of the wave3d shared library.
 *
 * The library runs seeded spectral experiments for a three-dimensional
 * hyperbolic SPDE driven by spatially correlated noise, and writes CSV/JSON
 * artifacts into an output directory. All state lives behind the opaque
 * wave3d_run handle; every call returns a status code and the handle keeps
 * the last error message.
 */
#ifndef WAVE3D_H
#define WAVE3D_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct wave3d_run wave3d_run;

typedef enum wave3d_status {
  WAVE3D_OK = 0,
  WAVE3D_ERR_ARGUMENT = 1,
  WAVE3D_ERR_CONFIG = 2,
  WAVE3D_ERR_NUMERICAL = 3,
  WAVE3D_ERR_IO = 4,
  WAVE3D_ERR_CHECK_FAILED = 5, /* ran fine, but at least one check row failed */
  WAVE3D_ERR_INTERNAL = 6
} wave3d_status;

const char* wave3d_version(void);

/* JSON document with every default for the named subcommand; caller frees the
 * returned string with wave3d_string_free. NULL on unknown subcommand. */
char* wave3d_default_config_json(const char* subcommand);
void wave3d_string_free(char* s);

wave3d_run* wave3d_run_create(void);
void wave3d_run_destroy(wave3d_run* run);

/* Overrides applied on top of the embedded defaults. config_json may be NULL
 * (defaults only). These set state for the next execute call. */
wave3d_status wave3d_run_set_config_json(wave3d_run* run, const char* config_json);
wave3d_status wave3d_run_set_output_dir(wave3d_run* run, const char* dir);
wave3d_status wave3d_run_set_seed(wave3d_run* run, uint64_t seed);
wave3d_status wave3d_run_set_workers(wave3d_run* run, int workers);

/* Runs one subcommand: noise-check, green-check, simulate, wz-converge,
 * regularity, support, oracle. Blocking. */
wave3d_status wave3d_run_execute(wave3d_run* run, const char* subcommand);

/* After execute: full report as JSON, and the merged config that was used.
 * Pointers are owned by the handle and valid until the next call. */
const char* wave3d_run_report_json(const wave3d_run* run);
const char* wave3d_run_config_json(const wave3d_run* run);
/* 1 when every check row passed, else 0. */
int wave3d_run_passed(const wave3d_run* run);

/* Last error message (empty string when none), owned by the handle. */
const char* wave3d_run_error(const wave3d_run* run);
/* Machine-readable error record {"error":{"kind":...,"message":...}}. */
const char* wave3d_run_error_json(const wave3d_run* run);

#ifdef __cplusplus
}
#endif

#endif /* WAVE3D_H */
