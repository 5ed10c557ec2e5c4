#ifndef IFRAC_IFRAC_H
#define IFRAC_IFRAC_H

/* C interface to the thin-inclusion Darcy solver.
 *
 * Every function returning ifrac_status leaves a message retrievable with
 * ifrac_last_error() on failure. Handles are opaque and owned by the caller;
 * release them with the matching *_free function. Strings returned through
 * char** out-parameters must be released with ifrac_string_free.
 */

#include <stddef.h>

#if defined(IFRAC_BUILDING)
#define IFRAC_API __attribute__((visibility("default")))
#else
#define IFRAC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ifrac_status {
    IFRAC_OK = 0,
    IFRAC_ERR_ARGUMENT = 1, /* null pointer, bad index, unknown tag */
    IFRAC_ERR_CONFIG = 2,   /* invalid scenario or oracle description */
    IFRAC_ERR_SOLVER = 3,   /* linear solver did not converge */
    IFRAC_ERR_COMPARE = 4,  /* comparison ran but exceeded its tolerance */
    IFRAC_ERR_GEOMETRY = 5, /* non-conforming mesh or invalid topology */
    IFRAC_ERR_IO = 6,       /* file could not be read or written */
    IFRAC_ERR_INTERNAL = 7
} ifrac_status;

typedef struct ifrac_scenario ifrac_scenario;
typedef struct ifrac_result ifrac_result;

IFRAC_API const char* ifrac_status_string(ifrac_status status);
/* Message of the last failure on the calling thread ("" if none). */
IFRAC_API const char* ifrac_last_error(void);
IFRAC_API void ifrac_string_free(char* str);

IFRAC_API size_t ifrac_builtin_count(void);
IFRAC_API const char* ifrac_builtin_name(size_t index);
IFRAC_API const char* ifrac_builtin_description(size_t index);

IFRAC_API ifrac_status ifrac_scenario_from_file(const char* path, ifrac_scenario** out);
IFRAC_API ifrac_status ifrac_scenario_from_json(const char* json, ifrac_scenario** out);
/* variant may be NULL or "" for the default. */
IFRAC_API ifrac_status ifrac_scenario_builtin(const char* name, const char* variant, ifrac_scenario** out);
/* Sets nx = ny = n (n for 1D). */
IFRAC_API ifrac_status ifrac_scenario_set_resolution(ifrac_scenario* scenario, size_t n);
IFRAC_API ifrac_status ifrac_scenario_to_json(const ifrac_scenario* scenario, char** out);
IFRAC_API void ifrac_scenario_free(ifrac_scenario* scenario);

IFRAC_API ifrac_status ifrac_run(const ifrac_scenario* scenario, ifrac_result** out);
/* Writes solution.csv, profile and fracture CSVs and summary.json. */
IFRAC_API ifrac_status ifrac_result_write(const ifrac_result* result, const char* dir);
IFRAC_API size_t ifrac_result_dofs(const ifrac_result* result);
IFRAC_API size_t ifrac_result_subdomains(const ifrac_result* result);
IFRAC_API size_t ifrac_result_iterations(const ifrac_result* result);
IFRAC_API double ifrac_result_relative_residual(const ifrac_result* result);
IFRAC_API double ifrac_result_mass_balance_defect(const ifrac_result* result);
IFRAC_API double ifrac_result_inflow(const ifrac_result* result);
/* Pointer to ifrac_result_dofs() pressure values, valid while result lives. */
IFRAC_API const double* ifrac_result_pressure(const ifrac_result* result);
/* Vertex coordinates of dof i. */
IFRAC_API ifrac_status ifrac_result_vertex(const ifrac_result* result, size_t i, double* x, double* y);
IFRAC_API ifrac_status ifrac_result_boundary_flux(const ifrac_result* result, const char* tag, double* flux);
IFRAC_API ifrac_status ifrac_result_summary_json(const ifrac_result* result, char** out);
IFRAC_API void ifrac_result_free(ifrac_result* result);

/* Runs the scenario and a reference solution selected by oracle_spec
 * ("analytic1d[:max=..]" or "equidim[:band=..,nx=..,ny=..,l2_rel=..]").
 * If out_dir is non-NULL, writes compare.json there. report_json may be NULL.
 * *passed receives 1 or 0; the status is IFRAC_OK either way unless the
 * comparison could not be carried out. */
IFRAC_API ifrac_status ifrac_compare(const ifrac_scenario* scenario, const char* oracle_spec, const char* out_dir,
                                     int* passed, char** report_json);

#ifdef __cplusplus
}
#endif

#endif
