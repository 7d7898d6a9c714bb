/* C interface to the minorclt library. */
#ifndef MINORCLT_H
#define MINORCLT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define MCLT_API __declspec(dllexport)
#else
#define MCLT_API __attribute__((visibility("default")))
#endif

typedef enum {
	MCLT_OK = 0,
	MCLT_ERR_INTERNAL = 1,
	MCLT_ERR_CONFIG = 2,
	MCLT_ERR_PRECISION = 3,
	MCLT_ERR_DOMAIN = 4,
	MCLT_ERR_VALIDATION = 5,
	MCLT_ERR_DIMENSION = 6,
	MCLT_ERR_INPUT = 7,
	MCLT_ERR_IO = 8,
	MCLT_ERR_NULL_ARGUMENT = 9
} mclt_status;

typedef struct mclt_ensemble mclt_ensemble;
typedef struct mclt_function mclt_function;
typedef struct mclt_sample mclt_sample;

/* Message for the last failed call on this thread; never NULL. */
MCLT_API const char *mclt_last_error(void);
MCLT_API const char *mclt_status_name(mclt_status status);
MCLT_API const char *mclt_version(void);
/* Frees strings returned through char ** out-parameters. */
MCLT_API void mclt_string_free(char *s);

/* Ensembles */
MCLT_API mclt_status mclt_ensemble_goe(int n, mclt_ensemble **out);
MCLT_API mclt_status mclt_ensemble_gue(int n, mclt_ensemble **out);
MCLT_API mclt_status mclt_ensemble_from_json(const char *json, mclt_ensemble **out);
MCLT_API mclt_status mclt_ensemble_to_json(const mclt_ensemble *e, char **out);
MCLT_API void mclt_ensemble_free(mclt_ensemble *e);

/* Test functions: "poly:c0,c1,...", "abs:E", "cheb:k" or a JSON object */
MCLT_API mclt_status mclt_function_parse(const char *text, mclt_function **out);
MCLT_API mclt_status mclt_function_from_json(const char *json, mclt_function **out);
MCLT_API mclt_status mclt_function_eval(const mclt_function *f, double x, double *value);
MCLT_API void mclt_function_free(mclt_function *f);

/* Samples: matrix index `index` of the stream defined by master_seed */
MCLT_API mclt_status mclt_sample_draw(const mclt_ensemble *e, uint64_t master_seed, uint64_t index,
                                      mclt_sample **out);
MCLT_API mclt_status mclt_sample_size(const mclt_sample *s, int *n);
MCLT_API mclt_status mclt_sample_h11(const mclt_sample *s, double *h11);
/* which = 0: eigenvalues of H (n values), which = 1: eigenvalues of the minor (n - 1 values) */
MCLT_API mclt_status mclt_sample_eigenvalues(const mclt_sample *s, int which, double *buffer, size_t length);
MCLT_API mclt_status mclt_sample_linear_statistic(const mclt_sample *s, const mclt_function *f, int shifted,
                                                  double *value);
MCLT_API mclt_status mclt_sample_to_json(const mclt_sample *s, char **out);
/* CSV with header E,w,omega,residual; points = 0 selects the default grid refined at the eigenvalues */
MCLT_API mclt_status mclt_sample_diagram_csv(const mclt_sample *s, int shifted, double lo, double hi, int points,
                                             char **out);
MCLT_API void mclt_sample_free(mclt_sample *s);

/* Helffer-Sjostrand evaluation of sum f(lambda) */
MCLT_API mclt_status mclt_hs_functional(const mclt_function *f, const double *eigenvalues, size_t count,
                                        double eta0, double *value);

/* Theory values. Request: {"f": spec, "sigma2": x or [re, im], "sigma4", "s11"} or {"E": x, ...};
   add "gff": true for the nested-minor derivative variance. */
MCLT_API mclt_status mclt_theory(const char *request_json, char **out);

/* Runs an experiment config (modes linear_stat, diagram, local_law, paired_trace, convergence).
   out_dir may be NULL; seed_override is used when has_seed is nonzero. */
MCLT_API mclt_status mclt_experiment_run(const char *config_json, const char *out_dir, int has_seed,
                                         uint64_t seed_override, int workers, char **record_json);

/* Verification suites: schur, locallaw, trgg, tanh, hs, gff. options_json may be NULL. */
MCLT_API mclt_status mclt_verify(const char *suite, const char *options_json, int workers, char **report_json,
                                 int *passed);

#ifdef __cplusplus
}
#endif

#endif
