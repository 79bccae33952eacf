#ifndef QINDEP_QINDEP_H
#define QINDEP_QINDEP_H

/* C interface to the qindep library.
 *
 * Every function returns a qi_status. On failure, qi_last_error() describes
 * the most recent error on the calling thread. Strings returned through char**
 * out-parameters are owned by the caller and released with qi_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define QI_API __declspec(dllexport)
#else
#define QI_API __attribute__((visibility("default")))
#endif

typedef enum {
  QI_OK = 0,
  QI_ERR_ARGUMENT = 1,
  QI_ERR_OUT_OF_RANGE = 2,
  QI_ERR_DEGENERATE = 3,
  QI_ERR_CONSISTENCY = 4,
  QI_ERR_INFEASIBLE = 5,
  QI_ERR_EVALUATION = 6,
  QI_ERR_PARSE = 7,
  QI_ERR_IO = 8,
  QI_ERR_INTERNAL = 9
} qi_status;

typedef enum {
  QI_SPEC_FULL = 0,
  QI_SPEC_T_INTERVAL = 1,
  QI_SPEC_T_POINTS = 2,
  QI_SPEC_U_INTERVAL = 3,
  QI_SPEC_MEAN = 4
} qi_spec_kind;

typedef struct {
  qi_spec_kind kind;
  double a; /* interval kinds */
  double b;
  const double* points; /* QI_SPEC_T_POINTS */
  size_t n_points;
  double tolerance; /* <= 0 selects the default */
} qi_spec;

typedef enum { QI_PARAM_ATT = 0, QI_PARAM_QTT = 1 } qi_param;

typedef struct {
  double lo;
  double hi;
  int interior_sharp;
  int unbounded; /* an endpoint is infinite */
} qi_interval;

typedef struct qi_observed qi_observed;
typedef struct qi_propensity qi_propensity;

QI_API const char* qi_last_error(void);
QI_API const char* qi_version(void);
QI_API void qi_string_free(char* s);

/* Observed distributions. */
QI_API qi_status qi_observed_from_dgp(double gamma, double pi, double p1,
                                      size_t n_knots, qi_observed** out);
QI_API qi_status qi_observed_from_csv(const char* path, qi_observed** out);
/* Declares the support of Y given X = 0; endpoints may be infinite but must
 * contain the observed range. */
QI_API qi_status qi_observed_set_support0(qi_observed* obs, double lo,
                                          double hi);
QI_API void qi_observed_free(qi_observed* obs);

/* Identified set for ATT or QTT(q) (q ignored for ATT). With `warning`
 * non-null, receives a message or NULL when there is nothing to report. */
QI_API qi_status qi_identified_set(const qi_observed* obs, qi_param param,
                                   double q, const qi_spec* spec,
                                   qi_interval* out, char** warning);

/* Writes n draws of the truncated-normal model as a `y,x` CSV file. */
QI_API qi_status qi_simulate_dgp(double gamma, double pi, double p1, size_t n,
                                 uint64_t seed, const char* path);

/* Latent propensity scores. */
QI_API qi_status qi_propensity_from_json(const char* json,
                                         qi_propensity** out);
QI_API qi_status qi_propensity_to_json(const qi_propensity* p, char** json);
QI_API void qi_propensity_free(qi_propensity* p);

/* Runs the independence check for spec and writes
 * {"verdict": ..., "monotonicity": ...} to *report. */
QI_API qi_status qi_check(const qi_propensity* p, const qi_spec* spec,
                          int* pass, char** report);

/* Compares the optimization oracle with the closed-form cdf bounds on a grid
 * of n_cells >= 100 cells and writes the JSON report. */
QI_API qi_status qi_verify(const qi_spec* spec, double p_x, size_t n_cells,
                           int* pass, char** report);

#ifdef __cplusplus
}
#endif

#endif /* QINDEP_QINDEP_H */
