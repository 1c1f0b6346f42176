#ifndef CHALLENGE_H
#define CHALLENGE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CtStatus {
  CT_STATUS_OK = 0,
  CT_STATUS_NULL_POINTER = 1,
  CT_STATUS_INVALID_ARGUMENT = 2,
  CT_STATUS_VALIDATION = 3,
  CT_STATUS_NUMERICAL = 4,
  CT_STATUS_BUFFER_TOO_SMALL = 5,
  CT_STATUS_PANIC = 6,
} CtStatus;

typedef enum CtDomain {
  CT_DOMAIN_GAIN = 0,
  CT_DOMAIN_LOSS = 1,
} CtDomain;

typedef enum CtTying {
  CT_TYING_THREE = 0,
  CT_TYING_FOUR = 1,
  CT_TYING_SIX = 2,
} CtTying;

typedef enum CtWeighting {
  CT_WEIGHTING_GONZALEZ_WU = 0,
  CT_WEIGHTING_TK92 = 1,
  CT_WEIGHTING_IDENTITY = 2,
} CtWeighting;

typedef enum CtTail {
  CT_TAIL_GREATER = 0,
  CT_TAIL_LESS = 1,
  CT_TAIL_TWO_SIDED = 2,
} CtTail;

typedef struct CtFitResult CtFitResult;

typedef struct CtParams CtParams;

typedef struct CtProblem CtProblem;

/**
 * Outcome in hundredths of a unit and its probability.
 */
typedef struct CtProspect {
  int64_t outcome_minor;
  double probability;
} CtProspect;

/**
 * Canonical layout of a problem.
 */
typedef struct CtProblemInfo {
  struct CtProspect p0;
  struct CtProspect p1;
  enum CtDomain domain;
  struct CtProspect default_prospect;
  struct CtProspect bold_prospect;
} CtProblemInfo;

typedef struct CtProportionTest {
  double difference;
  double z;
  double p_value;
} CtProportionTest;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message; see `ct_problem_id`
 * for the buffer convention.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t ct_last_error_message(char *buf, size_t len);

/**
 * Orders two prospects into a canonical problem.
 *
 * # Safety
 * `id` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CtStatus ct_problem_canonicalize(struct CtProspect a,
                                      struct CtProspect b,
                                      const char *id,
                                      struct CtProblem **out);

/**
 * # Safety
 * `p` must be null or a handle from this library, not yet freed.
 */
void ct_problem_free(struct CtProblem *p);

/**
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum CtStatus ct_problem_get(const struct CtProblem *p, struct CtProblemInfo *out);

/**
 * Copies the problem id into `buf` and returns its byte length.
 *
 * # Safety
 * `p` must be a live handle; `buf` null or valid for `len` bytes.
 */
size_t ct_problem_id(const struct CtProblem *p, char *buf, size_t len);

/**
 * Sign-flipped mirror of a problem, keeping its id.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum CtStatus ct_problem_mirror(const struct CtProblem *p, struct CtProblem **out);

/**
 * Builds parameters from the free vector of a tying scheme and form.
 *
 * # Safety
 * `values` must be valid for `len` doubles and `out` a valid pointer.
 */
enum CtStatus ct_params_new(enum CtTying tying_scheme,
                            enum CtWeighting weighting,
                            const double *values,
                            size_t len,
                            struct CtParams **out);

/**
 * Named parameter fixture such as `params_gains`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CtStatus ct_params_fixture(const char *name, struct CtParams **out);

/**
 * Writes `a0, a1, gamma0, gamma1, delta0, delta1`.
 *
 * # Safety
 * `p` must be a live handle and `out` valid for six doubles.
 */
enum CtStatus ct_params_get(const struct CtParams *p, double *out);

/**
 * # Safety
 * `p` must be null or a handle from this library, not yet freed.
 */
void ct_params_free(struct CtParams *p);

/**
 * # Safety
 * Handles must be live and `out` a valid pointer.
 */
enum CtStatus ct_challenge_index(const struct CtProblem *problem,
                                 const struct CtParams *params,
                                 double *out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum CtStatus ct_weight(double p,
                        double gamma,
                        double delta,
                        enum CtWeighting weighting,
                        double *out);

/**
 * # Safety
 * `xs` and `ys` must be valid for `n` doubles and `out` a valid pointer.
 */
enum CtStatus ct_pearson_r(const double *xs, const double *ys, size_t n, double *out);

/**
 * # Safety
 * `low` and `high` must be valid pointers.
 */
enum CtStatus ct_fisher_interval(double r, size_t n, double level, double *low, double *high);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum CtStatus ct_two_proportion_test(uint64_t k1,
                                     uint64_t n1,
                                     uint64_t k2,
                                     uint64_t n2,
                                     enum CtTail tail,
                                     bool continuity,
                                     struct CtProportionTest *out);

/**
 * Fits one model variant to per-problem bold counts.
 *
 * # Safety
 * `problems`, `bold` and `respondents` must be valid for `len` elements,
 * each problem handle live, and `out` a valid pointer.
 */
enum CtStatus ct_fit(const struct CtProblem *const *problems,
                     const uint64_t *bold,
                     const uint64_t *respondents,
                     size_t len,
                     enum CtTying tying_scheme,
                     enum CtWeighting weighting,
                     uint64_t seed,
                     size_t starts,
                     struct CtFitResult **out);

/**
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum CtStatus ct_fit_result_r(const struct CtFitResult *f, double *out);

/**
 * New parameter handle holding the fitted values.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum CtStatus ct_fit_result_params(const struct CtFitResult *f, struct CtParams **out);

/**
 * Copies the fitted Challenge Index of each problem, in input order.
 *
 * # Safety
 * `f` must be a live handle and `out` valid for `len` doubles.
 */
enum CtStatus ct_fit_result_ci_values(const struct CtFitResult *f, double *out, size_t len);

/**
 * # Safety
 * `f` must be null or a handle from this library, not yet freed.
 */
void ct_fit_result_free(struct CtFitResult *f);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHALLENGE_H */
