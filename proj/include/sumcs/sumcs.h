/* sumcs — summary-codebook compressed sensing.
 *
 * C89-compatible interface to the shared library: opaque handles, integer
 * status codes, and a thread-local message for the last failure. Every
 * function that can fail returns sumcs_status; out-parameters are written
 * only on SUMCS_OK. Handles are freed with their matching *_free call (NULL
 * is ignored).
 */

#ifndef SUMCS_H
#define SUMCS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SUMCS_API __declspec(dllexport)
#else
#define SUMCS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sumcs_status {
    SUMCS_OK = 0,
    SUMCS_ERR_INVALID_ARGUMENT = 1,
    SUMCS_ERR_CAPACITY = 2,
    SUMCS_ERR_IO = 3,
    SUMCS_ERR_INFEASIBLE = 4,
    SUMCS_ERR_ITERATION_LIMIT = 5,
    SUMCS_ERR_UNSUPPORTED = 6,
    SUMCS_ERR_INTERNAL = 7
} sumcs_status;

/* Message for the most recent failing call on this thread. */
SUMCS_API const char* sumcs_last_error(void);
SUMCS_API const char* sumcs_status_name(sumcs_status status);

typedef struct sumcs_codebook sumcs_codebook;
typedef struct sumcs_signal sumcs_signal;
typedef struct sumcs_measurements sumcs_measurements;
typedef struct sumcs_decode_result sumcs_decode_result;

/* ---- codebooks ---------------------------------------------------------- */

SUMCS_API sumcs_status sumcs_codebook_complete(int n, int d, sumcs_codebook** out);
/* exact_m != 0 draws exactly m distinct subsets; otherwise m subsets are
 * drawn with replacement and repeats are dropped. */
SUMCS_API sumcs_status sumcs_codebook_random(int n, int d, int64_t m, uint64_t seed,
                                             int exact_m, sumcs_codebook** out);
SUMCS_API sumcs_status sumcs_codebook_load(const char* path, sumcs_codebook** out);
SUMCS_API sumcs_status sumcs_codebook_save(const sumcs_codebook* cb, const char* path);
SUMCS_API int sumcs_codebook_n(const sumcs_codebook* cb);
SUMCS_API int sumcs_codebook_d(const sumcs_codebook* cb);
SUMCS_API int64_t sumcs_codebook_subsets(const sumcs_codebook* cb);
SUMCS_API int64_t sumcs_codebook_rows(const sumcs_codebook* cb);
SUMCS_API void sumcs_codebook_free(sumcs_codebook* cb);

/* ---- signals ------------------------------------------------------------ */

/* real_mode == 0: integer values from [1, 2^40]; otherwise reals in (0,1)
 * compared with relative tolerance tau (pass 0 for the default). */
SUMCS_API sumcs_status sumcs_signal_generate(int n, int64_t k, int real_mode, double tau,
                                             uint64_t seed, sumcs_signal** out);
SUMCS_API sumcs_status sumcs_signal_load(const char* path, sumcs_signal** out);
SUMCS_API sumcs_status sumcs_signal_save(const sumcs_signal* sig, const char* path);
SUMCS_API int sumcs_signal_n(const sumcs_signal* sig);
SUMCS_API int64_t sumcs_signal_k(const sumcs_signal* sig);
/* Writes 1 if no two disjoint subsets of values share a sum (k <= 20). */
SUMCS_API sumcs_status sumcs_signal_is_distinguishable(const sumcs_signal* sig, int* out);
SUMCS_API void sumcs_signal_free(sumcs_signal* sig);

/* ---- measurements ------------------------------------------------------- */

SUMCS_API sumcs_status sumcs_encode(const sumcs_signal* sig, const sumcs_codebook* cb,
                                    sumcs_measurements** out);
/* Stacks the codebook with the complete (n,1) codebook, as consumed by the
 * mm decoder; the CSV written from it carries a part column. */
SUMCS_API sumcs_status sumcs_encode_stacked(const sumcs_signal* sig, const sumcs_codebook* cb,
                                            sumcs_measurements** out);
SUMCS_API sumcs_status sumcs_measurements_save(const sumcs_measurements* y, const char* path);
/* Rebuilds codebook(s) and values from a measurements CSV. n_hint = 0 infers
 * the label width from the largest position present. */
SUMCS_API sumcs_status sumcs_measurements_load(const char* path, int allow_partial, int n_hint,
                                               sumcs_measurements** out);
SUMCS_API int64_t sumcs_measurements_rows(const sumcs_measurements* y);
SUMCS_API int sumcs_measurements_stacked(const sumcs_measurements* y);
/* Copy of the codebook behind the measurements; part is 1 or 2 (flat
 * measurements only have part 1). */
SUMCS_API sumcs_status sumcs_measurements_codebook(const sumcs_measurements* y, int part,
                                                   sumcs_codebook** out);
SUMCS_API void sumcs_measurements_free(sumcs_measurements* y);

/* ---- decoding ----------------------------------------------------------- */

typedef enum sumcs_decode_status {
    SUMCS_DECODE_SUCCESS = 0,
    SUMCS_DECODE_PARTIAL = 1,
    SUMCS_DECODE_CONTRADICTION = 2
} sumcs_decode_status;

/* alg is "ssii", "mm" or "bp". mm needs stacked measurements, the others
 * flat ones. max_iterations 0 picks an automatic limit; tol is the bp pivot
 * tolerance (0 for the default). */
SUMCS_API sumcs_status sumcs_decode(const sumcs_measurements* y, const char* alg,
                                    int64_t max_iterations, double tol,
                                    sumcs_decode_result** out);
SUMCS_API sumcs_decode_status sumcs_result_status(const sumcs_decode_result* res);
SUMCS_API int64_t sumcs_result_iterations(const sumcs_decode_result* res);
SUMCS_API const char* sumcs_result_note(const sumcs_decode_result* res);
SUMCS_API sumcs_status sumcs_result_signal(const sumcs_decode_result* res, sumcs_signal** out);
SUMCS_API void sumcs_result_free(sumcs_decode_result* res);

/* ---- bounds ------------------------------------------------------------- */

typedef struct sumcs_bound_report {
    double epsilon;
    double p;
    double ssii_failure;
    double ssii_failure_raw;
    double mm_success;
    double mm_success_raw;
    double ssii_failure_explicit;
    double ssii_failure_explicit_raw;
    double mm_failure_explicit;
    double mm_failure_explicit_raw;
    double bp_measurements;
    double ssii_measurement_scale;
    double mm_measurement_scale;
    double k_of_lambda;
} sumcs_bound_report;

/* gamma_binomial != 0 evaluates the fractional binomial via lgamma instead
 * of flooring its upper argument. */
SUMCS_API sumcs_status sumcs_bounds_eval(int n, int d, int64_t m, int64_t k, double alpha,
                                         double lambda, int gamma_binomial,
                                         sumcs_bound_report* out);
SUMCS_API sumcs_status sumcs_bounds_eval_json(int n, int d, int64_t m, int64_t k, double alpha,
                                              double lambda, int gamma_binomial, char** json_out);

/* ---- experiments -------------------------------------------------------- */

/* config_json keys: kind ("oversampling" | "success-prob"), seed (required),
 * trials, threshold, alg, mode, tau, codebook ("complete" | "random-distinct"
 * | "random-dedup"), n_list, k_list, d_min, d_max, max_oversampling, M_list,
 * threads, timing. Returns the result CSV
 * (header n,N,k,d,m,M,successes,trials,rate,oversampling,seconds). */
SUMCS_API sumcs_status sumcs_experiment_run(const char* config_json, char** csv_out);

SUMCS_API void sumcs_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* SUMCS_H */
