/* C interface to the qroute library.
 *
 * Every call that can fail returns a status code. On failure the message is
 * available from qr_last_error() on the same thread until the next call.
 * Strings returned through char** are owned by the caller and released with
 * qr_string_free().
 */
#ifndef QROUTE_QROUTE_H
#define QROUTE_QROUTE_H

#include <stddef.h>
#include <stdint.h>

#if defined(QROUTE_BUILDING_LIBRARY)
#define QR_API __attribute__((visibility("default")))
#else
#define QR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum qr_status {
  QR_OK = 0,
  QR_INVALID_INPUT = 1,   /* malformed file, inconsistent parameters */
  QR_SOLVER_FAILURE = 2,  /* backend failure, remote service errors */
  QR_INVALID_ARGUMENT = 3 /* null handle, unknown key */
};

typedef struct qr_instance qr_instance;
typedef struct qr_config qr_config;
typedef struct qr_result qr_result;
typedef struct qr_bench qr_bench;

QR_API const char* qr_version(void);
QR_API const char* qr_last_error(void);
QR_API void qr_string_free(char* s);

/* instances */
QR_API int qr_instance_load(const char* path, qr_instance** out);
QR_API int qr_instance_parse(const char* text, qr_instance** out);
QR_API void qr_instance_free(qr_instance* instance);
QR_API int qr_instance_is_cvrp(const qr_instance* instance);
QR_API size_t qr_instance_size(const qr_instance* instance);
QR_API int qr_instance_name(const qr_instance* instance, char** out);

/* configuration
 *
 * keys: backend (tabu|sa|exhaustive|remote), core_stop
 * (max_distance|max_request), num_repeats, subqubo_size, seed,
 * improvement_iterations, tabu_tenure, tabu_iterations, polish_iterations,
 * sa_sweeps,
 * sa_cooling, sa_initial_temperature, remote_endpoint, remote_num_reads,
 * remote_timeout_ms, remote_fallback (tabu|sa|exhaustive|none), vehicles,
 * cluster_weight, route_weight, capacity_divisor
 */
QR_API int qr_config_new(qr_config** out);
QR_API void qr_config_free(qr_config* config);
QR_API int qr_config_set(qr_config* config, const char* key, const char* value);
QR_API int qr_config_get(const qr_config* config, const char* key, char** out);

/* solving */
QR_API int qr_solve_cvrp(const qr_instance* instance, const qr_config* config, qr_result** out);
QR_API int qr_solve_tsp(const qr_instance* instance, const qr_config* config, qr_result** out);
QR_API void qr_result_free(qr_result* result);
QR_API int64_t qr_result_distance(const qr_result* result);
/* 1 when the solution passes the validator against the raw instance */
QR_API int qr_result_valid(const qr_result* result);
QR_API size_t qr_result_warning_count(const qr_result* result);
QR_API const char* qr_result_warning(const qr_result* result, size_t index);
QR_API int qr_result_json(const qr_result* result, int include_timings, char** out);
QR_API int qr_result_timing_table(const qr_result* result, char** out);
QR_API int qr_result_timing_csv(const qr_result* result, char** out);
QR_API int qr_result_routes_csv(const qr_result* result, char** out);
/* Adds file I/O seconds to the main procedure row and the total. */
QR_API int qr_result_add_io_time(qr_result* result, double seconds);

/* QUBO construction; formulation is tsp, cluster or joint. as_json selects
 * the sampler wire format over the plain-text dump. */
QR_API int qr_build_qubo(const qr_instance* instance, const char* formulation, const qr_config* config, int as_json,
                         char** out);

/* exact oracles, JSON output */
QR_API int qr_oracle_held_karp(const qr_instance* instance, char** out);
QR_API int qr_oracle_cvrp(const qr_instance* instance, char** out);
QR_API int qr_oracle_qubo(const char* dump_text, char** out);

/* benchmarks */
QR_API int qr_bench_new(qr_bench** out);
QR_API void qr_bench_free(qr_bench* bench);
QR_API int qr_bench_add_dataset(qr_bench* bench, const char* path);
QR_API int qr_bench_add_config(qr_bench* bench, const qr_config* config, const char* label);
QR_API int qr_bench_set_bks_file(qr_bench* bench, const char* path);
QR_API int qr_bench_set_runs(qr_bench* bench, size_t runs);
QR_API int qr_bench_set_workers(qr_bench* bench, size_t workers);
QR_API int qr_bench_run(qr_bench* bench);
QR_API int qr_bench_summary_csv(const qr_bench* bench, char** out);
QR_API int qr_bench_runs_csv(const qr_bench* bench, char** out);
QR_API int qr_bench_json(const qr_bench* bench, int include_timings, char** out);

#ifdef __cplusplus
}
#endif

#endif
