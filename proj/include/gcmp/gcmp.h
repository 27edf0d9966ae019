/* gcmp: joint smooth-graphon fit and two-sample test for a pair of networks.
 *
 * Every function that can fail returns a gcmp_status; on failure a message is
 * available from gcmp_last_error() on the same thread until the next call.
 * Handles are opaque and owned by the caller, who releases them with the
 * matching *_free function. Strings returned through char** are released
 * with gcmp_string_free.
 */
#ifndef GCMP_GCMP_H
#define GCMP_GCMP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GCMP_BUILDING)
#    define GCMP_API __declspec(dllexport)
#  else
#    define GCMP_API __declspec(dllimport)
#  endif
#else
#  define GCMP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gcmp_status {
  GCMP_OK = 0,
  GCMP_ERR_DOMAIN = 1,     /* argument outside its mathematical domain */
  GCMP_ERR_USAGE = 2,      /* API misuse, e.g. null handle or unknown study */
  GCMP_ERR_INPUT = 3,      /* malformed input file */
  GCMP_ERR_NUMERICAL = 4,  /* solver failure */
  GCMP_ERR_CONFIG = 5,     /* invalid or inconsistent configuration */
  GCMP_ERR_DEGENERATE = 6, /* no test cell with positive variance */
  GCMP_ERR_IO = 7,         /* file system */
  GCMP_ERR_INTERNAL = 8
} gcmp_status;

typedef struct gcmp_graph gcmp_graph;
typedef struct gcmp_options gcmp_options;
typedef struct gcmp_result gcmp_result;

/* Receives one progress line at a time; may be called from worker threads
 * but never concurrently. */
typedef void (*gcmp_log_fn)(const char* line, void* user);

GCMP_API const char* gcmp_version(void);
GCMP_API const char* gcmp_last_error(void);
GCMP_API const char* gcmp_status_name(gcmp_status status);
GCMP_API void gcmp_string_free(char* s);

/* Graphs */
GCMP_API gcmp_status gcmp_graph_load_edge_list(const char* path, gcmp_graph** out);
/* has_threshold = 0 requires a 0/1 matrix; otherwise entries > threshold are edges. */
GCMP_API gcmp_status gcmp_graph_load_adjacency(const char* path, int has_threshold, double threshold,
                                               gcmp_graph** out);
/* adj is a row-major n x n 0/1 matrix, symmetric with zero diagonal. */
GCMP_API gcmp_status gcmp_graph_from_adjacency(size_t n, const uint8_t* adj, gcmp_graph** out);
GCMP_API size_t gcmp_graph_node_count(const gcmp_graph* g);
GCMP_API size_t gcmp_graph_edge_count(const gcmp_graph* g);
/* format is "edges" or "adjacency". */
GCMP_API gcmp_status gcmp_graph_write(const gcmp_graph* g, const char* path, const char* format);
GCMP_API void gcmp_graph_free(gcmp_graph* g);

/* Options: a flat JSON object of run settings. Each set_json call overrides
 * only the keys it names. */
GCMP_API gcmp_status gcmp_options_create(gcmp_options** out);
GCMP_API gcmp_status gcmp_options_set_json(gcmp_options* opts, const char* flat_json);
GCMP_API gcmp_status gcmp_options_get_json(const gcmp_options* opts, char** out_json);
GCMP_API void gcmp_options_free(gcmp_options* opts);

/* Compare two graphs: multi-start fit, test, optional difference analysis. */
GCMP_API gcmp_status gcmp_compare(const gcmp_graph* a, const gcmp_graph* b, const gcmp_options* opts,
                                  gcmp_log_fn log, void* user, gcmp_result** out);
/* As gcmp_compare, loading the graphs named by net_a / net_b in the options. */
GCMP_API gcmp_status gcmp_compare_files(const gcmp_options* opts, gcmp_log_fn log, void* user,
                                        gcmp_result** out);
/* Report JSON, owned by the result. */
GCMP_API const char* gcmp_result_json(const gcmp_result* r);
GCMP_API double gcmp_result_statistic(const gcmp_result* r);
/* simulated != 0 selects the simulated null, otherwise the chi-squared law. */
GCMP_API double gcmp_result_pvalue(const gcmp_result* r, int simulated);
GCMP_API int gcmp_result_reject(const gcmp_result* r, int simulated);
GCMP_API gcmp_status gcmp_result_write_artifacts(const gcmp_result* r, const char* out_dir);
GCMP_API void gcmp_result_free(gcmp_result* r);

/* Simulate a network pair into out_dir (net_a, net_b, true positions). */
GCMP_API gcmp_status gcmp_simulate(const gcmp_options* opts, const char* out_dir);
/* Run the replication study named by the "study" option into out_dir.
 * summary_json may be null; otherwise it receives the per-group rejection
 * rates. */
GCMP_API gcmp_status gcmp_replicate(const gcmp_options* opts, gcmp_log_fn log, void* user,
                                    const char* out_dir, char** summary_json);

#ifdef __cplusplus
}
#endif

#endif /* GCMP_GCMP_H */
