#ifndef CSMA_GICN_H
#define CSMA_GICN_H

#include <stddef.h>
#include <stdint.h>

#if defined(CSMA_BUILDING_LIBRARY)
#define CSMA_API __attribute__((visibility("default")))
#else
#define CSMA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum csma_status {
  CSMA_OK = 0,
  CSMA_ERR_INVALID_ARGUMENT = 1,
  CSMA_ERR_PARSE = 2,
  CSMA_ERR_IO = 3,
  CSMA_ERR_LIMIT = 4,         /* state-space or link cap exceeded */
  CSMA_ERR_UNSUPPORTED = 5,
  CSMA_ERR_MODEL_DOMAIN = 6,  /* collision model outside its valid range */
  CSMA_ERR_NUMERIC = 7,
  CSMA_ERR_INTERNAL = 99
} csma_status;

/* Message of the most recent failure on the calling thread; "" after success.
 * Valid until the next API call on the same thread. */
CSMA_API const char* csma_last_error(void);
CSMA_API const char* csma_version(void);

/* ---- contention graphs ------------------------------------------------- */

typedef struct csma_graph csma_graph;

CSMA_API csma_status csma_graph_parse(const char* text, csma_graph** out);
CSMA_API csma_status csma_graph_load(const char* path, csma_graph** out);
CSMA_API csma_status csma_graph_builtin(const char* name, csma_graph** out);
CSMA_API void csma_graph_free(csma_graph* g);

CSMA_API size_t csma_graph_link_count(const csma_graph* g);
/* NULL when index is out of range. Owned by the graph. */
CSMA_API const char* csma_graph_link_id(const csma_graph* g, size_t index);
CSMA_API size_t csma_graph_edge_count(const csma_graph* g);
CSMA_API csma_status csma_graph_edge(const csma_graph* g, size_t index, size_t* a, size_t* b);
/* Number of independent sets; fails with CSMA_ERR_LIMIT above max_links. */
CSMA_API csma_status csma_graph_feasible_state_count(const csma_graph* g, size_t max_links,
                                                     size_t* out);

CSMA_API size_t csma_builtin_count(void);
CSMA_API const char* csma_builtin_name(size_t index);

/* ---- analytical models -------------------------------------------------- */

typedef enum csma_model {
  CSMA_MODEL_ICN = 0,    /* collision-free product form */
  CSMA_MODEL_GICN = 1,   /* product form with collision states */
  CSMA_MODEL_EXACT = 2   /* numerical stationary solve of the same chain */
} csma_model;

typedef struct csma_analysis_params {
  int cw;            /* contention window, sets q1 = 2/(cw+2); 0 = collision-free */
  double rho;        /* access intensity E[t_tx]/E[t_countdown] */
  double rate_mbps;  /* presentation constant for throughput_rate */
  size_t max_links;  /* state-space cap, <= 64 */
} csma_analysis_params;

/* cw = 31, rho = 83/15.5, rate_mbps = 7.229, max_links = 25. */
CSMA_API void csma_analysis_params_init(csma_analysis_params* p);

typedef struct csma_link_metrics {
  double throughput_normalized;
  double throughput_rate;
  double collision_prob;
} csma_link_metrics;

/* out must hold csma_graph_link_count(g) entries (len). */
CSMA_API csma_status csma_analyze(const csma_graph* g, csma_model model,
                                  const csma_analysis_params* params, csma_link_metrics* out,
                                  size_t len);

/* Collision-free model with one access intensity per link (len entries). */
CSMA_API csma_status csma_analyze_icn_heterogeneous(const csma_graph* g, const double* rho,
                                                    double rate_mbps, size_t max_links,
                                                    csma_link_metrics* out, size_t len);

/* ---- simulation ---------------------------------------------------------- */

typedef struct csma_sim_config {
  int cw0;
  int cw_max;
  int beb_enabled;
  int t_tx;
  uint64_t total_slots;  /* includes warmup */
  int64_t warmup_slots;  /* < 0: 5% of total_slots */
  uint64_t seed;
  int geometric_backoff;
  int resume_delay;
  double rate_mbps;
} csma_sim_config;

CSMA_API void csma_sim_config_init(csma_sim_config* c);

typedef struct csma_sim_result csma_sim_result;

/* reps == 1 runs once with cfg->seed; reps >= 2 derives per-replication
 * seeds and reports 95% half-widths. threads == 0 uses all cores. */
CSMA_API csma_status csma_simulate(const csma_graph* g, const csma_sim_config* cfg, size_t reps,
                                   unsigned threads, csma_sim_result** out);
CSMA_API void csma_sim_result_free(csma_sim_result* r);

CSMA_API size_t csma_sim_link_count(const csma_sim_result* r);
CSMA_API size_t csma_sim_replications(const csma_sim_result* r);
/* Measured slots summed over replications. */
CSMA_API uint64_t csma_sim_measured_slots(const csma_sim_result* r);
CSMA_API uint64_t csma_sim_seed(const csma_sim_result* r);

typedef struct csma_sim_link_stats {
  csma_link_metrics metrics;
  double throughput_ci;  /* 95% half-width, 0 for a single run */
  double collision_ci;
  uint64_t success_slots;
  uint64_t collided_slots;
  uint64_t attempts;
  uint64_t collided_attempts;
  uint64_t countdown_slots;
  uint64_t frozen_slots;
  uint64_t starts;
} csma_sim_link_stats;

CSMA_API csma_status csma_sim_link_stats_get(const csma_sim_result* r, size_t link,
                                             csma_sim_link_stats* out);

#ifdef __cplusplus
}
#endif

#endif
