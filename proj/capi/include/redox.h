/*
 * redox — training-data I/O with file redirection: batched sequential chunk
 * reads, load-once virtual-chunk memory, waste-minimizing refills, and
 * opportunistic conflict-free prefetching between nodes.
 *
 * C interface over the simulator core. All functions returning strings
 * allocate with malloc; release them with redox_string_free. Handles are
 * opaque and single-threaded. On any non-zero status, redox_last_error()
 * returns a thread-local description of what went wrong.
 */
#ifndef REDOX_H
#define REDOX_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  REDOX_OK = 0,
  REDOX_ERR_INVARIANT = 1, /* a protocol invariant failed (or verify found violations) */
  REDOX_ERR_CONFIG = 2,    /* bad parameters or unreadable/invalid config */
  REDOX_ERR_IO = 3,        /* filesystem or container-format failure */
} redox_status;

typedef struct redox_sim redox_sim;

const char* redox_version(void);
const char* redox_last_error(void);
void redox_string_free(char* s);

/* Resolves defaults, then config_json (a config object or a run manifest),
 * then overrides_json ({"prefetch", "refill_policy", "chunk_size", "seed",
 * "epochs", "scheduler"}) in increasing precedence. Either input may be
 * NULL. Yields the fully-resolved config object. */
redox_status redox_config_resolve(const char* config_json, const char* overrides_json,
                                  char** out_config_json);

/* config_json: a config object or a run manifest (config under "config").
 * NULL selects the built-in defaults. */
redox_status redox_sim_create(const char* config_json, redox_sim** out_sim);
void redox_sim_free(redox_sim* sim);

/* Runs the configured epochs; out_report_json gets {"epochs": [...],
 * "totals": {...}}. Reruns from the same config are byte-identical. */
redox_status redox_sim_run(redox_sim* sim, char** out_report_json);

/* Last run's final-epoch delivery log as redox-delivery v1 text. */
redox_status redox_sim_delivery_log(redox_sim* sim, char** out_text);

/* The simulated dataset's mapping as redox-layout v1 text. */
redox_status redox_sim_layout_text(redox_sim* sim, char** out_text);

/* The access order of one epoch as redox-trace v1 text. */
redox_status redox_sim_trace_text(redox_sim* sim, uint64_t epoch, char** out_text);

/* Fully-resolved config and the reproduction manifest. */
redox_status redox_sim_config_json(redox_sim* sim, char** out_json);
redox_status redox_sim_manifest(redox_sim* sim, const char* command_line,
                                char** out_json);

/* Four-variant breakdown (full / random-selection / no-prefetching /
 * no-optimization) over identical traces, as CSV. */
redox_status redox_ablate(const char* config_json, char** out_csv);

/* Chunk-size sensitivity at fixed total memory (M rescaled to F/(K*G)). */
redox_status redox_chunk_sweep(const char* config_json, const uint64_t* chunk_sizes,
                               uint64_t count, char** out_csv);

/* Randomness accounting for one virtual chunk. enumerate != 0 additionally
 * runs the exhaustive reachable-sequence oracle (requires (F/M)! <= 10^6);
 * trials > 0 additionally runs chi-square uniformity diagnostics. */
redox_status redox_randomness(uint64_t files, uint64_t virtual_chunks,
                              uint64_t chunk_size, int enumerate, uint64_t trials,
                              double alpha, uint64_t seed, char** out_json);

/* Packs every physical chunk into <out_dir>/chunk-<pc>.rdox. `source` is a
 * directory of payload files named by decimal file id, or "synthetic". */
redox_status redox_pack(const char* layout_path, const char* source,
                        const char* out_dir, uint64_t payload_seed,
                        char** out_summary_json);

/* Checks an emitted redox-delivery or redox-trace file against a layout.
 * Returns REDOX_ERR_INVARIANT when violations are found; the report (with
 * per-violation detail) is produced either way. */
redox_status redox_verify(const char* trace_path, const char* layout_path,
                          char** out_report_json);

#ifdef __cplusplus
}
#endif

#endif /* REDOX_H */
