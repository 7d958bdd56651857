/* C interface to the rcepc simulation library.
 *
 * All functions return RCEPC_OK on success. On failure the handle-bound
 * functions store a message retrievable with rcepc_run_error(); handle-less
 * functions store it in a thread-local buffer behind rcepc_last_error().
 */
#ifndef RCEPC_H
#define RCEPC_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  RCEPC_OK = 0,
  RCEPC_ERR_INVALID_ARGUMENT = 1,
  RCEPC_ERR_IO = 2,
  RCEPC_ERR_PARSE = 3,
  RCEPC_ERR_RUNTIME = 4,
} rcepc_status;

/* A configured Monte-Carlo experiment. Opaque. */
typedef struct rcepc_run rcepc_run;

const char* rcepc_version(void);

/* Parses the key = value config file and returns a ready-to-run handle. */
rcepc_status rcepc_run_create(const char* config_path, rcepc_run** out);
void rcepc_run_destroy(rcepc_run* run);

/* Overrides applied on top of the config file. precoders is a comma list,
 * e.g. "wf,lrce". */
rcepc_status rcepc_run_set_seed(rcepc_run* run, uint64_t seed);
rcepc_status rcepc_run_set_precoders(rcepc_run* run, const char* precoders);
rcepc_status rcepc_run_set_threads(rcepc_run* run, int threads);

/* Runs the experiment and writes results.csv and manifest.json into out_dir
 * (which must exist). */
rcepc_status rcepc_run_execute(rcepc_run* run, const char* out_dir);

/* Message for the most recent failure on this handle; empty string if none. */
const char* rcepc_run_error(const rcepc_run* run);

/* Renders a BER curve SVG from a results CSV. axis is "available",
 * "radiated" or "pa"; db_axis != 0 plots the power axis in dB. */
rcepc_status rcepc_plot(const char* csv_path, const char* axis,
                        const char* svg_path, int db_axis);

/* Message for the most recent failure of a handle-less call. */
const char* rcepc_last_error(void);

#ifdef __cplusplus
}
#endif

#endif /* RCEPC_H */
