/* C API for the OTFS link-level simulator.
 *
 * All functions are thread-compatible: distinct handles may be used from
 * distinct threads. Functions returning otfs_status report failure details
 * through otfs_last_error(), which is thread-local. Functions returning a
 * pointer return NULL on failure with the message set the same way.
 */
#ifndef OTFS_H
#define OTFS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    OTFS_OK = 0,
    OTFS_ERR_INVALID_ARGUMENT = 1, /* bad parameter or config value */
    OTFS_ERR_IO = 2,               /* file missing, unreadable, or malformed */
    OTFS_ERR_CONFIG = 3            /* configuration fails validation */
} otfs_status;

/* Message describing the most recent failure on this thread. */
const char* otfs_last_error(void);

/* ---- simulation configuration (opaque) ---- */

typedef struct otfs_sim_config otfs_sim_config;

/* Default configuration (synthetic four-tap channel, 64x64 grid, 40 MHz). */
otfs_sim_config* otfs_config_new(void);

/* One of: bw5_m64 bw40_m64 bw120_m64 bw40_m8 bw40_m2 synth_viterbo. */
otfs_sim_config* otfs_config_preset(const char* name);

/* Applies one key=value override (same keys as the config file format). */
otfs_status otfs_config_set(otfs_sim_config* cfg, const char* key, const char* value);

/* Loads a flat key=value config file into a fresh state of cfg. */
otfs_status otfs_config_load(otfs_sim_config* cfg, const char* path);

void otfs_config_free(otfs_sim_config* cfg);

/* Runs the whole Eb/N0 sweep, writing CSV rows incrementally to out_path. */
otfs_status otfs_run_sweep_csv(const otfs_sim_config* cfg, const char* out_path);

/* ---- channel traces (opaque) ---- */

typedef struct otfs_trace otfs_trace;

otfs_trace* otfs_trace_load(const char* path);
otfs_status otfs_trace_save(const otfs_trace* trace, const char* path);
void otfs_trace_free(otfs_trace* trace);

typedef struct {
    unsigned nf;
    unsigned nt;
    double subcarrier_spacing_hz;
    double snapshot_interval_s;
    double carrier_hz;
    char label[128]; /* truncated if longer */
    /* correlation between consecutive snapshots */
    double rho_mean;
    double rho_median;
    double rho_min;
} otfs_trace_info;

otfs_status otfs_trace_get_info(const otfs_trace* trace, otfs_trace_info* out);

/* Synthesizes a sounder-format trace from `count` scatterers given as
 * parallel arrays (delay seconds, Doppler Hz, complex amplitude). */
otfs_trace* otfs_trace_synth(const double* delays_s, const double* dopplers_hz,
                             const double* amp_re, const double* amp_im, size_t count,
                             double subcarrier_spacing_hz, unsigned n_tones,
                             double snapshot_interval_s, double carrier_hz,
                             double duration_s);

/* Runs the resampling pipeline (band subset -> delay-time -> linear time
 * interpolation -> frame extraction) for one frame of the simulation grid
 * and writes the resulting N x M transfer function H[f,t]. A path ending in
 * ".csv" produces long-format rows "f,t,re,im"; any other path is written as
 * a trace file whose grid is the simulation grid. When stats is non-NULL it
 * receives the metadata and rho statistics of the input trace. */
otfs_status otfs_trace_resample(const otfs_trace* trace, double bandwidth_hz,
                                unsigned n_delay, unsigned m_doppler,
                                unsigned frame_index, double interp_divisor,
                                const char* out_path, otfs_trace_info* stats);

#ifdef __cplusplus
}
#endif

#endif /* OTFS_H */
