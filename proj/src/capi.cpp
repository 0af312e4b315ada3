#include "otfs.h"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "otfs/harness.hpp"
#include "otfs/trace.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
otfs_status guarded(Fn&& fn) {
    try {
        fn();
        return OTFS_OK;
    } catch (const otfs::TraceFormatError& e) {
        set_error(e.what());
        return OTFS_ERR_IO;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return OTFS_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        set_error(e.what());
        return OTFS_ERR_IO;
    }
}

}  // namespace

struct otfs_sim_config {
    otfs::SimConfig cfg;
};

struct otfs_trace {
    otfs::ChannelTrace trace;
};

extern "C" {

const char* otfs_last_error(void) { return g_last_error.c_str(); }

otfs_sim_config* otfs_config_new(void) { return new otfs_sim_config{}; }

otfs_sim_config* otfs_config_preset(const char* name) {
    otfs_sim_config* out = nullptr;
    guarded([&] { out = new otfs_sim_config{otfs::preset(name ? name : "")}; });
    return out;
}

otfs_status otfs_config_set(otfs_sim_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) {
        set_error("null argument");
        return OTFS_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { otfs::apply_config_kv(cfg->cfg, key, value); });
}

otfs_status otfs_config_load(otfs_sim_config* cfg, const char* path) {
    if (!cfg || !path) {
        set_error("null argument");
        return OTFS_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { cfg->cfg = otfs::load_config_file(path); });
}

void otfs_config_free(otfs_sim_config* cfg) { delete cfg; }

otfs_status otfs_run_sweep_csv(const otfs_sim_config* cfg, const char* out_path) {
    if (!cfg || !out_path) {
        set_error("null argument");
        return OTFS_ERR_INVALID_ARGUMENT;
    }
    try {
        cfg->cfg.validate();
    } catch (const std::exception& e) {
        set_error(e.what());
        return OTFS_ERR_CONFIG;
    }
    return guarded([&] {
        std::ofstream os(out_path);
        if (!os) throw std::runtime_error(std::string("cannot open for writing: ") + out_path);
        otfs::run_sweep(cfg->cfg, &os);
        if (!os) throw std::runtime_error(std::string("write failed: ") + out_path);
    });
}

otfs_trace* otfs_trace_load(const char* path) {
    otfs_trace* out = nullptr;
    guarded([&] {
        if (!path) throw std::invalid_argument("null path");
        out = new otfs_trace{otfs::load_trace(path)};
    });
    return out;
}

otfs_status otfs_trace_save(const otfs_trace* trace, const char* path) {
    if (!trace || !path) {
        set_error("null argument");
        return OTFS_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { otfs::save_trace(trace->trace, path); });
}

void otfs_trace_free(otfs_trace* trace) { delete trace; }

otfs_status otfs_trace_get_info(const otfs_trace* trace, otfs_trace_info* out) {
    if (!trace || !out) {
        set_error("null argument");
        return OTFS_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const otfs::ChannelTrace& t = trace->trace;
        out->nf = static_cast<unsigned>(t.nf());
        out->nt = static_cast<unsigned>(t.nt());
        out->subcarrier_spacing_hz = t.subcarrier_spacing_hz;
        out->snapshot_interval_s = t.snapshot_interval_s;
        out->carrier_hz = t.carrier_hz;
        std::strncpy(out->label, t.label.c_str(), sizeof out->label - 1);
        out->label[sizeof out->label - 1] = '\0';
        const otfs::RhoStats rho = otfs::rho_stats(t);
        out->rho_mean = rho.mean;
        out->rho_median = rho.median;
        out->rho_min = rho.min;
    });
}

otfs_trace* otfs_trace_synth(const double* delays_s, const double* dopplers_hz,
                             const double* amp_re, const double* amp_im, size_t count,
                             double subcarrier_spacing_hz, unsigned n_tones,
                             double snapshot_interval_s, double carrier_hz,
                             double duration_s) {
    otfs_trace* out = nullptr;
    guarded([&] {
        if (count > 0 && (!delays_s || !dopplers_hz || !amp_re || !amp_im))
            throw std::invalid_argument("null scatterer array");
        std::vector<otfs::Scatterer> scatterers(count);
        for (size_t i = 0; i < count; ++i)
            scatterers[i] = {delays_s[i], dopplers_hz[i], {amp_re[i], amp_im[i]}};
        otfs::SounderParams params;
        params.subcarrier_spacing_hz = subcarrier_spacing_hz;
        params.n_tones = n_tones;
        params.snapshot_interval_s = snapshot_interval_s;
        params.carrier_hz = carrier_hz;
        out = new otfs_trace{otfs::gen_synth_trace(scatterers, params, duration_s)};
    });
    return out;
}

otfs_status otfs_trace_resample(const otfs_trace* trace, double bandwidth_hz,
                                unsigned n_delay, unsigned m_doppler,
                                unsigned frame_index, double interp_divisor,
                                const char* out_path, otfs_trace_info* stats) {
    if (!trace || !out_path) {
        set_error("null argument");
        return OTFS_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        if (stats) {
            const otfs_status st = otfs_trace_get_info(trace, stats);
            if (st != OTFS_OK) throw std::runtime_error(otfs_last_error());
        }
        if (!(interp_divisor >= 1.0))
            throw std::invalid_argument("interp_divisor must be >= 1");
        const otfs::GridConfig grid(n_delay, m_doppler, bandwidth_hz,
                                    trace->trace.carrier_hz);
        const otfs::ChannelTrace reduced = otfs::select_band(trace->trace, bandwidth_hz);
        const otfs::DelayTimeGrid dt = otfs::to_delay_time(reduced, n_delay);
        const double target =
            std::min(grid.slot_duration() / interp_divisor, dt.snapshot_interval_s);
        const otfs::DelayTimeGrid fine = otfs::interpolate_time(dt, target);
        const otfs::TFChannel h = otfs::extract_frame(fine, grid, frame_index);

        const std::string path(out_path);
        const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
        if (csv) {
            std::ofstream os(path);
            if (!os) throw std::runtime_error("cannot open for writing: " + path);
            os << "f,t,re,im\n";
            char buf[128];
            for (std::size_t f = 0; f < h.h.rows(); ++f)
                for (std::size_t t = 0; t < h.h.cols(); ++t) {
                    std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g\n", f, t,
                                  h.h.at(f, t).real(), h.h.at(f, t).imag());
                    os << buf;
                }
            if (!os) throw std::runtime_error("write failed: " + path);
        } else {
            otfs::ChannelTrace out_trace;
            out_trace.h_meas = h.h;
            out_trace.subcarrier_spacing_hz = bandwidth_hz / static_cast<double>(n_delay);
            out_trace.snapshot_interval_s = grid.slot_duration();
            out_trace.carrier_hz = trace->trace.carrier_hz;
            out_trace.label = "resampled frame " + std::to_string(frame_index);
            otfs::save_trace(out_trace, path);
        }
    });
}

}  // extern "C"
