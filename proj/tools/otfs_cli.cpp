// Command-line front end for the OTFS simulator shared library. Talks to the
// core exclusively through the C API in otfs.h.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "otfs.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitConfig = 3;

int exit_code_for(otfs_status status) {
    switch (status) {
        case OTFS_OK:
            return 0;
        case OTFS_ERR_IO:
            return kExitIo;
        default:
            return kExitConfig;
    }
}

int fail(otfs_status status) {
    std::fprintf(stderr, "error: %s\n", otfs_last_error());
    return exit_code_for(status);
}

void print_info(const otfs_trace_info& info) {
    std::printf("tones (Nf):            %u\n", info.nf);
    std::printf("snapshots (Nt):        %u\n", info.nt);
    std::printf("subcarrier spacing:    %.6g Hz\n", info.subcarrier_spacing_hz);
    std::printf("snapshot interval:     %.6g s\n", info.snapshot_interval_s);
    std::printf("carrier:               %.6g Hz\n", info.carrier_hz);
    std::printf("label:                 %s\n", info.label);
    std::printf("rho mean/median/min:   %.4f / %.4f / %.4f\n", info.rho_mean,
                info.rho_median, info.rho_min);
}

struct Scatterers {
    std::vector<double> delay, doppler, re, im;
};

// Rows of "delay_s,doppler_hz,re,im"; '#' comments and blank lines allowed.
bool load_scatterers(const std::string& path, Scatterers& out, std::string& err) {
    std::ifstream is(path);
    if (!is) {
        err = "cannot open scatterer file: " + path;
        return false;
    }
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
        double d, nu, re, im;
        char extra;
        std::istringstream ss(line);
        char c1, c2, c3;
        if (!(ss >> d >> c1 >> nu >> c2 >> re >> c3 >> im) || c1 != ',' || c2 != ',' ||
            c3 != ',' || (ss >> extra)) {
            err = path + ":" + std::to_string(lineno) +
                  ": expected delay_s,doppler_hz,re,im";
            return false;
        }
        out.delay.push_back(d);
        out.doppler.push_back(nu);
        out.re.push_back(re);
        out.im.push_back(im);
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OTFS delay-Doppler link-level simulator"};
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run a BER-vs-Eb/N0 sweep");
    std::string sim_config, sim_preset, sim_out;
    std::vector<std::string> sim_sets;
    simulate->add_option("--config", sim_config, "key=value config file");
    simulate->add_option("--preset", sim_preset, "named preset configuration");
    simulate->add_option("--set", sim_sets, "key=value override (repeatable)");
    simulate->add_option("--out", sim_out, "output CSV path")->required();

    // resample
    auto* resample =
        app.add_subcommand("resample", "Resample a trace onto a simulation grid");
    std::string rs_in, rs_out;
    double rs_bw = 0.0, rs_divisor = 4.0;
    unsigned rs_n = 64, rs_m = 64, rs_frame = 0;
    resample->add_option("--in", rs_in, "input trace file")->required();
    resample->add_option("--bandwidth", rs_bw, "system bandwidth in Hz")->required();
    resample->add_option("--n", rs_n, "number of subcarriers N")->required();
    resample->add_option("--m", rs_m, "number of Doppler samples M")->required();
    resample->add_option("--frame", rs_frame, "frame index");
    resample->add_option("--interp-divisor", rs_divisor,
                         "time interpolation target = slot / divisor");
    resample->add_option("--out", rs_out, "output file (.csv for text)")->required();

    // synth-trace
    auto* synth = app.add_subcommand("synth-trace", "Generate a synthetic trace");
    std::string sy_scatterers, sy_out;
    double sy_spacing = 4.96e6, sy_interval = 129.1e-6, sy_carrier = 60e9,
           sy_duration = 0.72;
    unsigned sy_tones = 102;
    synth->add_option("--scatterers", sy_scatterers,
                      "CSV of delay_s,doppler_hz,re,im rows")
        ->required();
    synth->add_option("--out", sy_out, "output trace file")->required();
    synth->add_option("--spacing", sy_spacing, "subcarrier spacing in Hz");
    synth->add_option("--tones", sy_tones, "number of tones");
    synth->add_option("--interval", sy_interval, "snapshot interval in s");
    synth->add_option("--carrier", sy_carrier, "carrier frequency in Hz");
    synth->add_option("--duration", sy_duration, "recording duration in s");

    // info
    auto* info_cmd = app.add_subcommand("info", "Print trace header and rho stats");
    std::string info_in;
    info_cmd->add_option("--in", info_in, "input trace file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (simulate->parsed()) {
        if (sim_config.empty() && sim_preset.empty()) {
            std::fprintf(stderr, "error: simulate needs --config or --preset\n");
            return kExitUsage;
        }
        otfs_sim_config* cfg = nullptr;
        if (!sim_preset.empty()) {
            cfg = otfs_config_preset(sim_preset.c_str());
            if (!cfg) return fail(OTFS_ERR_INVALID_ARGUMENT);
        } else {
            cfg = otfs_config_new();
        }
        if (!sim_config.empty()) {
            const otfs_status st = otfs_config_load(cfg, sim_config.c_str());
            if (st != OTFS_OK) {
                otfs_config_free(cfg);
                return fail(st);
            }
        }
        for (const std::string& kv : sim_sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                std::fprintf(stderr, "error: --set expects key=value, got '%s'\n",
                             kv.c_str());
                otfs_config_free(cfg);
                return kExitUsage;
            }
            const otfs_status st = otfs_config_set(cfg, kv.substr(0, eq).c_str(),
                                                   kv.substr(eq + 1).c_str());
            if (st != OTFS_OK) {
                otfs_config_free(cfg);
                return fail(st);
            }
        }
        const otfs_status st = otfs_run_sweep_csv(cfg, sim_out.c_str());
        otfs_config_free(cfg);
        if (st != OTFS_OK) return fail(st);
        std::printf("wrote %s\n", sim_out.c_str());
        return 0;
    }

    if (resample->parsed()) {
        otfs_trace* trace = otfs_trace_load(rs_in.c_str());
        if (!trace) return fail(OTFS_ERR_IO);
        otfs_trace_info stats;
        const otfs_status st =
            otfs_trace_resample(trace, rs_bw, rs_n, rs_m, rs_frame, rs_divisor,
                                rs_out.c_str(), &stats);
        otfs_trace_free(trace);
        if (st != OTFS_OK) return fail(st);
        print_info(stats);
        std::printf("wrote %s\n", rs_out.c_str());
        return 0;
    }

    if (synth->parsed()) {
        Scatterers sc;
        std::string err;
        if (!load_scatterers(sy_scatterers, sc, err)) {
            std::fprintf(stderr, "error: %s\n", err.c_str());
            return kExitIo;
        }
        otfs_trace* trace =
            otfs_trace_synth(sc.delay.data(), sc.doppler.data(), sc.re.data(),
                             sc.im.data(), sc.delay.size(), sy_spacing, sy_tones,
                             sy_interval, sy_carrier, sy_duration);
        if (!trace) return fail(OTFS_ERR_INVALID_ARGUMENT);
        const otfs_status st = otfs_trace_save(trace, sy_out.c_str());
        otfs_trace_free(trace);
        if (st != OTFS_OK) return fail(st);
        std::printf("wrote %s\n", sy_out.c_str());
        return 0;
    }

    if (info_cmd->parsed()) {
        otfs_trace* trace = otfs_trace_load(info_in.c_str());
        if (!trace) return fail(OTFS_ERR_IO);
        otfs_trace_info info;
        const otfs_status st = otfs_trace_get_info(trace, &info);
        otfs_trace_free(trace);
        if (st != OTFS_OK) return fail(st);
        print_info(info);
        return 0;
    }

    return kExitUsage;
}
