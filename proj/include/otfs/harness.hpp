#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "otfs/detector.hpp"
#include "otfs/grid.hpp"

namespace otfs {

enum class ChannelSource { SyntheticFourTap, TraceFile, Identity };
enum class DetectorMode { MessagePassing, HardDecision };

/// Full description of one BER sweep. Flat fields so the key=value config
/// files and CLI overrides can populate it piecemeal; grid() assembles and
/// validates the GridConfig on demand.
struct SimConfig {
    std::size_t n_delay = 64;
    std::size_t m_doppler = 64;
    double bandwidth_hz = 40e6;
    double carrier_hz = 60e9;

    unsigned qam_order = 4;
    ChannelSource source = ChannelSource::SyntheticFourTap;
    std::string trace_path;

    std::vector<double> ebn0_list_db;

    std::size_t min_bit_errors = 200;
    std::size_t max_frames = 100000;

    MpParams mp;
    DetectorMode detector = DetectorMode::MessagePassing;
    double tap_threshold = 1e-3;

    std::uint64_t master_seed = 1;

    /// Time-interpolation target = slot_duration / interp_divisor for
    /// trace-driven runs.
    double interp_divisor = 4.0;

    GridConfig grid() const { return {n_delay, m_doppler, bandwidth_hz, carrier_hz}; }

    /// Throws std::invalid_argument when the configuration is inconsistent
    /// (empty or non-increasing Eb/N0 list, missing trace path, ...).
    void validate() const;
};

/// One Monte Carlo result point.
struct BerRecord {
    double ebn0_db = 0.0;
    std::size_t frames = 0;
    std::size_t bits = 0;
    std::size_t bit_errors = 0;
    double ber = 0.0;
    double mean_iterations = 0.0;
    double converged_fraction = 0.0;
};

/// Shipped configurations: bw5_m64, bw40_m64, bw120_m64, bw40_m8, bw40_m2
/// (trace-driven, 64 subcarriers, 60 GHz) and synth_viterbo (four-tap
/// synthetic channel). Throws std::invalid_argument on an unknown name.
SimConfig preset(const std::string& name);

/// Applies one key=value override; throws std::invalid_argument on unknown
/// keys or unparsable values.
void apply_config_kv(SimConfig& config, const std::string& key, const std::string& value);

/// Loads a flat key=value config file ('#' comments, blank lines allowed).
/// A `preset=` line replaces the whole config before later keys apply.
SimConfig load_config_file(const std::string& path);

/// Runs frames until min_bit_errors or max_frames is hit. Deterministic for
/// a fixed (master seed, ebn0_index); frames run on worker threads with
/// per-frame RNG streams, reduced in frame order.
BerRecord run_ber_point(const SimConfig& config, double ebn0_db, std::size_t ebn0_index);

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const BerRecord& record);

/// run_ber_point for every configured Eb/N0, in order; when `csv` is given,
/// rows are flushed as each point completes.
std::vector<BerRecord> run_sweep(const SimConfig& config, std::ostream* csv = nullptr);

}  // namespace otfs
