#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "otfs/grid.hpp"
#include "otfs/channel.hpp"
#include "otfs/types.hpp"

namespace otfs {

/// Raised for malformed trace files (bad magic, truncated payload,
/// inconsistent header).
class TraceFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Measured (or synthetic) frequency-time transfer function H[f,t] together
/// with the sounder metadata needed to resample it.
struct ChannelTrace {
    CMat h_meas;  // Nf x Nt, rows = frequency tones, cols = snapshots
    double subcarrier_spacing_hz = 0.0;
    double snapshot_interval_s = 0.0;
    double carrier_hz = 0.0;
    std::string label;

    std::size_t nf() const { return h_meas.rows(); }
    std::size_t nt() const { return h_meas.cols(); }

    void validate() const;  // Nf >= 1, Nt >= 2, positive spacing/interval
};

/// Delay-time representation G: N delay rows (rows >= active_rows are zero)
/// by T snapshots.
struct DelayTimeGrid {
    CMat g;  // N x T
    std::size_t active_rows = 0;   // f'
    double delta_tau_s = 0.0;      // 1/(f' * subcarrier spacing)
    double snapshot_interval_s = 0.0;
};

/// Sounder-grid defaults used when generating synthetic traces.
struct SounderParams {
    double subcarrier_spacing_hz = 4.96e6;
    std::size_t n_tones = 102;
    double snapshot_interval_s = 129.1e-6;
    double carrier_hz = 60.0e9;
};

struct Scatterer {
    double delay_s;
    double doppler_hz;
    Complex amplitude;
};

struct RhoStats {
    double mean;
    double median;
    double min;
};

/// Binary trace format, little-endian:
///   magic "OTFSTRC1" | u32 Nf | u32 Nt | f64 spacing | f64 interval |
///   f64 carrier | u32 label_len | label bytes | Nf*Nt (f64 re, f64 im)
/// row-major with the frequency tone as the row index.
void save_trace(const ChannelTrace& trace, const std::string& path);
ChannelTrace load_trace(const std::string& path);

/// Keeps the round(bandwidth / spacing) contiguous center tone rows, placed
/// so their centered frequency indices match the centered DFT used later.
ChannelTrace select_band(const ChannelTrace& trace, double system_bandwidth_hz);

/// G = [F^H H' ; 0]: inverse centered unitary DFT of size f' over the tone
/// rows, zero-padded to N delay rows.
DelayTimeGrid to_delay_time(const ChannelTrace& reduced, std::size_t n_delay);

/// Component-wise (real/imag) linear interpolation onto a uniform time axis
/// with the given spacing; upsampling only, endpoints preserved exactly.
DelayTimeGrid interpolate_time(const DelayTimeGrid& g, double target_interval_s);

/// rho(a, b) = Re(<a,b>) / (|a| |b|); throws on zero-norm input.
double snapshot_correlation(const std::vector<Complex>& a,
                            const std::vector<Complex>& b);

/// rho between each pair of consecutive snapshots of the trace.
RhoStats rho_stats(const ChannelTrace& trace);

/// Number of whole OTFS frames the (interpolated) grid covers.
std::size_t num_frames(const DelayTimeGrid& g, const GridConfig& config);

/// Samples M snapshot columns at slot boundaries of the given frame and
/// transforms the N delay rows back to frequency with the forward centered
/// unitary DFT, yielding H[f,t] for the simulation grid.
TFChannel extract_frame(const DelayTimeGrid& g, const GridConfig& config,
                        std::size_t frame_index);

/// Synthesizes a sounder-format trace from discrete scatterers:
///   H[f,t] = sum_k a_k exp(-j2pi (f - Nf/2) df tau_k) exp(+j2pi nu_k t dt)
/// Scatterer delays must fit the unambiguous range 1/df and Dopplers must
/// stay below half the snapshot rate.
ChannelTrace gen_synth_trace(const std::vector<Scatterer>& scatterers,
                             const SounderParams& params, double duration_s);

}  // namespace otfs
