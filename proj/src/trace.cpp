#include "otfs/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

namespace otfs {

namespace {

constexpr char kMagic[8] = {'O', 'T', 'F', 'S', 'T', 'R', 'C', '1'};
constexpr std::size_t kMaxElements = std::size_t{1} << 28;  // reject absurd headers

void write_u32(std::ostream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_f64(std::ostream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& is) {
    std::uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw TraceFormatError("trace file truncated in header");
    return v;
}

double read_f64(std::istream& is) {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw TraceFormatError("trace file truncated in header");
    return v;
}

}  // namespace

void ChannelTrace::validate() const {
    if (nf() < 1 || nt() < 2)
        throw std::invalid_argument("ChannelTrace: need Nf >= 1 and Nt >= 2");
    if (!(subcarrier_spacing_hz > 0.0) || !(snapshot_interval_s > 0.0))
        throw std::invalid_argument("ChannelTrace: spacing and interval must be positive");
}

void save_trace(const ChannelTrace& trace, const std::string& path) {
    trace.validate();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os.write(kMagic, sizeof kMagic);
    write_u32(os, static_cast<std::uint32_t>(trace.nf()));
    write_u32(os, static_cast<std::uint32_t>(trace.nt()));
    write_f64(os, trace.subcarrier_spacing_hz);
    write_f64(os, trace.snapshot_interval_s);
    write_f64(os, trace.carrier_hz);
    write_u32(os, static_cast<std::uint32_t>(trace.label.size()));
    os.write(trace.label.data(), static_cast<std::streamsize>(trace.label.size()));
    for (const Complex& v : trace.h_meas.raw()) {
        write_f64(os, v.real());
        write_f64(os, v.imag());
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

ChannelTrace load_trace(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    char magic[8];
    is.read(magic, sizeof magic);
    if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw TraceFormatError("not an OTFS trace file (bad magic)");

    ChannelTrace trace;
    const std::uint32_t nf = read_u32(is);
    const std::uint32_t nt = read_u32(is);
    trace.subcarrier_spacing_hz = read_f64(is);
    trace.snapshot_interval_s = read_f64(is);
    trace.carrier_hz = read_f64(is);
    const std::uint32_t label_len = read_u32(is);
    if (static_cast<std::size_t>(nf) * nt > kMaxElements || label_len > (1u << 20))
        throw TraceFormatError("trace header dimensions out of range");
    trace.label.resize(label_len);
    is.read(trace.label.data(), label_len);
    if (!is) throw TraceFormatError("trace file truncated in label");

    trace.h_meas = CMat(nf, nt);
    for (Complex& v : trace.h_meas.raw()) {
        double re, im;
        is.read(reinterpret_cast<char*>(&re), sizeof re);
        is.read(reinterpret_cast<char*>(&im), sizeof im);
        if (!is) throw TraceFormatError("trace payload shorter than header claims");
        v = {re, im};
    }
    trace.validate();
    return trace;
}

ChannelTrace select_band(const ChannelTrace& trace, double system_bandwidth_hz) {
    trace.validate();
    if (!(system_bandwidth_hz > 0.0))
        throw std::invalid_argument("select_band: bandwidth must be positive");
    const double measured_bw =
        static_cast<double>(trace.nf()) * trace.subcarrier_spacing_hz;
    if (system_bandwidth_hz > measured_bw * (1.0 + 1e-12))
        throw std::invalid_argument("select_band: requested bandwidth exceeds measurement");
    std::size_t fp = static_cast<std::size_t>(
        std::llround(system_bandwidth_hz / trace.subcarrier_spacing_hz));
    fp = std::max<std::size_t>(fp, 1);
    fp = std::min(fp, trace.nf());
    // Align the kept block so its centered tone indices -floor(f'/2)..ceil(f'/2)-1
    // coincide with the centered DFT applied in to_delay_time.
    const std::size_t start = trace.nf() / 2 - fp / 2;

    ChannelTrace out = trace;
    out.h_meas = CMat(fp, trace.nt());
    for (std::size_t r = 0; r < fp; ++r)
        for (std::size_t c = 0; c < trace.nt(); ++c)
            out.h_meas.at(r, c) = trace.h_meas.at(start + r, c);
    return out;
}

DelayTimeGrid to_delay_time(const ChannelTrace& reduced, std::size_t n_delay) {
    reduced.validate();
    const std::size_t fp = reduced.nf();
    const std::size_t t_cols = reduced.nt();
    if (fp > n_delay)
        throw std::invalid_argument("to_delay_time: f' exceeds the number of subcarriers");

    DelayTimeGrid grid;
    grid.g = CMat(n_delay, t_cols);
    grid.active_rows = fp;
    grid.delta_tau_s = 1.0 / (static_cast<double>(fp) * reduced.subcarrier_spacing_hz);
    grid.snapshot_interval_s = reduced.snapshot_interval_s;

    // Inverse centered unitary DFT over the tone rows: rows of H' carry
    // centered indices p - floor(f'/2); delay row n stays 0-based so a
    // zero-delay path lands in row 0.
    const std::size_t c = fp / 2;
    const double scale = 1.0 / std::sqrt(static_cast<double>(fp));
    for (std::size_t n = 0; n < fp; ++n)
        for (std::size_t t = 0; t < t_cols; ++t) {
            Complex acc = 0.0;
            for (std::size_t p = 0; p < fp; ++p) {
                const double ang = 2.0 * std::numbers::pi * static_cast<double>(n) *
                                   (static_cast<double>(p) - static_cast<double>(c)) /
                                   static_cast<double>(fp);
                acc += reduced.h_meas.at(p, t) * Complex(std::cos(ang), std::sin(ang));
            }
            grid.g.at(n, t) = scale * acc;
        }
    return grid;
}

DelayTimeGrid interpolate_time(const DelayTimeGrid& g, double target_interval_s) {
    const std::size_t t_cols = g.g.cols();
    if (t_cols < 2)
        throw std::invalid_argument("interpolate_time: need at least two snapshots");
    if (!(target_interval_s > 0.0))
        throw std::invalid_argument("interpolate_time: interval must be positive");
    if (target_interval_s > g.snapshot_interval_s * (1.0 + 1e-12))
        throw std::invalid_argument("interpolate_time: downsampling is not supported");
    if (target_interval_s == g.snapshot_interval_s) return g;

    const double span = static_cast<double>(t_cols - 1) * g.snapshot_interval_s;
    const std::size_t out_cols =
        static_cast<std::size_t>(std::floor(span / target_interval_s + 1e-9)) + 1;

    DelayTimeGrid out;
    out.g = CMat(g.g.rows(), out_cols);
    out.active_rows = g.active_rows;
    out.delta_tau_s = g.delta_tau_s;
    out.snapshot_interval_s = target_interval_s;

    for (std::size_t k = 0; k < out_cols; ++k) {
        const double s = static_cast<double>(k) * target_interval_s / g.snapshot_interval_s;
        std::size_t i = static_cast<std::size_t>(std::floor(s));
        double w = s - static_cast<double>(i);
        if (i >= t_cols - 1) {
            i = t_cols - 2;
            w = 1.0;
        }
        for (std::size_t r = 0; r < g.g.rows(); ++r) {
            const Complex a = g.g.at(r, i);
            const Complex b = g.g.at(r, i + 1);
            out.g.at(r, k) = (1.0 - w) * a + w * b;
        }
    }
    return out;
}

double snapshot_correlation(const std::vector<Complex>& a,
                            const std::vector<Complex>& b) {
    if (a.empty() || a.size() != b.size())
        throw std::invalid_argument("snapshot_correlation: length mismatch");
    Complex inner = 0.0;
    double na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        inner += std::conj(a[i]) * b[i];
        na += std::norm(a[i]);
        nb += std::norm(b[i]);
    }
    if (na == 0.0 || nb == 0.0)
        throw std::invalid_argument("snapshot_correlation: zero-norm input");
    return inner.real() / std::sqrt(na * nb);
}

RhoStats rho_stats(const ChannelTrace& trace) {
    trace.validate();
    std::vector<double> rhos;
    rhos.reserve(trace.nt() - 1);
    std::vector<Complex> a(trace.nf()), b(trace.nf());
    for (std::size_t t = 0; t + 1 < trace.nt(); ++t) {
        for (std::size_t f = 0; f < trace.nf(); ++f) {
            a[f] = trace.h_meas.at(f, t);
            b[f] = trace.h_meas.at(f, t + 1);
        }
        rhos.push_back(snapshot_correlation(a, b));
    }
    std::sort(rhos.begin(), rhos.end());
    double sum = 0.0;
    for (double r : rhos) sum += r;
    const std::size_t n = rhos.size();
    const double median =
        (n % 2 == 1) ? rhos[n / 2] : 0.5 * (rhos[n / 2 - 1] + rhos[n / 2]);
    return {sum / static_cast<double>(n), median, rhos.front()};
}

std::size_t num_frames(const DelayTimeGrid& g, const GridConfig& config) {
    const double t_last =
        static_cast<double>(g.g.cols() - 1) * g.snapshot_interval_s;
    const double frame = config.frame_duration();
    const double tail = static_cast<double>(config.m_doppler() - 1) * config.slot_duration();
    std::size_t count = 0;
    while (static_cast<double>(count) * frame + tail <= t_last * (1.0 + 1e-12)) ++count;
    return count;
}

TFChannel extract_frame(const DelayTimeGrid& g, const GridConfig& config,
                        std::size_t frame_index) {
    const std::size_t n = config.n_delay();
    const std::size_t m = config.m_doppler();
    if (g.g.rows() != n)
        throw std::invalid_argument("extract_frame: grid rows do not match N");
    const double t_last = static_cast<double>(g.g.cols() - 1) * g.snapshot_interval_s;
    const double start = static_cast<double>(frame_index) * config.frame_duration();
    const double slot = config.slot_duration();
    if (start + static_cast<double>(m - 1) * slot > t_last * (1.0 + 1e-12))
        throw std::out_of_range("extract_frame: frame extends past recording end");

    // Nearest interpolated snapshot at each slot boundary.
    std::vector<std::size_t> cols(m);
    for (std::size_t t = 0; t < m; ++t) {
        const double time = start + static_cast<double>(t) * slot;
        auto col = static_cast<std::size_t>(std::llround(time / g.snapshot_interval_s));
        cols[t] = std::min(col, g.g.cols() - 1);
    }

    // Forward centered unitary DFT back to frequency, matching the transform
    // conventions of the delay-Doppler chain (a delay-d path produces the
    // phase ramp exp(+j2pi f d / N) that tf_to_dd maps to delay cell d).
    TFChannel h{CMat(n, m)};
    const std::size_t c = n / 2;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t f = 0; f < n; ++f)
        for (std::size_t t = 0; t < m; ++t) {
            Complex acc = 0.0;
            for (std::size_t d = 0; d < n; ++d) {
                const double ang = 2.0 * std::numbers::pi * static_cast<double>(d) *
                                   (static_cast<double>(f) - static_cast<double>(c)) /
                                   static_cast<double>(n);
                acc += g.g.at(d, cols[t]) * Complex(std::cos(ang), std::sin(ang));
            }
            h.h.at(f, t) = scale * acc;
        }
    return h;
}

ChannelTrace gen_synth_trace(const std::vector<Scatterer>& scatterers,
                             const SounderParams& params, double duration_s) {
    if (params.n_tones < 1 || !(params.subcarrier_spacing_hz > 0.0) ||
        !(params.snapshot_interval_s > 0.0) || !(duration_s > 0.0))
        throw std::invalid_argument("gen_synth_trace: invalid sounder parameters");
    const double delay_range = 1.0 / params.subcarrier_spacing_hz;
    const double doppler_limit = 0.5 / params.snapshot_interval_s;
    for (const Scatterer& s : scatterers) {
        if (s.delay_s < 0.0 || s.delay_s >= delay_range)
            throw std::invalid_argument("gen_synth_trace: delay outside unambiguous range");
        if (std::abs(s.doppler_hz) >= doppler_limit)
            throw std::invalid_argument("gen_synth_trace: Doppler violates snapshot rate");
    }

    const auto nt = static_cast<std::size_t>(
                        std::floor(duration_s / params.snapshot_interval_s + 1e-9)) + 1;
    if (nt < 2)
        throw std::invalid_argument("gen_synth_trace: duration shorter than two snapshots");

    ChannelTrace trace;
    trace.h_meas = CMat(params.n_tones, nt);
    trace.subcarrier_spacing_hz = params.subcarrier_spacing_hz;
    trace.snapshot_interval_s = params.snapshot_interval_s;
    trace.carrier_hz = params.carrier_hz;
    trace.label = "synthetic";

    const double cf = static_cast<double>(params.n_tones / 2);
    for (std::size_t f = 0; f < params.n_tones; ++f) {
        const double freq = (static_cast<double>(f) - cf) * params.subcarrier_spacing_hz;
        for (std::size_t t = 0; t < nt; ++t) {
            const double time = static_cast<double>(t) * params.snapshot_interval_s;
            Complex acc = 0.0;
            for (const Scatterer& s : scatterers) {
                const double ang = 2.0 * std::numbers::pi *
                                   (s.doppler_hz * time - freq * s.delay_s);
                acc += s.amplitude * Complex(std::cos(ang), std::sin(ang));
            }
            trace.h_meas.at(f, t) = acc;
        }
    }
    return trace;
}

}  // namespace otfs
