#include "otfs/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "otfs/channel.hpp"
#include "otfs/qam.hpp"
#include "otfs/rng.hpp"
#include "otfs/trace.hpp"

namespace otfs {

namespace {

// Frames per scheduling batch; fixed so the stopping decision does not
// depend on the worker count.
constexpr std::size_t kBatch = 64;

struct FrameStats {
    std::size_t bit_errors = 0;
    std::size_t iterations = 0;
    bool converged = true;
};

// RNG stream roles within one (point, frame) coordinate.
enum : std::uint64_t { kStreamBits = 1, kStreamChannel = 2, kStreamNoise = 3 };

std::vector<SparseSystem> build_trace_systems(const SimConfig& cfg) {
    const GridConfig grid = cfg.grid();
    const ChannelTrace trace = load_trace(cfg.trace_path);
    const ChannelTrace reduced = select_band(trace, cfg.bandwidth_hz);
    const DelayTimeGrid dt = to_delay_time(reduced, cfg.n_delay);
    const double target =
        std::min(grid.slot_duration() / cfg.interp_divisor, dt.snapshot_interval_s);
    const DelayTimeGrid fine = interpolate_time(dt, target);
    const std::size_t frames = num_frames(fine, grid);
    if (frames == 0)
        throw std::invalid_argument("trace shorter than one OTFS frame");
    std::vector<SparseSystem> systems;
    systems.reserve(frames);
    for (std::size_t k = 0; k < frames; ++k) {
        const TFChannel h = extract_frame(fine, grid, k);
        systems.push_back(SparseSystem::vectorize(tf_to_dd(h), cfg.tap_threshold));
    }
    return systems;
}

SparseSystem identity_system(const SimConfig& cfg) {
    DDChannel dd{CMat(cfg.n_delay, cfg.m_doppler)};
    dd.s_h.at(0, 0) = 1.0;
    return SparseSystem::vectorize(dd, cfg.tap_threshold);
}

FrameStats run_frame(const SimConfig& cfg, const GridConfig& grid,
                     const Alphabet& alphabet, const SparseSystem& system,
                     double ebn0_db, std::size_t point, std::size_t frame) {
    const std::size_t nm = grid.n_delay() * grid.m_doppler();
    const unsigned bps = alphabet.bits_per_symbol();

    Rng bits_rng(stream_seed({cfg.master_seed, point, frame, kStreamBits}));
    std::vector<unsigned> tx(nm);
    std::vector<Complex> x(nm);
    for (std::size_t i = 0; i < nm; ++i) {
        unsigned idx = 0;
        for (unsigned b = 0; b < bps; ++b) idx = (idx << 1) | static_cast<unsigned>(bits_rng.bit());
        tx[i] = idx;
        x[i] = alphabet.point(idx);
    }

    std::vector<Complex> y = system.apply(x);
    if (!std::isinf(ebn0_db) && ebn0_db < kEbn0Infinity) {
        const double var = awgn_variance(ebn0_db, alphabet);
        Rng noise_rng(stream_seed({cfg.master_seed, point, frame, kStreamNoise}));
        for (Complex& v : y) v += noise_rng.complex_gaussian(var);
    }

    FrameStats stats;
    if (cfg.detector == DetectorMode::HardDecision) {
        for (std::size_t i = 0; i < nm; ++i)
            stats.bit_errors += std::popcount(tx[i] ^ nearest_symbol(y[i], alphabet));
    } else {
        SymbolGrid yg(CMat(grid.n_delay(), grid.m_doppler()), Domain::DelayDoppler);
        yg.data.raw() = std::move(y);
        const MpResult res = mp_detect(yg, system, alphabet, cfg.mp);
        for (std::size_t i = 0; i < nm; ++i)
            stats.bit_errors += std::popcount(tx[i] ^ res.decisions[i]);
        stats.iterations = res.iterations_used;
        stats.converged = res.converged;
    }
    return stats;
}

}  // namespace

void SimConfig::validate() const {
    grid();  // throws on bad N/M/bandwidth/carrier
    if (qam_order != 4 && qam_order != 16 && qam_order != 64)
        throw std::invalid_argument("config: qam_order must be 4, 16 or 64");
    if (ebn0_list_db.empty())
        throw std::invalid_argument("config: ebn0_list_db must not be empty");
    for (std::size_t i = 1; i < ebn0_list_db.size(); ++i)
        if (!(ebn0_list_db[i] > ebn0_list_db[i - 1]))
            throw std::invalid_argument("config: ebn0_list_db must be strictly increasing");
    if (min_bit_errors == 0 || max_frames == 0)
        throw std::invalid_argument("config: stopping rule fields must be positive");
    if (source == ChannelSource::TraceFile && trace_path.empty())
        throw std::invalid_argument("config: trace channel source requires trace_path");
    if (!(mp.damping > 0.0) || mp.damping > 1.0)
        throw std::invalid_argument("config: mp_damping must be in (0, 1]");
    if (mp.max_iterations == 0 || !(mp.tolerance > 0.0))
        throw std::invalid_argument("config: bad message-passing parameters");
    if (tap_threshold < 0.0 || tap_threshold > 1.0)
        throw std::invalid_argument("config: tap_threshold must be in [0, 1]");
    if (!(interp_divisor >= 1.0))
        throw std::invalid_argument("config: interp_divisor must be >= 1");
}

SimConfig preset(const std::string& name) {
    SimConfig cfg;
    cfg.n_delay = 64;
    cfg.carrier_hz = 60e9;
    cfg.qam_order = 4;
    cfg.ebn0_list_db = {5.0, 10.0, 15.0, 20.0};
    cfg.source = ChannelSource::TraceFile;
    if (name == "bw5_m64") {
        cfg.bandwidth_hz = 5e6;
        cfg.m_doppler = 64;
    } else if (name == "bw40_m64") {
        cfg.bandwidth_hz = 40e6;
        cfg.m_doppler = 64;
    } else if (name == "bw120_m64") {
        cfg.bandwidth_hz = 120e6;
        cfg.m_doppler = 64;
    } else if (name == "bw40_m8") {
        cfg.bandwidth_hz = 40e6;
        cfg.m_doppler = 8;
    } else if (name == "bw40_m2") {
        cfg.bandwidth_hz = 40e6;
        cfg.m_doppler = 2;
    } else if (name == "synth_viterbo") {
        cfg.bandwidth_hz = 40e6;
        cfg.m_doppler = 64;
        cfg.source = ChannelSource::SyntheticFourTap;
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    return cfg;
}

namespace {

double parse_double(const std::string& v) {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters in number: " + v);
    return d;
}

std::size_t parse_size(const std::string& v) {
    std::size_t pos = 0;
    const long long d = std::stoll(v, &pos);
    if (pos != v.size() || d < 0) throw std::invalid_argument("bad nonnegative integer: " + v);
    return static_cast<std::size_t>(d);
}

}  // namespace

void apply_config_kv(SimConfig& cfg, const std::string& key, const std::string& value) {
    try {
        if (key == "preset") {
            cfg = preset(value);
        } else if (key == "n") {
            cfg.n_delay = parse_size(value);
        } else if (key == "m") {
            cfg.m_doppler = parse_size(value);
        } else if (key == "bandwidth_hz") {
            cfg.bandwidth_hz = parse_double(value);
        } else if (key == "carrier_hz") {
            cfg.carrier_hz = parse_double(value);
        } else if (key == "qam_order") {
            cfg.qam_order = static_cast<unsigned>(parse_size(value));
        } else if (key == "channel") {
            if (value == "synthetic_four_tap") cfg.source = ChannelSource::SyntheticFourTap;
            else if (value == "trace") cfg.source = ChannelSource::TraceFile;
            else if (value == "identity") cfg.source = ChannelSource::Identity;
            else throw std::invalid_argument("unknown channel source: " + value);
        } else if (key == "trace_path") {
            cfg.trace_path = value;
        } else if (key == "ebn0_list_db") {
            cfg.ebn0_list_db.clear();
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ','))
                cfg.ebn0_list_db.push_back(parse_double(item));
        } else if (key == "min_bit_errors") {
            cfg.min_bit_errors = parse_size(value);
        } else if (key == "max_frames") {
            cfg.max_frames = parse_size(value);
        } else if (key == "mp_max_iterations") {
            cfg.mp.max_iterations = parse_size(value);
        } else if (key == "mp_damping") {
            cfg.mp.damping = parse_double(value);
        } else if (key == "mp_tolerance") {
            cfg.mp.tolerance = parse_double(value);
        } else if (key == "detector") {
            if (value == "mp") cfg.detector = DetectorMode::MessagePassing;
            else if (value == "hard") cfg.detector = DetectorMode::HardDecision;
            else throw std::invalid_argument("unknown detector: " + value);
        } else if (key == "tap_threshold") {
            cfg.tap_threshold = parse_double(value);
        } else if (key == "seed") {
            cfg.master_seed = static_cast<std::uint64_t>(std::stoull(value));
        } else if (key == "interp_divisor") {
            cfg.interp_divisor = parse_double(value);
        } else {
            throw std::invalid_argument("unknown config key: " + key);
        }
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad value for " + key + ": " + value);
    }
}

SimConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file: " + path);
    SimConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected key=value");
        auto strip = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
        };
        apply_config_kv(cfg, strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
    return cfg;
}

BerRecord run_ber_point(const SimConfig& cfg, double ebn0_db, std::size_t ebn0_index) {
    cfg.validate();
    const GridConfig grid = cfg.grid();
    const Alphabet alphabet = Alphabet::make(cfg.qam_order);
    const std::size_t bits_per_frame =
        grid.n_delay() * grid.m_doppler() * alphabet.bits_per_symbol();

    // Channel systems shared by frames; noise variance baked in up front so
    // worker threads never mutate them.
    const double noise_var = (std::isinf(ebn0_db) || ebn0_db >= kEbn0Infinity)
                                 ? 0.0
                                 : awgn_variance(ebn0_db, alphabet);
    std::vector<SparseSystem> shared;
    if (cfg.source == ChannelSource::TraceFile) {
        shared = build_trace_systems(cfg);
    } else if (cfg.source == ChannelSource::Identity) {
        shared.push_back(identity_system(cfg));
    }
    for (SparseSystem& s : shared) s.set_noise_var(noise_var);

    BerRecord rec;
    rec.ebn0_db = ebn0_db;
    std::size_t iter_sum = 0;
    std::size_t converged_count = 0;

    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), kBatch));

    std::size_t next_frame = 0;
    while (rec.frames < cfg.max_frames && rec.bit_errors < cfg.min_bit_errors) {
        const std::size_t batch = std::min(kBatch, cfg.max_frames - rec.frames);
        std::vector<FrameStats> results(batch);
        auto work = [&](std::size_t worker) {
            for (std::size_t i = worker; i < batch; i += workers) {
                const std::size_t frame = next_frame + i;
                if (cfg.source == ChannelSource::SyntheticFourTap) {
                    SparseSystem sys = SparseSystem::vectorize(
                        taps_to_dd(synth_four_tap(
                            grid, stream_seed({cfg.master_seed, ebn0_index, frame,
                                               kStreamChannel}))),
                        cfg.tap_threshold);
                    sys.set_noise_var(noise_var);
                    results[i] = run_frame(cfg, grid, alphabet, sys, ebn0_db,
                                           ebn0_index, frame);
                } else {
                    const SparseSystem& sys = shared[frame % shared.size()];
                    results[i] = run_frame(cfg, grid, alphabet, sys, ebn0_db,
                                           ebn0_index, frame);
                }
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work, w);
        work(0);
        for (std::thread& t : pool) t.join();

        for (const FrameStats& fs : results) {
            rec.bit_errors += fs.bit_errors;
            iter_sum += fs.iterations;
            converged_count += fs.converged ? 1 : 0;
        }
        rec.frames += batch;
        next_frame += batch;
    }

    rec.bits = rec.frames * bits_per_frame;
    rec.ber = static_cast<double>(rec.bit_errors) / static_cast<double>(rec.bits);
    rec.mean_iterations =
        static_cast<double>(iter_sum) / static_cast<double>(rec.frames);
    rec.converged_fraction =
        static_cast<double>(converged_count) / static_cast<double>(rec.frames);
    return rec;
}

void write_csv_header(std::ostream& os) {
    os << "ebn0_db,frames,bits,bit_errors,ber,mean_iterations,converged_fraction\n";
}

void write_csv_row(std::ostream& os, const BerRecord& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%g,%zu,%zu,%zu,%.5e,%.6g,%.6g\n", r.ebn0_db,
                  r.frames, r.bits, r.bit_errors, r.ber, r.mean_iterations,
                  r.converged_fraction);
    os << buf;
}

std::vector<BerRecord> run_sweep(const SimConfig& cfg, std::ostream* csv) {
    cfg.validate();
    if (csv) {
        write_csv_header(*csv);
        csv->flush();
    }
    std::vector<BerRecord> records;
    for (std::size_t i = 0; i < cfg.ebn0_list_db.size(); ++i) {
        records.push_back(run_ber_point(cfg, cfg.ebn0_list_db[i], i));
        if (csv) {
            write_csv_row(*csv, records.back());
            csv->flush();
        }
    }
    return records;
}

}  // namespace otfs
