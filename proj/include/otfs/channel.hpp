#pragma once

#include <cstdint>
#include <vector>

#include "otfs/grid.hpp"
#include "otfs/qam.hpp"
#include "otfs/transforms.hpp"
#include "otfs/types.hpp"

namespace otfs {

struct Tap {
    std::size_t delay_index;    // mod N
    std::size_t doppler_index;  // mod M
    Complex gain;
};

/// Sparse delay-Doppler channel: a handful of (delay, Doppler, gain) taps.
struct TapSet {
    std::size_t n_delay = 0;
    std::size_t m_doppler = 0;
    std::vector<Tap> taps;

    /// Throws std::invalid_argument on out-of-range indices or duplicate
    /// (delay, Doppler) pairs.
    void validate() const;
};

/// Dense delay-Doppler spreading grid S_h.
struct DDChannel {
    CMat s_h;  // N x M
};

/// Per-subcarrier, per-slot flat channel gains H[f,t].
struct TFChannel {
    CMat h;  // N x M
};

/// Four equal-power Rayleigh taps at offsets (0,0),(1,1),(2,2),(3,3);
/// per-tap gain ~ CN(0, 1/4) so the total mean channel power is 1.
/// Requires N >= 4 and M >= 4.
TapSet synth_four_tap(const GridConfig& config, std::uint64_t rng_seed);

DDChannel taps_to_dd(const TapSet& taps);

/// Delay-Doppler dual of H, defined so that
///   apply_dd(tf_to_dd(H), X) == sfft(apply_tf(H, isfft(X)))
/// holds exactly (2-D convolution theorem under the isfft kernel).
DDChannel tf_to_dd(const TFChannel& h);

/// Exact inverse of tf_to_dd.
TFChannel dd_to_tf(const DDChannel& s_h);

/// Element-wise product R = H o U on the time-frequency grid.
SymbolGrid apply_tf(const TFChannel& h, const SymbolGrid& u);

/// 2-D circular convolution Y[n,m] = sum S_h[n',m'] X[(n-n') mod N, (m-m') mod M].
SymbolGrid apply_dd(const DDChannel& s_h, const SymbolGrid& x);

inline constexpr double kEbn0Infinity = 1.0e300;  // treat anything above as noiseless

/// Per-element noise variance for a unit-energy alphabet at the given Eb/N0.
double awgn_variance(double ebn0_db, const Alphabet& alphabet);

/// Adds i.i.d. circularly-symmetric complex Gaussian noise of variance
/// 1/(log2(Q) * 10^(ebn0_db/10)) per grid element. An infinite ebn0_db
/// returns the input unchanged.
SymbolGrid add_awgn(const SymbolGrid& y, double ebn0_db, const Alphabet& alphabet,
                    std::uint64_t rng_seed);

}  // namespace otfs
