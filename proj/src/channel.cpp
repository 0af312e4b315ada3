#include "otfs/channel.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "otfs/rng.hpp"

namespace otfs {

void TapSet::validate() const {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const Tap& t : taps) {
        if (t.delay_index >= n_delay || t.doppler_index >= m_doppler)
            throw std::invalid_argument("TapSet: tap index out of range");
        if (!seen.insert({t.delay_index, t.doppler_index}).second)
            throw std::invalid_argument("TapSet: duplicate (delay, Doppler) pair");
    }
}

TapSet synth_four_tap(const GridConfig& config, std::uint64_t rng_seed) {
    if (config.n_delay() < 4 || config.m_doppler() < 4)
        throw std::invalid_argument("synth_four_tap: grid must be at least 4x4");
    Rng rng(rng_seed);
    TapSet set;
    set.n_delay = config.n_delay();
    set.m_doppler = config.m_doppler();
    for (std::size_t k = 0; k < 4; ++k)
        set.taps.push_back({k, k, rng.complex_gaussian(0.25)});
    return set;
}

DDChannel taps_to_dd(const TapSet& taps) {
    taps.validate();
    DDChannel dd{CMat(taps.n_delay, taps.m_doppler)};
    for (const Tap& t : taps.taps) dd.s_h.at(t.delay_index, t.doppler_index) = t.gain;
    return dd;
}

DDChannel tf_to_dd(const TFChannel& h) {
    // The sfft kernel scaled down by sqrt(NM) inverts the unnormalized
    // isfft-kernel image of S_h; fixed by the convolution-theorem identity
    // apply_dd(tf_to_dd(H), X) == sfft(apply_tf(H, isfft(X))).
    CMat s = sfft_mat(h.h);
    const double scale = 1.0 / std::sqrt(static_cast<double>(h.h.rows()) *
                                         static_cast<double>(h.h.cols()));
    for (Complex& v : s.raw()) v *= scale;
    return {std::move(s)};
}

TFChannel dd_to_tf(const DDChannel& s_h) {
    CMat h = isfft_mat(s_h.s_h);
    const double scale = std::sqrt(static_cast<double>(s_h.s_h.rows()) *
                                   static_cast<double>(s_h.s_h.cols()));
    for (Complex& v : h.raw()) v *= scale;
    return {std::move(h)};
}

SymbolGrid apply_tf(const TFChannel& h, const SymbolGrid& u) {
    if (u.domain != Domain::TimeFrequency)
        throw std::invalid_argument("apply_tf: grid must be in the time-frequency domain");
    if (!h.h.same_shape(u.data))
        throw std::invalid_argument("apply_tf: dimension mismatch");
    SymbolGrid r = u;
    for (std::size_t i = 0; i < r.data.size(); ++i)
        r.data.raw()[i] = h.h.raw()[i] * u.data.raw()[i];
    return r;
}

SymbolGrid apply_dd(const DDChannel& s_h, const SymbolGrid& x) {
    if (x.domain != Domain::DelayDoppler)
        throw std::invalid_argument("apply_dd: grid must be in the delay-Doppler domain");
    if (!s_h.s_h.same_shape(x.data))
        throw std::invalid_argument("apply_dd: dimension mismatch");
    const std::size_t n = x.n(), m = x.m();
    SymbolGrid y(n, m, Domain::DelayDoppler);
    for (std::size_t np = 0; np < n; ++np)
        for (std::size_t mp = 0; mp < m; ++mp) {
            const Complex g = s_h.s_h.at(np, mp);
            if (g == Complex{}) continue;
            for (std::size_t nn = 0; nn < n; ++nn)
                for (std::size_t mm = 0; mm < m; ++mm)
                    y.data.at(nn, mm) +=
                        g * x.data.at((nn + n - np) % n, (mm + m - mp) % m);
        }
    return y;
}

double awgn_variance(double ebn0_db, const Alphabet& alphabet) {
    const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
    return 1.0 / (static_cast<double>(alphabet.bits_per_symbol()) * ebn0);
}

SymbolGrid add_awgn(const SymbolGrid& y, double ebn0_db, const Alphabet& alphabet,
                    std::uint64_t rng_seed) {
    if (std::isinf(ebn0_db) || ebn0_db >= kEbn0Infinity) return y;
    const double var = awgn_variance(ebn0_db, alphabet);
    Rng rng(rng_seed);
    SymbolGrid out = y;
    for (Complex& v : out.data.raw()) v += rng.complex_gaussian(var);
    return out;
}

}  // namespace otfs
