#include "otfs/qam.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace otfs {

namespace {

unsigned gray_to_binary(unsigned g) {
    for (unsigned shift = 1; shift < 16; shift <<= 1) g ^= g >> shift;
    return g;
}

// Amplitude of the axis level labeled by Gray bit group `bits` (k bits).
// Group 0 sits at +(L-1); walking the Gray sequence steps down by 2.
double axis_level(unsigned bits, unsigned levels) {
    const unsigned pos = gray_to_binary(bits);
    return static_cast<double>(levels - 1) - 2.0 * static_cast<double>(pos);
}

}  // namespace

Alphabet Alphabet::make(unsigned order) {
    if (order != 4 && order != 16 && order != 64)
        throw std::invalid_argument("Alphabet: order must be 4, 16 or 64");
    Alphabet a;
    a.order_ = order;
    unsigned bps = 0;
    while ((1u << bps) < order) ++bps;
    a.bits_per_symbol_ = bps;

    const unsigned levels = 1u << (bps / 2);
    // Mean energy of the unnormalized {±1,±3,...} lattice is 2(L^2-1)/3.
    const double scale =
        1.0 / std::sqrt(2.0 * (static_cast<double>(levels) * levels - 1.0) / 3.0);

    a.points_.resize(order);
    for (unsigned s = 0; s < order; ++s) {
        const unsigned i_bits = s >> (bps / 2);
        const unsigned q_bits = s & (levels - 1);
        a.points_[s] = scale * Complex(axis_level(i_bits, levels),
                                       axis_level(q_bits, levels));
    }
    return a;
}

std::vector<Complex> modulate(const std::vector<std::uint8_t>& bits,
                              const Alphabet& alphabet) {
    const unsigned bps = alphabet.bits_per_symbol();
    if (bits.size() % bps != 0)
        throw std::invalid_argument("modulate: bit count not divisible by bits/symbol");
    std::vector<Complex> out;
    out.reserve(bits.size() / bps);
    for (std::size_t i = 0; i < bits.size(); i += bps) {
        unsigned index = 0;
        for (unsigned b = 0; b < bps; ++b) index = (index << 1) | (bits[i + b] & 1u);
        out.push_back(alphabet.point(index));
    }
    return out;
}

unsigned nearest_symbol(Complex symbol, const Alphabet& alphabet) {
    unsigned best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    const auto& pts = alphabet.points();
    for (unsigned s = 0; s < pts.size(); ++s) {
        const double d = std::norm(symbol - pts[s]);
        if (d < best_d) {
            best_d = d;
            best = s;
        }
    }
    return best;
}

void append_symbol_bits(unsigned index, const Alphabet& alphabet,
                        std::vector<std::uint8_t>& out) {
    const unsigned bps = alphabet.bits_per_symbol();
    for (unsigned b = 0; b < bps; ++b)
        out.push_back(static_cast<std::uint8_t>((index >> (bps - 1 - b)) & 1u));
}

std::vector<std::uint8_t> hard_demap(Complex symbol, const Alphabet& alphabet) {
    std::vector<std::uint8_t> bits;
    append_symbol_bits(nearest_symbol(symbol, alphabet), alphabet, bits);
    return bits;
}

}  // namespace otfs
