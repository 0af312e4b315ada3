#pragma once

#include <cstdint>
#include <vector>

#include "otfs/types.hpp"

namespace otfs {

/// Unit-mean-energy square QAM alphabet with per-axis Gray labeling.
///
/// A symbol carries 2k bits for order 4^k; the first k bits select the
/// in-phase level, the last k bits the quadrature level (MSB first).
/// Within one axis the bit group is the binary-reflected Gray code of the
/// level position, so neighboring levels differ in exactly one bit.
/// Group 0...0 maps to the most positive level; for 4-QAM bits 00 give
/// (+1+j)/sqrt(2).
class Alphabet {
public:
    /// order must be 4, 16 or 64; throws std::invalid_argument otherwise.
    static Alphabet make(unsigned order);

    unsigned order() const { return order_; }
    unsigned bits_per_symbol() const { return bits_per_symbol_; }
    const std::vector<Complex>& points() const { return points_; }

    /// Constellation point of the symbol whose bit pattern, read MSB first,
    /// equals `index`.
    Complex point(unsigned index) const { return points_[index]; }

private:
    Alphabet() = default;
    unsigned order_ = 0;
    unsigned bits_per_symbol_ = 0;
    std::vector<Complex> points_;
};

/// Maps a bit sequence to constellation symbols, bits_per_symbol at a time.
/// Throws std::invalid_argument when the length is not divisible.
std::vector<Complex> modulate(const std::vector<std::uint8_t>& bits,
                              const Alphabet& alphabet);

/// Index of the nearest constellation point (Euclidean distance); ties break
/// toward the lexicographically smallest bit pattern, i.e. the lowest index.
unsigned nearest_symbol(Complex symbol, const Alphabet& alphabet);

/// Bits of the nearest constellation point, MSB first.
std::vector<std::uint8_t> hard_demap(Complex symbol, const Alphabet& alphabet);

/// Appends the bits of symbol `index` (MSB first) to `out`.
void append_symbol_bits(unsigned index, const Alphabet& alphabet,
                        std::vector<std::uint8_t>& out);

}  // namespace otfs
