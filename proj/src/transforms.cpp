#include "otfs/transforms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace otfs {

namespace {

// Direct O(L^2) DFT along one axis with sign-configurable kernel
// exp(sign * j 2 pi k l / L). Grid sizes in this problem stay small
// (measured traces have ~100 tones), so no FFT backend is needed and
// non-power-of-two sizes come for free.
std::vector<Complex> dft_twiddles(std::size_t len, int sign) {
    std::vector<Complex> w(len);
    for (std::size_t k = 0; k < len; ++k) {
        const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(k) /
                           static_cast<double>(len);
        w[k] = {std::cos(ang), std::sin(ang)};
    }
    return w;
}

// Transforms every column (axis 0, length = rows) when axis == 0,
// every row (axis 1, length = cols) when axis == 1.
CMat dft_axis(const CMat& in, int axis, int sign) {
    const std::size_t rows = in.rows(), cols = in.cols();
    const std::size_t len = (axis == 0) ? rows : cols;
    const auto w = dft_twiddles(len, sign);
    CMat out(rows, cols);
    if (axis == 0) {
        for (std::size_t c = 0; c < cols; ++c)
            for (std::size_t k = 0; k < len; ++k) {
                Complex acc = 0.0;
                for (std::size_t l = 0; l < len; ++l)
                    acc += in.at(l, c) * w[(k * l) % len];
                out.at(k, c) = acc;
            }
    } else {
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t k = 0; k < len; ++k) {
                Complex acc = 0.0;
                for (std::size_t l = 0; l < len; ++l)
                    acc += in.at(r, l) * w[(k * l) % len];
                out.at(r, k) = acc;
            }
    }
    return out;
}

}  // namespace

CMat isfft_mat(const CMat& x) {
    // +j along delay/frequency axis, -j along Doppler/time axis.
    CMat u = dft_axis(dft_axis(x, 0, +1), 1, -1);
    const double scale =
        1.0 / std::sqrt(static_cast<double>(x.rows()) * static_cast<double>(x.cols()));
    for (Complex& v : u.raw()) v *= scale;
    return u;
}

CMat sfft_mat(const CMat& u) {
    CMat x = dft_axis(dft_axis(u, 0, -1), 1, +1);
    const double scale =
        1.0 / std::sqrt(static_cast<double>(u.rows()) * static_cast<double>(u.cols()));
    for (Complex& v : x.raw()) v *= scale;
    return x;
}

SymbolGrid isfft(const SymbolGrid& x) {
    if (x.domain != Domain::DelayDoppler)
        throw std::invalid_argument("isfft: input must be in the delay-Doppler domain");
    return {isfft_mat(x.data), Domain::TimeFrequency};
}

SymbolGrid sfft(const SymbolGrid& u) {
    if (u.domain != Domain::TimeFrequency)
        throw std::invalid_argument("sfft: input must be in the time-frequency domain");
    return {sfft_mat(u.data), Domain::DelayDoppler};
}

}  // namespace otfs
