#pragma once

#include "otfs/types.hpp"

namespace otfs {

enum class Domain { DelayDoppler, TimeFrequency };

/// N x M symbol matrix tagged with the domain it currently lives in.
/// Rows index delay (DD) or frequency (TF); columns index Doppler or time.
/// The tag only changes by going through isfft/sfft.
struct SymbolGrid {
    CMat data;
    Domain domain = Domain::DelayDoppler;

    SymbolGrid() = default;
    SymbolGrid(std::size_t n, std::size_t m, Domain d) : data(n, m), domain(d) {}
    SymbolGrid(CMat mat, Domain d) : data(std::move(mat)), domain(d) {}

    std::size_t n() const { return data.rows(); }
    std::size_t m() const { return data.cols(); }
};

/// Inverse symplectic DFT, delay-Doppler -> time-frequency:
///   U[f,t] = (1/sqrt(NM)) sum_{n,m} X[n,m] exp(-j2pi(t m / M - f n / N))
/// Note the asymmetric signs: inverse DFT along the delay axis, forward DFT
/// along the Doppler axis. All other modules inherit this convention.
SymbolGrid isfft(const SymbolGrid& x);

/// Exact inverse of isfft, time-frequency -> delay-Doppler.
SymbolGrid sfft(const SymbolGrid& u);

/// Transform kernels on bare matrices (no domain bookkeeping); used by the
/// channel module to move channel matrices between domains.
CMat isfft_mat(const CMat& x);
CMat sfft_mat(const CMat& u);

}  // namespace otfs
