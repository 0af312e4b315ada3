#pragma once

#include <cstdint>
#include <vector>

#include "otfs/channel.hpp"
#include "otfs/qam.hpp"
#include "otfs/transforms.hpp"
#include "otfs/types.hpp"

namespace otfs {

/// Linearized sparse delay-Doppler system: vec(Y) = A vec(X) + noise, where
/// every observation row has the same P nonzeros at circulant offsets taken
/// from the retained taps of S_h. Grid cell (n,m) maps to flat index n*M + m.
class SparseSystem {
public:
    /// Keeps the cells of s_h with |gain| >= tap_threshold * max|gain| and
    /// builds the circular-offset adjacency. Throws on an all-zero channel.
    static SparseSystem vectorize(const DDChannel& s_h, double tap_threshold = 1e-3);

    std::size_t n() const { return n_; }
    std::size_t m() const { return m_; }
    std::size_t dimension() const { return n_ * m_; }
    std::size_t taps_per_row() const { return taps_.size(); }

    double noise_var() const { return noise_var_; }
    void set_noise_var(double v) { noise_var_ = v; }

    /// Variable index of neighbor slot k of observation d.
    std::size_t var_of(std::size_t d, std::size_t k) const { return obs_vars_[d * taps_.size() + k]; }
    Complex coeff(std::size_t k) const { return taps_[k].gain; }

    /// (observation, slot) pairs in which a variable participates.
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& obs_of(std::size_t c) const {
        return var_obs_[c];
    }

    /// Forward application; reproduces apply_dd over the retained taps.
    std::vector<Complex> apply(const std::vector<Complex>& x) const;

private:
    std::size_t n_ = 0, m_ = 0;
    std::vector<Tap> taps_;                   // retained taps (shared by every row)
    std::vector<std::uint32_t> obs_vars_;     // dimension * P neighbor indices
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> var_obs_;
    double noise_var_ = 1.0;
};

struct MpParams {
    std::size_t max_iterations = 30;
    double damping = 0.6;       // delta in (0, 1]
    double tolerance = 1e-4;    // max posterior probability change
};

struct MpResult {
    SymbolGrid x_hat;                       // decided symbols, delay-Doppler domain
    std::vector<unsigned> decisions;        // per-cell alphabet indices
    std::vector<std::vector<double>> posteriors;  // per-cell, length Q
    std::size_t iterations_used = 0;
    bool converged = false;
};

/// Gaussian-approximation message passing on the sparse bipartite graph.
/// Observation-side messages summarize residual interference as a Gaussian;
/// variable-side probability messages are damped with the configured factor.
/// The per-cell argmax of the final posteriors approximates the joint MAP
/// decision element by element; ties break toward the lowest alphabet index.
MpResult mp_detect(const SymbolGrid& y, const SparseSystem& system,
                   const Alphabet& alphabet, const MpParams& params);

}  // namespace otfs
