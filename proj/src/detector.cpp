#include "otfs/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace otfs {

namespace {
constexpr double kNoiseFloor = 1e-12;
}

SparseSystem SparseSystem::vectorize(const DDChannel& s_h, double tap_threshold) {
    const std::size_t n = s_h.s_h.rows(), m = s_h.s_h.cols();
    double max_mag = 0.0;
    for (const Complex& v : s_h.s_h.raw()) max_mag = std::max(max_mag, std::abs(v));
    if (max_mag == 0.0)
        throw std::invalid_argument("vectorize: all-zero channel");

    SparseSystem sys;
    sys.n_ = n;
    sys.m_ = m;
    const double cut = tap_threshold * max_mag;
    for (std::size_t np = 0; np < n; ++np)
        for (std::size_t mp = 0; mp < m; ++mp) {
            const Complex g = s_h.s_h.at(np, mp);
            if (std::abs(g) >= cut && g != Complex{}) sys.taps_.push_back({np, mp, g});
        }

    const std::size_t p = sys.taps_.size();
    const std::size_t nm = n * m;
    sys.obs_vars_.resize(nm * p);
    sys.var_obs_.assign(nm, {});
    for (std::size_t nn = 0; nn < n; ++nn)
        for (std::size_t mm = 0; mm < m; ++mm) {
            const std::size_t d = nn * m + mm;
            for (std::size_t k = 0; k < p; ++k) {
                const Tap& t = sys.taps_[k];
                const std::size_t c = ((nn + n - t.delay_index) % n) * m +
                                      ((mm + m - t.doppler_index) % m);
                sys.obs_vars_[d * p + k] = static_cast<std::uint32_t>(c);
                sys.var_obs_[c].emplace_back(static_cast<std::uint32_t>(d),
                                             static_cast<std::uint32_t>(k));
            }
        }
    return sys;
}

std::vector<Complex> SparseSystem::apply(const std::vector<Complex>& x) const {
    if (x.size() != dimension())
        throw std::invalid_argument("SparseSystem::apply: dimension mismatch");
    const std::size_t p = taps_.size();
    std::vector<Complex> y(dimension());
    for (std::size_t d = 0; d < y.size(); ++d) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < p; ++k)
            acc += taps_[k].gain * x[obs_vars_[d * p + k]];
        y[d] = acc;
    }
    return y;
}

MpResult mp_detect(const SymbolGrid& y, const SparseSystem& system,
                   const Alphabet& alphabet, const MpParams& params) {
    if (y.domain != Domain::DelayDoppler)
        throw std::invalid_argument("mp_detect: observations must be delay-Doppler");
    if (y.n() != system.n() || y.m() != system.m())
        throw std::invalid_argument("mp_detect: dimension mismatch");
    if (!(params.damping > 0.0) || params.damping > 1.0)
        throw std::invalid_argument("mp_detect: damping must be in (0, 1]");
    for (const Complex& v : y.data.raw())
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("mp_detect: non-finite observation");

    const std::size_t nm = system.dimension();
    const std::size_t p = system.taps_per_row();
    const unsigned q = alphabet.order();
    const auto& pts = alphabet.points();
    const double sigma2 = std::max(system.noise_var(), kNoiseFloor);
    const double uniform = 1.0 / static_cast<double>(q);

    // msgs[(d*P + k)*Q + a]: probability message from variable var_of(d,k)
    // toward observation d.
    std::vector<double> msgs(nm * p * q, uniform);
    std::vector<double> posterior(nm * q, uniform);

    std::vector<Complex> mu(nm * p);     // interference mean excluding the target
    std::vector<double> tau(nm * p);     // interference variance + sigma^2
    std::vector<Complex> mean_k(p);
    std::vector<double> var_k(p);
    std::vector<double> loglik;          // per attached observation, Q entries
    std::vector<double> total(q);

    MpResult result;
    result.iterations_used = 0;
    result.converged = false;

    for (std::size_t iter = 0; iter < params.max_iterations; ++iter) {
        ++result.iterations_used;

        // Observation pass: Gaussian summaries of residual interference.
        for (std::size_t d = 0; d < nm; ++d) {
            Complex mean_all = 0.0;
            double var_all = 0.0;
            for (std::size_t k = 0; k < p; ++k) {
                const double* pm = &msgs[(d * p + k) * q];
                Complex m1 = 0.0;
                double m2 = 0.0;
                for (unsigned a = 0; a < q; ++a) {
                    m1 += pm[a] * pts[a];
                    m2 += pm[a] * std::norm(pts[a]);
                }
                mean_k[k] = system.coeff(k) * m1;
                var_k[k] = std::norm(system.coeff(k)) * (m2 - std::norm(m1));
                mean_all += mean_k[k];
                var_all += var_k[k];
            }
            for (std::size_t k = 0; k < p; ++k) {
                mu[d * p + k] = mean_all - mean_k[k];
                tau[d * p + k] = std::max(var_all - var_k[k], 0.0) + sigma2;
            }
        }

        // Variable pass: damped probability updates plus posteriors.
        double max_change = 0.0;
        for (std::size_t c = 0; c < nm; ++c) {
            const auto& attached = system.obs_of(c);
            loglik.assign(attached.size() * q, 0.0);
            std::fill(total.begin(), total.end(), 0.0);
            for (std::size_t e = 0; e < attached.size(); ++e) {
                const std::size_t d = attached[e].first;
                const std::size_t k = attached[e].second;
                const Complex h = system.coeff(k);
                const Complex resid = y.data.raw()[d] - mu[d * p + k];
                const double inv_tau = 1.0 / tau[d * p + k];
                for (unsigned a = 0; a < q; ++a) {
                    const double ll = -std::norm(resid - h * pts[a]) * inv_tau;
                    loglik[e * q + a] = ll;
                    total[a] += ll;
                }
            }

            auto softmax_into = [&](const double* logp, double* out, double keep) {
                double mx = logp[0];
                for (unsigned a = 1; a < q; ++a) mx = std::max(mx, logp[a]);
                double sum = 0.0;
                for (unsigned a = 0; a < q; ++a) sum += std::exp(logp[a] - mx);
                for (unsigned a = 0; a < q; ++a) {
                    const double raw = std::exp(logp[a] - mx) / sum;
                    out[a] = params.damping * raw + keep * out[a];
                }
            };

            const double keep = 1.0 - params.damping;
            // Extrinsic messages (exclude the destination observation).
            std::vector<double> log_excl(q);
            for (std::size_t e = 0; e < attached.size(); ++e) {
                const std::size_t d = attached[e].first;
                const std::size_t k = attached[e].second;
                for (unsigned a = 0; a < q; ++a)
                    log_excl[a] = total[a] - loglik[e * q + a];
                softmax_into(log_excl.data(), &msgs[(d * p + k) * q], keep);
            }
            // Posterior from all attached observations, undamped: with no
            // interference left the posterior settles as soon as the
            // messages do.
            double* post = &posterior[c * q];
            std::vector<double> old(post, post + q);
            {
                double mx = total[0];
                for (unsigned a = 1; a < q; ++a) mx = std::max(mx, total[a]);
                double sum = 0.0;
                for (unsigned a = 0; a < q; ++a) sum += std::exp(total[a] - mx);
                for (unsigned a = 0; a < q; ++a) post[a] = std::exp(total[a] - mx) / sum;
            }
            for (unsigned a = 0; a < q; ++a)
                max_change = std::max(max_change, std::abs(post[a] - old[a]));
        }

        if (max_change < params.tolerance) {
            result.converged = true;
            break;
        }
    }

    result.x_hat = SymbolGrid(system.n(), system.m(), Domain::DelayDoppler);
    result.decisions.resize(nm);
    result.posteriors.assign(nm, std::vector<double>(q));
    for (std::size_t c = 0; c < nm; ++c) {
        unsigned best = 0;
        for (unsigned a = 1; a < q; ++a)
            if (posterior[c * q + a] > posterior[c * q + best]) best = a;
        result.decisions[c] = best;
        result.x_hat.data.raw()[c] = pts[best];
        std::copy(&posterior[c * q], &posterior[c * q + q], result.posteriors[c].begin());
    }
    return result;
}

}  // namespace otfs
