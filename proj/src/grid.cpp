#include "otfs/grid.hpp"

#include <stdexcept>

namespace otfs {

GridConfig::GridConfig(std::size_t n_delay, std::size_t m_doppler, double bandwidth_hz,
                       double carrier_hz, double start_time_s)
    : n_delay_(n_delay),
      m_doppler_(m_doppler),
      bandwidth_hz_(bandwidth_hz),
      carrier_hz_(carrier_hz),
      start_time_s_(start_time_s) {
    if (n_delay_ == 0) throw std::invalid_argument("GridConfig: N must be positive");
    if (m_doppler_ == 0) throw std::invalid_argument("GridConfig: M must be positive");
    if (!(bandwidth_hz_ > 0.0))
        throw std::invalid_argument("GridConfig: bandwidth must be positive");
    if (carrier_hz_ < 0.0)
        throw std::invalid_argument("GridConfig: carrier must be nonnegative");
}

Resolutions derive_resolutions(const GridConfig& config) {
    return {config.delta_tau(), config.delta_nu(), config.frame_duration()};
}

double doppler_shift(double relative_speed_mps, double carrier_hz) {
    if (!(carrier_hz > 0.0))
        throw std::invalid_argument("doppler_shift: carrier must be positive");
    return relative_speed_mps * carrier_hz / kSpeedOfLight;
}

std::pair<double, double> grid_to_physical(const GridConfig& config,
                                           std::size_t f_index, std::size_t t_index) {
    if (f_index >= config.n_delay())
        throw std::out_of_range("grid_to_physical: f_index out of range");
    if (t_index >= config.m_doppler())
        throw std::out_of_range("grid_to_physical: t_index out of range");
    const double t_prime =
        static_cast<double>(t_index) /
            (static_cast<double>(config.m_doppler()) * config.delta_nu()) +
        config.start_time_s();
    const double f_prime =
        static_cast<double>(f_index) /
            (static_cast<double>(config.n_delay()) * config.delta_tau()) +
        config.carrier_hz();
    return {t_prime, f_prime};
}

}  // namespace otfs
