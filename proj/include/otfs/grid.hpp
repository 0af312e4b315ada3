#pragma once

#include <cstddef>
#include <tuple>

namespace otfs {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, exact

/// OTFS delay-Doppler grid parameters. The delay resolution is 1/B
/// (critical sampling) and the Doppler resolution follows from
/// delta_nu = 1/(N*M*delta_tau); both are derived, never stored.
class GridConfig {
public:
    /// Throws std::invalid_argument on nonpositive N, M or bandwidth,
    /// or negative carrier.
    GridConfig(std::size_t n_delay, std::size_t m_doppler, double bandwidth_hz,
               double carrier_hz = 0.0, double start_time_s = 0.0);

    std::size_t n_delay() const { return n_delay_; }
    std::size_t m_doppler() const { return m_doppler_; }
    double bandwidth_hz() const { return bandwidth_hz_; }
    double carrier_hz() const { return carrier_hz_; }
    double start_time_s() const { return start_time_s_; }

    double delta_tau() const { return 1.0 / bandwidth_hz_; }
    double delta_nu() const {
        return 1.0 / (static_cast<double>(n_delay_ * m_doppler_) * delta_tau());
    }
    double slot_duration() const { return static_cast<double>(n_delay_) * delta_tau(); }
    double frame_duration() const {
        return static_cast<double>(n_delay_ * m_doppler_) * delta_tau();
    }

private:
    std::size_t n_delay_;
    std::size_t m_doppler_;
    double bandwidth_hz_;
    double carrier_hz_;
    double start_time_s_;
};

struct Resolutions {
    double delta_tau_s;
    double delta_nu_hz;
    double frame_duration_s;
};

Resolutions derive_resolutions(const GridConfig& config);

/// Doppler shift of a reflector moving at `relative_speed_mps` seen at
/// `carrier_hz`, using the exact speed of light.
double doppler_shift(double relative_speed_mps, double carrier_hz);

/// Physical (time, frequency) of grid cell (f_index, t_index).
/// Throws std::out_of_range when an index exceeds the grid.
std::pair<double, double> grid_to_physical(const GridConfig& config,
                                           std::size_t f_index, std::size_t t_index);

}  // namespace otfs
