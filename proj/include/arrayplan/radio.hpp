#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace arrayplan {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s

inline double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts / 1e-3); }

struct RadioConfig {
    double carrier_frequency = 3.5e9; // Hz
    int antennas_per_array = 16;      // transmit gain equals this count
    double receiver_gain = 1.0;
    double min_power_dbm = -94.0;     // receiver sensitivity
    double min_distance = 1.0;        // meters, clamp for the 1/d^2 law

    double wavelength() const { return kSpeedOfLight / carrier_frequency; }
    double transmitter_gain() const { return static_cast<double>(antennas_per_array); }
    double min_power_watts() const { return dbm_to_watts(min_power_dbm); }
};

inline void validate(const RadioConfig& cfg) {
    if (!(cfg.carrier_frequency > 0.0)) throw std::invalid_argument("radio: carrier frequency must be positive");
    if (cfg.antennas_per_array <= 0) throw std::invalid_argument("radio: antenna count must be positive");
    if (!(cfg.receiver_gain > 0.0)) throw std::invalid_argument("radio: receiver gain must be positive");
    if (!(cfg.min_distance > 0.0)) throw std::invalid_argument("radio: minimum distance must be positive");
}

// Free-space gain between isotropic-equivalent antennas at distance d,
// clamped below min_distance to keep the law finite at the array itself.
inline double free_space_gain(double distance, const RadioConfig& cfg) {
    const double d = distance < cfg.min_distance ? cfg.min_distance : distance;
    const double lambda = cfg.wavelength();
    constexpr double pi = std::numbers::pi;
    return cfg.transmitter_gain() * cfg.receiver_gain * lambda * lambda / (16.0 * pi * pi * d * d);
}

} // namespace arrayplan
