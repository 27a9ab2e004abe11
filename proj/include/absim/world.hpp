#pragma once

#include <stdexcept>

#include "absim/channel.hpp"

namespace absim {

/// Raised when a configuration value violates an invariant. The message
/// always names the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Static description of one scenario: node placement, channel constants,
/// the motion/power steps, and the episode length.
struct WorldConfig {
    Position3 ue_pos{50.0, 50.0, 0.0};
    Position3 eve_pos{70.0, 30.0, 0.0};
    Position3 uav_start{0.0, 0.0, 10.0};  // z must equal altitude
    double altitude = 10.0;               // m, fixed flight height
    double bound_x = 100.0;               // m
    double bound_y = 100.0;               // m
    double grid_step = 1.0;               // m moved per motion action
    double p_max = 1.0;                   // W
    double p1 = 0.1;                      // W changed per power action
    double initial_power = 0.5;           // W at reset
    double ref_snr = 1.0e4;               // linear SNR at 1 m reference
    int slots_per_episode = 100;          // T
    bool observe_power = false;           // append normalized power to the net input
    bool random_start = false;            // uniform grid start instead of uav_start

    ChannelParams channel_params() const {
        return ChannelParams{ref_snr, p_max, bound_x, bound_y};
    }

    /// Throws ConfigError naming the first offending field.
    void validate() const;
};

}  // namespace absim
