#pragma once

#include <string>
#include <vector>

namespace absim {

/// One row of the per-episode metrics schema shared by every run mode, so
/// training curves and baselines are directly comparable.
struct EpisodeMetrics {
    int episode = 0;                 // 1-based
    double cumulative_reward = 0.0;  // sum of raw per-slot SNR rewards
    double mean_c_u = 0.0;
    double mean_c_j = 0.0;
    double secrecy_capacity = 0.0;   // mean positive capacity gap over the episode
    double final_dx = 0.0;
    double final_dy = 0.0;
    double final_power = 0.0;
    double epsilon = 0.0;            // exploration rate in effect (0 for greedy modes)
};

extern const char* const kMetricsHeader;

/// Shortest round-trip decimal form, locale-independent.
std::string format_double(double v);

std::string metrics_to_csv(const std::vector<EpisodeMetrics>& rows);

/// Writes header + one row per episode. Throws std::runtime_error on I/O failure.
void write_metrics_csv(const std::string& path, const std::vector<EpisodeMetrics>& rows);

}  // namespace absim
