#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "absim/config_io.hpp"
#include "absim/dqn.hpp"
#include "absim/metrics.hpp"

namespace absim {

inline constexpr const char* kCodeVersion = "0.1.0";

enum class RunMode { Dqn, Tabular, Random, StaticOptimal };

RunMode parse_mode(const std::string& name);  // throws ConfigError
std::string mode_name(RunMode mode);

struct RunArtifacts {
    std::string out_dir;
    std::string manifest_path;
    std::string metrics_path;
    std::string config_snapshot_path;
    std::string checkpoint_path;  // empty for modes without one
    std::vector<EpisodeMetrics> metrics;
};

/// Executes one mode end to end: resolved-config snapshot, manifest,
/// per-episode metrics CSV and (for the learners) a checkpoint. All
/// artifacts are reproduced byte-identically by (config, seed).
RunArtifacts run_experiment(RunMode mode, const AppConfig& config, std::uint64_t seed,
                            const std::string& out_dir);

struct EvalArtifacts {
    std::string out_dir;
    std::string manifest_path;
    std::string metrics_path;
    EvalResult result;
};

/// Greedy evaluation of a stored policy (MLP checkpoint or Q-table file,
/// detected from the file header).
EvalArtifacts run_evaluation(const std::string& checkpoint_path, const AppConfig& config,
                             int episodes, std::uint64_t seed, const std::string& out_dir);

}  // namespace absim
