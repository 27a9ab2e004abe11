#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "absim/env.hpp"
#include "absim/metrics.hpp"
#include "absim/rng.hpp"

namespace absim {

/// Discrete state lattice spanned by the UAV grid positions and the
/// reachable power levels. Only defined when the bounds, the start position
/// and the power values all sit on the step lattice.
struct Lattice {
    int nx = 0;
    int ny = 0;
    int np = 0;
    double grid_step = 1.0;
    double p1 = 0.1;

    /// Throws ConfigError when the world is not lattice-aligned.
    static Lattice from_config(const WorldConfig& config);

    int n_states() const { return nx * ny * np; }
    int state_index(int ix, int iy, int ip) const { return (ix * ny + iy) * np + ip; }
    int x_index(double x) const;       // nearest lattice index, range-checked
    int y_index(double y) const;
    int power_index(double p) const;

    bool operator==(const Lattice&) const = default;
};

/// Lowest-index argmax over a Q row with a relative tie band, so values that
/// are equal up to convergence error resolve the same way as exact ties.
int greedy_action(std::span<const double> q, double tie_tol = 1e-9);

/// Dense state-action value table over a lattice.
class QTable {
public:
    explicit QTable(const Lattice& lattice);  // zero-filled

    const Lattice& lattice() const { return lattice_; }
    std::size_t size() const { return values_.size(); }

    double& at(int ix, int iy, int ip, int action);
    double at(int ix, int iy, int ip, int action) const;
    std::span<double> row(int ix, int iy, int ip);
    std::span<const double> row(int ix, int iy, int ip) const;

    double max_value(int ix, int iy, int ip) const;
    int greedy(int ix, int iy, int ip, double tie_tol = 1e-9) const;

    /// Seeded uniform fill in [-scale, scale].
    void randomize(std::uint64_t seed, double scale);

    double sup_norm_diff(const QTable& other) const;

    /// Versioned flat text file: one (ix, iy, ip, action, value) row per entry.
    void save(const std::string& path) const;
    static QTable load(const std::string& path);

private:
    Lattice lattice_;
    std::vector<double> values_;
};

struct QLearnParams {
    double alpha = 0.1;            // learning rate, (0, 1]
    double gamma = 0.9;            // discount, (0, 1)
    double epsilon_initial = 1.0;
    double epsilon_min = 0.05;
    double epsilon_decay = 0.995;  // per-episode multiplicative factor
    int episodes = 2000;
    bool random_init = false;      // seeded uniform(-0.01, 0.01) table instead of zeros

    void validate() const;  // throws ConfigError
};

/// (1 - alpha) * q_old + alpha * (reward + gamma * max_next_q).
double q_update(double q_old, double reward, double max_next_q, const QLearnParams& params);

struct TabularChoice {
    Action action;
    bool explored = false;
};

/// Epsilon-greedy over a table row: uniform with probability epsilon,
/// otherwise the banded lowest-index argmax.
TabularChoice select_tabular_action(const QTable& table, int ix, int iy, int ip,
                                    double epsilon, Rng& rng);

struct TabularResult {
    QTable table;
    std::vector<EpisodeMetrics> episodes;
};

/// Episodic tabular Q-learning over the world lattice. The update bootstraps
/// through the episode horizon (time-out, not an absorbing terminal), so the
/// learned table targets the infinite-horizon discounted optimum.
TabularResult train_tabular(const WorldConfig& config, const QLearnParams& params,
                            std::uint64_t seed);

struct QSolveResult {
    std::vector<double> q;  // n_states x n_actions, row-major
    int sweeps = 0;
    double residual = 0.0;
    std::vector<double> residual_history;  // sup-norm change per sweep
};

/// Synchronous Q-value iteration for an arbitrary finite deterministic MDP.
/// Stops when the sup-norm residual drops below tol.
QSolveResult solve_deterministic_q(int n_states, int n_actions,
                                   const std::function<int(int, int)>& next_state,
                                   const std::function<double(int, int)>& reward,
                                   double gamma, double tol, int max_sweeps = 200000);

/// Exact Q function of the discounted lattice MDP, computed by sweeping
/// Bellman backups until the residual drops below tol. Deterministic;
/// independent of the environment stepping code.
QTable value_iteration(const WorldConfig& config, double gamma, double tol,
                       int max_sweeps = 200000,
                       std::vector<double>* residual_history = nullptr);

}  // namespace absim
