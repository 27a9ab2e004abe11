#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

#include "absim/env.hpp"
#include "absim/metrics.hpp"
#include "absim/neural.hpp"
#include "absim/rng.hpp"

namespace absim {

/// One stored transition. reward is the value the learner trains on
/// (normalized by the analytic optimum unless raw_reward is set); the
/// pre/post powers let observe_power worlds rebuild network inputs.
struct Experience {
    State state;
    double power_before = 0.0;
    Action action;
    double reward = 0.0;
    State next_state;
    double power_after = 0.0;
    bool done = false;
};

/// Bounded FIFO buffer of the latest experiences; pushing past the capacity
/// evicts exactly the oldest element.
class ReplayMemory {
public:
    explicit ReplayMemory(std::size_t capacity);

    void push(const Experience& e);

    /// k experiences drawn uniformly without replacement.
    /// Throws std::logic_error when fewer than k are stored.
    std::vector<Experience> sample(std::size_t k, Rng& rng) const;

    std::size_t size() const { return buf_.size(); }
    std::size_t capacity() const { return capacity_; }
    const Experience& operator[](std::size_t i) const { return buf_[i]; }  // 0 = oldest

private:
    std::size_t capacity_;
    std::deque<Experience> buf_;
};

struct DqnParams {
    double gamma = 0.95;
    double epsilon_initial = 1.0;
    double epsilon_min = 0.05;
    double epsilon_decay = 0.995;   // per-episode multiplicative factor
    std::size_t replay_capacity = 10000;
    std::size_t batch_size = 32;
    int target_sync_period = 100;   // slots between target refreshes (B)
    double learning_rate = 1e-3;
    int episodes = 1000;            // K
    std::vector<int> hidden_layers{64, 64};
    bool raw_reward = false;        // train on raw SNR instead of normalized
    std::uint64_t seed = 0;

    void validate() const;  // throws ConfigError
};

/// Maps (state, power) to the normalized network input: offsets divided by
/// the bounds and altitude, plus power / p_max when observe_power is set.
class StateEncoder {
public:
    explicit StateEncoder(const WorldConfig& config);

    int dim() const { return observe_power_ ? 4 : 3; }
    std::vector<double> encode(const State& s, double power) const;

private:
    double inv_bound_x_;
    double inv_bound_y_;
    double inv_altitude_;
    double inv_p_max_;
    bool observe_power_;
};

struct ActionChoice {
    Action action;
    bool explored = false;
};

/// Epsilon-greedy selection: uniform over the 12 actions with probability
/// epsilon, otherwise the lowest-index argmax of the network's Q-values.
ActionChoice select_action(const Mlp& net, std::span<const double> input,
                           double epsilon, Rng& rng);

struct TrainDiagnostics {
    long gradient_steps = 0;
    long target_syncs = 0;
    long first_update_slot = -1;  // 1-based global slot of the first gradient step
    double last_loss = 0.0;
};

/// Stepwise DQN training driver. Owns the environment, both networks and
/// the replay memory; train_dqn() runs it to completion. Strictly
/// sequential: one instance is one run.
class DqnTrainer {
public:
    DqnTrainer(const WorldConfig& config, const DqnParams& params);

    /// Plays one episode: epsilon-greedy rollout, replay writes, one SGD
    /// step per slot once the buffer is warm, and a target sync every
    /// target_sync_period slots. Decays epsilon afterwards and returns the
    /// episode's metrics row. Throws std::runtime_error if the loss stops
    /// being finite.
    EpisodeMetrics run_episode();

    int episodes_run() const { return episodes_run_; }
    double epsilon() const { return epsilon_; }
    long global_slot() const { return global_slot_; }
    const Mlp& train_net() const { return train_net_; }
    const Mlp& target_net() const { return target_net_; }
    const ReplayMemory& memory() const { return memory_; }
    const Environment& env() const { return env_; }
    const StateEncoder& encoder() const { return encoder_; }
    const TrainDiagnostics& diagnostics() const { return diagnostics_; }
    const std::vector<EpisodeMetrics>& metrics() const { return metrics_; }

private:
    WorldConfig config_;
    DqnParams params_;
    Environment env_;
    StateEncoder encoder_;
    Mlp train_net_;
    Mlp target_net_;
    ReplayMemory memory_;
    Rng action_rng_;
    Rng sample_rng_;
    double reward_scale_ = 1.0;
    double epsilon_;
    long global_slot_ = 0;
    int episodes_run_ = 0;
    TrainDiagnostics diagnostics_;
    std::vector<EpisodeMetrics> metrics_;
};

struct TrainResult {
    Mlp net;
    std::vector<EpisodeMetrics> episodes;
    TrainDiagnostics diagnostics;
};

TrainResult train_dqn(const WorldConfig& config, const DqnParams& params);

/// A deployable controller: maps the observable state (and current power)
/// to an action.
using Policy = std::function<Action(const State& state, double power)>;

/// Pure exploitation of a trained network.
Policy greedy_policy(const Mlp& net, const StateEncoder& encoder);

/// Uniform action baseline with its own seeded stream.
Policy random_policy(std::uint64_t seed);

struct EvalResult {
    double mean_cumulative_reward = 0.0;
    double mean_secrecy_capacity = 0.0;
    std::vector<Position3> final_positions;       // one per episode
    std::vector<EpisodeMetrics> episodes;
};

/// Deterministic rollouts of a fixed policy (no exploration); secrecy
/// capacity comes from the per-slot diagnostics.
EvalResult evaluate_policy(const Policy& policy, const WorldConfig& config,
                           int episodes, std::uint64_t seed);

}  // namespace absim
