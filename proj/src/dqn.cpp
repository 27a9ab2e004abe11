#include "absim/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>

namespace absim {

ReplayMemory::ReplayMemory(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0)
        throw std::invalid_argument("ReplayMemory: capacity must be >= 1");
}

void ReplayMemory::push(const Experience& e) {
    buf_.push_back(e);
    if (buf_.size() > capacity_) buf_.pop_front();
}

std::vector<Experience> ReplayMemory::sample(std::size_t k, Rng& rng) const {
    if (k > buf_.size())
        throw std::logic_error("ReplayMemory::sample: fewer than k experiences stored");
    // partial Fisher-Yates over the index set: uniform without replacement
    std::vector<std::size_t> idx(buf_.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<Experience> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.uniform_int(idx.size() - i);
        std::swap(idx[i], idx[j]);
        out.push_back(buf_[idx[i]]);
    }
    return out;
}

void DqnParams::validate() const {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("dqn.gamma: must lie in [0, 1)");
    if (!(epsilon_initial >= 0.0 && epsilon_initial <= 1.0))
        throw ConfigError("dqn.epsilon_initial: must lie in [0, 1]");
    if (!(epsilon_min >= 0.0 && epsilon_min <= epsilon_initial))
        throw ConfigError("dqn.epsilon_min: must lie in [0, epsilon_initial]");
    if (!(epsilon_decay > 0.0 && epsilon_decay <= 1.0))
        throw ConfigError("dqn.epsilon_decay: must lie in (0, 1]");
    if (replay_capacity < 1) throw ConfigError("dqn.replay_capacity: must be >= 1");
    if (batch_size < 1) throw ConfigError("dqn.batch_size: must be >= 1");
    if (batch_size > replay_capacity)
        throw ConfigError("dqn.batch_size: must be <= dqn.replay_capacity");
    if (target_sync_period < 1) throw ConfigError("dqn.target_sync_period: must be >= 1");
    if (!(learning_rate > 0.0)) throw ConfigError("dqn.learning_rate: must be > 0");
    if (episodes < 1) throw ConfigError("dqn.episodes: must be >= 1");
    for (int h : hidden_layers)
        if (h < 1) throw ConfigError("dqn.hidden_layers: widths must be >= 1");
}

StateEncoder::StateEncoder(const WorldConfig& config)
    : inv_bound_x_(1.0 / config.bound_x),
      inv_bound_y_(1.0 / config.bound_y),
      inv_altitude_(1.0 / config.altitude),
      inv_p_max_(1.0 / config.p_max),
      observe_power_(config.observe_power) {}

std::vector<double> StateEncoder::encode(const State& s, double power) const {
    std::vector<double> v;
    v.reserve(dim());
    v.push_back(s.dx * inv_bound_x_);
    v.push_back(s.dy * inv_bound_y_);
    v.push_back(s.dz * inv_altitude_);
    if (observe_power_) v.push_back(power * inv_p_max_);
    return v;
}

ActionChoice select_action(const Mlp& net, std::span<const double> input, double epsilon,
                           Rng& rng) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("select_action: epsilon must lie in [0, 1]");
    if (epsilon > 0.0 && rng.uniform01() < epsilon)
        return {Action(static_cast<int>(rng.uniform_int(kNumActions))), true};
    const std::vector<double> q = forward(net, input);
    int best = 0;
    for (int a = 1; a < static_cast<int>(q.size()); ++a)
        if (q[a] > q[best]) best = a;
    return {Action(best), false};
}

namespace {

std::vector<int> network_dims(int input_dim, const std::vector<int>& hidden) {
    std::vector<int> dims;
    dims.push_back(input_dim);
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(kNumActions);
    return dims;
}

Batch encode_batch(const std::vector<Experience>& experiences, const StateEncoder& encoder) {
    Batch batch;
    batch.reserve(experiences.size());
    for (const Experience& e : experiences) {
        Sample s;
        s.state = encoder.encode(e.state, e.power_before);
        s.action = e.action.index();
        s.reward = e.reward;
        s.next_state = encoder.encode(e.next_state, e.power_after);
        s.done = e.done;
        batch.push_back(std::move(s));
    }
    return batch;
}

const DqnParams& validated(const DqnParams& params) {
    params.validate();
    return params;
}

}  // namespace

DqnTrainer::DqnTrainer(const WorldConfig& config, const DqnParams& params)
    : config_(config),
      params_(validated(params)),
      env_(config),
      encoder_(config),
      train_net_(),
      target_net_(),
      memory_(params.replay_capacity),
      action_rng_(derive_seed(params.seed, 2)),
      sample_rng_(derive_seed(params.seed, 3)),
      epsilon_(params.epsilon_initial) {
    const auto dims = network_dims(encoder_.dim(), params_.hidden_layers);
    train_net_ = make_mlp(dims, derive_seed(params_.seed, 1));
    target_net_ = train_net_;  // equal start; the sync below keeps them aligned
    if (!params_.raw_reward) {
        reward_scale_ = 1.0 / optimal_static_policy(config_).reward;
    }
}

EpisodeMetrics DqnTrainer::run_episode() {
    const int episode = episodes_run_ + 1;
    State s = env_.reset(derive_seed(params_.seed, 0x10000 + static_cast<std::uint64_t>(episode)));
    double cumulative = 0.0;

    while (!env_.done()) {
        const double power_before = env_.power();
        const std::vector<double> input = encoder_.encode(s, power_before);
        const ActionChoice choice = select_action(train_net_, input, epsilon_, action_rng_);
        const StepOutcome out = env_.step(choice.action);
        cumulative += out.reward;

        Experience e;
        e.state = s;
        e.power_before = power_before;
        e.action = choice.action;
        e.reward = out.reward * reward_scale_;
        e.next_state = out.next_state;
        e.power_after = out.diag.power;
        e.done = out.done;
        memory_.push(e);

        ++global_slot_;

        if (memory_.size() >= params_.batch_size) {
            const Batch batch =
                encode_batch(memory_.sample(params_.batch_size, sample_rng_), encoder_);
            double batch_loss = 0.0;
            const Gradients grads =
                backward(batch, train_net_, target_net_, params_.gamma, &batch_loss);
            if (!std::isfinite(batch_loss))
                throw std::runtime_error(
                    "train_dqn: loss became non-finite (episode " + std::to_string(episode) +
                    ", slot " + std::to_string(global_slot_) +
                    ", epsilon " + std::to_string(epsilon_) +
                    ", lr " + std::to_string(params_.learning_rate) + ")");
            sgd_step(train_net_, grads, params_.learning_rate);
            diagnostics_.last_loss = batch_loss;
            if (diagnostics_.first_update_slot < 0)
                diagnostics_.first_update_slot = global_slot_;
            ++diagnostics_.gradient_steps;
        }

        if (global_slot_ % params_.target_sync_period == 0) {
            target_net_ = train_net_;
            ++diagnostics_.target_syncs;
        }

        s = out.next_state;
    }

    const auto& totals = env_.episode_totals();
    const double slots = static_cast<double>(totals.slots);
    EpisodeMetrics row;
    row.episode = episode;
    row.cumulative_reward = cumulative;
    row.mean_c_u = totals.c_u_sum / slots;
    row.mean_c_j = totals.c_j_sum / slots;
    row.secrecy_capacity = totals.secrecy_sum / slots;
    row.final_dx = s.dx;
    row.final_dy = s.dy;
    row.final_power = env_.power();
    row.epsilon = epsilon_;
    metrics_.push_back(row);

    epsilon_ = std::max(params_.epsilon_min, epsilon_ * params_.epsilon_decay);
    ++episodes_run_;
    return row;
}

TrainResult train_dqn(const WorldConfig& config, const DqnParams& params) {
    DqnTrainer trainer(config, params);
    for (int k = 0; k < params.episodes; ++k) trainer.run_episode();
    return TrainResult{trainer.train_net(), trainer.metrics(), trainer.diagnostics()};
}

Policy greedy_policy(const Mlp& net, const StateEncoder& encoder) {
    return [net, encoder](const State& s, double power) {
        Rng unused(0);
        return select_action(net, encoder.encode(s, power), 0.0, unused).action;
    };
}

Policy random_policy(std::uint64_t seed) {
    auto rng = std::make_shared<Rng>(seed);
    return [rng](const State&, double) {
        return Action(static_cast<int>(rng->uniform_int(kNumActions)));
    };
}

EvalResult evaluate_policy(const Policy& policy, const WorldConfig& config, int episodes,
                           std::uint64_t seed) {
    if (episodes < 1)
        throw std::invalid_argument("evaluate_policy: episodes must be >= 1");
    Environment env(config);
    EvalResult result;
    result.final_positions.reserve(episodes);
    result.episodes.reserve(episodes);

    for (int episode = 1; episode <= episodes; ++episode) {
        State s = env.reset(derive_seed(seed, 0x10000 + static_cast<std::uint64_t>(episode)));
        while (!env.done()) {
            const StepOutcome out = env.step(policy(s, env.power()));
            s = out.next_state;
        }
        const auto& totals = env.episode_totals();
        const double slots = static_cast<double>(totals.slots);
        EpisodeMetrics row;
        row.episode = episode;
        row.cumulative_reward = totals.reward_sum;
        row.mean_c_u = totals.c_u_sum / slots;
        row.mean_c_j = totals.c_j_sum / slots;
        row.secrecy_capacity = totals.secrecy_sum / slots;
        row.final_dx = s.dx;
        row.final_dy = s.dy;
        row.final_power = env.power();
        row.epsilon = 0.0;
        result.episodes.push_back(row);
        result.final_positions.push_back(env.uav_position());
        result.mean_cumulative_reward += totals.reward_sum;
        result.mean_secrecy_capacity += row.secrecy_capacity;
    }
    result.mean_cumulative_reward /= episodes;
    result.mean_secrecy_capacity /= episodes;
    return result;
}

}  // namespace absim
