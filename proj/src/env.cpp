#include "absim/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "absim/rng.hpp"

namespace absim {

Action::Action(int index) : index_(index) {
    if (index < 0 || index >= kNumActions)
        throw std::invalid_argument("Action: index must lie in [0, 12)");
}

Action Action::from_parts(Move move, PowerDelta delta) {
    return Action(static_cast<int>(move) * 3 + static_cast<int>(delta));
}

Environment::Environment(WorldConfig config) : config_(std::move(config)) {
    config_.validate();
    eve_distance_ = distance(config_.ue_pos, config_.eve_pos);
    uav_ = config_.uav_start;
    power_ = config_.initial_power;
}

State Environment::reset(std::uint64_t seed) {
    if (config_.random_start) {
        Rng rng(seed);
        const auto nx = static_cast<std::uint64_t>(config_.bound_x / config_.grid_step) + 1;
        const auto ny = static_cast<std::uint64_t>(config_.bound_y / config_.grid_step) + 1;
        uav_.x = static_cast<double>(rng.uniform_int(nx)) * config_.grid_step;
        uav_.y = static_cast<double>(rng.uniform_int(ny)) * config_.grid_step;
        uav_.z = config_.altitude;
    } else {
        uav_ = config_.uav_start;
    }
    power_ = config_.initial_power;
    slot_ = 0;
    totals_ = EpisodeTotals{};
    return observation();
}

State Environment::observation() const {
    return State{uav_.x - config_.ue_pos.x, uav_.y - config_.ue_pos.y,
                 uav_.z - config_.ue_pos.z};
}

StepOutcome Environment::step(Action action) {
    if (done())
        throw std::logic_error("Environment::step: episode is already done");

    switch (action.move()) {
        case Move::PlusX: uav_.x += config_.grid_step; break;
        case Move::MinusX: uav_.x -= config_.grid_step; break;
        case Move::PlusY: uav_.y += config_.grid_step; break;
        case Move::MinusY: uav_.y -= config_.grid_step; break;
    }
    uav_.x = std::clamp(uav_.x, 0.0, config_.bound_x);
    uav_.y = std::clamp(uav_.y, 0.0, config_.bound_y);

    switch (action.power_delta()) {
        case PowerDelta::Up: power_ += config_.p1; break;
        case PowerDelta::Hold: break;
        case PowerDelta::Down: power_ -= config_.p1; break;
    }
    power_ = std::clamp(power_, 0.0, config_.p_max);

    // reward and capacities use the post-move position and post-update power
    const ChannelParams params = config_.channel_params();
    const double d_u = distance(uav_, config_.ue_pos);
    const double reward = params.ref_snr * power_ / (d_u * d_u);
    const double c_u = user_capacity(power_, d_u, params);
    const double c_j = wiretap_capacity(power_, eve_distance_, params);
    const double secrecy = secrecy_rate(c_u, c_j);

    ++slot_;
    totals_.reward_sum += reward;
    totals_.c_u_sum += c_u;
    totals_.c_j_sum += c_j;
    totals_.secrecy_sum += secrecy;
    totals_.slots = slot_;

    StepOutcome out;
    out.next_state = observation();
    out.reward = reward;
    out.done = done();
    out.diag = StepDiagnostics{c_u, c_j, secrecy, uav_, power_};
    return out;
}

double capacity_from_snr(double snr) {
    return std::log2(1.0 + snr);
}

StaticOptimum optimal_static_policy(const WorldConfig& config) {
    StaticOptimum opt;
    opt.uav_pos = Position3{std::clamp(config.ue_pos.x, 0.0, config.bound_x),
                            std::clamp(config.ue_pos.y, 0.0, config.bound_y),
                            config.altitude};
    opt.power = config.p_max;
    const double d = distance(opt.uav_pos, config.ue_pos);
    opt.reward = config.ref_snr * opt.power / (d * d);
    return opt;
}

}  // namespace absim
