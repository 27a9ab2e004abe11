#pragma once

#include <cstdint>

#include "absim/channel.hpp"
#include "absim/world.hpp"

namespace absim {

/// Observable MDP state: componentwise UAV-minus-UE offset in meters.
/// dz is constant within an episode (the flight altitude is fixed).
struct State {
    double dx = 0.0;
    double dy = 0.0;
    double dz = 0.0;
};

enum class Move { PlusX = 0, MinusX = 1, PlusY = 2, MinusY = 3 };
enum class PowerDelta { Up = 0, Hold = 1, Down = 2 };

inline constexpr int kNumActions = 12;

/// One of the 12 discrete (movement, power change) combinations.
/// index = 3 * move + power_delta.
class Action {
public:
    Action() = default;
    explicit Action(int index);  // throws std::invalid_argument outside [0, 12)
    static Action from_parts(Move move, PowerDelta delta);

    int index() const { return index_; }
    Move move() const { return static_cast<Move>(index_ / 3); }
    PowerDelta power_delta() const { return static_cast<PowerDelta>(index_ % 3); }

    bool operator==(const Action&) const = default;

private:
    int index_ = 0;
};

/// Per-slot evaluation quantities. Not visible to the learning agent; the
/// eavesdropper enters only here.
struct StepDiagnostics {
    double c_u = 0.0;       // legitimate link capacity, bit/s/Hz
    double c_j = 0.0;       // wiretap link capacity, bit/s/Hz
    double secrecy = 0.0;   // max(c_u - c_j, 0)
    Position3 uav_pos;
    double power = 0.0;
};

struct StepOutcome {
    State next_state;
    double reward = 0.0;  // instantaneous linear SNR of the uplink
    bool done = false;
    StepDiagnostics diag;
};

/// Sums of per-slot quantities since the last reset.
struct EpisodeTotals {
    double reward_sum = 0.0;
    double c_u_sum = 0.0;
    double c_j_sum = 0.0;
    double secrecy_sum = 0.0;
    int slots = 0;
};

/// Deterministic episodic environment. Position updates are projected onto
/// [0, bound_x] x [0, bound_y] and power onto [0, p_max]; the reward uses
/// the post-move position and post-update power. A single instance must not
/// be stepped concurrently; independent instances share nothing.
class Environment {
public:
    explicit Environment(WorldConfig config);  // validates the config

    /// Starts a new episode. The seed only matters for random_start worlds;
    /// equal seeds always produce equal start states.
    State reset(std::uint64_t seed);

    /// Advances one slot. Throws std::logic_error once the episode is done.
    StepOutcome step(Action action);

    bool done() const { return slot_ >= config_.slots_per_episode; }
    int slot() const { return slot_; }
    State observation() const;
    double power() const { return power_; }
    Position3 uav_position() const { return uav_; }
    const WorldConfig& config() const { return config_; }
    const EpisodeTotals& episode_totals() const { return totals_; }

private:
    WorldConfig config_;
    double eve_distance_ = 0.0;  // UE <-> eavesdropper separation, constant
    Position3 uav_;
    double power_ = 0.0;
    int slot_ = 0;
    EpisodeTotals totals_;
};

/// Capacity implied by a linear SNR reward: log2(1 + snr). Matches
/// user_capacity bit-for-bit on the same inputs.
double capacity_from_snr(double snr);

/// Closed-form maximizer of the legitimate capacity under the position and
/// power limits: hover straight above the (bounds-clamped) user at peak
/// power, so the distance collapses to the altitude.
struct StaticOptimum {
    Position3 uav_pos;
    double power = 0.0;
    double reward = 0.0;  // linear SNR at the optimum
};

StaticOptimum optimal_static_policy(const WorldConfig& config);

}  // namespace absim
