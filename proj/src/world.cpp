#include "absim/world.hpp"

#include <cmath>

namespace absim {

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw ConfigError(message);
}

bool finite(const Position3& p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

}  // namespace

void WorldConfig::validate() const {
    require(std::isfinite(bound_x) && bound_x > 0.0, "world.bounds: L_x must be > 0");
    require(std::isfinite(bound_y) && bound_y > 0.0, "world.bounds: L_y must be > 0");
    require(std::isfinite(altitude) && altitude > 0.0, "world.altitude: must be > 0");
    require(std::isfinite(grid_step) && grid_step > 0.0, "world.grid_step: must be > 0");
    require(std::isfinite(p_max) && p_max > 0.0, "world.p_max: must be > 0");
    require(std::isfinite(p1) && p1 > 0.0, "world.p1: must be > 0");
    require(p1 <= p_max, "world.p1: must be <= world.p_max");
    require(std::isfinite(initial_power) && initial_power >= 0.0,
            "world.initial_power: must be >= 0");
    require(initial_power <= p_max, "world.initial_power: must be <= world.p_max");
    require(std::isfinite(ref_snr) && ref_snr > 0.0, "world.ref_snr: must be > 0");
    require(slots_per_episode >= 1, "world.slots_per_episode: must be >= 1");

    require(finite(ue_pos), "world.ue_pos: coordinates must be finite");
    require(ue_pos.z >= 0.0, "world.ue_pos: z must be >= 0");
    require(ue_pos.x >= 0.0 && ue_pos.x <= bound_x,
            "world.ue_pos: x must lie within [0, bounds.x]");
    require(ue_pos.y >= 0.0 && ue_pos.y <= bound_y,
            "world.ue_pos: y must lie within [0, bounds.y]");
    // keeps the user-to-UAV distance bounded away from zero
    require(ue_pos.z < altitude, "world.ue_pos: z must be below world.altitude");

    require(finite(eve_pos), "world.eve_pos: coordinates must be finite");
    require(eve_pos.z >= 0.0, "world.eve_pos: z must be >= 0");
    require(distance(eve_pos, ue_pos) > 0.0,
            "world.eve_pos: must not coincide with world.ue_pos");

    require(finite(uav_start), "world.uav_start: coordinates must be finite");
    require(uav_start.x >= 0.0 && uav_start.x <= bound_x,
            "world.uav_start: x must lie within [0, bounds.x]");
    require(uav_start.y >= 0.0 && uav_start.y <= bound_y,
            "world.uav_start: y must lie within [0, bounds.y]");
    require(uav_start.z == altitude, "world.uav_start: z must equal world.altitude");
}

}  // namespace absim
