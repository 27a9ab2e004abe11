#include "absim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace absim {

void validate(const Position3& p) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
        throw std::invalid_argument("Position3: coordinates must be finite");
    if (p.z < 0.0)
        throw std::invalid_argument("Position3: z must be >= 0");
}

void validate(const ChannelParams& p) {
    if (!std::isfinite(p.ref_snr) || p.ref_snr <= 0.0)
        throw std::invalid_argument("ChannelParams: ref_snr must be finite and > 0");
    if (!std::isfinite(p.p_max) || p.p_max <= 0.0)
        throw std::invalid_argument("ChannelParams: p_max must be finite and > 0");
    if (!std::isfinite(p.bound_x) || p.bound_x <= 0.0)
        throw std::invalid_argument("ChannelParams: bound_x must be finite and > 0");
    if (!std::isfinite(p.bound_y) || p.bound_y <= 0.0)
        throw std::invalid_argument("ChannelParams: bound_y must be finite and > 0");
}

double distance(const Position3& a, const Position3& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double a2g_gain(double distance_m, double ref_gain) {
    if (!(distance_m > 0.0))
        throw std::domain_error("a2g_gain: distance must be > 0");
    return ref_gain / (distance_m * distance_m);
}

double g2g_gain(double distance_m, double ref_gain) {
    if (!(distance_m > 0.0))
        throw std::domain_error("g2g_gain: distance must be > 0");
    const double d2 = distance_m * distance_m;
    return ref_gain / (d2 * d2);
}

double user_capacity(double power_w, double distance_m, const ChannelParams& params) {
    if (!(power_w >= 0.0))
        throw std::domain_error("user_capacity: power must be >= 0");
    if (!(distance_m > 0.0))
        throw std::domain_error("user_capacity: distance must be > 0");
    const double snr = params.ref_snr * power_w / (distance_m * distance_m);
    return std::log2(1.0 + snr);
}

double wiretap_capacity(double power_w, double distance_m, const ChannelParams& params) {
    if (!(power_w >= 0.0))
        throw std::domain_error("wiretap_capacity: power must be >= 0");
    if (!(distance_m > 0.0))
        throw std::domain_error("wiretap_capacity: distance must be > 0");
    const double d2 = distance_m * distance_m;
    const double snr = params.ref_snr * power_w / (d2 * d2);
    return std::log2(1.0 + snr);
}

double secrecy_rate(double c_user, double c_eve) {
    return std::max(c_user - c_eve, 0.0);
}

double secrecy_capacity(std::span<const SlotCapacity> slots) {
    if (slots.empty())
        throw std::invalid_argument("secrecy_capacity: slot sequence must be non-empty");
    double sum = 0.0;
    for (const auto& s : slots) sum += secrecy_rate(s.user, s.eve);
    return sum / static_cast<double>(slots.size());
}

}  // namespace absim
