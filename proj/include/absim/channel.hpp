#pragma once

#include <span>

namespace absim {

/// 3D coordinates in meters. z is height above ground and must be >= 0.
struct Position3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Radio constants and hard limits shared by the capacity computations.
///
/// ref_snr is the linear SNR at the 1 m reference distance. The reference
/// channel gain and the noise variance only ever enter as this ratio, so
/// they are carried as a single number.
struct ChannelParams {
    double ref_snr = 1.0e4;  // linear (40 dB at 1 m)
    double p_max = 1.0;      // W, peak transmit power
    double bound_x = 100.0;  // m, max x of the UAV ground projection
    double bound_y = 100.0;  // m
};

void validate(const Position3& p);      // throws std::invalid_argument
void validate(const ChannelParams& p);  // throws std::invalid_argument

/// Euclidean 3D distance in meters.
double distance(const Position3& a, const Position3& b);

/// Air-to-ground LoS channel gain: ref_gain / d^2 (path-loss exponent 2).
/// Throws std::domain_error for d <= 0; co-located nodes are excluded.
double a2g_gain(double distance_m, double ref_gain);

/// Ground-to-ground channel gain: ref_gain / d^4 (path-loss exponent 4).
double g2g_gain(double distance_m, double ref_gain);

/// Uplink capacity of the user -> UAV link in bit/s/Hz:
/// log2(1 + ref_snr * p / d^2).
double user_capacity(double power_w, double distance_m, const ChannelParams& params);

/// Capacity of the user -> eavesdropper wiretap link in bit/s/Hz:
/// log2(1 + ref_snr * p / d^4).
double wiretap_capacity(double power_w, double distance_m, const ChannelParams& params);

/// Per-slot capacities of the legitimate and wiretap links.
struct SlotCapacity {
    double user = 0.0;
    double eve = 0.0;
};

/// Positive part of the capacity gap for one slot: max(c_user - c_eve, 0).
double secrecy_rate(double c_user, double c_eve);

/// Mean secrecy rate over a non-empty slot sequence.
/// Throws std::invalid_argument on an empty sequence.
double secrecy_capacity(std::span<const SlotCapacity> slots);

}  // namespace absim
