#pragma once

#include <limits>
#include <span>
#include <vector>

#include "pursuit/dynamics.hpp"
#include "pursuit/vec3.hpp"

namespace pursuit {

// Flat terrain of height h_max. The hard deck sits 500 m above the
// terrain; the penalty band starts another 1000 m up and ramps linearly
// so the value at the deck itself (10000 with the default weight)
// dominates every positive reward in play.
struct TerrainConfig {
    double h_max = 0.0;
    double deck_weight = 10.0;  // penalty per meter below h_penalty

    double h_deck() const { return h_max + 500.0; }
    double h_penalty() const { return h_deck() + 1000.0; }

    bool operator==(const TerrainConfig&) const = default;
};

// One exponentially decaying reward source. Positive magnitudes attract
// with unbounded reach; negative magnitudes are risk wells that stop
// contributing entirely at their radius.
struct RewardPeak {
    double magnitude = 0.0;  // signed reward units
    double decay = 0.0;      // per-meter factor in (0,1)
    Vec3 location;
    double radius = 0.0;     // m; unbounded() for attractive peaks

    double log_decay = 0.0;  // cached ln(decay)

    RewardPeak() = default;
    RewardPeak(double magnitude_, double decay_, const Vec3& location_, double radius_)
        : magnitude(magnitude_),
          decay(decay_),
          location(location_),
          radius(radius_),
          log_decay(std::log(decay_)) {}

    static constexpr double unbounded() { return std::numeric_limits<double>::infinity(); }
    bool is_positive() const { return magnitude > 0.0; }
};

// Position/velocity snapshot of one aircraft as seen by everyone else.
struct AircraftSnapshot {
    Vec3 position;
    Vec3 velocity;
    Team team = Team::blue;
    int id = -1;
};

inline constexpr double kTeammateWellMagnitude = -100.0;
inline constexpr double kTeammateWellDecay = 0.97;
inline constexpr double kTeammatePeakMagnitude = 10.0;
inline constexpr double kOpponentWellMagnitude = -300.0;
inline constexpr double kOpponentWellDecay = 0.99;
inline constexpr double kPursuitPeakMagnitude = 200.0;
inline constexpr double kAttractiveDecay = 0.999;
inline constexpr double kOpponentRadiusFloor = 150.0;

// Per teammate: six collision wells along the constant-velocity
// extrapolation at t = 0..5 s, radius 150 + 10t, plus one weak
// clustering peak at the current position.
inline std::vector<RewardPeak> build_teammate_peaks(std::span<const AircraftSnapshot> mates) {
    std::vector<RewardPeak> peaks;
    peaks.reserve(mates.size() * 7);
    for (const auto& m : mates) {
        for (int t = 0; t <= 5; ++t)
            peaks.emplace_back(kTeammateWellMagnitude, kTeammateWellDecay,
                               m.position + m.velocity * static_cast<double>(t),
                               150.0 + 10.0 * t);
        peaks.emplace_back(kTeammatePeakMagnitude, kAttractiveDecay, m.position,
                           RewardPeak::unbounded());
    }
    return peaks;
}

// Per opponent: four collision wells at t = 0, 1, 5, 10 s with radius
// |v|*t (a fixed floor keeps the t=0 well active), plus the pursuit peak
// at the current position.
inline std::vector<RewardPeak> build_opponent_peaks(std::span<const AircraftSnapshot> opponents,
                                                    double radius_floor = kOpponentRadiusFloor) {
    static constexpr int kWellTimes[] = {0, 1, 5, 10};

    std::vector<RewardPeak> peaks;
    peaks.reserve(opponents.size() * 5);
    for (const auto& o : opponents) {
        const double speed = o.velocity.norm();
        for (int t : kWellTimes) {
            const double radius = t == 0 ? radius_floor : speed * t;
            peaks.emplace_back(kOpponentWellMagnitude, kOpponentWellDecay,
                               o.position + o.velocity * static_cast<double>(t), radius);
        }
        peaks.emplace_back(kPursuitPeakMagnitude, kAttractiveDecay, o.position,
                           RewardPeak::unbounded());
    }
    return peaks;
}

// Zero at or above h_penalty, then a linear ramp reaching
// deck_weight * 1000 at the hard deck. Subtracted from state value.
inline double altitude_penalty(double altitude, const TerrainConfig& terrain) {
    const double h_penalty = terrain.h_penalty();
    if (altitude >= h_penalty) return 0.0;
    return terrain.deck_weight * (h_penalty - altitude);
}

}  // namespace pursuit
