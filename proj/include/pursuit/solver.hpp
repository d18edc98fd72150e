#pragma once

#include <chrono>
#include <span>

#include "pursuit/dynamics.hpp"
#include "pursuit/reward.hpp"

namespace pursuit {

// Value of a point decomposed into its three surfaces. Negative wells are
// evaluated on their absolute magnitudes (standard positive form) and
// re-negated here through the subtraction.
struct ValueBreakdown {
    double pos_max = 0.0;
    double neg_max = 0.0;
    double deck = 0.0;
    double total = 0.0;
};

// Closed-form state value: best positive peak minus best in-range well
// minus the altitude penalty. Distances are Euclidean in NED meters;
// altitude is taken from the point itself.
inline ValueBreakdown value_at(const Vec3& point, std::span<const RewardPeak> pos_peaks,
                               std::span<const RewardPeak> neg_peaks,
                               const TerrainConfig& terrain) {
    ValueBreakdown out;
    for (const auto& p : pos_peaks) {
        const double d = distance(point, p.location);
        const double v = std::abs(p.magnitude) * std::exp(d * p.log_decay);
        if (v > out.pos_max) out.pos_max = v;
    }
    for (const auto& n : neg_peaks) {
        const double d = distance(point, n.location);
        if (d >= n.radius) continue;
        const double v = std::abs(n.magnitude) * std::exp(d * n.log_decay);
        if (v > out.neg_max) out.neg_max = v;
    }
    out.deck = altitude_penalty(-point.z, terrain);
    out.total = out.pos_max - out.neg_max - out.deck;
    return out;
}

struct DecisionRecord {
    int action_index = -1;
    double chosen_value = 0.0;
    AircraftState one_step_state;   // applied to the simulation if chosen
    double decision_time_us = 0.0;  // wall clock for this decision
};

// Argmax over the forward-projected action set, valued at the horizon
// state. Ties break toward the lowest action index.
inline DecisionRecord select_action(const AircraftState& ownship,
                                    std::span<const ControlAction> actions,
                                    const PerformanceLimits& limits,
                                    std::span<const RewardPeak> pos_peaks,
                                    std::span<const RewardPeak> neg_peaks,
                                    const TerrainConfig& terrain, double horizon = kHorizonS,
                                    double dt = kDecisionDt) {
    const auto t0 = std::chrono::steady_clock::now();
    if (actions.empty()) throw std::invalid_argument("select_action: empty action list");

    const auto reachable = reachable_states(ownship, actions, limits, horizon, dt);

    int best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < reachable.size(); ++i) {
        const AircraftState& h = reachable[i].horizon_state;
        const double v = value_at(h.position(), pos_peaks, neg_peaks, terrain).total;
        if (v > best_value) {
            best_value = v;
            best = static_cast<int>(i);
        }
    }

    DecisionRecord rec;
    rec.action_index = best;
    rec.chosen_value = best_value;
    rec.one_step_state = reachable[static_cast<size_t>(best)].one_step;
    rec.decision_time_us =
        std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

}  // namespace pursuit
