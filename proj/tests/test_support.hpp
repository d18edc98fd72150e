#pragma once

#include <random>

#include "pursuit/engagement.hpp"

namespace test_support {

using pursuit::AircraftState;
using pursuit::ControlAction;
using pursuit::PerformanceLimits;

// In-envelope state with margin from the clamp boundaries so smoothness
// based checks are meaningful.
inline AircraftState random_state(std::mt19937_64& rng, const PerformanceLimits& lim,
                                  bool away_from_bounds = false) {
    auto uni = [&](double lo, double hi) {
        return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    };
    AircraftState s;
    s.x = uni(0.0, 25000.0);
    s.y = uni(0.0, 25000.0);
    s.z = -uni(2000.0, 20000.0);
    if (away_from_bounds) {
        s.v = uni(lim.v_min + 10.0, lim.v_max - 25.0);
        s.gamma = uni(-0.35, 0.35);
        s.alpha = uni(0.05, lim.alpha_max - 0.35);
    } else {
        s.v = uni(lim.v_min, lim.v_max);
        s.gamma = uni(-1.2, 1.2);
        s.alpha = uni(lim.alpha_min, lim.alpha_max);
    }
    s.psi = uni(-pursuit::kPi, pursuit::kPi);
    s.phi = uni(-pursuit::kPi, pursuit::kPi);
    return s;
}

inline ControlAction random_grid_action(std::mt19937_64& rng, const pursuit::ActionTable& t) {
    auto pick = [&](const std::vector<double>& xs) {
        return xs[std::uniform_int_distribution<size_t>(0, xs.size() - 1)(rng)];
    };
    return {pick(t.alpha_dots), pick(t.phi_dots), pick(t.thrusts)};
}

// Speed/flight-path trim: alpha and thrust such that both V and gamma
// hold still. Valid for gamma around 0.5-0.65 rad inside the blue alpha
// envelope.
inline ControlAction trim_action(double gamma, double phi, double& alpha_out) {
    const double n_f = std::cos(gamma) / std::cos(phi);
    const double alpha = std::atan2(n_f - pursuit::kLift, std::sin(gamma));
    const double nx = std::sin(gamma) / std::cos(alpha);
    alpha_out = alpha;
    return {0.0, 0.0, nx};
}

}  // namespace test_support
