#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

#include "pursuit/vec3.hpp"

namespace pursuit {

inline constexpr double kGravity = 9.8;    // one g, m/s^2
inline constexpr double kLift = 0.5;       // fixed lift acceleration, g
inline constexpr double kMach = 343.0;     // speed of sound, m/s
inline constexpr double kDecisionDt = 0.1; // simulation / decision timestep, s
inline constexpr double kHorizonS = 1.0;   // projection horizon, s

// Flight path angle is kept strictly away from vertical; the heading
// equation divides by cos(gamma). A pull through the vertical flips to
// the supplementary angle (see integrate_step), so the cap only trims
// the singular sliver itself.
inline constexpr double kGammaCap = kPi / 2.0 - 1e-3;

enum class Team : int { blue = 0, red = 1 };

inline int team_index(Team t) { return static_cast<int>(t); }
inline const char* team_name(Team t) { return t == Team::blue ? "blue" : "red"; }

struct PerformanceLimits {
    double v_min = 0.0;        // m/s
    double v_max = 0.0;        // m/s
    double psi_dot_max = 0.0;  // rad/s, symmetric bound on realized turn rate
    double alpha_min = 0.0;    // rad
    double alpha_max = 0.0;    // rad

    static PerformanceLimits blue() { return {0.10 * kMach, 0.35 * kMach, 1.5, -0.009, 0.69}; }
    static PerformanceLimits red() { return {0.10 * kMach, 0.30 * kMach, 1.3, -0.009, 0.52}; }

    bool operator==(const PerformanceLimits&) const = default;
};

// One discrete control choice: stick (alpha rate), roll rate, throttle.
struct ControlAction {
    double alpha_dot = 0.0;  // rad/s
    double phi_dot = 0.0;    // rad/s
    double nx = 0.0;         // thrust acceleration, g

    bool operator==(const ControlAction&) const = default;
};

// Discrete action grid for one team.
struct ActionTable {
    std::vector<double> phi_dots;
    std::vector<double> alpha_dots;
    std::vector<double> thrusts;

    static ActionTable blue() {
        return {grid(-1.5, 1.5, 11), grid(-0.5, 0.5, 11), grid(0.0, 8.0, 9)};
    }
    static ActionTable red() {
        return {grid(-1.0, 1.0, 11), grid(-0.5, 0.5, 11), grid(0.0, 6.0, 7)};
    }

    static std::vector<double> grid(double lo, double hi, int count) {
        std::vector<double> out(static_cast<size_t>(count));
        const double step = (hi - lo) / (count - 1);
        for (int i = 0; i < count; ++i) out[static_cast<size_t>(i)] = lo + step * i;
        out.front() = lo;
        out.back() = hi;
        return out;
    }

    bool operator==(const ActionTable&) const = default;
};

// Pseudo-6DOF aircraft state. Pitch is not an independent state:
// theta = gamma + alpha.
struct AircraftState {
    double x = 0.0;      // north, m
    double y = 0.0;      // east, m
    double z = 0.0;      // down, m (altitude = -z)
    double v = 0.0;      // airspeed, m/s
    double gamma = 0.0;  // flight path angle, rad
    double psi = 0.0;    // heading azimuth, rad
    double phi = 0.0;    // roll angle, rad
    double alpha = 0.0;  // angle of attack, rad

    double theta() const { return gamma + alpha; }
    double altitude() const { return -z; }
    Vec3 position() const { return {x, y, z}; }

    // Inertial velocity in NED. Positive gamma climbs, so the down
    // component is -v*sin(gamma).
    Vec3 velocity() const {
        const double ch = v * std::cos(gamma);
        return {ch * std::cos(psi), ch * std::sin(psi), -v * std::sin(gamma)};
    }

    bool operator==(const AircraftState&) const = default;
};

struct StateDerivative {
    double v_dot = 0.0;
    double gamma_dot = 0.0;
    double psi_dot = 0.0;
    double x_dot = 0.0;
    double y_dot = 0.0;
    double z_dot = 0.0;
    double phi_dot = 0.0;
    double alpha_dot = 0.0;
};

// Equations of motion. Throws on states where the model is singular
// (stopped or vertical flight path).
inline StateDerivative derivatives(const AircraftState& s, const ControlAction& a,
                                   const PerformanceLimits& limits) {
    if (s.v <= 0.0) throw std::domain_error("derivatives: airspeed must be positive");
    if (std::abs(s.gamma) >= kPi / 2.0 - 1e-6)
        throw std::domain_error("derivatives: flight path angle at vertical singularity");

    const double sin_a = std::sin(s.alpha);
    const double cos_a = std::cos(s.alpha);
    const double sin_g = std::sin(s.gamma);
    const double cos_g = std::cos(s.gamma);
    const double sin_p = std::sin(s.phi);
    const double cos_p = std::cos(s.phi);

    const double n_f = a.nx * sin_a + kLift;  // acceleration out the top, g

    StateDerivative d;
    d.v_dot = kGravity * (a.nx * cos_a - sin_g);
    d.gamma_dot = kGravity / s.v * (n_f * cos_p - cos_g);
    d.psi_dot = std::clamp(kGravity * n_f * sin_p / (s.v * cos_g), -limits.psi_dot_max,
                           limits.psi_dot_max);
    const double ch = s.v * cos_g;
    d.x_dot = ch * std::cos(s.psi);
    d.y_dot = ch * std::sin(s.psi);
    d.z_dot = -s.v * sin_g;
    d.phi_dot = a.phi_dot;
    d.alpha_dot = a.alpha_dot;
    return d;
}

// One forward-Euler step. Clamp order is fixed: integrate, clamp alpha,
// clamp V, then wrap/cap angles.
inline AircraftState integrate_step(const AircraftState& s, const ControlAction& a,
                                    const PerformanceLimits& limits, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("integrate_step: dt must be positive");
    const StateDerivative d = derivatives(s, a, limits);

    AircraftState n = s;
    n.x += d.x_dot * dt;
    n.y += d.y_dot * dt;
    n.z += d.z_dot * dt;
    n.v += d.v_dot * dt;
    n.gamma += d.gamma_dot * dt;
    n.psi += d.psi_dot * dt;
    n.phi += d.phi_dot * dt;
    n.alpha += d.alpha_dot * dt;

    n.alpha = std::clamp(n.alpha, limits.alpha_min, limits.alpha_max);
    n.v = std::clamp(n.v, limits.v_min, limits.v_max);

    // Passing through the vertical (a loop or split-S) continues on the
    // far side: the path angle reflects about +-pi/2 while heading and
    // roll swing half a turn.
    if (n.gamma > kPi / 2.0) {
        n.gamma = kPi - n.gamma;
        n.psi += kPi;
        n.phi += kPi;
    } else if (n.gamma < -kPi / 2.0) {
        n.gamma = -kPi - n.gamma;
        n.psi += kPi;
        n.phi += kPi;
    }
    n.psi = wrap_pi(n.psi);
    n.phi = wrap_pi(n.phi);
    n.gamma = std::clamp(n.gamma, -kGammaCap, kGammaCap);
    return n;
}

// Hold one action for the whole horizon and return the terminal state.
inline AircraftState forward_project(const AircraftState& s, const ControlAction& a,
                                     const PerformanceLimits& limits, double horizon,
                                     double dt = kDecisionDt) {
    if (dt <= 0.0 || horizon <= 0.0)
        throw std::invalid_argument("forward_project: horizon and dt must be positive");
    const double steps_f = horizon / dt;
    const int steps = static_cast<int>(std::lround(steps_f));
    if (steps < 1 || std::abs(steps_f - steps) > 1e-9)
        throw std::invalid_argument("forward_project: horizon must be a multiple of dt");

    AircraftState out = s;
    for (int i = 0; i < steps; ++i) out = integrate_step(out, a, limits, dt);
    return out;
}

// Full action grid in a fixed order: phi_dot varies slowest, then
// alpha_dot, then thrust.
inline std::vector<ControlAction> enumerate_actions(const ActionTable& table) {
    std::vector<ControlAction> out;
    out.reserve(table.phi_dots.size() * table.alpha_dots.size() * table.thrusts.size());
    for (double p : table.phi_dots)
        for (double a : table.alpha_dots)
            for (double t : table.thrusts) out.push_back({a, p, t});
    return out;
}

inline std::vector<ControlAction> enumerate_actions(Team team) {
    return enumerate_actions(team == Team::blue ? ActionTable::blue() : ActionTable::red());
}

struct ReachablePair {
    AircraftState one_step;       // state after 0.1 s, applied if chosen
    AircraftState horizon_state;  // state after the full horizon, valued
};

// Both the executable next state and the horizon state for every action,
// index-aligned with the input list. The horizon pass reuses the first
// step, so each action costs horizon/dt integrations.
inline std::vector<ReachablePair> reachable_states(const AircraftState& s,
                                                   std::span<const ControlAction> actions,
                                                   const PerformanceLimits& limits,
                                                   double horizon = kHorizonS,
                                                   double dt = kDecisionDt) {
    if (actions.empty()) throw std::invalid_argument("reachable_states: empty action list");
    const double steps_f = horizon / dt;
    const int steps = static_cast<int>(std::lround(steps_f));
    if (steps < 1 || std::abs(steps_f - steps) > 1e-9)
        throw std::invalid_argument("reachable_states: horizon must be a multiple of dt");

    std::vector<ReachablePair> out(actions.size());
    for (size_t i = 0; i < actions.size(); ++i) {
        AircraftState cur = integrate_step(s, actions[i], limits, dt);
        out[i].one_step = cur;
        for (int k = 1; k < steps; ++k) cur = integrate_step(cur, actions[i], limits, dt);
        out[i].horizon_state = cur;
    }
    return out;
}

}  // namespace pursuit
