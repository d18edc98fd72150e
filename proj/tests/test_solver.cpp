#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pursuit/solver.hpp"
#include "test_support.hpp"

using namespace pursuit;

namespace {

const TerrainConfig kHighTerrain;  // defaults; tests keep altitude well above the band

RewardPeak pos_peak(const Vec3& at, double mag = 200.0, double decay = 0.999) {
    return {mag, decay, at, RewardPeak::unbounded()};
}

RewardPeak well(const Vec3& at, double radius, double mag = -300.0, double decay = 0.99) {
    return {mag, decay, at, radius};
}

std::vector<RewardPeak> random_peaks(std::mt19937_64& rng, size_t count, bool positive) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<RewardPeak> out;
    for (size_t i = 0; i < count; ++i) {
        const Vec3 at{25000.0 * u(rng), 25000.0 * u(rng), -25000.0 * u(rng)};
        const double mag = (positive ? 1.0 : -1.0) * (1.0 + 499.0 * u(rng));
        const double decay = 0.95 + 0.0499 * u(rng);
        const double radius = positive ? RewardPeak::unbounded() : 50.0 + 4950.0 * u(rng);
        out.emplace_back(mag, decay, at, radius);
    }
    return out;
}

}  // namespace

TEST_CASE("value_at: single peak at zero distance") {
    const Vec3 p{1000, 1000, -8000};
    const std::vector<RewardPeak> pos{pos_peak(p)};
    const auto v = value_at(p, pos, {}, kHighTerrain);
    CHECK(v.pos_max == 200.0);
    CHECK(v.neg_max == 0.0);
    CHECK(v.deck == 0.0);
    CHECK(v.total == 200.0);
}

TEST_CASE("value_at: exponential falloff over distance") {
    const std::vector<RewardPeak> pos{pos_peak({0, 0, -8000})};
    const auto v = value_at({1000, 0, -8000}, pos, {}, kHighTerrain);
    CHECK(v.total == doctest::Approx(73.5390849542).epsilon(1e-9));
}

TEST_CASE("value_at: wells beyond their radius are inert") {
    const std::vector<RewardPeak> pos{pos_peak({1000, 0, -8000})};
    const std::vector<RewardPeak> neg{well({600, 0, -8000}, 500.0)};
    const auto v = value_at({0, 0, -8000}, pos, neg, kHighTerrain);  // well at d=600
    CHECK(v.neg_max == 0.0);
    CHECK(v.total == doctest::Approx(73.5390849542).epsilon(1e-9));
}

TEST_CASE("value_at: radius gate is exclusive at the boundary") {
    const std::vector<RewardPeak> neg{well({300, 0, -8000}, 300.0)};
    CHECK(value_at({0, 0, -8000}, {}, neg, kHighTerrain).neg_max == 0.0);

    const std::vector<RewardPeak> wider{well({300, 0, -8000}, 300.0 + 1e-6)};
    CHECK(value_at({0, 0, -8000}, {}, wider, kHighTerrain).neg_max > 0.0);
}

TEST_CASE("value_at: matches the brute force evaluator") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const auto pos = random_peaks(rng, 1 + rng() % 25, true);
        const auto neg = random_peaks(rng, rng() % 25, false);
        const Vec3 point{25000.0 * u(rng), 25000.0 * u(rng), -25000.0 * u(rng)};
        const auto got = value_at(point, pos, neg, kHighTerrain);
        const auto want = oracle::value(point, pos, neg, kHighTerrain);
        CHECK(oracle::close_rel(got.pos_max, want.pos_max));
        CHECK(oracle::close_rel(got.neg_max, want.neg_max));
        CHECK(got.deck == want.deck);
        CHECK(oracle::close_rel(got.total, want.total, 1e-9, 1e-270));
        CHECK(got.total == got.pos_max - got.neg_max - got.deck);
    }
}

TEST_CASE("value_at: translation invariance in the horizontal plane") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        auto pos = random_peaks(rng, 5, true);
        auto neg = random_peaks(rng, 5, false);
        Vec3 point{12000 + 5000 * u(rng), 12000 + 5000 * u(rng), -9000 + 2000 * u(rng)};
        const auto base = value_at(point, pos, neg, kHighTerrain);

        const Vec3 shift{3333.25 * u(rng), -1234.5 * u(rng), 0.0};
        for (auto& p : pos) p.location += shift;
        for (auto& p : neg) p.location += shift;
        point += shift;
        const auto moved = value_at(point, pos, neg, kHighTerrain);
        CHECK(oracle::close_rel(moved.total, base.total, 1e-9, 1e-270));
    }
}

TEST_CASE("value_at: single-peak value decreases strictly with distance") {
    const std::vector<RewardPeak> pos{pos_peak({0, 0, -9000})};
    double prev = value_at({0, 0, -9000}, pos, {}, kHighTerrain).total;
    for (double d = 10.0; d < 20000.0; d *= 1.7) {
        const double v = value_at({d, 0, -9000}, pos, {}, kHighTerrain).total;
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("select_action: empty field ties break to index zero") {
    AircraftState s;
    s.v = 80.0;
    s.z = -9000.0;
    const auto actions = enumerate_actions(Team::blue);
    const auto rec =
        select_action(s, actions, PerformanceLimits::blue(), {}, {}, kHighTerrain);
    CHECK(rec.action_index == 0);
    CHECK(rec.chosen_value == 0.0);
}

TEST_CASE("select_action: agrees with brute force over the whole grid") {
    const auto lim = PerformanceLimits::blue();
    const auto actions = enumerate_actions(Team::blue);
    AircraftState s;
    s.v = 80.0;
    s.z = -9000.0;

    const std::vector<RewardPeak> pos{pos_peak({20000, 0, -9000})};
    const auto rec = select_action(s, actions, lim, pos, {}, kHighTerrain);

    int best = -1;
    double best_v = -1e300;
    for (size_t i = 0; i < actions.size(); ++i) {
        const auto h = forward_project(s, actions[i], lim, 1.0);
        const double v = oracle::value(h.position(), pos, {}, kHighTerrain).total;
        if (v > best_v) {
            best_v = v;
            best = static_cast<int>(i);
        }
    }
    CHECK(rec.action_index == best);
    CHECK(rec.chosen_value == doctest::Approx(best_v).epsilon(1e-9));
    // dead ahead: no reason to roll
    CHECK(actions[static_cast<size_t>(rec.action_index)].phi_dot == 0.0);
}

TEST_CASE("select_action: climbs away from the penalty band") {
    const auto lim = PerformanceLimits::blue();
    const auto actions = enumerate_actions(Team::blue);
    AircraftState s;
    s.v = 100.0;
    s.z = -1200.0;  // inside the band, which tops out at 1500 m

    const auto rec = select_action(s, actions, lim, {}, {}, TerrainConfig{});
    const double chosen_alt =
        forward_project(s, actions[static_cast<size_t>(rec.action_index)], lim, 1.0).altitude();
    double worst_alt = 1e300;
    for (const auto& a : actions)
        worst_alt = std::min(worst_alt, forward_project(s, a, lim, 1.0).altitude());
    CHECK(chosen_alt > worst_alt);
}

TEST_CASE("select_action: deterministic and scale invariant") {
    const auto lim = PerformanceLimits::red();
    const auto actions = enumerate_actions(Team::red);
    std::mt19937_64 rng(47);

    for (int i = 0; i < 10; ++i) {
        AircraftState s = test_support::random_state(rng, lim, true);
        s.z = -9000.0 - 1000.0 * (i % 3);
        auto pos = random_peaks(rng, 4, true);
        auto neg = random_peaks(rng, 6, false);
        for (auto& p : neg) p.location = s.position() + (p.location - Vec3{12500, 12500, -12500}) * 0.05;

        const auto a = select_action(s, actions, lim, pos, neg, kHighTerrain);
        const auto b = select_action(s, actions, lim, pos, neg, kHighTerrain);
        CHECK(a.action_index == b.action_index);
        CHECK(a.one_step_state == b.one_step_state);

        const double c = 3.7;
        std::vector<RewardPeak> pos_scaled;
        std::vector<RewardPeak> neg_scaled;
        for (const auto& p : pos) pos_scaled.emplace_back(p.magnitude * c, p.decay, p.location, p.radius);
        for (const auto& p : neg) neg_scaled.emplace_back(p.magnitude * c, p.decay, p.location, p.radius);
        TerrainConfig scaled_terrain = kHighTerrain;
        scaled_terrain.deck_weight *= c;
        const auto sc = select_action(s, actions, lim, pos_scaled, neg_scaled, scaled_terrain);
        CHECK(sc.action_index == a.action_index);
        CHECK(sc.chosen_value == doctest::Approx(a.chosen_value * c).epsilon(1e-9));
    }
}

TEST_CASE("select_action: rejects an empty action list") {
    AircraftState s;
    s.v = 80.0;
    CHECK_THROWS_AS(select_action(s, {}, PerformanceLimits::blue(), {}, {}, kHighTerrain),
                    std::invalid_argument);
}
