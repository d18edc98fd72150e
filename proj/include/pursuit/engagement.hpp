#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <utility>

#include "pursuit/solver.hpp"
#include "pursuit/thread_pool.hpp"

namespace pursuit {

inline constexpr double kCaptureRangeM = 100.0;
inline constexpr double kCaptureAngleRad = kPi / 3.0;  // 60 degrees
inline constexpr int kCaptureHoldSteps = 30;
inline constexpr std::size_t kHistoryLen = 30;  // 3 s of samples at 10 Hz

// Fixed-capacity FIFO; index 0 is the oldest retained sample.
template <typename T, std::size_t N>
class RingBuffer {
  public:
    static constexpr std::size_t capacity = N;

    void push_back(const T& v) {
        if (size_ < N) {
            data_[(start_ + size_) % N] = v;
            ++size_;
        } else {
            data_[start_] = v;
            start_ = (start_ + 1) % N;
        }
    }

    std::size_t size() const { return size_; }
    bool full() const { return size_ == N; }
    bool empty() const { return size_ == 0; }
    const T& front() const { return data_[start_]; }
    const T& back() const { return data_[(start_ + size_ - 1) % N]; }
    const T& operator[](std::size_t i) const { return data_[(start_ + i) % N]; }

    bool operator==(const RingBuffer& o) const {
        if (size_ != o.size_) return false;
        for (std::size_t i = 0; i < size_; ++i)
            if (!((*this)[i] == o[i])) return false;
        return true;
    }

  private:
    std::array<T, N> data_{};
    std::size_t start_ = 0;
    std::size_t size_ = 0;
};

struct HistorySample {
    Vec3 position;
    Vec3 velocity;
    bool operator==(const HistorySample&) const = default;
};

using HistoryBuffer = RingBuffer<HistorySample, kHistoryLen>;

struct Aircraft {
    int id = -1;
    Team team = Team::blue;
    AircraftState state;
    HistoryBuffer history;

    AircraftSnapshot snapshot() const { return {state.position(), state.velocity(), team, id}; }
    bool operator==(const Aircraft&) const = default;
};

enum class EventKind { spawn, capture, crash, draw_timeout };

inline const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::spawn: return "spawn";
        case EventKind::capture: return "capture";
        case EventKind::crash: return "crash";
        default: return "draw_timeout";
    }
}

struct EngagementEvent {
    EventKind kind = EventKind::spawn;
    int step = 0;
    int subject_id = -1;
    int pursuer_id = -1;  // only meaningful for captures
    std::array<int, 2> team_scores{0, 0};
};

struct ScenarioConfig {
    int blue_count = 1;
    int red_count = 1;
    double volume_m = 25000.0;  // side of the cubic arena
    TerrainConfig terrain;
    double dt = kDecisionDt;
    int max_steps = 9000;
    std::uint64_t seed = 1;
    PerformanceLimits blue_limits = PerformanceLimits::blue();
    PerformanceLimits red_limits = PerformanceLimits::red();
    ActionTable blue_actions = ActionTable::blue();
    ActionTable red_actions = ActionTable::red();
    double radius_floor = kOpponentRadiusFloor;
    double horizon_s = kHorizonS;

    // Spawn geometry: opposing boxes either side of the center line,
    // pointed at each other with some heading scatter. The boxes sit
    // close together; if the teams start much farther apart than they
    // spawn from their own teammates, the pursuit reward has no gradient
    // against the teammate peaks and both sides just orbit themselves.
    std::array<double, 2> spawn_blue_x{0.38, 0.47};  // fractions of the volume side
    std::array<double, 2> spawn_red_x{0.53, 0.62};
    std::array<double, 2> spawn_y{0.35, 0.65};
    double spawn_alt_min = 3000.0;
    double spawn_alt_max = 8000.0;
    double heading_jitter_rad = deg2rad(20.0);

    const PerformanceLimits& limits(Team t) const {
        return t == Team::blue ? blue_limits : red_limits;
    }
    const ActionTable& action_table(Team t) const {
        return t == Team::blue ? blue_actions : red_actions;
    }
    int count(Team t) const { return t == Team::blue ? blue_count : red_count; }

    void validate() const {
        if (blue_count < 1 || red_count < 1)
            throw std::invalid_argument("scenario: team counts must be >= 1");
        if (max_steps < 1) throw std::invalid_argument("scenario: max_steps must be >= 1");
        if (dt <= 0.0) throw std::invalid_argument("scenario: dt must be positive");
        if (volume_m <= 0.0) throw std::invalid_argument("scenario: volume must be positive");
        if (!(spawn_alt_min < spawn_alt_max) || spawn_alt_max > volume_m)
            throw std::invalid_argument("scenario: spawn altitude band invalid");
        for (const auto& band : {spawn_blue_x, spawn_red_x, spawn_y})
            if (!(band[0] >= 0.0 && band[0] < band[1] && band[1] <= 1.0))
                throw std::invalid_argument("scenario: spawn band must be within [0,1]");
        if (spawn_alt_min <= terrain.h_deck())
            throw std::invalid_argument("scenario: spawn band must sit above the hard deck");
        for (Team t : {Team::blue, Team::red}) {
            const auto& l = limits(t);
            if (!(l.v_min > 0.0 && l.v_min < l.v_max) || !(l.alpha_min < l.alpha_max) ||
                !(l.psi_dot_max > 0.0))
                throw std::invalid_argument("scenario: performance limits invalid");
            const auto& a = action_table(t);
            if (a.phi_dots.empty() || a.alpha_dots.empty() || a.thrusts.empty())
                throw std::invalid_argument("scenario: action table empty");
        }
    }

    bool operator==(const ScenarioConfig&) const = default;
};

struct WorldState {
    std::vector<Aircraft> live;  // id-ascending
    std::map<std::pair<int, int>, int> capture_progress;  // (pursuer, evader) -> held steps
    std::array<int, 2> scores{0, 0};
    int step = 0;
    std::uint64_t rng_seed = 0;

    bool has_team(Team t) const {
        for (const auto& a : live)
            if (a.team == t) return true;
        return false;
    }
    const Aircraft* find(int id) const {
        for (const auto& a : live)
            if (a.id == id) return &a;
        return nullptr;
    }

    bool operator==(const WorldState&) const = default;
};

// Deterministic seeded uniform source; identical across platforms for a
// given seed, unlike std::uniform_real_distribution.
struct Rng {
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double next01() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * next01(); }
    std::mt19937_64 gen;
};

// Teams spawn in opposing x bands, headed at each other. Draws happen in
// a fixed order (blue ids ascending then red; x, y, altitude, heading per
// aircraft) so a seed pins the whole world.
inline WorldState spawn_world(const ScenarioConfig& cfg,
                              std::vector<EngagementEvent>* events = nullptr) {
    cfg.validate();
    Rng rng(cfg.seed);
    WorldState w;
    w.rng_seed = cfg.seed;
    w.live.reserve(static_cast<size_t>(cfg.blue_count + cfg.red_count));

    int next_id = 0;
    for (Team team : {Team::blue, Team::red}) {
        const auto& lim = cfg.limits(team);
        const auto& band = team == Team::blue ? cfg.spawn_blue_x : cfg.spawn_red_x;
        const double x_lo = band[0] * cfg.volume_m;
        const double x_hi = band[1] * cfg.volume_m;
        const double base_heading = team == Team::blue ? 0.0 : kPi;
        for (int i = 0; i < cfg.count(team); ++i) {
            Aircraft a;
            a.id = next_id++;
            a.team = team;
            a.state.x = rng.uniform(x_lo, x_hi);
            a.state.y = rng.uniform(cfg.spawn_y[0] * cfg.volume_m, cfg.spawn_y[1] * cfg.volume_m);
            a.state.z = -rng.uniform(cfg.spawn_alt_min, cfg.spawn_alt_max);
            a.state.psi = wrap_pi(base_heading +
                                  rng.uniform(-cfg.heading_jitter_rad, cfg.heading_jitter_rad));
            a.state.v = 0.5 * (lim.v_min + lim.v_max);
            if (events)
                events->push_back({EventKind::spawn, 0, a.id, -1, w.scores});
            w.live.push_back(std::move(a));
        }
    }
    return w;
}

// Capture geometry: the pursuer must sit within 100 m of the control
// point (the oldest sample of the evader's full 3 s history) with its
// velocity within 60 degrees of the evader's current velocity.
inline bool check_capture(const AircraftSnapshot& pursuer, const HistoryBuffer& evader_history) {
    if (!evader_history.full()) return false;
    if (distance(pursuer.position, evader_history.front().position) >= kCaptureRangeM)
        return false;
    return angle_between(pursuer.velocity, evader_history.back().velocity) < kCaptureAngleRad;
}

struct EngineContext {
    ScenarioConfig cfg;
    std::array<std::vector<ControlAction>, 2> actions;  // indexed by team
    ThreadPool* pool = nullptr;

    std::span<const ControlAction> team_actions(Team t) const {
        return actions[static_cast<size_t>(team_index(t))];
    }
};

inline EngineContext make_context(const ScenarioConfig& cfg, ThreadPool* pool = nullptr) {
    EngineContext ctx;
    ctx.cfg = cfg;
    ctx.actions[0] = enumerate_actions(cfg.blue_actions);
    ctx.actions[1] = enumerate_actions(cfg.red_actions);
    ctx.pool = pool;
    return ctx;
}

struct AgentDecision {
    int id = -1;
    Team team = Team::blue;
    DecisionRecord record;
};

struct StepResult {
    WorldState world;
    std::vector<EngagementEvent> events;
    std::vector<AgentDecision> decisions;
};

namespace detail {

// One agent's full decision against a frozen snapshot of the world:
// build the reward field, project every action, pick the argmax. The
// recorded time spans all of it.
inline AgentDecision decide_agent(const Aircraft& self,
                                  std::span<const AircraftSnapshot> all_snapshots,
                                  const EngineContext& ctx) {
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<AircraftSnapshot> mates;
    std::vector<AircraftSnapshot> opponents;
    for (const auto& s : all_snapshots) {
        if (s.id == self.id) continue;
        (s.team == self.team ? mates : opponents).push_back(s);
    }

    std::vector<RewardPeak> pos;
    std::vector<RewardPeak> neg;
    pos.reserve(mates.size() + opponents.size());
    neg.reserve(6 * mates.size() + 4 * opponents.size());
    for (auto& p : build_teammate_peaks(mates)) (p.is_positive() ? pos : neg).push_back(p);
    for (auto& p : build_opponent_peaks(opponents, ctx.cfg.radius_floor))
        (p.is_positive() ? pos : neg).push_back(p);

    AgentDecision d;
    d.id = self.id;
    d.team = self.team;
    d.record = select_action(self.state, ctx.team_actions(self.team), ctx.cfg.limits(self.team),
                             pos, neg, ctx.cfg.terrain, ctx.cfg.horizon_s, ctx.cfg.dt);
    d.record.decision_time_us =
        std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
    return d;
}

inline void erase_progress_involving(std::map<std::pair<int, int>, int>& progress, int id) {
    for (auto it = progress.begin(); it != progress.end();)
        it = (it->first.first == id || it->first.second == id) ? progress.erase(it)
                                                               : std::next(it);
}

}  // namespace detail

// Advances the world by one 0.1 s step: every live aircraft decides
// against the same frozen snapshot, all moves apply at once, then
// captures and hard-deck crashes resolve. `order` permutes only the
// internal decision iteration and never the outcome.
inline StepResult step(const WorldState& w, const EngineContext& ctx,
                       std::span<const size_t> order = {}) {
    if (!w.has_team(Team::blue) || !w.has_team(Team::red))
        throw std::logic_error("step: engagement already terminated");
    if (w.step >= ctx.cfg.max_steps) throw std::logic_error("step: past max_steps");

    const size_t n = w.live.size();
    std::vector<AircraftSnapshot> snapshots(n);
    for (size_t i = 0; i < n; ++i) snapshots[i] = w.live[i].snapshot();

    StepResult res;
    res.decisions.resize(n);
    const auto decide = [&](size_t i) {
        res.decisions[i] = detail::decide_agent(w.live[i], snapshots, ctx);
    };
    if (ctx.pool && n > 1) {
        ctx.pool->parallel_for(n, decide);
    } else if (order.empty()) {
        for (size_t i = 0; i < n; ++i) decide(i);
    } else {
        if (order.size() != n) throw std::invalid_argument("step: bad iteration order");
        for (size_t i : order) decide(i);
    }

    const int step_label = w.step + 1;
    res.world = w;
    res.world.step = step_label;
    for (size_t i = 0; i < n; ++i) {
        Aircraft& a = res.world.live[i];
        a.state = res.decisions[i].record.one_step_state;
        a.history.push_back({a.state.position(), a.state.velocity()});
    }

    // Captures, in ascending (pursuer id, evader id) order. A removal
    // takes effect immediately for the rest of the scan.
    std::set<int> dead;
    auto& live = res.world.live;
    for (const auto& pursuer : live) {
        if (dead.count(pursuer.id)) continue;
        for (const auto& evader : live) {
            if (evader.team == pursuer.team || dead.count(evader.id) || dead.count(pursuer.id))
                continue;
            const auto key = std::make_pair(pursuer.id, evader.id);
            if (!check_capture(pursuer.snapshot(), evader.history)) {
                res.world.capture_progress.erase(key);
                continue;
            }
            int& held = res.world.capture_progress[key];
            if (++held < kCaptureHoldSteps) continue;
            res.world.scores[team_index(pursuer.team)] += 1;
            dead.insert(evader.id);
            detail::erase_progress_involving(res.world.capture_progress, evader.id);
            res.events.push_back(
                {EventKind::capture, step_label, evader.id, pursuer.id, res.world.scores});
        }
    }

    // Hard-deck crashes. No points are awarded.
    for (const auto& a : live) {
        if (dead.count(a.id) || a.state.altitude() >= ctx.cfg.terrain.h_deck()) continue;
        dead.insert(a.id);
        detail::erase_progress_involving(res.world.capture_progress, a.id);
        res.events.push_back({EventKind::crash, step_label, a.id, -1, res.world.scores});
    }

    if (!dead.empty())
        std::erase_if(live, [&](const Aircraft& a) { return dead.count(a.id) > 0; });
    return res;
}

enum class Outcome { blue_win, red_win, draw };

inline const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::blue_win: return "blue_win";
        case Outcome::red_win: return "red_win";
        default: return "draw";
    }
}

// One telemetry record per aircraft per executed step; the state is the
// post-move state for that step.
struct TelemetryRow {
    int step = 0;
    double time_s = 0.0;
    int aircraft_id = -1;
    Team team = Team::blue;
    double x_m = 0.0;
    double y_m = 0.0;
    double altitude_m = 0.0;
    double v_mps = 0.0;
    double gamma_rad = 0.0;
    double psi_rad = 0.0;
    double phi_rad = 0.0;
    double alpha_rad = 0.0;
    int action_index = -1;
    double chosen_value = 0.0;
    double decision_time_us = 0.0;
};

struct EpisodeResult {
    Outcome outcome = Outcome::draw;
    std::array<int, 2> scores{0, 0};
    int steps = 0;
    std::array<int, 2> initial_count{0, 0};
    std::array<int, 2> final_count{0, 0};
    std::vector<EngagementEvent> events;
    std::vector<TelemetryRow> telemetry;
    std::array<std::vector<double>, 2> decision_us;  // per-team samples
};

// Runs a full contest: spawn, step until one side is empty or the step
// budget runs out, then score. Decision timings are always collected;
// telemetry rows only when requested.
inline EpisodeResult run_episode(const ScenarioConfig& cfg, ThreadPool* pool = nullptr,
                                 bool collect_telemetry = true) {
    cfg.validate();
    const EngineContext ctx = make_context(cfg, pool);

    EpisodeResult result;
    result.initial_count = {cfg.blue_count, cfg.red_count};
    WorldState world = spawn_world(cfg, &result.events);
    if (collect_telemetry)
        result.telemetry.reserve(static_cast<size_t>(cfg.max_steps) * world.live.size() / 4);

    while (world.step < cfg.max_steps && world.has_team(Team::blue) &&
           world.has_team(Team::red)) {
        StepResult res = step(world, ctx);
        for (const auto& d : res.decisions) {
            result.decision_us[static_cast<size_t>(team_index(d.team))].push_back(
                d.record.decision_time_us);
            if (!collect_telemetry) continue;
            const AircraftState& s = d.record.one_step_state;
            result.telemetry.push_back({res.world.step, res.world.step * cfg.dt, d.id, d.team,
                                        s.x, s.y, s.altitude(), s.v, s.gamma, s.psi, s.phi,
                                        s.alpha, d.record.action_index, d.record.chosen_value,
                                        d.record.decision_time_us});
        }
        result.events.insert(result.events.end(), res.events.begin(), res.events.end());
        world = std::move(res.world);
    }

    result.steps = world.step;
    result.scores = world.scores;
    for (const auto& a : world.live) result.final_count[team_index(a.team)] += 1;

    if (world.scores[0] > world.scores[1])
        result.outcome = Outcome::blue_win;
    else if (world.scores[1] > world.scores[0])
        result.outcome = Outcome::red_win;
    else
        result.outcome = Outcome::draw;

    if (result.outcome == Outcome::draw && world.step >= cfg.max_steps)
        result.events.push_back({EventKind::draw_timeout, world.step, -1, -1, world.scores});
    return result;
}

}  // namespace pursuit
