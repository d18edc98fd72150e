#pragma once

#include <algorithm>
#include <numeric>

#include "pursuit/engagement.hpp"

namespace pursuit {

struct TrialSummary {
    Outcome outcome = Outcome::draw;
    std::array<int, 2> initial_count{0, 0};
    std::array<int, 2> final_count{0, 0};
    std::array<double, 2> mean_decision_us{0.0, 0.0};
    std::array<double, 2> max_decision_us{0.0, 0.0};
    std::array<std::vector<double>, 2> decision_us;  // raw samples for aggregation
};

inline TrialSummary summarize(const EpisodeResult& r) {
    TrialSummary s;
    s.outcome = r.outcome;
    s.initial_count = r.initial_count;
    s.final_count = r.final_count;
    s.decision_us = r.decision_us;
    for (size_t t = 0; t < 2; ++t) {
        const auto& xs = s.decision_us[t];
        if (xs.empty()) continue;
        s.mean_decision_us[t] = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
        s.max_decision_us[t] = *std::max_element(xs.begin(), xs.end());
    }
    return s;
}

// Fraction of trials won outright by the team. Draws count in the
// denominator for both teams.
inline double p_win(std::span<const TrialSummary> trials, Team team) {
    if (trials.empty()) throw std::invalid_argument("p_win: no trials");
    const Outcome want = team == Team::blue ? Outcome::blue_win : Outcome::red_win;
    size_t wins = 0;
    for (const auto& t : trials) wins += t.outcome == want ? 1 : 0;
    return static_cast<double>(wins) / static_cast<double>(trials.size());
}

// Mean over trials of the fraction of the team's aircraft still alive at
// the end.
inline double p_survive(std::span<const TrialSummary> trials, Team team) {
    if (trials.empty()) throw std::invalid_argument("p_survive: no trials");
    const size_t k = static_cast<size_t>(team_index(team));
    double sum = 0.0;
    for (const auto& t : trials) {
        if (t.initial_count[k] <= 0)
            throw std::invalid_argument("p_survive: trial with empty team");
        sum += static_cast<double>(t.final_count[k]) / static_cast<double>(t.initial_count[k]);
    }
    return sum / static_cast<double>(trials.size());
}

struct TimingStats {
    double mean_us = 0.0;
    double p50_us = 0.0;
    double p95_us = 0.0;
    double max_us = 0.0;
    size_t samples = 0;
};

// Aggregates per-decision wall times across all agents, steps and trials
// for one team. Percentiles use the nearest-rank convention.
inline TimingStats timing_summary(std::span<const TrialSummary> trials, Team team) {
    const size_t k = static_cast<size_t>(team_index(team));
    std::vector<double> all;
    for (const auto& t : trials) all.insert(all.end(), t.decision_us[k].begin(),
                                            t.decision_us[k].end());
    if (all.empty()) throw std::invalid_argument("timing_summary: no timing samples");

    std::sort(all.begin(), all.end());
    const auto rank = [&](double q) {
        const size_t i = static_cast<size_t>(std::ceil(q * all.size()));
        return all[std::min(all.size() - 1, i > 0 ? i - 1 : 0)];
    };
    TimingStats out;
    out.samples = all.size();
    out.mean_us = std::accumulate(all.begin(), all.end(), 0.0) / all.size();
    out.p50_us = rank(0.50);
    out.p95_us = rank(0.95);
    out.max_us = all.back();
    return out;
}

}  // namespace pursuit
