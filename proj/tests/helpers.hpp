// Shared test fixtures and independent brute-force oracles.  Everything here
// is deliberately naive; the point is to cross-check the library through a
// different route.
#pragma once

#include <algorithm>
#include <vector>

#include "mozeno/domain.hpp"
#include "mozeno/front.hpp"
#include "mozeno/moea.hpp"
#include "mozeno/plan.hpp"
#include "mozeno/rng.hpp"

namespace testutil {

using namespace mozeno;

inline int find_action(const GroundTask& task, ActionKind kind, int plane, int passenger,
                       int from, int to) {
    for (std::size_t i = 0; i < task.actions.size(); ++i) {
        const GroundAction& a = task.actions[i];
        if (a.kind == kind && a.plane == plane && a.passenger == passenger &&
            a.from_city == from && a.to_city == to)
            return (int)i;
    }
    throw std::logic_error("no such action");
}

/// The paper's zero-idle k=1 routing, in sequence form: both planes ferry
/// through city 1 and nobody idles; compresses to makespan 8.
inline std::vector<int> optimal_k1_sequence(const GroundTask& task) {
    return {
        find_action(task, ActionKind::Transport, 0, 0, 0, 1),
        find_action(task, ActionKind::Transport, 1, 1, 0, 1),
        find_action(task, ActionKind::Transport, 0, 0, 1, 4),
        find_action(task, ActionKind::Fly, 1, -1, 1, 0),
        find_action(task, ActionKind::Fly, 0, -1, 4, 1),
        find_action(task, ActionKind::Transport, 1, 2, 0, 1),
        find_action(task, ActionKind::Transport, 0, 1, 1, 4),
        find_action(task, ActionKind::Transport, 1, 2, 1, 4),
    };
}

inline ScheduledPlan optimal_k1_schedule(const GroundTask& task) {
    auto seq = optimal_k1_sequence(task);
    ScheduledPlan plan;
    Ratio starts[8] = {Ratio(0), Ratio(0), Ratio(2), Ratio(2),
                       Ratio(4), Ratio(4), Ratio(6), Ratio(6)};
    for (int i = 0; i < 8; ++i) plan.steps.push_back({starts[i], seq[i]});
    plan.makespan = Ratio(8);
    return plan;
}

inline std::vector<int> applicable_actions(const GroundTask& task, const AtomSet& state) {
    std::vector<int> out;
    for (std::size_t i = 0; i < task.actions.size(); ++i)
        if (state.contains_all(task.actions[i].pre_mask)) out.push_back((int)i);
    return out;
}

/// Random executable action sequence from the initial state.
inline std::vector<int> random_walk(const GroundTask& task, int length, Rng& rng) {
    std::vector<int> seq;
    AtomSet state = task.initial;
    for (int i = 0; i < length; ++i) {
        auto apps = applicable_actions(task, state);
        if (apps.empty()) break;
        int a = apps[draw_below(rng, apps.size())];
        seq.push_back(a);
        state = step(state, task.actions[a], task);
    }
    return seq;
}

// --- brute-force oracles ----------------------------------------------------

/// Front ranks by repeated peeling, quadratic and independent of the
/// library's bookkeeping.
inline std::vector<int> brute_force_ranks(const std::vector<ScoredPoint>& pop) {
    int n = (int)pop.size();
    std::vector<int> rank(n, -1);
    int assigned = 0, r = 0;
    while (assigned < n) {
        std::vector<int> layer;
        for (int i = 0; i < n; ++i) {
            if (rank[i] >= 0) continue;
            bool dominated = false;
            for (int j = 0; j < n; ++j)
                if (j != i && rank[j] < 0 &&
                    dominates(pop[j].objectives, pop[i].objectives)) {
                    dominated = true;
                    break;
                }
            if (!dominated) layer.push_back(i);
        }
        for (int i : layer) rank[i] = r;
        assigned += (int)layer.size();
        ++r;
    }
    return rank;
}

inline std::vector<int> brute_force_strengths(const std::vector<ScoredPoint>& pop) {
    int n = (int)pop.size();
    std::vector<int> s(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && dominates(pop[i].objectives, pop[j].objectives)) ++s[i];
    return s;
}

/// Monte Carlo hypervolume of normalized points w.r.t. (ref, ref).
inline double monte_carlo_hypervolume(const std::vector<std::pair<double, double>>& pts,
                                      double ref, int samples, Rng& rng) {
    int hits = 0;
    for (int i = 0; i < samples; ++i) {
        double x = draw_unit(rng) * ref;
        double y = draw_unit(rng) * ref;
        for (const auto& p : pts)
            if (p.first <= x && p.second <= y) { ++hits; break; }
    }
    return ref * ref * (double)hits / (double)samples;
}

inline std::vector<ScoredPoint> random_points(int n, Rng& rng, int grid = 1000) {
    std::vector<ScoredPoint> pts;
    for (int i = 0; i < n; ++i)
        pts.push_back({{Ratio((std::int64_t)draw_below(rng, grid), 10),
                        Ratio((std::int64_t)draw_below(rng, grid), 10)},
                       true, i});
    return pts;
}

} // namespace testutil
