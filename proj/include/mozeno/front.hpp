// Objective points, Pareto dominance (minimization), and the closed-form
// reference fronts of the benchmark family.
#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "domain.hpp"
#include "ratio.hpp"

namespace mozeno {

struct ObjectivePoint {
    Ratio makespan;
    Ratio secondary;

    friend bool operator==(const ObjectivePoint&, const ObjectivePoint&) = default;
};

/// Strict Pareto dominance under minimization.
inline bool dominates(const ObjectivePoint& p, const ObjectivePoint& q) {
    return p.makespan <= q.makespan && p.secondary <= q.secondary && !(p == q);
}

inline bool weakly_dominates(const ObjectivePoint& p, const ObjectivePoint& q) {
    return p.makespan <= q.makespan && p.secondary <= q.secondary;
}

/// Non-dominated point set, sorted by increasing makespan (and therefore
/// strictly decreasing secondary).
struct ParetoFront {
    std::vector<ObjectivePoint> points;

    std::size_t size() const { return points.size(); }
};

/// Maximal non-dominated subset, deduplicated and sorted by makespan.
inline ParetoFront pareto_filter(const std::vector<ObjectivePoint>& input) {
    if (input.empty()) throw std::invalid_argument("pareto_filter: empty input");
    std::vector<ObjectivePoint> pts = input;
    std::sort(pts.begin(), pts.end(), [](const ObjectivePoint& a, const ObjectivePoint& b) {
        if (a.makespan != b.makespan) return a.makespan < b.makespan;
        return a.secondary < b.secondary;
    });
    ParetoFront front;
    for (const ObjectivePoint& p : pts) {
        if (!front.points.empty()) {
            const ObjectivePoint& last = front.points.back();
            if (weakly_dominates(last, p)) continue; // covers duplicates
        }
        front.points.push_back(p);
    }
    return front;
}

// ---------------------------------------------------------------------------
// Closed-form fronts.
//
// With the default corridor durations (2,4,6) a zero-idle routing through a
// single central city i takes (6k-2) legs per plane and (6k-2) taxed central
// landings overall, i.e. makespan (6k-2)*d_i.  In cost mode with taxes
// (3,2,1) the mixed routings fill a regular grid between the single-city
// extremes; in risk mode only the three single-city points can be optimal.

inline Ratio single_city_makespan(const MultiZenoConfig& cfg, int city) {
    return Ratio(6 * cfg.bunch_count - 2) * cfg.durations[city - 1];
}

inline ParetoFront exact_front_analytic(const MultiZenoConfig& cfg) {
    cfg.validate();
    if (cfg.plane_count != 2)
        throw ConfigError("analytic fronts assume the canonical 2-plane family; "
                          "use the oracle for other plane counts");
    if (cfg.mode == ObjectiveMode::Risk) {
        std::vector<ObjectivePoint> pts;
        for (int c = 1; c <= 3; ++c)
            pts.push_back({single_city_makespan(cfg, c), cfg.risks[c - 1]});
        return pareto_filter(pts);
    }
    const MultiZenoConfig defaults;
    if (cfg.durations != defaults.durations || cfg.costs != defaults.costs)
        throw ConfigError(
            "analytic cost front requires 2 planes, durations (2,4,6) and costs (3,2,1); "
            "use the oracle for other configurations");
    int k = cfg.bunch_count;
    std::vector<ObjectivePoint> pts;
    for (int j = 0; j <= 6 * k - 2; ++j)
        pts.push_back({Ratio(12 * k - 4 + 4 * j), Ratio(18 * k - 6 - 2 * j)});
    return pareto_filter(pts);
}

} // namespace mozeno
