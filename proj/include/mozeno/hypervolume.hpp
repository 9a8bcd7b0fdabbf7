// Unary hypervolume deficit against a known exact front, and per-point
// attainment tracking.  Both sets are normalized by the exact front's
// bounding box; the reference point is (1.1, 1.1) in normalized space and
// points beyond the box are clipped to it.  A deficit of 0 means the exact
// front has been reached.
#pragma once

#include <algorithm>
#include <vector>

#include "front.hpp"

namespace mozeno {

inline constexpr double kHypervolumeReference = 1.1;

namespace detail {

/// 2-D hypervolume of a point set w.r.t. (ref, ref), minimization; the set
/// need not be filtered or sorted.
inline double sweep_hypervolume(std::vector<std::pair<double, double>> pts, double ref) {
    std::erase_if(pts, [&](const auto& p) { return p.first >= ref || p.second >= ref; });
    if (pts.empty()) return 0.0;
    std::sort(pts.begin(), pts.end());
    // Reduce to the staircase of sweep-improving points, then sum one slab
    // per stair from its first coordinate to the next stair (or the wall).
    std::vector<std::pair<double, double>> stair;
    for (const auto& p : pts)
        if (stair.empty() || p.second < stair.back().second) stair.push_back(p);
    double volume = 0.0;
    for (std::size_t i = 0; i < stair.size(); ++i) {
        double next_first = i + 1 < stair.size() ? stair[i + 1].first : ref;
        volume += (next_first - stair[i].first) * (ref - stair[i].second);
    }
    return volume;
}

struct FrontBox {
    Ratio min_makespan, max_makespan, min_secondary, max_secondary;
};

inline FrontBox bounding_box(const ParetoFront& front) {
    FrontBox box{front.points.front().makespan, front.points.front().makespan,
                 front.points.front().secondary, front.points.front().secondary};
    for (const ObjectivePoint& p : front.points) {
        box.min_makespan = min(box.min_makespan, p.makespan);
        box.max_makespan = max(box.max_makespan, p.makespan);
        box.min_secondary = min(box.min_secondary, p.secondary);
        box.max_secondary = max(box.max_secondary, p.secondary);
    }
    return box;
}

inline std::pair<double, double> normalize_clip(const ObjectivePoint& p, const FrontBox& box) {
    auto coord = [](const Ratio& v, const Ratio& lo, const Ratio& hi) {
        if (!(lo < hi)) return 0.0;
        double x = ((v - lo) / (hi - lo)).to_double();
        return std::clamp(x, 0.0, 1.0);
    };
    return {coord(p.makespan, box.min_makespan, box.max_makespan),
            coord(p.secondary, box.min_secondary, box.max_secondary)};
}

} // namespace detail

/// HV(exact) - HV(approx) after normalization; an empty approximation scores
/// the maximal deficit HV(exact).
inline double unary_hypervolume(const std::vector<ObjectivePoint>& approx,
                                const ParetoFront& exact) {
    if (exact.points.empty())
        throw std::invalid_argument("unary_hypervolume: empty exact front");
    detail::FrontBox box = detail::bounding_box(exact);
    std::vector<std::pair<double, double>> en, an;
    for (const ObjectivePoint& p : exact.points)
        en.push_back(detail::normalize_clip(p, box));
    for (const ObjectivePoint& p : approx)
        an.push_back(detail::normalize_clip(p, box));
    return detail::sweep_hypervolume(std::move(en), kHypervolumeReference) -
           detail::sweep_hypervolume(std::move(an), kHypervolumeReference);
}

inline double unary_hypervolume(const ParetoFront& approx, const ParetoFront& exact) {
    return unary_hypervolume(approx.points, exact);
}

// ---------------------------------------------------------------------------

struct AttainmentRecord {
    ObjectivePoint point;
    long long attained_evals = -1;
    double attained_seconds = -1.0;
};

/// Marks, for each exact-front point, the first clock at which some
/// evaluated point weakly dominated it.
class AttainmentTracker {
public:
    explicit AttainmentTracker(const ParetoFront& exact) {
        for (const ObjectivePoint& p : exact.points) records_.push_back({p, -1, -1.0});
    }

    void update(const ObjectivePoint& evaluated, long long evals, double seconds) {
        for (AttainmentRecord& r : records_) {
            if (r.attained_evals >= 0) continue;
            if (weakly_dominates(evaluated, r.point)) {
                r.attained_evals = evals;
                r.attained_seconds = seconds;
            }
        }
    }

    const std::vector<AttainmentRecord>& records() const { return records_; }

    bool attained(std::size_t i) const { return records_[i].attained_evals >= 0; }
    bool all_attained() const {
        for (const auto& r : records_)
            if (r.attained_evals < 0) return false;
        return true;
    }

private:
    std::vector<AttainmentRecord> records_;
};

} // namespace mozeno
