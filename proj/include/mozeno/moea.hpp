// Multi-objective selection schemes over scored points.  Dominance is exact
// (rational objectives); densities, indicator values and fitness live in
// normalized double space.  Every tie is broken by stable input index so a
// run replays bit-identically.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "errors.hpp"
#include "front.hpp"
#include "rng.hpp"

namespace mozeno {

struct ScoredPoint {
    ObjectivePoint objectives;
    bool feasible = true;
    int owner = -1;
};

enum class IndicatorKind : std::uint8_t { EpsPlus, HypDiff };
enum class Scheme : std::uint8_t { Nsga2, Spea2, IbeaEps, IbeaHyp };

struct MoeaParams {
    Scheme scheme = Scheme::IbeaHyp;
    int population_size = 100;
    int archive_size = 0; // SPEA2; 0 means population_size
    IndicatorKind indicator = IndicatorKind::HypDiff;
    double kappa = 0.05;
    std::pair<double, double> reference_point{1.1, 1.1};

    int archive() const { return archive_size > 0 ? archive_size : population_size; }
    void validate() const {
        if (population_size < 2) throw ConfigError("population size must be >= 2");
        if (kappa <= 0) throw ConfigError("kappa must be positive");
        if (archive_size < 0) throw ConfigError("archive size must be >= 0");
    }
};

// ---------------------------------------------------------------------------
// Non-dominated sorting and crowding (NSGA-II).

inline std::vector<int> nondominated_sort(const std::vector<ScoredPoint>& pop) {
    if (pop.empty()) throw std::invalid_argument("nondominated_sort: empty population");
    int n = (int)pop.size();
    std::vector<int> rank(n, -1);
    std::vector<int> dominated_by(n, 0);
    std::vector<std::vector<int>> dominating(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (dominates(pop[i].objectives, pop[j].objectives)) {
                dominating[i].push_back(j);
            } else if (dominates(pop[j].objectives, pop[i].objectives)) {
                ++dominated_by[i];
            }
        }
    std::vector<int> current;
    for (int i = 0; i < n; ++i)
        if (dominated_by[i] == 0) { rank[i] = 0; current.push_back(i); }
    int r = 0;
    while (!current.empty()) {
        std::vector<int> next;
        for (int i : current)
            for (int j : dominating[i])
                if (--dominated_by[j] == 0) { rank[j] = r + 1; next.push_back(j); }
        current = std::move(next);
        ++r;
    }
    return rank;
}

/// Crowding distances within one front: boundary points are infinite,
/// interior ones sum the normalized neighbor gaps per objective.  An
/// objective with zero range contributes nothing.
inline std::vector<double> crowding_distance(const std::vector<ScoredPoint>& front) {
    int n = (int)front.size();
    std::vector<double> dist(n, 0.0);
    if (n == 0) return dist;
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
        return dist;
    }
    for (int obj = 0; obj < 2; ++obj) {
        auto value = [&](int i) {
            const ObjectivePoint& p = front[i].objectives;
            return (obj == 0 ? p.makespan : p.secondary).to_double();
        };
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return value(a) < value(b); });
        double range = value(order.back()) - value(order.front());
        dist[order.front()] = std::numeric_limits<double>::infinity();
        dist[order.back()] = std::numeric_limits<double>::infinity();
        if (range <= 0) continue;
        for (int i = 1; i + 1 < n; ++i)
            dist[order[i]] += (value(order[i + 1]) - value(order[i - 1])) / range;
    }
    return dist;
}

/// Environmental selection: fill by ascending rank, split the last admitted
/// rank by descending crowding (ties by input index).
inline std::vector<ScoredPoint> nsga2_survivors(const std::vector<ScoredPoint>& pool,
                                                int mu) {
    if ((int)pool.size() < mu)
        throw std::invalid_argument("nsga2_survivors: pool smaller than mu");
    std::vector<int> rank = nondominated_sort(pool);
    int max_rank = *std::max_element(rank.begin(), rank.end());
    std::vector<ScoredPoint> out;
    for (int r = 0; r <= max_rank && (int)out.size() < mu; ++r) {
        std::vector<int> members;
        for (int i = 0; i < (int)pool.size(); ++i)
            if (rank[i] == r) members.push_back(i);
        if ((int)out.size() + (int)members.size() <= mu) {
            for (int i : members) out.push_back(pool[i]);
            continue;
        }
        std::vector<ScoredPoint> front;
        for (int i : members) front.push_back(pool[i]);
        std::vector<double> crowd = crowding_distance(front);
        std::vector<int> order((int)members.size());
        for (int i = 0; i < (int)order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return crowd[a] > crowd[b]; });
        for (int i : order) {
            if ((int)out.size() == mu) break;
            out.push_back(pool[members[i]]);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// SPEA2 fitness and truncation.

namespace detail {

/// Objectives mapped to [0,1] per dimension over the given set (zero range
/// maps to 0); used wherever a scheme needs geometric distances.
inline std::vector<std::pair<double, double>> normalize_objectives(
    const std::vector<ScoredPoint>& pts) {
    double min0 = 0, max0 = 0, min1 = 0, max1 = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double a = pts[i].objectives.makespan.to_double();
        double b = pts[i].objectives.secondary.to_double();
        if (i == 0) { min0 = max0 = a; min1 = max1 = b; }
        min0 = std::min(min0, a); max0 = std::max(max0, a);
        min1 = std::min(min1, b); max1 = std::max(max1, b);
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(pts.size());
    for (const ScoredPoint& p : pts) {
        double a = p.objectives.makespan.to_double();
        double b = p.objectives.secondary.to_double();
        out.emplace_back(max0 > min0 ? (a - min0) / (max0 - min0) : 0.0,
                         max1 > min1 ? (b - min1) / (max1 - min1) : 0.0);
    }
    return out;
}

inline double sq_dist(const std::pair<double, double>& a, const std::pair<double, double>& b) {
    double dx = a.first - b.first, dy = a.second - b.second;
    return dx * dx + dy * dy;
}

} // namespace detail

/// F(x) = R(x) + D(x): raw fitness R sums the strengths of x's dominators,
/// density D = 1/(sigma_k + 2) with the k-th nearest neighbor distance in
/// normalized space, k = floor(sqrt(N)).  Lower is better; non-dominated
/// points have F < 1.
inline std::vector<double> spea2_fitness(const std::vector<ScoredPoint>& pool) {
    if (pool.empty()) throw std::invalid_argument("spea2_fitness: empty pool");
    int n = (int)pool.size();
    std::vector<int> strength(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && dominates(pool[i].objectives, pool[j].objectives))
                ++strength[i];
    std::vector<double> fitness(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && dominates(pool[j].objectives, pool[i].objectives))
                fitness[i] += strength[j];
    auto norm = detail::normalize_objectives(pool);
    int k = std::max(1, std::min(n - 1, (int)std::floor(std::sqrt((double)n))));
    std::vector<double> d2(n);
    for (int i = 0; i < n; ++i) {
        int m = 0;
        for (int j = 0; j < n; ++j)
            if (j != i) d2[m++] = detail::sq_dist(norm[i], norm[j]);
        std::nth_element(d2.begin(), d2.begin() + (k - 1), d2.begin() + m);
        fitness[i] += 1.0 / (std::sqrt(d2[k - 1]) + 2.0);
    }
    return fitness;
}

/// Environmental selection of the SPEA2 archive: keep the non-dominated set;
/// when it is too large, iteratively drop the point with lexicographically
/// minimal sorted nearest-neighbor distance vector; when too small, fill
/// with the best dominated points by fitness.
inline std::vector<ScoredPoint> spea2_truncate(const std::vector<ScoredPoint>& pool,
                                               const std::vector<double>& fitness,
                                               int size) {
    int n = (int)pool.size();
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
        if (fitness[i] < 1.0) members.push_back(i);

    if ((int)members.size() < size) {
        std::vector<int> rest;
        for (int i = 0; i < n; ++i)
            if (fitness[i] >= 1.0) rest.push_back(i);
        std::stable_sort(rest.begin(), rest.end(),
                         [&](int a, int b) { return fitness[a] < fitness[b]; });
        for (int i : rest) {
            if ((int)members.size() == size) break;
            members.push_back(i);
        }
    } else if ((int)members.size() > size) {
        auto norm = detail::normalize_objectives(pool);
        std::vector<char> removed(n, 0);
        int alive = (int)members.size();
        std::vector<double> row;
        std::vector<double> best_row;
        while (alive > size) {
            int worst = -1;
            for (int i : members) {
                if (removed[i]) continue;
                row.clear();
                for (int j : members)
                    if (j != i && !removed[j])
                        row.push_back(detail::sq_dist(norm[i], norm[j]));
                std::sort(row.begin(), row.end());
                if (worst < 0 || std::lexicographical_compare(row.begin(), row.end(),
                                                              best_row.begin(),
                                                              best_row.end())) {
                    worst = i;
                    best_row = row;
                }
            }
            removed[worst] = 1;
            --alive;
        }
        std::vector<int> kept;
        for (int i : members)
            if (!removed[i]) kept.push_back(i);
        members = std::move(kept);
    }
    std::vector<ScoredPoint> out;
    for (int i : members) out.push_back(pool[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Binary quality indicators on normalized points (minimization).

/// Additive epsilon: smallest shift making x weakly dominate y.
inline double eps_indicator(const std::pair<double, double>& x,
                            const std::pair<double, double>& y) {
    return std::max(x.first - y.first, x.second - y.second);
}

/// Volume weakly dominated by y but not by x, w.r.t. the reference point
/// (HV({x,y}) - HV({x}) in two dimensions).
inline double hypdiff_indicator(const std::pair<double, double>& x,
                                const std::pair<double, double>& y,
                                const std::pair<double, double>& ref) {
    double rect_y = std::max(0.0, ref.first - y.first) * std::max(0.0, ref.second - y.second);
    double overlap = std::max(0.0, ref.first - std::max(x.first, y.first)) *
                     std::max(0.0, ref.second - std::max(x.second, y.second));
    return rect_y - overlap;
}

// ---------------------------------------------------------------------------
// IBEA.

namespace detail {

struct IbeaState {
    std::vector<std::vector<double>> indicator; // I(i, j), scaled
    std::vector<double> fitness;                // higher is better
};

inline IbeaState ibea_fitness(const std::vector<ScoredPoint>& pop,
                              const MoeaParams& params) {
    int n = (int)pop.size();
    auto norm = normalize_objectives(pop);
    IbeaState st;
    st.indicator.assign(n, std::vector<double>(n, 0.0));
    double max_abs = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double v = params.indicator == IndicatorKind::EpsPlus
                           ? eps_indicator(norm[i], norm[j])
                           : hypdiff_indicator(norm[i], norm[j], params.reference_point);
            st.indicator[i][j] = v;
            max_abs = std::max(max_abs, std::abs(v));
        }
    if (max_abs > 0)
        for (auto& row : st.indicator)
            for (double& v : row) v /= max_abs;
    st.fitness.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) st.fitness[i] -= std::exp(-st.indicator[j][i] / params.kappa);
    return st;
}

/// Remove the worst point and incrementally repair the others' fitness until
/// mu remain; returns the kept indices in input order.
inline std::vector<int> ibea_environmental_selection(IbeaState& st, int n, int mu,
                                                     double kappa) {
    std::vector<char> removed(n, 0);
    for (int alive = n; alive > mu; --alive) {
        int worst = -1;
        for (int i = 0; i < n; ++i) {
            if (removed[i]) continue;
            if (worst < 0 || st.fitness[i] < st.fitness[worst]) worst = i;
        }
        if (worst < 0) break;
        removed[worst] = 1;
        for (int i = 0; i < n; ++i)
            if (!removed[i]) st.fitness[i] += std::exp(-st.indicator[worst][i] / kappa);
    }
    std::vector<int> kept;
    for (int i = 0; i < n; ++i)
        if (!removed[i]) kept.push_back(i);
    return kept;
}

} // namespace detail

/// Select an index by binary tournament with replacement; ties keep the
/// first drawn.
inline int binary_tournament(int n, const std::vector<double>& fitness, bool higher_better,
                             Rng& rng) {
    int a = (int)draw_below(rng, (std::uint64_t)n);
    int b = (int)draw_below(rng, (std::uint64_t)n);
    if (fitness[a] == fitness[b]) return a;
    bool a_wins = higher_better ? fitness[a] > fitness[b] : fitness[a] < fitness[b];
    return a_wins ? a : b;
}

/// One IBEA step: fitness over the whole pool, environmental selection down
/// to mu, then a mating pool of mu picked by binary tournament on the
/// repaired fitness.
inline std::pair<std::vector<int>, std::vector<ScoredPoint>> ibea_step(
    const std::vector<ScoredPoint>& pop, const MoeaParams& params, Rng& rng) {
    int n = (int)pop.size();
    if (n < params.population_size)
        throw std::invalid_argument("ibea_step: population smaller than mu");
    detail::IbeaState st = detail::ibea_fitness(pop, params);
    std::vector<int> kept =
        detail::ibea_environmental_selection(st, n, params.population_size, params.kappa);
    std::vector<ScoredPoint> survivors;
    std::vector<double> kept_fitness;
    for (int i : kept) {
        survivors.push_back(pop[i]);
        kept_fitness.push_back(st.fitness[i]);
    }
    std::vector<int> pool;
    for (int i = 0; i < params.population_size; ++i)
        pool.push_back(binary_tournament((int)survivors.size(), kept_fitness, true, rng));
    return {pool, survivors};
}

} // namespace mozeno
