// Exact Pareto fronts by exhaustive search, independent of both the
// embedded planner and the closed-form fronts.
//
// Decision-epoch formulation: a label carries per-plane (city, availability
// time, flight count), the passengers still waiting at city 0, the sorted
// arrival times of passengers dropped at central cities, the delivered
// count, and the secondary objective so far.  Passenger moves are restricted
// to 0->central and central->goal: any plan converts to one of this form
// with an identical flight schedule (carrying a passenger is free), so the
// restriction loses no front point.  Labels with equal discrete signature
// are pruned by componentwise dominance; a label is also dropped once an
// optimistic completion bound is weakly dominated by a terminal already
// found.  Per-plane flight counts are capped at 2*passengers + planes, which
// no optimal plan exceeds.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <queue>
#include <unordered_map>
#include <vector>

#include "domain.hpp"
#include "front.hpp"

namespace mozeno {

namespace oracle_detail {

constexpr int kMaxPlanes = 6;
constexpr int kMaxPassengers = 6;

struct Label {
    std::array<std::int32_t, kMaxPlanes> plane_time{};
    std::array<std::uint8_t, kMaxPlanes> plane_flights{};
    std::array<std::int32_t, kMaxPassengers> arrivals{}; // grouped by central, sorted
    std::int32_t secondary = 0;

    bool dominates(const Label& o, int planes, int total_arrivals) const {
        for (int p = 0; p < planes; ++p) {
            if (plane_time[p] > o.plane_time[p]) return false;
            if (plane_flights[p] > o.plane_flights[p]) return false;
        }
        for (int i = 0; i < total_arrivals; ++i)
            if (arrivals[i] > o.arrivals[i]) return false;
        return secondary <= o.secondary;
    }
    bool operator==(const Label& o) const = default;
};

struct State {
    std::array<std::uint8_t, kMaxPlanes> plane_city{};
    std::array<std::uint8_t, 3> central_count{};
    std::uint8_t at_start = 0;
    std::uint8_t delivered = 0;

    std::uint64_t key(int planes) const {
        std::uint64_t k = 0;
        for (int p = 0; p < planes; ++p) k = k * 8 + plane_city[p];
        for (int c = 0; c < 3; ++c) k = k * 8 + central_count[c];
        k = k * 64 + at_start;
        k = k * 64 + delivered;
        return k;
    }
};

struct QueueItem {
    std::int32_t priority;
    std::uint32_t tie;
    State state;
    Label label;
    bool operator>(const QueueItem& o) const {
        if (priority != o.priority) return priority > o.priority;
        return tie > o.tie;
    }
};

/// Keep plane slots sorted by (city, time, flights) so that labels of equal
/// signature align slot by slot, and arrival groups sorted ascending.
inline void canonicalize(State& s, Label& l, int planes) {
    for (int i = 1; i < planes; ++i) {
        for (int j = i; j > 0; --j) {
            bool swap_now =
                s.plane_city[j] < s.plane_city[j - 1] ||
                (s.plane_city[j] == s.plane_city[j - 1] &&
                 (l.plane_time[j] < l.plane_time[j - 1] ||
                  (l.plane_time[j] == l.plane_time[j - 1] &&
                   l.plane_flights[j] < l.plane_flights[j - 1])));
            if (!swap_now) break;
            std::swap(s.plane_city[j], s.plane_city[j - 1]);
            std::swap(l.plane_time[j], l.plane_time[j - 1]);
            std::swap(l.plane_flights[j], l.plane_flights[j - 1]);
        }
    }
    int offset = 0;
    for (int c = 0; c < 3; ++c) {
        std::sort(l.arrivals.begin() + offset, l.arrivals.begin() + offset + s.central_count[c]);
        offset += s.central_count[c];
    }
}

} // namespace oracle_detail

/// True bi-objective front for k <= 2 (tractability bound).  The optional
/// cap override exists so tests can confirm the default horizon bound is
/// not binding.
inline ParetoFront exact_front_oracle(const MultiZenoConfig& cfg, int flight_cap_override = 0) {
    using namespace oracle_detail;
    cfg.validate();
    if (cfg.bunch_count > 2)
        throw ConfigError("instance too large for the exhaustive oracle (k <= 2)");

    const int planes = cfg.plane_count;
    const int passengers = cfg.passengers();
    const bool cost_mode = cfg.mode == ObjectiveMode::Cost;
    const int flight_cap =
        flight_cap_override > 0 ? flight_cap_override : 2 * passengers + planes;
    const int goal_city = cfg.goal_city(); // city index 4
    std::array<std::int32_t, 3> dur{}, tax{};
    for (int c = 0; c < 3; ++c) {
        dur[c] = (std::int32_t)cfg.durations[c].tenths();
        tax[c] = (std::int32_t)(cost_mode ? cfg.costs[c] : cfg.risks[c]).tenths();
    }
    std::int32_t min_dur = std::min({dur[0], dur[1], dur[2]});
    std::int32_t min_tax = std::min({tax[0], tax[1], tax[2]});
    const std::int32_t legs = 6 * cfg.bunch_count - 2;

    // Static bounds, valid for the canonical two-plane family: the cheapest
    // single-city routing caps useful makespans, the fastest caps secondary.
    std::int32_t makespan_ub = INT32_MAX / 4;
    std::int32_t secondary_ub = INT32_MAX / 4;
    std::int32_t fastest_makespan = INT32_MAX / 4;
    if (planes == 2) {
        std::int32_t best_tax = INT32_MAX, ub = 0;
        for (int c = 0; c < 3; ++c)
            if (tax[c] < best_tax || (tax[c] == best_tax && dur[c] < ub)) {
                best_tax = tax[c];
                ub = dur[c];
            }
        makespan_ub = legs * ub;
        std::int32_t best_dur = INT32_MAX, s = 0;
        for (int c = 0; c < 3; ++c)
            if (dur[c] < best_dur || (dur[c] == best_dur && tax[c] < s)) {
                best_dur = dur[c];
                s = tax[c];
            }
        secondary_ub = cost_mode ? legs * s : s;
        fastest_makespan = legs * best_dur;
    }

    auto bump = [&](std::int32_t secondary, std::int32_t landing) {
        return cost_mode ? secondary + landing : std::max(secondary, landing);
    };

    std::vector<ObjectivePoint> terminals;
    std::vector<std::pair<std::int32_t, std::int32_t>> incumbents; // sorted by makespan

    auto incumbent_dominates = [&](std::int32_t m, std::int32_t s) {
        for (auto& [im, is] : incumbents)
            if (im <= m && is <= s) return true;
        return false;
    };
    auto incumbent_insert = [&](std::int32_t m, std::int32_t s) {
        if (incumbent_dominates(m, s)) return;
        incumbents.erase(std::remove_if(incumbents.begin(), incumbents.end(),
                                        [&](auto& p) { return m <= p.first && s <= p.second; }),
                         incumbents.end());
        incumbents.emplace_back(m, s);
    };

    // Optimistic completion bounds.
    auto completion_bounds = [&](const State& st, const Label& l) {
        std::int32_t m = 0, min_t = INT32_MAX;
        for (int p = 0; p < planes; ++p) {
            m = std::max(m, l.plane_time[p]);
            min_t = std::min(min_t, l.plane_time[p]);
        }
        int offset = 0;
        for (int c = 0; c < 3; ++c) {
            for (int i = 0; i < st.central_count[c]; ++i)
                m = std::max(m, l.arrivals[offset + i] + dur[c]);
            offset += st.central_count[c];
        }
        if (st.at_start > 0) m = std::max(m, min_t + 2 * min_dur);
        std::int32_t s = l.secondary;
        if (st.at_start > 0)
            s = cost_mode ? s + st.at_start * min_tax : std::max(s, min_tax);
        return std::pair{m, s};
    };

    std::unordered_map<std::uint64_t, std::vector<Label>> store;
    std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>> queue;
    std::uint32_t tie = 0;

    auto offer = [&](State st, Label l) {
        canonicalize(st, l, planes);
        auto [m_lb, s_lb] = completion_bounds(st, l);
        if (m_lb > makespan_ub) return;
        if (s_lb > secondary_ub && m_lb >= fastest_makespan) return;
        if (incumbent_dominates(m_lb, s_lb)) return;
        if (st.delivered == passengers) {
            std::int32_t m = 0;
            for (int p = 0; p < planes; ++p) m = std::max(m, l.plane_time[p]);
            terminals.push_back({Ratio::from_tenths(m), Ratio::from_tenths(l.secondary)});
            incumbent_insert(m, l.secondary);
            return;
        }
        int total_arrivals = passengers - st.at_start - st.delivered;
        auto& labels = store[st.key(planes)];
        for (const Label& e : labels)
            if (e.dominates(l, planes, total_arrivals)) return;
        labels.erase(std::remove_if(labels.begin(), labels.end(),
                                    [&](const Label& e) {
                                        return l.dominates(e, planes, total_arrivals);
                                    }),
                     labels.end());
        labels.push_back(l);
        queue.push(QueueItem{m_lb, tie++, st, l});
    };

    {
        State st;
        for (int p = 0; p < planes; ++p) st.plane_city[p] = 0;
        st.at_start = (std::uint8_t)passengers;
        Label l;
        offer(st, l);
    }

    while (!queue.empty()) {
        QueueItem item = queue.top();
        queue.pop();
        const State& st = item.state;
        const Label& l = item.label;
        {
            int total_arrivals = passengers - st.at_start - st.delivered;
            auto it = store.find(st.key(planes));
            if (it == store.end()) continue;
            bool live = false;
            for (const Label& e : it->second)
                if (e == l) { live = true; break; }
            if (!live) continue; // superseded since queued
            auto [m_lb, s_lb] = completion_bounds(st, l);
            if (incumbent_dominates(m_lb, s_lb)) continue;
            (void)total_arrivals;
        }

        for (int p = 0; p < planes; ++p) {
            if (l.plane_flights[p] >= flight_cap) continue;
            int from = st.plane_city[p];
            auto depart = [&](int to, std::int32_t ready) {
                int corridor = (from == 0 || from == goal_city) ? to : from;
                std::int32_t start = std::max(l.plane_time[p], ready);
                std::int32_t end = start + dur[corridor - 1];
                State ns = st;
                Label nl = l;
                ns.plane_city[p] = (std::uint8_t)to;
                nl.plane_time[p] = end;
                nl.plane_flights[p] = (std::uint8_t)(l.plane_flights[p] + 1);
                if (to >= 1 && to <= 3) nl.secondary = bump(nl.secondary, tax[to - 1]);
                return std::pair{ns, nl};
            };

            if (from == 0) {
                for (int c = 1; c <= 3; ++c) {
                    {
                        auto [ns, nl] = depart(c, 0); // empty reposition
                        offer(ns, nl);
                    }
                    if (st.at_start > 0) { // carry one waiting passenger up
                        auto [ns, nl] = depart(c, 0);
                        --ns.at_start;
                        int offset = 0;
                        for (int cc = 0; cc + 1 < c; ++cc) offset += ns.central_count[cc];
                        int group_end = offset + ns.central_count[c - 1];
                        for (int i = passengers - 1; i > group_end; --i)
                            nl.arrivals[i] = nl.arrivals[i - 1];
                        nl.arrivals[group_end] = nl.plane_time[p];
                        ++ns.central_count[c - 1];
                        offer(ns, nl);
                    }
                }
            } else if (from == goal_city) {
                for (int c = 1; c <= 3; ++c) {
                    auto [ns, nl] = depart(c, 0);
                    offer(ns, nl);
                }
            } else { // central city
                {
                    auto [ns, nl] = depart(0, 0);
                    offer(ns, nl);
                }
                {
                    auto [ns, nl] = depart(goal_city, 0);
                    offer(ns, nl);
                }
                int c = from;
                int offset = 0;
                for (int cc = 0; cc + 1 < c; ++cc) offset += st.central_count[cc];
                int n_here = st.central_count[c - 1];
                // Carry a waiting passenger down.  Among arrivals at or
                // before the plane's time only the latest matters (taking an
                // earlier one starts no sooner and leaves a worse multiset);
                // every distinct later arrival is its own branch.
                int last_fitting = -1;
                for (int i = 0; i < n_here; ++i)
                    if (l.arrivals[offset + i] <= l.plane_time[p]) last_fitting = i;
                std::int32_t prev_branched = INT32_MIN;
                for (int i = std::max(last_fitting, 0); i < n_here; ++i) {
                    std::int32_t a = l.arrivals[offset + i];
                    if (i > last_fitting && a == prev_branched) continue;
                    prev_branched = a;
                    auto [ns, nl] = depart(goal_city, a);
                    for (int j = offset + i; j + 1 < passengers; ++j)
                        nl.arrivals[j] = nl.arrivals[j + 1];
                    nl.arrivals[passengers - 1] = 0;
                    --ns.central_count[c - 1];
                    ++ns.delivered;
                    offer(ns, nl);
                }
            }
        }
    }

    if (terminals.empty())
        throw std::logic_error("oracle found no plan"); // cannot happen for valid configs
    return pareto_filter(terminals);
}

} // namespace mozeno
