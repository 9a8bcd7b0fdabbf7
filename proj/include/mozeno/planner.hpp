// Satisficing forward-search planner embedded in the decoder: additive
// delete-relaxation heuristic, relaxed-plan lookahead, and a hard cap on
// expanded nodes.  Search costs are integer tenths throughout; the strategy
// decides whether an action weighs its duration or its landing tax/risk.
#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "domain.hpp"
#include "plan.hpp"

namespace mozeno {

enum class StrategyObjective : std::uint8_t { Makespan, Secondary };

struct PlannerBudget {
    int max_expanded_nodes = 1000;
};

using ActionSequence = std::vector<int>; // indices into GroundTask::actions

struct HeuristicResult {
    Ratio value;
    bool reachable;
    ActionSequence relaxed;
};

/// One planner instance is single-threaded; distinct instances can run
/// concurrently.  Heuristic tables are memoized per state, which changes no
/// result, only the cost of recomputing them.  On instances whose full-state
/// space fits (every object at exactly one city, few enough combinations)
/// the tables live in a directly indexed arena; otherwise in a hash map
/// frozen at a size cap.
class Planner {
    static constexpr std::int64_t kInf = INT64_MAX / 4;
    static constexpr std::int16_t kInf16 = 30000;
    static constexpr std::int64_t kArenaLimit = std::int64_t{1} << 22;

public:
    explicit Planner(const GroundTask& task) : task_(task) {
        int na = task.atom_count;
        const auto& actions = task.actions;
        consumers_.resize(na);
        adders_.resize(na);
        for (std::size_t i = 0; i < actions.size(); ++i) {
            for (int pre : actions[i].preconditions)
                consumers_[pre].push_back((int)i);
            for (int add : actions[i].add_effects)
                adders_[add].push_back((int)i);
        }
        plane_use_.assign(task.planes, 0);
        weight_makespan_.reserve(actions.size());
        weight_secondary_.reserve(actions.size());
        for (const GroundAction& a : actions) {
            weight_makespan_.push_back(nonzero_weight(a.duration.tenths()));
            Ratio w = task.mode == ObjectiveMode::Cost ? a.landing_cost : a.landing_risk;
            weight_secondary_.push_back(nonzero_weight(w.tenths()));
        }
        settled_.assign(na, 0);
        pre_remaining_.assign(actions.size(), 0);
        pre_sum_.assign(actions.size(), 0);
        queued_.assign(na, 0);
        action_mark_.assign(actions.size(), 0);

        objects_ = task.planes + task.passengers;
        std::int64_t combos = 1;
        for (int o = 0; o < objects_ && combos <= kArenaLimit; ++o) combos *= task.cities;
        if (na <= 64 && combos <= kArenaLimit) {
            arena_combos_ = combos;
            for (auto& a : arena_) a.assign((std::size_t)combos * 2 * na, 0);
            for (auto& c : arena_done_) c.assign((std::size_t)combos, 0);
        }
    }

    const GroundTask& task() const { return task_; }

    std::int64_t action_weight(int action, StrategyObjective strategy) const {
        return strategy == StrategyObjective::Makespan ? weight_makespan_[action]
                                                       : weight_secondary_[action];
    }

    std::int64_t heuristic_value(const AtomSet& state, const std::vector<int>& goal,
                                 StrategyObjective strategy) {
        HView tab = h_table(state, strategy);
        std::int64_t total = 0;
        for (int g : goal) {
            if (tab.h(g) >= kInf16) return kInf;
            total += tab.h(g);
        }
        return total;
    }

    /// Additive value plus FF-style supporting-action extraction, ordered by
    /// the additive level of each supporter.
    HeuristicResult heuristic(const AtomSet& state, const std::vector<int>& goal,
                              StrategyObjective strategy) {
        HView tab = h_table(state, strategy);
        std::int64_t total = 0;
        for (int g : goal) {
            if (tab.h(g) >= kInf16) return {Ratio(0), false, {}};
            total += tab.h(g);
        }
        return {Ratio::from_tenths(total), true, extract_relaxed(tab, goal, strategy)};
    }

    /// Greedily apply relaxed-plan actions in order; returns the reached
    /// state and the applied subsequence.
    std::pair<AtomSet, ActionSequence> lookahead(const AtomSet& state,
                                                 const ActionSequence& relaxed) const {
        AtomSet cur = state;
        ActionSequence applied;
        std::vector<char> used(relaxed.size(), 0);
        bool progress = true;
        while (progress) {
            progress = false;
            for (std::size_t i = 0; i < relaxed.size(); ++i) {
                if (used[i]) continue;
                const GroundAction& a = task_.actions[relaxed[i]];
                if (!cur.contains_all(a.pre_mask)) continue;
                cur.remove_all(a.del_mask);
                cur.add_all(a.add_mask);
                used[i] = 1;
                applied.push_back(relaxed[i]);
                progress = true;
                break;
            }
        }
        return {cur, applied};
    }

    struct SearchStats {
        int expanded = 0;
    };

    /// Greedy best-first search on g+h under the strategy's weights, FIFO tie
    /// break, duplicate pruning on exact states keeping the lower g.  Each
    /// expansion also tries the lookahead successor.  Returns the action
    /// sequence on success; failure (budget exhausted or open list empty) is
    /// a value, not a fault.
    std::optional<ActionSequence> solve_subproblem(const AtomSet& initial,
                                                   const std::vector<int>& goal,
                                                   StrategyObjective strategy,
                                                   const PlannerBudget& budget,
                                                   SearchStats* stats = nullptr) {
        if (contains_goal(initial, goal)) {
            if (stats) stats->expanded = 0;
            return ActionSequence{};
        }
        nodes_.clear();
        open_ = {};
        seen_.clear();
        seq_counter_ = 1;

        std::int64_t h0 = heuristic_value(initial, goal, strategy);
        if (h0 >= kInf) {
            if (stats) stats->expanded = 0;
            return std::nullopt;
        }
        nodes_.push_back(Node{initial, 0, -1, {}});
        seen_[initial] = 0;
        open_.push(OpenEntry{h0, 0, 0, 0});

        int expanded = 0;
        while (!open_.empty()) {
            OpenEntry top = open_.top();
            open_.pop();
            if (top.g != nodes_[top.node].g) continue; // superseded by a cheaper path
            if (contains_goal(nodes_[top.node].state, goal)) {
                if (stats) stats->expanded = expanded;
                return reconstruct(top.node);
            }
            if (expanded >= budget.max_expanded_nodes) break;
            ++expanded;

            AtomSet state = nodes_[top.node].state; // taken by value: nodes_ may grow
            std::int64_t g = nodes_[top.node].g;
            int node_idx = top.node;

            // The lookahead successor goes first: FIFO tie-breaking then
            // prefers committing to the relaxed plan over sibling one-steps.
            {
                HView tab = h_table(state, strategy);
                ActionSequence relaxed = extract_relaxed(tab, goal, strategy);
                auto [jump_state, prefix] = lookahead(state, relaxed);
                if (prefix.size() > 1) { // a 1-step jump duplicates a successor below
                    std::int64_t jump_g = g;
                    for (int ai : prefix) jump_g += action_weight(ai, strategy);
                    push_successor(jump_state, jump_g, node_idx, -1, std::move(prefix),
                                   goal, strategy);
                }
            }
            for (std::size_t ai = 0; ai < task_.actions.size(); ++ai) {
                const GroundAction& a = task_.actions[ai];
                if (!state.contains_all(a.pre_mask)) continue;
                AtomSet succ = state;
                succ.remove_all(a.del_mask);
                succ.add_all(a.add_mask);
                push_successor(succ, g + action_weight((int)ai, strategy), node_idx,
                               (int)ai, {}, goal, strategy);
            }
        }
        if (stats) stats->expanded = expanded;
        return std::nullopt;
    }

private:
    struct Node {
        AtomSet state;
        std::int64_t g;
        int parent;
        int edge_action;     // >= 0: single action; -1: lookahead jump
        ActionSequence edge; // only for jumps
    };
    struct OpenEntry {
        std::int64_t f;
        std::uint32_t seq;
        int node;
        std::int64_t g;
        bool operator>(const OpenEntry& o) const {
            if (f != o.f) return f > o.f;
            return seq > o.seq;
        }
    };

    /// Additive table: h value and best supporter per atom, interleaved in
    /// one flat int16 buffer.
    struct HTable {
        std::vector<std::int16_t> data;
    };
    /// View into a table slot; valid until the next h_table call.
    struct HView {
        const std::int16_t* p;
        std::int16_t h(int atom) const { return p[2 * atom]; }
        std::int16_t supporter(int atom) const { return p[2 * atom + 1]; }
    };

    static std::int64_t nonzero_weight(std::int64_t tenths) {
        return tenths == 0 ? 1 : tenths; // epsilon 0.1 against zero-cost plateaus
    }

    bool contains_goal(const AtomSet& state, const std::vector<int>& goal) const {
        for (int g : goal)
            if (!state.test(g)) return false;
        return true;
    }

    void push_successor(const AtomSet& succ, std::int64_t g, int parent, int edge_action,
                        ActionSequence&& edge, const std::vector<int>& goal,
                        StrategyObjective strategy) {
        auto it = seen_.find(succ);
        if (it != seen_.end()) {
            int idx = it->second;
            if (nodes_[idx].g <= g) return;
            std::int64_t h = heuristic_value(succ, goal, strategy);
            if (h >= kInf) return;
            nodes_[idx].g = g;
            nodes_[idx].parent = parent;
            nodes_[idx].edge_action = edge_action;
            nodes_[idx].edge = std::move(edge);
            open_.push(OpenEntry{g + h, seq_counter_++, idx, g});
            return;
        }
        std::int64_t h = heuristic_value(succ, goal, strategy);
        if (h >= kInf) return; // unreachable in the relaxation, truly unreachable
        int idx = (int)nodes_.size();
        nodes_.push_back(Node{succ, g, parent, edge_action, std::move(edge)});
        seen_.emplace(succ, idx);
        open_.push(OpenEntry{g + h, seq_counter_++, idx, g});
    }

    ActionSequence reconstruct(int node) const {
        std::vector<int> chain;
        for (int n = node; n > 0; n = nodes_[n].parent) chain.push_back(n);
        ActionSequence seq;
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            const Node& nd = nodes_[*it];
            if (nd.edge_action >= 0) seq.push_back(nd.edge_action);
            else seq.insert(seq.end(), nd.edge.begin(), nd.edge.end());
        }
        return seq;
    }

    /// Mixed-radix index of a full state (every object at exactly one city),
    /// or -1 when the state is not of that shape.
    std::int64_t arena_index(const AtomSet& state) const {
        std::uint64_t word = state.word0();
        std::int64_t idx = 0;
        std::uint64_t mask = (std::uint64_t{1} << task_.cities) - 1;
        for (int o = objects_ - 1; o >= 0; --o) {
            std::uint64_t bits = (word >> (o * task_.cities)) & mask;
            if (__builtin_popcountll(bits) != 1) return -1;
            idx = idx * task_.cities + __builtin_ctzll(bits);
        }
        return idx;
    }

    // Additive-cost tables per (state, strategy): on arena-sized instances a
    // direct slot per full state; otherwise a hash map memo frozen at a size
    // cap, with a scratch slot for overflow.  The view is valid until the
    // next h_table call.
    HView h_table(const AtomSet& state, StrategyObjective strategy) {
        int s = strategy == StrategyObjective::Secondary;
        if (arena_combos_ > 0) {
            std::int64_t idx = arena_index(state);
            if (idx >= 0) {
                std::int16_t* slot = arena_[s].data() + (std::size_t)idx * 2 * task_.atom_count;
                if (!arena_done_[s][(std::size_t)idx]) {
                    compute_h_into(slot, state, strategy);
                    arena_done_[s][(std::size_t)idx] = 1;
                }
                return HView{slot};
            }
        }
        auto& memo = memo_[s];
        auto it = memo.find(state);
        if (it != memo.end()) return HView{it->second.data.data()};
        scratch_.data.resize(2 * (std::size_t)task_.atom_count);
        compute_h_into(scratch_.data.data(), state, strategy);
        if (memo.size() >= kMemoCap) return HView{scratch_.data.data()};
        auto [ins, ok] = memo.emplace(state, scratch_);
        return HView{ins->second.data.data()};
    }

    // Generalized Dijkstra over atoms: an action fires once all its
    // preconditions settle; its cost is its weight plus their value sum.
    void compute_h_into(std::int16_t* dst, const AtomSet& state, StrategyObjective strategy) {
        const auto& actions = task_.actions;
        int na = task_.atom_count;
        for (int id = 0; id < na; ++id) {
            dst[2 * id] = kInf16;
            dst[2 * id + 1] = -1;
            settled_[id] = 0;
        }
        for (std::size_t i = 0; i < actions.size(); ++i) {
            pre_remaining_[i] = (int)actions[i].preconditions.size();
            pre_sum_[i] = 0;
        }
        hq_ = {};
        state.for_each([&](int id) {
            dst[2 * id] = 0;
            hq_.push({0, id});
        });
        while (!hq_.empty()) {
            auto [d, atom] = hq_.top();
            hq_.pop();
            if (settled_[atom] || d > dst[2 * atom]) continue;
            settled_[atom] = 1;
            for (int ai : consumers_[atom]) {
                pre_sum_[ai] += d;
                if (--pre_remaining_[ai] != 0) continue;
                std::int64_t cost = pre_sum_[ai] + action_weight(ai, strategy);
                std::int16_t cost16 = cost >= kInf16 ? kInf16 : (std::int16_t)cost;
                for (int add : actions[ai].add_effects) {
                    if (cost16 < dst[2 * add]) {
                        dst[2 * add] = cost16;
                        dst[2 * add + 1] = (std::int16_t)ai;
                        hq_.push({cost16, add});
                    }
                }
            }
        }
    }

    /// FF-style extraction with plane balancing: among the minimal-cost
    /// supporters of a needed atom, take one of a plane not yet loaded with
    /// supporters, so the relaxed plan sequences better under the lookahead.
    ActionSequence extract_relaxed(HView tab, const std::vector<int>& goal,
                                   StrategyObjective strategy) {
        ++action_stamp_;
        ++atom_stamp_;
        std::fill(plane_use_.begin(), plane_use_.end(), 0);
        auto level = [&](int ai) {
            std::int64_t s = action_weight(ai, strategy);
            for (int pre : task_.actions[ai].preconditions) {
                if (tab.h(pre) >= kInf16) return (std::int64_t)kInf;
                s += tab.h(pre);
            }
            return s;
        };
        ActionSequence chosen;
        std::vector<int> agenda;
        for (int g : goal) {
            if (tab.h(g) > 0 && tab.h(g) < kInf16 && queued_[g] != atom_stamp_) {
                queued_[g] = atom_stamp_;
                agenda.push_back(g);
            }
        }
        while (!agenda.empty()) {
            int atom = agenda.back();
            agenda.pop_back();
            if (tab.supporter(atom) < 0) continue;
            int best = -1;
            for (int ai : adders_[atom]) {
                if (level(ai) != tab.h(atom)) continue;
                if (best < 0 ||
                    plane_use_[task_.actions[ai].plane] < plane_use_[task_.actions[best].plane])
                    best = ai;
            }
            if (best < 0) best = tab.supporter(atom);
            if (action_mark_[best] != action_stamp_) {
                action_mark_[best] = action_stamp_;
                ++plane_use_[task_.actions[best].plane];
                chosen.push_back(best);
            }
            for (int pre : task_.actions[best].preconditions) {
                if (tab.h(pre) > 0 && tab.h(pre) < kInf16 && queued_[pre] != atom_stamp_) {
                    queued_[pre] = atom_stamp_;
                    agenda.push_back(pre);
                }
            }
        }
        std::sort(chosen.begin(), chosen.end(), [&](int a, int b) {
            std::int64_t la = level(a), lb = level(b);
            if (la != lb) return la < lb;
            return a < b;
        });
        return chosen;
    }

    const GroundTask& task_;
    std::vector<std::vector<int>> consumers_;
    std::vector<std::vector<int>> adders_;
    std::vector<int> plane_use_;
    std::vector<std::int64_t> weight_makespan_;
    std::vector<std::int64_t> weight_secondary_;

    static constexpr std::size_t kMemoCap = 1u << 19;
    std::unordered_map<AtomSet, HTable, AtomSetHash> memo_[2];
    int objects_ = 0;
    std::int64_t arena_combos_ = 0;
    std::vector<std::int16_t> arena_[2];
    std::vector<std::uint8_t> arena_done_[2];

    // heuristic scratch
    HTable scratch_;
    std::vector<char> settled_;
    std::vector<int> pre_remaining_;
    std::vector<std::int64_t> pre_sum_;
    std::vector<std::uint32_t> queued_;
    std::vector<std::uint32_t> action_mark_;
    std::uint32_t action_stamp_ = 0;
    std::uint32_t atom_stamp_ = 0;
    std::priority_queue<std::pair<std::int16_t, int>,
                        std::vector<std::pair<std::int16_t, int>>, std::greater<>> hq_;

    // search scratch
    std::vector<Node> nodes_;
    std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open_;
    std::unordered_map<AtomSet, int, AtomSetHash> seen_;
    std::uint32_t seq_counter_ = 0;
};

// ---------------------------------------------------------------------------
// Compression: deterministic left shift of a sequentially executable action
// sequence.  Action b may not start before the end of any earlier action a
// such that (i) a and b share a plane or passenger, (ii) a supplied an atom
// of b's preconditions that was false before a ran in the sequential replay,
// or (iii) b deletes one of a's preconditions.

inline ScheduledPlan compress(const ActionSequence& seq, const GroundTask& task) {
    ScheduledPlan plan;
    plan.makespan = Ratio(0);

    std::vector<std::int64_t> end_tenths(seq.size(), 0);
    std::vector<std::int64_t> object_end(task.planes + task.passengers, 0);
    std::vector<int> provider(task.atom_count, -1);
    std::vector<std::int64_t> required_until(task.atom_count, 0);
    AtomSet state = task.initial;
    std::int64_t makespan = 0;

    for (std::size_t i = 0; i < seq.size(); ++i) {
        const GroundAction& a = task.actions[seq[i]];
        if (!state.contains_all(a.pre_mask)) {
            for (int id : a.preconditions)
                if (!state.test(id))
                    throw PlanError("invalid sequence: step " + std::to_string(i) + " (" +
                                    task.action_name(seq[i]) + ") misses " +
                                    task.atom_name(id));
        }
        std::int64_t start = 0;
        for (int pre : a.preconditions)
            if (provider[pre] >= 0) start = std::max(start, end_tenths[provider[pre]]);
        start = std::max(start, object_end[a.plane]);
        if (a.passenger >= 0)
            start = std::max(start, object_end[task.planes + a.passenger]);
        for (int del : a.delete_effects)
            start = std::max(start, required_until[del]);

        std::int64_t end = start + a.duration.tenths();
        end_tenths[i] = end;
        object_end[a.plane] = end;
        if (a.passenger >= 0) object_end[task.planes + a.passenger] = end;
        for (int pre : a.preconditions)
            required_until[pre] = std::max(required_until[pre], end);
        for (int add : a.add_effects)
            if (!state.test(add)) provider[add] = (int)i;
        state.remove_all(a.del_mask);
        state.add_all(a.add_mask);

        plan.steps.push_back({Ratio::from_tenths(start), seq[i]});
        makespan = std::max(makespan, end);
    }
    plan.makespan = Ratio::from_tenths(makespan);
    return plan;
}

/// Objectives of a compressed plan (delegates to full validation).
inline ObjectivePoint objectives_of(const ScheduledPlan& plan, const GroundTask& task) {
    return validate_plan(task, plan);
}

} // namespace mozeno
