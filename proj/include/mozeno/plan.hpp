// Scheduled plans and their timed-execution semantics.
//
// An action's preconditions must hold at its start time given the effects of
// every action already finished; effects apply at its end; two overlapping
// actions may not share a plane or a passenger.  The secondary objective is
// the sum of landing taxes in cost mode and the maximal landing risk in risk
// mode.
#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "domain.hpp"
#include "front.hpp"

namespace mozeno {

struct TimedAction {
    Ratio start;
    int action; // index into GroundTask::actions
};

struct ScheduledPlan {
    std::vector<TimedAction> steps;
    Ratio makespan;
};

namespace detail {

inline bool intervals_overlap(const Ratio& s1, const Ratio& e1,
                              const Ratio& s2, const Ratio& e2) {
    return s1 < e2 && s2 < e1;
}

} // namespace detail

/// Execution validity and objectives, without requiring the task goal; the
/// decoder uses this on plan fragments.  Simultaneous non-conflicting actions
/// may appear in any listing order.
inline ObjectivePoint validate_schedule(const GroundTask& task, const ScheduledPlan& plan,
                                        AtomSet* final_state = nullptr) {
    struct Event { Ratio time; int step; bool is_end; };
    const auto& steps = plan.steps;

    for (std::size_t i = 0; i < steps.size(); ++i) {
        const GroundAction& a = task.actions[steps[i].action];
        if (steps[i].start < Ratio(0))
            throw PlanError("invalid plan: negative start time at step " + std::to_string(i));
        Ratio end_i = steps[i].start + a.duration;
        for (std::size_t j = i + 1; j < steps.size(); ++j) {
            const GroundAction& b = task.actions[steps[j].action];
            bool shared = a.plane == b.plane ||
                          (a.passenger >= 0 && a.passenger == b.passenger);
            if (shared && detail::intervals_overlap(steps[i].start, end_i, steps[j].start,
                                                    steps[j].start + b.duration))
                throw PlanError("invalid plan: overlapping actions share an object: " +
                                task.action_name(steps[i].action) + " and " +
                                task.action_name(steps[j].action));
        }
    }

    // Replay in time order: apply all effects that finished up to t before
    // checking any precondition at t.
    std::vector<int> order(steps.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return steps[x].start < steps[y].start;
    });
    std::vector<std::pair<Ratio, int>> pending_ends; // (end time, step)

    AtomSet state = task.initial;
    Ratio makespan(0);
    Ratio cost(0);
    Ratio risk(0);
    for (int idx : order) {
        const TimedAction& ta = steps[idx];
        const GroundAction& a = task.actions[ta.action];
        for (auto it = pending_ends.begin(); it != pending_ends.end();) {
            if (it->first <= ta.start) {
                const GroundAction& done = task.actions[steps[it->second].action];
                state.remove_all(done.del_mask);
                state.add_all(done.add_mask);
                it = pending_ends.erase(it);
            } else {
                ++it;
            }
        }
        if (!state.contains_all(a.pre_mask)) {
            for (int id : a.preconditions)
                if (!state.test(id))
                    throw PlanError("invalid plan: " + task.action_name(ta.action) +
                                    " at t=" + ta.start.str() + " misses " +
                                    task.atom_name(id));
        }
        Ratio end = ta.start + a.duration;
        pending_ends.emplace_back(end, idx);
        makespan = max(makespan, end);
        cost = cost + a.landing_cost;
        risk = max(risk, a.landing_risk);
    }
    for (const auto& [end, step_idx] : pending_ends) {
        const GroundAction& done = task.actions[steps[step_idx].action];
        state.remove_all(done.del_mask);
        state.add_all(done.add_mask);
    }
    if (final_state) *final_state = state;
    return {makespan, task.mode == ObjectiveMode::Cost ? cost : risk};
}

/// Full plan validation: timed execution plus goal satisfaction.
inline ObjectivePoint validate_plan(const GroundTask& task, const ScheduledPlan& plan) {
    AtomSet final_state;
    ObjectivePoint obj = validate_schedule(task, plan, &final_state);
    if (!final_state.contains_all(task.goal)) {
        for (int id : task.goal_atoms)
            if (!final_state.test(id))
                throw PlanError("invalid plan: goal atom " + task.atom_name(id) +
                                " not reached");
    }
    return obj;
}

/// CSV dump, `start,action` per row.
inline std::string plan_to_csv(const GroundTask& task, const ScheduledPlan& plan) {
    std::string out = "start,action\n";
    for (const TimedAction& ta : plan.steps)
        out += ta.start.str() + "," + task.action_name(ta.action) + "\n";
    return out;
}

} // namespace mozeno
