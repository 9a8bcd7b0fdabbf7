// Decoding and evaluation: solve the chain of subproblems between successive
// partial states, concatenate and compress the sub-plans, and score the
// result.  A failed subproblem makes the individual unfeasible and its
// objectives a progress-graded penalty.
#pragma once

#include <vector>

#include "genotype.hpp"
#include "planner.hpp"

namespace mozeno {

/// Relative weights of the roulette that picks which objective the embedded
/// planner optimizes for one subproblem call.
struct StrategyWeights {
    Ratio makespan{1};
    Ratio secondary{1};

    void validate() const {
        if (makespan < Ratio(0) || secondary < Ratio(0) ||
            makespan + secondary == Ratio(0))
            throw ConfigError("strategy weights must be non-negative with positive sum");
    }
};

inline StrategyObjective choose_strategy(const StrategyWeights& w, Rng& rng) {
    double x = draw_unit(rng) * (w.makespan + w.secondary).to_double();
    return x < w.makespan.to_double() ? StrategyObjective::Makespan
                                      : StrategyObjective::Secondary;
}

struct DaeParams {
    double crossover_probability = 0.8;
    double mutation_probability = 0.8;
    MutationWeights mutation_weights;
    PlannerBudget budget;
    Ratio penalty_base{0}; // 0: derive from the instance

    void validate() const {
        if (crossover_probability < 0 || crossover_probability > 1)
            throw ConfigError("crossover probability must be in [0,1]");
        if (mutation_probability < 0 || mutation_probability > 1)
            throw ConfigError("mutation probability must be in [0,1]");
        if (mutation_weights.sum() <= 0)
            throw ConfigError("mutation weights must have positive sum");
        if (budget.max_expanded_nodes < 1)
            throw ConfigError("planner budget must be >= 1");
        if (penalty_base < Ratio(0))
            throw ConfigError("penalty base must be non-negative");
    }
};

/// Ten times the largest single-corridor makespan: strictly above any value
/// on the exact front, so every feasible point dominates every penalty.
inline Ratio default_penalty_base(const MultiZenoConfig& cfg) {
    Ratio worst = cfg.durations[0];
    for (const Ratio& d : cfg.durations) worst = max(worst, d);
    return Ratio(10) * Ratio(6 * cfg.bunch_count - 2) * worst;
}

/// Both components W*(2 - u/total): decreasing in the number of solved
/// subproblems, so partially decoded individuals still rank behind every
/// feasible one but ahead of less-solved ones.
inline ObjectivePoint penalized_objectives(int solved, int total, const Ratio& base) {
    Ratio v = base * (Ratio(2) - Ratio(solved) / Ratio(total));
    return {v, v};
}

/// Owns one planner instance; single-threaded.  Distinct evaluators may run
/// concurrently on distinct seeds.
class Evaluator {
public:
    Evaluator(const GroundTask& task, const StrategyWeights& weights,
              const DaeParams& params)
        : task_(task), planner_(task), weights_(weights), params_(params),
          penalty_base_(params.penalty_base == Ratio(0)
                            ? default_penalty_base(task.config)
                            : params.penalty_base) {}

    const Ratio& penalty_base() const { return penalty_base_; }
    Planner& planner() { return planner_; }

    /// Decode: solve P(S_k, S_k+1) for k = 0..n with S_0 = I and S_n+1 = G.
    /// Each call's strategy is drawn independently by the roulette; each
    /// intermediate initial state is the full state after executing the
    /// previous sub-plan.
    EvalResult evaluate(const Individual& ind, Rng& rng) {
        int total = (int)ind.states.size() + 1;
        AtomSet current = task_.initial;
        ActionSequence all_actions;
        for (int k = 0; k < total; ++k) {
            const std::vector<int>& goal =
                k + 1 < total ? ind.states[k].atoms : task_.goal_atoms;
            StrategyObjective strategy = choose_strategy(weights_, rng);
            auto sub = planner_.solve_subproblem(current, goal, strategy, params_.budget);
            if (!sub) {
                EvalResult res;
                res.feasible = false;
                res.solved_count = k;
                res.subproblem_count = total;
                res.objectives = penalized_objectives(k, total, penalty_base_);
                return res;
            }
            for (int ai : *sub) {
                current = step(current, task_.actions[ai], task_);
                all_actions.push_back(ai);
            }
        }
        EvalResult res;
        res.feasible = true;
        res.solved_count = total;
        res.subproblem_count = total;
        res.plan = compress(all_actions, task_);
        res.objectives = objectives_of(*res.plan, task_);
        return res;
    }

private:
    const GroundTask& task_;
    Planner planner_;
    StrategyWeights weights_;
    DaeParams params_;
    Ratio penalty_base_;
};

/// Convenience wrapper matching the operation signature; campaigns keep an
/// Evaluator alive instead to reuse its heuristic tables.
inline EvalResult evaluate(const Individual& ind, const GroundTask& task,
                           const StrategyWeights& weights, const DaeParams& params,
                           Rng& rng) {
    Evaluator ev(task, weights, params);
    return ev.evaluate(ind, rng);
}

} // namespace mozeno
