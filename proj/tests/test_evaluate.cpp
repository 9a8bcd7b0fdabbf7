#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "mozeno/evaluate.hpp"

using namespace mozeno;

TEST_CASE("strategy roulette honors degenerate and mixed weights") {
    Rng rng(1);
    StrategyWeights makespan_only{Ratio(1), Ratio(0)};
    StrategyWeights secondary_only{Ratio(0), Ratio(1)};
    for (int i = 0; i < 1000; ++i) {
        CHECK(choose_strategy(makespan_only, rng) == StrategyObjective::Makespan);
        CHECK(choose_strategy(secondary_only, rng) == StrategyObjective::Secondary);
    }
    StrategyWeights even{Ratio(1), Ratio(1)};
    int makespan_count = 0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i)
        if (choose_strategy(even, rng) == StrategyObjective::Makespan) ++makespan_count;
    double freq = (double)makespan_count / draws;
    CHECK(freq > 0.45);
    CHECK(freq < 0.55);
}

TEST_CASE("penalty formula and separation") {
    Ratio W(240); // k=1 default: 10 x worst single-corridor makespan
    CHECK(default_penalty_base(MultiZenoConfig{}) == W);
    ObjectivePoint p0 = penalized_objectives(0, 4, W);
    CHECK(p0 == ObjectivePoint{Ratio(480), Ratio(480)});
    ObjectivePoint p3 = penalized_objectives(3, 4, W);
    CHECK(p3 == ObjectivePoint{Ratio(300), Ratio(300)});
    CHECK(dominates(p3, p0));
    // progress ordering within unfeasibles, including awkward denominators
    ObjectivePoint a = penalized_objectives(1, 3, W);
    ObjectivePoint b = penalized_objectives(2, 3, W);
    CHECK(dominates(b, a));
    // every exact-front point dominates every penalized point
    ParetoFront front = exact_front_analytic(MultiZenoConfig{});
    for (const ObjectivePoint& fp : front.points) {
        for (int u = 0; u < 4; ++u) CHECK(dominates(fp, penalized_objectives(u, 4, W)));
    }
}

TEST_CASE("an empty individual decodes as one direct planner call") {
    GroundTask task = ground_multizeno(MultiZenoConfig{});
    Evaluator ev(task, StrategyWeights{}, DaeParams{});
    Rng rng(5);
    EvalResult res = ev.evaluate(Individual{}, rng);
    REQUIRE(res.feasible);
    CHECK(res.subproblem_count == 1);
    CHECK(res.solved_count == 1);
    REQUIRE(res.plan);
    CHECK(res.objectives == objectives_of(*res.plan, task));
    CHECK(res.objectives.makespan >= Ratio(8)); // cannot beat the optimum
}

TEST_CASE("a goal-satisfying trivial task yields the empty plan and (0,0)") {
    GroundTask task = ground_multizeno(MultiZenoConfig{});
    task.goal = AtomSet{};
    task.goal_atoms = {task.plane_atom(0, 0)};
    task.goal.set(task.plane_atom(0, 0));
    Evaluator ev(task, StrategyWeights{}, DaeParams{});
    Rng rng(7);
    EvalResult res = ev.evaluate(Individual{}, rng);
    REQUIRE(res.feasible);
    CHECK(res.plan->steps.empty());
    CHECK(res.objectives == ObjectivePoint{Ratio(0), Ratio(0)});
}

TEST_CASE("an unreachable subgoal makes the individual unfeasible with u=0") {
    GroundTask task = ground_multizeno(MultiZenoConfig{});
    // strip every action moving passenger 0: the goal becomes unreachable
    GroundTask crippled = task;
    crippled.actions.clear();
    for (const GroundAction& a : task.actions)
        if (a.passenger != 0) crippled.actions.push_back(a);
    Evaluator ev(crippled, StrategyWeights{}, DaeParams{});
    Rng rng(9);
    EvalResult res = ev.evaluate(Individual{}, rng);
    CHECK_FALSE(res.feasible);
    CHECK(res.solved_count == 0);
    CHECK(res.subproblem_count == 1);
    CHECK_FALSE(res.plan.has_value());
    CHECK(res.objectives == penalized_objectives(0, 1, ev.penalty_base()));
}

TEST_CASE("a tight budget fails mid-decode and counts solved prefixes") {
    GroundTask task = ground_multizeno(MultiZenoConfig{});
    DaeParams params;
    params.budget.max_expanded_nodes = 1;
    Evaluator ev(task, StrategyWeights{Ratio(1), Ratio(0)}, params);
    Rng rng(11);
    EvalResult res = ev.evaluate(Individual{}, rng);
    CHECK_FALSE(res.feasible);
    CHECK(res.solved_count < res.subproblem_count);
}

TEST_CASE("decoding random individuals is sound and deterministic per seed") {
    for (int k : {1, 2}) {
        MultiZenoConfig cfg;
        cfg.bunch_count = k;
        GroundTask task = ground_multizeno(cfg);
        auto est = earliest_start_times(task);
        AtomRestriction restr(task, est);
        Evaluator ev(task, StrategyWeights{}, DaeParams{});
        Rng init_rng(41 + k);
        int feasible = 0, total = 40;
        for (int trial = 0; trial < total; ++trial) {
            Individual ind = init_individual(task, restr, init_rng);
            Rng r1(1000 + trial), r2(1000 + trial);
            EvalResult a = ev.evaluate(ind, r1);
            EvalResult b = ev.evaluate(ind, r2);
            CHECK(a.feasible == b.feasible);
            CHECK(a.objectives == b.objectives);
            CHECK(a.solved_count == b.solved_count);
            if (a.feasible) {
                ++feasible;
                REQUIRE(a.plan);
                REQUIRE(b.plan);
                CHECK(a.plan->steps.size() == b.plan->steps.size());
                ObjectivePoint obj = validate_plan(task, *a.plan);
                CHECK(obj == a.objectives);
            } else {
                CHECK(a.objectives ==
                      penalized_objectives(a.solved_count, a.subproblem_count,
                                           ev.penalty_base()));
            }
        }
        CHECK(feasible > 0); // the decoder does solve a healthy share
    }
}

TEST_CASE("feasible evaluations match the full validator by construction") {
    GroundTask task = ground_multizeno(MultiZenoConfig{});
    auto est = earliest_start_times(task);
    AtomRestriction restr(task, est);
    Evaluator ev(task, StrategyWeights{Ratio(1), Ratio(1)}, DaeParams{});
    Rng rng(55);
    for (int trial = 0; trial < 50; ++trial) {
        Individual ind = init_individual(task, restr, rng);
        Rng sub(split_seed(55, (std::uint64_t)trial));
        EvalResult res = ev.evaluate(ind, sub);
        if (!res.feasible) continue;
        CHECK(res.solved_count == res.subproblem_count);
        CHECK(res.subproblem_count == (int)ind.states.size() + 1);
        CHECK(validate_plan(task, *res.plan) == res.objectives);
    }
}
