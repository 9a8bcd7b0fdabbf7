#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "mozeno/planner.hpp"

using namespace mozeno;
using testutil::find_action;

TEST_CASE("additive heuristic: one passenger to the goal city costs 6") {
    GroundTask task = ground_multizeno(MultiZenoConfig{});
    Planner planner(task);
    std::vector<int> goal = {task.person_atom(0, 4)};
    auto [value, reachable, relaxed] =
        planner.heuristic(task.initial, goal, StrategyObjective::Makespan);
    REQUIRE(reachable);
    CHECK(value == Ratio(6)); // 2 for the plane hop + 2 + 2 for the transports
    CHECK_FALSE(relaxed.empty());
    // the relaxed plan supports the goal atom
    bool supports = false;
    for (int ai : relaxed)
        for (int add : task.actions[ai].add_effects)
            if (add == goal[0]) supports = true;
    CHECK(supports);
}

TEST_CASE("heuristic is zero exactly on satisfied goals") {
    GroundTask task = ground_multizeno(MultiZenoConfig{});
    Planner planner(task);
    std::vector<int> at_start = {task.plane_atom(0, 0), task.person_atom(1, 0)};
    auto res = planner.heuristic(task.initial, at_start, StrategyObjective::Makespan);
    CHECK(res.value == Ratio(0));
    CHECK(res.relaxed.empty());

    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        auto walk = testutil::random_walk(task, (int)draw_below(rng, 10), rng);
        AtomSet state = task.initial;
        for (int a : walk) state = step(state, task.actions[a], task);
        std::vector<int> goal;
        for (int id = 0; id < task.atom_count; ++id)
            if (draw_unit(rng) < 0.1) goal.push_back(id);
        auto h = planner.heuristic(state, goal, StrategyObjective::Secondary);
        bool satisfied = true;
        for (int g : goal)
            if (!state.test(g)) satisfied = false;
        if (!h.reachable) continue;
        CHECK((h.value == Ratio(0)) == satisfied);
    }
}

TEST_CASE("unreachable goals report unreachable") {
    GroundTask task = ground_multizeno(MultiZenoConfig{});
    // strip every action that could put passenger 0 anywhere
    GroundTask crippled = task;
    crippled.actions.clear();
    for (const GroundAction& a : task.actions)
        if (a.passenger != 0) crippled.actions.push_back(a);
    Planner planner(crippled);
    auto res = planner.heuristic(crippled.initial, {task.person_atom(0, 4)},
                                 StrategyObjective::Makespan);
    CHECK_FALSE(res.reachable);
    CHECK(res.relaxed.empty());
}

TEST_CASE("lookahead applies what it can, in relaxed order") {
    GroundTask task = ground_multizeno(MultiZenoConfig{});
    Planner planner(task);
    int f01 = find_action(task, ActionKind::Fly, 0, -1, 0, 1);
    int t01 = find_action(task, ActionKind::Transport, 0, 0, 0, 1);
    int t14 = find_action(task, ActionKind::Transport, 0, 0, 1, 4);

    SECTION("fully applicable plan reaches all its add effects") {
        auto [state, applied] = planner.lookahead(task.initial, {t01, t14});
        CHECK(applied == ActionSequence{t01, t14});
        CHECK(state.test(task.person_atom(0, 4)));
    }
    SECTION("an inapplicable head is skipped, the tail still applies") {
        auto [state, applied] = planner.lookahead(task.initial, {t14, f01});
        CHECK(applied == ActionSequence{f01});
        CHECK(state.test(task.plane_atom(0, 1)));
    }
    SECTION("empty relaxed plan leaves the state unchanged") {
        auto [state, applied] = planner.lookahead(task.initial, {});
        CHECK(applied.empty());
        CHECK(state == task.initial);
    }
}

TEST_CASE("solve_subproblem base cases") {
    GroundTask task = ground_multizeno(MultiZenoConfig{});
    Planner planner(task);
    PlannerBudget budget{1000};

    SECTION("satisfied goal: empty plan, zero expansions") {
        Planner::SearchStats stats;
        auto res = planner.solve_subproblem(task.initial, {task.plane_atom(0, 0)},
                                            StrategyObjective::Makespan, budget, &stats);
        REQUIRE(res);
        CHECK(res->empty());
        CHECK(stats.expanded == 0);
    }
    SECTION("single passenger: the solution ends by delivering it") {
        auto res = planner.solve_subproblem(task.initial, {task.person_atom(0, 4)},
                                            StrategyObjective::Makespan, budget);
        REQUIRE(res);
        REQUIRE_FALSE(res->empty());
        const GroundAction& last = task.actions[res->back()];
        CHECK(last.kind == ActionKind::Transport);
        CHECK(last.passenger == 0);
        CHECK(last.to_city == 4);
        // executable and goal-reaching
        AtomSet state = task.initial;
        for (int a : *res) state = step(state, task.actions[a], task);
        CHECK(state.test(task.person_atom(0, 4)));
    }
    SECTION("a budget of one expansion fails on the full goal") {
        auto res = planner.solve_subproblem(task.initial, task.goal_atoms,
                                            StrategyObjective::Makespan, PlannerBudget{1});
        CHECK_FALSE(res);
    }
    SECTION("the full goal is solved within the default budget") {
        Planner::SearchStats stats;
        auto res = planner.solve_subproblem(task.initial, task.goal_atoms,
                                            StrategyObjective::Makespan, budget, &stats);
        REQUIRE(res);
        AtomSet state = task.initial;
        for (int a : *res) state = step(state, task.actions[a], task);
        CHECK(state.contains_all(task.goal));
        CHECK(stats.expanded <= 1000);
    }
}

TEST_CASE("budget monotonicity: more budget never changes a success") {
    GroundTask task = ground_multizeno(MultiZenoConfig{});
    Planner planner(task);
    Rng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        auto walk = testutil::random_walk(task, 4, rng);
        AtomSet state = task.initial;
        for (int a : walk) state = step(state, task.actions[a], task);
        std::vector<int> goal = {task.person_atom((int)draw_below(rng, 3), 4)};
        StrategyObjective strat = draw_bernoulli(rng, 0.5) ? StrategyObjective::Makespan
                                                           : StrategyObjective::Secondary;
        auto small = planner.solve_subproblem(state, goal, strat, PlannerBudget{50});
        if (!small) continue;
        auto big = planner.solve_subproblem(state, goal, strat, PlannerBudget{5000});
        REQUIRE(big);
        CHECK(*small == *big);
    }
}

TEST_CASE("solver is sound on random subgoals in both modes") {
    for (ObjectiveMode mode : {ObjectiveMode::Cost, ObjectiveMode::Risk}) {
        MultiZenoConfig cfg;
        cfg.mode = mode;
        GroundTask task = ground_multizeno(cfg);
        Planner planner(task);
        Rng rng(29);
        for (int trial = 0; trial < 50; ++trial) {
            // subgoal: a consistent position sample of a reachable state
            auto walk = testutil::random_walk(task, (int)draw_below(rng, 12), rng);
            AtomSet target = task.initial;
            for (int a : walk) target = step(target, task.actions[a], task);
            std::vector<int> goal;
            target.for_each([&](int id) {
                if (draw_unit(rng) < 0.4) goal.push_back(id);
            });
            StrategyObjective strat = draw_bernoulli(rng, 0.5)
                                          ? StrategyObjective::Makespan
                                          : StrategyObjective::Secondary;
            auto res = planner.solve_subproblem(task.initial, goal, strat,
                                                PlannerBudget{1000});
            REQUIRE(res); // reachable by construction
            AtomSet state = task.initial;
            for (int a : *res) state = step(state, task.actions[a], task);
            for (int g : goal) CHECK(state.test(g));
            // and the compressed form is a valid schedule
            ScheduledPlan plan = compress(*res, task);
            validate_schedule(task, plan);
        }
    }
}

TEST_CASE("compress left-shifts independent actions") {
    GroundTask task = ground_multizeno(MultiZenoConfig{});
    int f01 = find_action(task, ActionKind::Fly, 0, -1, 0, 1);
    int g02 = find_action(task, ActionKind::Fly, 1, -1, 0, 2);
    ScheduledPlan plan = compress({f01, g02}, task);
    CHECK(plan.steps[0].start == Ratio(0));
    CHECK(plan.steps[1].start == Ratio(0));
    CHECK(plan.makespan == Ratio(4));
}

TEST_CASE("compress chains actions sharing a plane") {
    GroundTask task = ground_multizeno(MultiZenoConfig{});
    int f01 = find_action(task, ActionKind::Fly, 0, -1, 0, 1);
    int t14 = find_action(task, ActionKind::Transport, 0, 0, 1, 4);
    // the transport needs the passenger at city 1: not executable
    CHECK_THROWS_AS(compress({f01, t14}, task), PlanError);

    int t01 = find_action(task, ActionKind::Transport, 0, 0, 0, 1);
    ScheduledPlan plan = compress({t01, t14}, task);
    CHECK(plan.steps[0].start == Ratio(0));
    CHECK(plan.steps[1].start == Ratio(2));
    CHECK(plan.makespan == Ratio(4));
}

TEST_CASE("compress reproduces the zero-idle makespan 8") {
    GroundTask task = ground_multizeno(MultiZenoConfig{});
    ScheduledPlan plan = compress(testutil::optimal_k1_sequence(task), task);
    CHECK(plan.makespan == Ratio(8));
    ObjectivePoint obj = validate_plan(task, plan);
    CHECK(obj == ObjectivePoint{Ratio(8), Ratio(12)});
}

TEST_CASE("compress is valid, never slower than sequential, never reorders") {
    GroundTask task = ground_multizeno(MultiZenoConfig{});
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        auto seq = testutil::random_walk(task, (int)draw_below(rng, 25), rng);
        ScheduledPlan plan = compress(seq, task);
        validate_schedule(task, plan);
        Ratio sequential(0);
        for (int a : seq) sequential = sequential + task.actions[a].duration;
        CHECK(plan.makespan <= sequential);
        for (std::size_t i = 0; i < seq.size(); ++i)
            for (std::size_t j = i + 1; j < seq.size(); ++j) {
                const GroundAction& a = task.actions[seq[i]];
                const GroundAction& b = task.actions[seq[j]];
                bool shared = a.plane == b.plane ||
                              (a.passenger >= 0 && a.passenger == b.passenger);
                if (shared)
                    CHECK(plan.steps[i].start + a.duration <= plan.steps[j].start);
            }
    }
}

TEST_CASE("objectives_of delegates to full validation") {
    GroundTask task = ground_multizeno(MultiZenoConfig{});
    ScheduledPlan plan = compress(testutil::optimal_k1_sequence(task), task);
    CHECK(objectives_of(plan, task) == ObjectivePoint{Ratio(8), Ratio(12)});
    CHECK_THROWS_AS(objectives_of(ScheduledPlan{}, task), PlanError);
}
