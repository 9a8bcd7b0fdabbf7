#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "mozeno/genotype.hpp"

using namespace mozeno;

namespace {

struct Fixture {
    GroundTask task;
    std::vector<std::optional<Ratio>> est;
    AtomRestriction restr;
    explicit Fixture(int k = 1)
        : task(ground_multizeno([k] {
              MultiZenoConfig c;
              c.bunch_count = k;
              return c;
          }())),
          est(earliest_start_times(task)), restr(task, est) {}
};

} // namespace

TEST_CASE("init draws between 1 and |distinct times| chronologically valid states") {
    Fixture fx;
    Rng rng(1);
    for (int trial = 0; trial < 500; ++trial) {
        Individual ind = init_individual(fx.task, fx.restr, rng);
        CHECK(ind.states.size() >= 1);
        CHECK(ind.states.size() <= fx.restr.times().size());
        CHECK(individual_valid(ind, fx.task, fx.est));
        for (std::size_t i = 1; i < ind.states.size(); ++i)
            CHECK(ind.states[i - 1].bucket < ind.states[i].bucket); // distinct buckets
        for (const PartialState& st : ind.states) CHECK_FALSE(st.atoms.empty());
    }
}

TEST_CASE("init is deterministic under a fixed seed") {
    Fixture fx;
    Rng a(99), b(99);
    for (int i = 0; i < 20; ++i) {
        Individual x = init_individual(fx.task, fx.restr, a);
        Individual y = init_individual(fx.task, fx.restr, b);
        REQUIRE(x.states.size() == y.states.size());
        for (std::size_t s = 0; s < x.states.size(); ++s) {
            CHECK(x.states[s].bucket == y.states[s].bucket);
            CHECK(x.states[s].atoms == y.states[s].atoms);
        }
    }
}

TEST_CASE("a single finite start time forces single-state individuals") {
    Fixture fx;
    // restriction with one distinct time: keep only time-0 atoms
    std::vector<std::optional<Ratio>> est(fx.task.atom_count);
    fx.task.initial.for_each([&](int id) { est[id] = Ratio(0); });
    AtomRestriction restr(fx.task, est);
    REQUIRE(restr.times().size() == 1);
    Rng rng(3);
    for (int i = 0; i < 50; ++i)
        CHECK(init_individual(fx.task, restr, rng).states.size() == 1);
}

TEST_CASE("crossover splices respect chronology or fall back to the first parent") {
    Fixture fx;
    Rng rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        Individual a = init_individual(fx.task, fx.restr, rng);
        Individual b = init_individual(fx.task, fx.restr, rng);
        Individual child = crossover(a, b, rng);
        CHECK(individual_valid(child, fx.task, fx.est));
    }
    // crossing an individual with itself keeps chronology
    Individual a = init_individual(fx.task, fx.restr, rng);
    for (int trial = 0; trial < 100; ++trial) {
        Individual child = crossover(a, a, rng);
        CHECK(chronology_ok(child.states));
    }
}

TEST_CASE("crossover falls back to a copy of the first parent when both splices clash") {
    Fixture fx;
    // a: single state at bucket 6; b: single state at bucket 0 would always
    // splice legally, so build two-state parents with interlocking buckets.
    auto mk = [&](std::initializer_list<int> buckets) {
        Individual ind;
        for (int t : buckets) {
            PartialState st;
            st.bucket = Ratio(t);
            st.atoms = {fx.task.plane_atom(0, 0)};
            ind.states.push_back(st);
        }
        return ind;
    };
    Individual a = mk({6});
    Individual b = mk({0});
    // cut_a = 1, cut_b = 1: splice (a-prefix=whole a, b-suffix=empty) = a: valid.
    // mirror case is exercised statistically above; here force the fallback
    // by construction: a-prefix end 6 vs b-suffix start 0 and b-prefix end 0
    // vs a-suffix start 6 is *valid*, so fallback needs equal extremes:
    Individual c = mk({6, 6});
    Individual d = mk({0, 0});
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        Individual child = crossover(c, d, rng);
        CHECK(chronology_ok(child.states));
    }
}

TEST_CASE("mutations preserve the representation invariants") {
    for (int k : {1, 2}) {
        Fixture fx(k);
        MutationWeights weights;
        Rng rng(13 + k);
        Individual ind = init_individual(fx.task, fx.restr, rng);
        for (int step = 0; step < 4000; ++step) {
            ind = mutate(ind, weights, fx.task, fx.restr, rng);
            REQUIRE(individual_valid(ind, fx.task, fx.est));
        }
    }
}

TEST_CASE("delState can empty an individual; further deletions are vacuous") {
    Fixture fx;
    MutationWeights only_del{0, 1, 0, 0};
    Rng rng(17);
    Individual ind;
    PartialState st;
    st.bucket = Ratio(2);
    st.atoms = {fx.task.plane_atom(0, 1)};
    ind.states.push_back(st);
    ind = mutate(ind, only_del, fx.task, fx.restr, rng);
    CHECK(ind.states.empty());
    Individual again = mutate(ind, only_del, fx.task, fx.restr, rng);
    CHECK(again.states.empty());
}

TEST_CASE("addAtom leaves a mutex-saturated state unchanged") {
    Fixture fx;
    // A state at bucket 0 already holding every time-0 atom: the only allowed
    // additions collide as duplicates.
    Individual ind;
    PartialState st;
    st.bucket = Ratio(0);
    fx.task.initial.for_each([&](int id) { st.atoms.push_back(id); });
    std::sort(st.atoms.begin(), st.atoms.end());
    ind.states.push_back(st);
    MutationWeights only_add{0, 0, 1, 0};
    Rng rng(19);
    Individual out = mutate(ind, only_add, fx.task, fx.restr, rng);
    CHECK(out.states[0].atoms == ind.states[0].atoms);
}

TEST_CASE("delAtom removes a state emptied by its last atom") {
    Fixture fx;
    Individual ind;
    PartialState st;
    st.bucket = Ratio(2);
    st.atoms = {fx.task.plane_atom(0, 1)};
    ind.states.push_back(st);
    MutationWeights only_del_atom{0, 0, 0, 1};
    Rng rng(23);
    Individual out = mutate(ind, only_del_atom, fx.task, fx.restr, rng);
    CHECK(out.states.empty());
}

TEST_CASE("individuals roundtrip through JSON") {
    Fixture fx(2);
    Rng rng(29);
    for (int trial = 0; trial < 50; ++trial) {
        Individual ind = init_individual(fx.task, fx.restr, rng);
        nlohmann::json j = individual_to_json(ind, fx.task);
        Individual back = individual_from_json(j, fx.task);
        REQUIRE(back.states.size() == ind.states.size());
        for (std::size_t i = 0; i < ind.states.size(); ++i) {
            CHECK(back.states[i].bucket == ind.states[i].bucket);
            CHECK(back.states[i].atoms == ind.states[i].atoms);
        }
    }
}
