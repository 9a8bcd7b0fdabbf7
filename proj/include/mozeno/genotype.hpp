// Divide-and-evolve genotype: a variable-length, chronologically ordered
// sequence of partial states.  Invariants maintained by every operator:
// time buckets are non-decreasing along the sequence, atoms inside a state
// are pairwise non-mutex, and every atom's earliest start time is at most
// its state's bucket.
#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "domain.hpp"
#include "front.hpp"
#include "plan.hpp"
#include "rng.hpp"

namespace mozeno {

struct PartialState {
    std::vector<int> atoms; // sorted atom ids
    Ratio bucket;
};

struct EvalResult {
    bool feasible = false;
    ObjectivePoint objectives;
    int solved_count = 0;
    int subproblem_count = 0;
    std::optional<ScheduledPlan> plan;
};

struct Individual {
    std::vector<PartialState> states;
    std::optional<EvalResult> evaluation;
};

/// Restriction sets: for each distinct earliest start time, the atoms whose
/// earliest time is at or below it.  Shared by init and the mutations.
class AtomRestriction {
public:
    AtomRestriction(const GroundTask& task, const std::vector<std::optional<Ratio>>& est)
        : times_(distinct_start_times(est)) {
        allowed_.resize(times_.size());
        for (std::size_t t = 0; t < times_.size(); ++t)
            for (int id = 0; id < task.atom_count; ++id)
                if (est[id] && *est[id] <= times_[t]) allowed_[t].push_back(id);
    }

    const std::vector<Ratio>& times() const { return times_; }
    const std::vector<int>& allowed_at(std::size_t time_index) const {
        return allowed_[time_index];
    }
    std::size_t index_of(const Ratio& bucket) const {
        for (std::size_t i = 0; i < times_.size(); ++i)
            if (times_[i] == bucket) return i;
        throw std::logic_error("bucket is not an earliest start time");
    }

private:
    std::vector<Ratio> times_;
    std::vector<std::vector<int>> allowed_;
};

namespace detail {

inline bool mutex_with_state(const GroundTask& task, const std::vector<int>& atoms,
                             int candidate) {
    for (int a : atoms)
        if (task.atoms_mutex(a, candidate)) return true;
    return false;
}

inline bool contains(const std::vector<int>& atoms, int id) {
    return std::find(atoms.begin(), atoms.end(), id) != atoms.end();
}

/// Fill a state at the given time index: atom count drawn uniformly in
/// 1..|allowed|, atoms drawn uniformly with mutex conflicts skipped; the
/// retry budget is |allowed| draws, so a state may end smaller than drawn.
inline PartialState random_state(const GroundTask& task, const AtomRestriction& restr,
                                 std::size_t time_index, Rng& rng) {
    const std::vector<int>& allowed = restr.allowed_at(time_index);
    PartialState st;
    st.bucket = restr.times()[time_index];
    std::int64_t target = draw_range(rng, 1, (std::int64_t)allowed.size());
    std::int64_t retries = (std::int64_t)allowed.size();
    while ((std::int64_t)st.atoms.size() < target && retries > 0) {
        int candidate = allowed[draw_below(rng, allowed.size())];
        if (contains(st.atoms, candidate) || mutex_with_state(task, st.atoms, candidate)) {
            --retries;
            continue;
        }
        st.atoms.push_back(candidate);
    }
    std::sort(st.atoms.begin(), st.atoms.end());
    return st;
}

} // namespace detail

/// Random individual: the number of states is uniform in 1..|distinct
/// times|, the buckets are distinct times drawn uniformly, in order.
inline Individual init_individual(const GroundTask& task, const AtomRestriction& restr,
                                  Rng& rng) {
    std::size_t nt = restr.times().size();
    std::size_t n = (std::size_t)draw_range(rng, 1, (std::int64_t)nt);
    std::vector<std::size_t> indices(nt);
    for (std::size_t i = 0; i < nt; ++i) indices[i] = i;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = i + (std::size_t)draw_below(rng, nt - i);
        std::swap(indices[i], indices[j]);
    }
    indices.resize(n);
    std::sort(indices.begin(), indices.end());

    Individual ind;
    for (std::size_t idx : indices)
        ind.states.push_back(detail::random_state(task, restr, idx, rng));
    return ind;
}

inline bool chronology_ok(const std::vector<PartialState>& states) {
    for (std::size_t i = 1; i < states.size(); ++i)
        if (states[i].bucket < states[i - 1].bucket) return false;
    return true;
}

/// One-point crossover adapted to variable length: cut points drawn
/// independently in each parent; of the two splices, the one respecting the
/// chronological constraint is kept (preferring a-prefix + b-suffix), and if
/// both violate it the first parent is returned unchanged.
inline Individual crossover(const Individual& a, const Individual& b, Rng& rng) {
    std::size_t cut_a = (std::size_t)draw_range(rng, 0, (std::int64_t)a.states.size());
    std::size_t cut_b = (std::size_t)draw_range(rng, 0, (std::int64_t)b.states.size());

    auto splice = [](const Individual& head, std::size_t h, const Individual& tail,
                     std::size_t t) {
        Individual child;
        child.states.assign(head.states.begin(), head.states.begin() + h);
        child.states.insert(child.states.end(), tail.states.begin() + t,
                            tail.states.end());
        return child;
    };
    auto seam_ok = [](const Individual& head, std::size_t h, const Individual& tail,
                      std::size_t t) {
        if (h == 0 || t == tail.states.size()) return true;
        return head.states[h - 1].bucket <= tail.states[t].bucket;
    };

    if (seam_ok(a, cut_a, b, cut_b)) return splice(a, cut_a, b, cut_b);
    if (seam_ok(b, cut_b, a, cut_a)) return splice(b, cut_b, a, cut_a);
    Individual copy;
    copy.states = a.states;
    return copy;
}

enum class MutationKind : std::uint8_t { AddState, DelState, AddAtom, DelAtom };

struct MutationWeights {
    double add_state = 1;
    double del_state = 1;
    double add_atom = 3;
    double del_atom = 3;

    double sum() const { return add_state + del_state + add_atom + del_atom; }
};

namespace detail {

inline MutationKind roulette(const MutationWeights& w, Rng& rng) {
    double x = draw_unit(rng) * w.sum();
    if ((x -= w.add_state) < 0) return MutationKind::AddState;
    if ((x -= w.del_state) < 0) return MutationKind::DelState;
    if ((x -= w.add_atom) < 0) return MutationKind::AddAtom;
    return MutationKind::DelAtom;
}

} // namespace detail

/// Apply exactly one mutation operator, chosen by roulette over the weights.
/// Vacuous choices (delState on an empty individual, addAtom into a state
/// already saturated by mutexes, ...) return the input unchanged.
inline Individual mutate(const Individual& ind, const MutationWeights& weights,
                         const GroundTask& task, const AtomRestriction& restr, Rng& rng) {
    Individual out;
    out.states = ind.states;
    switch (detail::roulette(weights, rng)) {
    case MutationKind::AddState: {
        std::size_t pos = (std::size_t)draw_range(rng, 0, (std::int64_t)out.states.size());
        const auto& times = restr.times();
        std::size_t lo = 0, hi = times.size(); // [lo, hi) of candidate time indices
        if (pos > 0) {
            while (lo < times.size() && times[lo] < out.states[pos - 1].bucket) ++lo;
        }
        if (pos < out.states.size()) {
            while (hi > lo && times[hi - 1] > out.states[pos].bucket) --hi;
        }
        if (lo >= hi) break;
        std::size_t idx = lo + (std::size_t)draw_below(rng, hi - lo);
        out.states.insert(out.states.begin() + pos,
                          detail::random_state(task, restr, idx, rng));
        break;
    }
    case MutationKind::DelState: {
        if (out.states.empty()) break;
        std::size_t pos = (std::size_t)draw_below(rng, out.states.size());
        out.states.erase(out.states.begin() + pos);
        break;
    }
    case MutationKind::AddAtom: {
        if (out.states.empty()) break;
        std::size_t pos = (std::size_t)draw_below(rng, out.states.size());
        PartialState& st = out.states[pos];
        const std::vector<int>& allowed = restr.allowed_at(restr.index_of(st.bucket));
        std::int64_t retries = (std::int64_t)allowed.size();
        while (retries-- > 0) {
            int candidate = allowed[draw_below(rng, allowed.size())];
            if (detail::contains(st.atoms, candidate) ||
                detail::mutex_with_state(task, st.atoms, candidate))
                continue;
            st.atoms.insert(std::upper_bound(st.atoms.begin(), st.atoms.end(), candidate),
                            candidate);
            break;
        }
        break;
    }
    case MutationKind::DelAtom: {
        if (out.states.empty()) break;
        std::size_t pos = (std::size_t)draw_below(rng, out.states.size());
        PartialState& st = out.states[pos];
        if (st.atoms.empty()) break;
        st.atoms.erase(st.atoms.begin() + draw_below(rng, st.atoms.size()));
        if (st.atoms.empty()) out.states.erase(out.states.begin() + pos);
        break;
    }
    }
    return out;
}

/// Representation invariants; variation is closed over these.
inline bool individual_valid(const Individual& ind, const GroundTask& task,
                             const std::vector<std::optional<Ratio>>& est) {
    if (!chronology_ok(ind.states)) return false;
    for (const PartialState& st : ind.states) {
        for (std::size_t i = 0; i < st.atoms.size(); ++i) {
            if (!est[st.atoms[i]] || *est[st.atoms[i]] > st.bucket) return false;
            for (std::size_t j = i + 1; j < st.atoms.size(); ++j)
                if (task.atoms_mutex(st.atoms[i], st.atoms[j])) return false;
        }
    }
    return true;
}

// --- JSON checkpoint form: a list of {bucket, atoms} -----------------------

inline nlohmann::json individual_to_json(const Individual& ind, const GroundTask& task) {
    nlohmann::json states = nlohmann::json::array();
    for (const PartialState& st : ind.states) {
        nlohmann::json atoms = nlohmann::json::array();
        for (int id : st.atoms) atoms.push_back(task.atom_name(id));
        states.push_back({{"bucket", st.bucket.to_double()}, {"atoms", atoms}});
    }
    return states;
}

inline Individual individual_from_json(const nlohmann::json& j, const GroundTask& task) {
    Individual ind;
    for (const auto& js : j) {
        PartialState st;
        st.bucket = snap_to_tenths(js.at("bucket").get<double>(), "bucket");
        for (const auto& name : js.at("atoms")) {
            std::string s = name.get<std::string>();
            Predicate pred;
            if (s.rfind("PlaneAt(", 0) == 0) pred = Predicate::PlaneAt;
            else if (s.rfind("PersonAt(", 0) == 0) pred = Predicate::PersonAt;
            else throw ConfigError("bad atom name: " + s);
            std::size_t open = s.find('('), comma = s.find(','), close = s.find(')');
            int object = std::stoi(s.substr(open + 1, comma - open - 1));
            int city = std::stoi(s.substr(comma + 1, close - comma - 1));
            st.atoms.push_back(task.atom_id(Atom{pred, object, city}));
        }
        std::sort(st.atoms.begin(), st.atoms.end());
        ind.states.push_back(std::move(st));
    }
    return ind;
}

} // namespace mozeno
