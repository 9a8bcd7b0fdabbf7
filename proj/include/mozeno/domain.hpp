// Ground temporal STRIPS model of the MultiZeno family.
//
// Topology: city 0 and the goal city are connected through three central
// cities (1..3); there is no direct edge between the end cities.  Flying a
// leg takes the corridor's duration whether or not a passenger is aboard,
// and landing in a central city incurs that city's tax/risk.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "ratio.hpp"

namespace mozeno {

enum class Predicate : std::uint8_t { PlaneAt, PersonAt };
enum class ObjectiveMode : std::uint8_t { Cost, Risk };
enum class ActionKind : std::uint8_t { Fly, Transport };

struct Atom {
    Predicate predicate;
    int object; // plane index or passenger index
    int city;

    friend bool operator==(const Atom&, const Atom&) = default;
};

/// Two atoms that cannot hold together: one object in two places.  This is
/// the approximate relation used by the genotype; atoms of distinct objects
/// are never flagged.
inline bool mutex(const Atom& a, const Atom& b) {
    return a.predicate == b.predicate && a.object == b.object && a.city != b.city;
}

// ---------------------------------------------------------------------------
// Atom sets as fixed-width bitsets.  256 atoms cover every instance this
// artifact targets; grounding rejects anything larger.

class AtomSet {
public:
    static constexpr int kWords = 4;
    static constexpr int kCapacity = kWords * 64;

    AtomSet() : words_{} {}

    void set(int id) { words_[id >> 6] |= std::uint64_t{1} << (id & 63); }
    void reset(int id) { words_[id >> 6] &= ~(std::uint64_t{1} << (id & 63)); }
    bool test(int id) const { return (words_[id >> 6] >> (id & 63)) & 1; }

    bool contains_all(const AtomSet& other) const {
        for (int w = 0; w < kWords; ++w)
            if ((other.words_[w] & ~words_[w]) != 0) return false;
        return true;
    }
    void add_all(const AtomSet& other) {
        for (int w = 0; w < kWords; ++w) words_[w] |= other.words_[w];
    }
    void remove_all(const AtomSet& other) {
        for (int w = 0; w < kWords; ++w) words_[w] &= ~other.words_[w];
    }
    int count() const {
        int n = 0;
        for (auto w : words_) n += __builtin_popcountll(w);
        return n;
    }
    template <typename F>
    void for_each(F&& f) const {
        for (int w = 0; w < kWords; ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                int b = __builtin_ctzll(bits);
                f(w * 64 + b);
                bits &= bits - 1;
            }
        }
    }

    friend bool operator==(const AtomSet&, const AtomSet&) = default;

    /// First word; instances with at most 64 atoms live entirely in it.
    std::uint64_t word0() const { return words_[0]; }

    std::uint64_t hash() const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (auto w : words_) { h ^= w; h *= 0x100000001b3ull; }
        return h;
    }

private:
    std::array<std::uint64_t, kWords> words_;
};

struct AtomSetHash {
    std::size_t operator()(const AtomSet& s) const { return s.hash(); }
};

// ---------------------------------------------------------------------------

struct GroundAction {
    ActionKind kind;
    int plane;
    int passenger; // -1 for Fly
    int from_city;
    int to_city;
    Ratio duration;
    Ratio landing_cost;
    Ratio landing_risk;
    std::vector<int> preconditions;
    std::vector<int> add_effects;
    std::vector<int> delete_effects;
    AtomSet pre_mask;
    AtomSet add_mask;
    AtomSet del_mask;
};

/// Tunable instance parameters.  k scales the passenger count in bunches of
/// three; alpha-style front shaping is done by editing costs[1].
struct MultiZenoConfig {
    int bunch_count = 1;
    int plane_count = 2;
    int central_cities = 3;
    std::array<Ratio, 3> durations{Ratio(2), Ratio(4), Ratio(6)};
    std::array<Ratio, 3> costs{Ratio(3), Ratio(2), Ratio(1)};
    std::array<Ratio, 3> risks{Ratio(3), Ratio(2), Ratio(1)};
    ObjectiveMode mode = ObjectiveMode::Cost;

    int passengers() const { return 3 * bunch_count; }
    int cities() const { return central_cities + 2; }
    int goal_city() const { return central_cities + 1; }

    void validate() const {
        if (bunch_count < 1) throw ConfigError("k must be >= 1");
        if (plane_count < 1) throw ConfigError("plane count must be >= 1");
        if (central_cities != 3)
            throw ConfigError("only 3 central cities are supported");
        if (plane_count >= passengers())
            throw ConfigError("plane count must be smaller than the passenger count");
        for (const auto& d : durations)
            if (!(d > Ratio(0))) throw ConfigError("leg durations must be positive");
        for (const auto& c : costs)
            if (c < Ratio(0)) throw ConfigError("landing costs must be non-negative");
        for (const auto& r : risks)
            if (r < Ratio(0)) throw ConfigError("landing risks must be non-negative");
    }
};

struct GroundTask {
    MultiZenoConfig config;
    int cities = 0;
    int planes = 0;
    int passengers = 0;
    int atom_count = 0;
    std::vector<GroundAction> actions;
    AtomSet initial;
    AtomSet goal;
    std::vector<int> goal_atoms;
    ObjectiveMode mode = ObjectiveMode::Cost;

    int plane_atom(int plane, int city) const { return plane * cities + city; }
    int person_atom(int passenger, int city) const {
        return planes * cities + passenger * cities + city;
    }
    Atom atom(int id) const {
        if (id < planes * cities)
            return Atom{Predicate::PlaneAt, id / cities, id % cities};
        int rest = id - planes * cities;
        return Atom{Predicate::PersonAt, rest / cities, rest % cities};
    }
    int atom_id(const Atom& a) const {
        return a.predicate == Predicate::PlaneAt ? plane_atom(a.object, a.city)
                                                 : person_atom(a.object, a.city);
    }
    std::string atom_name(int id) const {
        Atom a = atom(id);
        return std::string(a.predicate == Predicate::PlaneAt ? "PlaneAt" : "PersonAt") +
               "(" + std::to_string(a.object) + "," + std::to_string(a.city) + ")";
    }
    std::string action_name(int id) const {
        const GroundAction& a = actions[id];
        std::string s = a.kind == ActionKind::Fly ? "Fly(p" : "Transport(p";
        s += std::to_string(a.plane);
        if (a.kind == ActionKind::Transport) s += ",pass" + std::to_string(a.passenger);
        s += ",c" + std::to_string(a.from_city) + "->c" + std::to_string(a.to_city) + ")";
        return s;
    }

    /// Atoms sharing an object slot are mutex (same object, two places).
    bool atoms_mutex(int id1, int id2) const {
        return id1 != id2 && id1 / cities == id2 / cities;
    }
};

namespace detail {

inline void add_move_actions(GroundTask& task, int plane, int passenger,
                             int from, int to) {
    const MultiZenoConfig& cfg = task.config;
    GroundAction a;
    a.kind = passenger < 0 ? ActionKind::Fly : ActionKind::Transport;
    a.plane = plane;
    a.passenger = passenger;
    a.from_city = from;
    a.to_city = to;
    int corridor = (from == 0 || from == cfg.goal_city()) ? to : from;
    a.duration = cfg.durations[corridor - 1];
    bool central_landing = to >= 1 && to <= cfg.central_cities;
    a.landing_cost = central_landing ? cfg.costs[to - 1] : Ratio(0);
    a.landing_risk = central_landing ? cfg.risks[to - 1] : Ratio(0);

    a.preconditions.push_back(task.plane_atom(plane, from));
    a.add_effects.push_back(task.plane_atom(plane, to));
    a.delete_effects.push_back(task.plane_atom(plane, from));
    if (passenger >= 0) {
        a.preconditions.push_back(task.person_atom(passenger, from));
        a.add_effects.push_back(task.person_atom(passenger, to));
        a.delete_effects.push_back(task.person_atom(passenger, from));
    }
    for (int id : a.preconditions) a.pre_mask.set(id);
    for (int id : a.add_effects) a.add_mask.set(id);
    for (int id : a.delete_effects) a.del_mask.set(id);
    task.actions.push_back(std::move(a));
}

} // namespace detail

/// Instantiate the full ground task for a configuration: one Fly action per
/// plane and directed edge, one Transport per (plane, passenger, edge).
inline GroundTask ground_multizeno(const MultiZenoConfig& cfg) {
    cfg.validate();
    GroundTask task;
    task.config = cfg;
    task.cities = cfg.cities();
    task.planes = cfg.plane_count;
    task.passengers = cfg.passengers();
    task.mode = cfg.mode;
    task.atom_count = (task.planes + task.passengers) * task.cities;
    if (task.atom_count > AtomSet::kCapacity)
        throw ConfigError("instance too large: more than " +
                          std::to_string(AtomSet::kCapacity) + " atoms");

    std::vector<std::pair<int, int>> edges;
    for (int c = 1; c <= cfg.central_cities; ++c) {
        edges.emplace_back(0, c);
        edges.emplace_back(c, 0);
        edges.emplace_back(c, cfg.goal_city());
        edges.emplace_back(cfg.goal_city(), c);
    }
    for (int p = 0; p < task.planes; ++p)
        for (auto [from, to] : edges)
            detail::add_move_actions(task, p, -1, from, to);
    for (int p = 0; p < task.planes; ++p)
        for (int x = 0; x < task.passengers; ++x)
            for (auto [from, to] : edges)
                detail::add_move_actions(task, p, x, from, to);

    for (int p = 0; p < task.planes; ++p) task.initial.set(task.plane_atom(p, 0));
    for (int x = 0; x < task.passengers; ++x)
        task.initial.set(task.person_atom(x, 0));
    for (int x = 0; x < task.passengers; ++x) {
        int id = task.person_atom(x, cfg.goal_city());
        task.goal.set(id);
        task.goal_atoms.push_back(id);
    }
    return task;
}

/// Apply one action to a state; throws when a precondition is missing.
inline AtomSet step(const AtomSet& state, const GroundAction& action,
                    const GroundTask& task) {
    if (!state.contains_all(action.pre_mask)) {
        for (int id : action.preconditions)
            if (!state.test(id))
                throw PlanError("inapplicable action: missing " + task.atom_name(id));
    }
    AtomSet next = state;
    next.remove_all(action.del_mask);
    next.add_all(action.add_mask);
    return next;
}

// ---------------------------------------------------------------------------
// Earliest start times: delete-relaxed least fixed point with
// t(add) <= max over preconditions of t + duration.  Unreachable atoms map
// to nullopt.

inline std::vector<std::optional<Ratio>> earliest_start_times(const GroundTask& task) {
    constexpr std::int64_t kInf = INT64_MAX / 4;
    std::vector<std::int64_t> t(task.atom_count, kInf);
    task.initial.for_each([&](int id) { t[id] = 0; });

    bool changed = true;
    while (changed) {
        changed = false;
        for (const GroundAction& a : task.actions) {
            std::int64_t start = 0;
            for (int pre : a.preconditions) {
                if (t[pre] >= kInf) { start = kInf; break; }
                if (t[pre] > start) start = t[pre];
            }
            if (start >= kInf) continue;
            std::int64_t done = start + a.duration.tenths();
            for (int add : a.add_effects) {
                if (done < t[add]) { t[add] = done; changed = true; }
            }
        }
    }

    std::vector<std::optional<Ratio>> result(task.atom_count);
    for (int id = 0; id < task.atom_count; ++id)
        if (t[id] < kInf) result[id] = Ratio::from_tenths(t[id]);
    return result;
}

/// Distinct finite earliest start times, ascending.  These are the buckets
/// the genotype draws from.
inline std::vector<Ratio> distinct_start_times(const std::vector<std::optional<Ratio>>& est) {
    std::vector<Ratio> times;
    for (const auto& t : est) {
        if (!t) continue;
        bool seen = false;
        for (const auto& u : times)
            if (u == *t) { seen = true; break; }
        if (!seen) times.push_back(*t);
    }
    for (std::size_t i = 1; i < times.size(); ++i)
        for (std::size_t j = i; j > 0 && times[j] < times[j - 1]; --j)
            std::swap(times[j], times[j - 1]);
    return times;
}

} // namespace mozeno
