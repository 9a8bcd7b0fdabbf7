// Instance and experiment configuration files (JSON).  Unknown keys are
// rejected everywhere; validation errors name the violated invariant.
#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "domain.hpp"
#include "evaluate.hpp"
#include "moea.hpp"

namespace mozeno {

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj, const std::set<std::string>& known,
                                const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
}

inline Ratio json_ratio(const nlohmann::json& v, const char* what) {
    if (!v.is_number()) throw ConfigError(std::string(what) + ": expected a number");
    return snap_to_tenths(v.get<double>(), what);
}

inline std::array<Ratio, 3> json_triple(const nlohmann::json& v, const char* what) {
    if (!v.is_array() || v.size() != 3)
        throw ConfigError(std::string(what) + ": expected an array of 3 numbers");
    return {json_ratio(v[0], what), json_ratio(v[1], what), json_ratio(v[2], what)};
}

} // namespace detail

// --- Instance files ---------------------------------------------------------
// {"k":int, "planes":int, "durations":[d1,d2,d3], "costs":[c1,c2,c3],
//  "risks":[r1,r2,r3], "mode":"cost"|"risk"}; missing fields default.

inline MultiZenoConfig instance_from_json(const nlohmann::json& j) {
    detail::reject_unknown_keys(
        j, {"k", "planes", "durations", "costs", "risks", "mode"}, "instance");
    MultiZenoConfig cfg;
    if (j.contains("k")) cfg.bunch_count = j.at("k").get<int>();
    if (j.contains("planes")) cfg.plane_count = j.at("planes").get<int>();
    if (j.contains("durations")) cfg.durations = detail::json_triple(j["durations"], "durations");
    if (j.contains("costs")) cfg.costs = detail::json_triple(j["costs"], "costs");
    if (j.contains("risks")) cfg.risks = detail::json_triple(j["risks"], "risks");
    if (j.contains("mode")) {
        std::string m = j.at("mode").get<std::string>();
        if (m == "cost") cfg.mode = ObjectiveMode::Cost;
        else if (m == "risk") cfg.mode = ObjectiveMode::Risk;
        else throw ConfigError("mode: expected \"cost\" or \"risk\", got \"" + m + "\"");
    }
    cfg.validate();
    return cfg;
}

inline nlohmann::json instance_to_json(const MultiZenoConfig& cfg) {
    auto triple = [](const std::array<Ratio, 3>& t) {
        return nlohmann::json::array({t[0].to_double(), t[1].to_double(), t[2].to_double()});
    };
    return {{"k", cfg.bunch_count},
            {"planes", cfg.plane_count},
            {"durations", triple(cfg.durations)},
            {"costs", triple(cfg.costs)},
            {"risks", triple(cfg.risks)},
            {"mode", cfg.mode == ObjectiveMode::Cost ? "cost" : "risk"}};
}

inline nlohmann::json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

inline MultiZenoConfig load_instance(const std::string& path) {
    return instance_from_json(parse_json_file(path));
}

// --- Experiment configuration -----------------------------------------------

struct StopCondition {
    std::optional<double> max_seconds;
    std::optional<long long> max_evaluations;

    void validate() const {
        if (!max_seconds && !max_evaluations)
            throw ConfigError("stop: at least one of max_seconds/max_evaluations required");
        if (max_seconds && *max_seconds <= 0)
            throw ConfigError("stop.max_seconds must be positive");
        if (max_evaluations && *max_evaluations < 1)
            throw ConfigError("stop.max_evaluations must be >= 1");
    }
};

struct ExperimentConfig {
    MultiZenoConfig instance;
    MoeaParams moea;
    DaeParams dae;
    StrategyWeights strategy;
    int runs = 30;
    StopCondition stop;
    std::uint64_t base_seed = 1;
    std::string out_dir = "out";

    void validate() const {
        instance.validate();
        moea.validate();
        dae.validate();
        strategy.validate();
        if (runs < 1) throw ConfigError("runs must be >= 1");
        stop.validate();
    }
};

inline Scheme scheme_from_string(const std::string& s) {
    if (s == "nsga2") return Scheme::Nsga2;
    if (s == "spea2") return Scheme::Spea2;
    if (s == "ibea-eps") return Scheme::IbeaEps;
    if (s == "ibea-hyp") return Scheme::IbeaHyp;
    throw ConfigError("scheme: expected nsga2|spea2|ibea-eps|ibea-hyp, got \"" + s + "\"");
}

inline std::string scheme_to_string(Scheme s) {
    switch (s) {
    case Scheme::Nsga2: return "nsga2";
    case Scheme::Spea2: return "spea2";
    case Scheme::IbeaEps: return "ibea-eps";
    case Scheme::IbeaHyp: return "ibea-hyp";
    }
    return "?";
}

inline ExperimentConfig experiment_from_json(const nlohmann::json& j) {
    detail::reject_unknown_keys(
        j,
        {"instance", "scheme", "population", "archive", "kappa", "reference_point",
         "crossover_probability", "mutation_probability", "mutation_weights", "budget",
         "penalty_base", "strategy_weights", "runs", "stop", "base_seed", "out"},
        "config");
    ExperimentConfig cfg;
    if (j.contains("instance")) {
        if (j["instance"].is_string())
            cfg.instance = load_instance(j["instance"].get<std::string>());
        else
            cfg.instance = instance_from_json(j["instance"]);
    } else {
        cfg.instance.validate(); // defaults: k=1 cost
    }
    if (j.contains("scheme")) cfg.moea.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    cfg.moea.indicator =
        cfg.moea.scheme == Scheme::IbeaEps ? IndicatorKind::EpsPlus : IndicatorKind::HypDiff;
    if (j.contains("population")) cfg.moea.population_size = j["population"].get<int>();
    if (j.contains("archive")) cfg.moea.archive_size = j["archive"].get<int>();
    if (j.contains("kappa")) cfg.moea.kappa = j["kappa"].get<double>();
    if (j.contains("reference_point")) {
        const auto& r = j["reference_point"];
        if (!r.is_array() || r.size() != 2)
            throw ConfigError("reference_point: expected [r1, r2]");
        cfg.moea.reference_point = {r[0].get<double>(), r[1].get<double>()};
    }
    if (j.contains("crossover_probability"))
        cfg.dae.crossover_probability = j["crossover_probability"].get<double>();
    if (j.contains("mutation_probability"))
        cfg.dae.mutation_probability = j["mutation_probability"].get<double>();
    if (j.contains("mutation_weights")) {
        const auto& w = j["mutation_weights"];
        if (!w.is_array() || w.size() != 4)
            throw ConfigError("mutation_weights: expected [addState, delState, addAtom, delAtom]");
        cfg.dae.mutation_weights = {w[0].get<double>(), w[1].get<double>(),
                                    w[2].get<double>(), w[3].get<double>()};
    }
    if (j.contains("budget")) cfg.dae.budget.max_expanded_nodes = j["budget"].get<int>();
    if (j.contains("penalty_base"))
        cfg.dae.penalty_base = detail::json_ratio(j["penalty_base"], "penalty_base");
    if (j.contains("strategy_weights")) {
        const auto& w = j["strategy_weights"];
        if (!w.is_array() || w.size() != 2)
            throw ConfigError("strategy_weights: expected [w_makespan, w_secondary]");
        cfg.strategy.makespan = detail::json_ratio(w[0], "strategy_weights");
        cfg.strategy.secondary = detail::json_ratio(w[1], "strategy_weights");
    }
    if (j.contains("runs")) cfg.runs = j["runs"].get<int>();
    if (j.contains("stop")) {
        detail::reject_unknown_keys(j["stop"], {"max_seconds", "max_evaluations"}, "stop");
        if (j["stop"].contains("max_seconds"))
            cfg.stop.max_seconds = j["stop"]["max_seconds"].get<double>();
        if (j["stop"].contains("max_evaluations"))
            cfg.stop.max_evaluations = j["stop"]["max_evaluations"].get<long long>();
    } else {
        cfg.stop.max_evaluations = 20000; // documented default
    }
    if (j.contains("base_seed")) cfg.base_seed = j["base_seed"].get<std::uint64_t>();
    if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
    cfg.validate();
    return cfg;
}

inline nlohmann::json experiment_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["instance"] = instance_to_json(cfg.instance);
    j["scheme"] = scheme_to_string(cfg.moea.scheme);
    j["population"] = cfg.moea.population_size;
    j["archive"] = cfg.moea.archive();
    j["kappa"] = cfg.moea.kappa;
    j["reference_point"] = {cfg.moea.reference_point.first, cfg.moea.reference_point.second};
    j["crossover_probability"] = cfg.dae.crossover_probability;
    j["mutation_probability"] = cfg.dae.mutation_probability;
    j["mutation_weights"] = {cfg.dae.mutation_weights.add_state, cfg.dae.mutation_weights.del_state,
                             cfg.dae.mutation_weights.add_atom, cfg.dae.mutation_weights.del_atom};
    j["budget"] = cfg.dae.budget.max_expanded_nodes;
    j["strategy_weights"] = {cfg.strategy.makespan.to_double(),
                             cfg.strategy.secondary.to_double()};
    j["runs"] = cfg.runs;
    nlohmann::json stop;
    if (cfg.stop.max_seconds) stop["max_seconds"] = *cfg.stop.max_seconds;
    if (cfg.stop.max_evaluations) stop["max_evaluations"] = *cfg.stop.max_evaluations;
    j["stop"] = stop;
    j["base_seed"] = cfg.base_seed;
    j["out"] = cfg.out_dir;
    return j;
}

inline ExperimentConfig load_config(const std::string& path) {
    return experiment_from_json(parse_json_file(path));
}

} // namespace mozeno
