// Command-line front end: instance generation, exact fronts, single runs,
// campaigns, aggregation and the pairwise Wilcoxon table.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime failure.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mozeno/mozeno.hpp"

using namespace mozeno;

namespace {

struct CommonFlags {
    std::string instance_path;
    std::string config_path;
    std::string scheme;
    std::string strategy_weights;
    std::optional<std::uint64_t> seed;
    std::optional<long long> max_evals;
    std::optional<double> max_seconds;
    std::optional<int> runs;
    std::string out;
};

void add_run_flags(CLI::App* cmd, CommonFlags& f, bool with_runs) {
    cmd->add_option("--config", f.config_path, "experiment config JSON");
    cmd->add_option("--instance", f.instance_path, "instance JSON file");
    cmd->add_option("--scheme", f.scheme, "nsga2|spea2|ibea-eps|ibea-hyp");
    cmd->add_option("--strategy-weights", f.strategy_weights,
                    "wM,wS roulette weights for the planner objective");
    cmd->add_option("--seed", f.seed, "base seed");
    cmd->add_option("--max-evals", f.max_evals, "stop after this many evaluations");
    cmd->add_option("--max-seconds", f.max_seconds, "stop after this much wall time");
    if (with_runs) cmd->add_option("--runs", f.runs, "number of independent runs");
    cmd->add_option("--out", f.out, "output directory");
}

ExperimentConfig build_config(const CommonFlags& f) {
    ExperimentConfig cfg;
    if (!f.config_path.empty()) cfg = load_config(f.config_path);
    else cfg.stop.max_evaluations = 20000;
    if (!f.instance_path.empty()) cfg.instance = load_instance(f.instance_path);
    if (!f.scheme.empty()) {
        cfg.moea.scheme = scheme_from_string(f.scheme);
        cfg.moea.indicator = cfg.moea.scheme == Scheme::IbeaEps ? IndicatorKind::EpsPlus
                                                                : IndicatorKind::HypDiff;
    }
    if (!f.strategy_weights.empty()) {
        auto comma = f.strategy_weights.find(',');
        if (comma == std::string::npos)
            throw ConfigError("--strategy-weights expects wM,wS");
        cfg.strategy.makespan =
            snap_to_tenths(std::stod(f.strategy_weights.substr(0, comma)), "strategy");
        cfg.strategy.secondary =
            snap_to_tenths(std::stod(f.strategy_weights.substr(comma + 1)), "strategy");
    }
    if (f.seed) cfg.base_seed = *f.seed;
    if (f.max_evals || f.max_seconds) {
        cfg.stop.max_evaluations = f.max_evals;
        cfg.stop.max_seconds = f.max_seconds;
    }
    if (f.runs) cfg.runs = *f.runs;
    if (!f.out.empty()) cfg.out_dir = f.out;
    cfg.validate();
    return cfg;
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-") std::cout << text;
    else write_text_file(out, text);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MultiZeno multi-objective planning benchmark and solver"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "emit an instance JSON file");
    int gen_k = 1, gen_planes = 2;
    std::string gen_mode = "cost", gen_out;
    double gen_alpha = 2.0;
    std::vector<double> gen_durations, gen_costs, gen_risks;
    gen->add_option("--k", gen_k, "bunches of 3 passengers");
    gen->add_option("--planes", gen_planes, "plane count");
    gen->add_option("--mode", gen_mode, "cost|risk");
    gen->add_option("--alpha", gen_alpha, "tax of city 2 (front-shape lever)");
    gen->add_option("--durations", gen_durations, "d1 d2 d3")->expected(3);
    gen->add_option("--costs", gen_costs, "c1 c2 c3")->expected(3);
    gen->add_option("--risks", gen_risks, "r1 r2 r3")->expected(3);
    gen->add_option("--out", gen_out, "output file (default stdout)");

    // front
    auto* front = app.add_subcommand("front", "emit an exact Pareto front CSV");
    std::string front_instance, front_out;
    bool use_analytic = false, use_oracle = false;
    front->add_option("--instance", front_instance, "instance JSON file")->required();
    front->add_flag("--analytic", use_analytic, "closed-form front (default)");
    front->add_flag("--oracle", use_oracle, "exhaustive-search front (k <= 2)");
    front->add_option("--out", front_out, "output file (default stdout)");

    // run / experiment
    CommonFlags run_flags, exp_flags;
    auto* run_cmd = app.add_subcommand("run", "single seeded run");
    add_run_flags(run_cmd, run_flags, false);
    auto* exp_cmd = app.add_subcommand("experiment", "multi-run campaign");
    add_run_flags(exp_cmd, exp_flags, true);

    // aggregate
    auto* agg = app.add_subcommand("aggregate", "aggregate a campaign directory");
    std::string agg_dir, agg_out;
    agg->add_option("campaign", agg_dir, "campaign directory")->required();
    agg->add_option("--out", agg_out, "output directory (default <campaign>/aggregate)");

    // stats
    auto* stats = app.add_subcommand("stats", "pairwise Wilcoxon table over campaigns");
    std::vector<std::string> stats_dirs;
    std::string stats_out;
    stats->add_option("campaigns", stats_dirs, "campaign directories")->expected(-2);
    stats->add_option("--out", stats_out, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            MultiZenoConfig cfg;
            cfg.bunch_count = gen_k;
            cfg.plane_count = gen_planes;
            if (gen_mode == "cost") cfg.mode = ObjectiveMode::Cost;
            else if (gen_mode == "risk") cfg.mode = ObjectiveMode::Risk;
            else throw ConfigError("mode: expected cost|risk");
            auto triple = [](const std::vector<double>& v, const char* what) {
                return std::array<Ratio, 3>{snap_to_tenths(v[0], what),
                                            snap_to_tenths(v[1], what),
                                            snap_to_tenths(v[2], what)};
            };
            if (!gen_durations.empty()) cfg.durations = triple(gen_durations, "durations");
            if (!gen_costs.empty()) cfg.costs = triple(gen_costs, "costs");
            else cfg.costs[1] = snap_to_tenths(gen_alpha, "alpha");
            if (!gen_risks.empty()) cfg.risks = triple(gen_risks, "risks");
            cfg.validate();
            emit(gen_out, instance_to_json(cfg).dump(2) + "\n");
        } else if (front->parsed()) {
            if (use_analytic && use_oracle)
                throw ConfigError("choose one of --analytic / --oracle");
            MultiZenoConfig cfg = load_instance(front_instance);
            ParetoFront f = use_oracle ? exact_front_oracle(cfg) : exact_front_analytic(cfg);
            emit(front_out, front_to_csv(f));
        } else if (run_cmd->parsed()) {
            ExperimentConfig cfg = build_config(run_flags);
            std::uint64_t seed = cfg.base_seed;
            RunResult r = run_single(cfg, seed);
            GroundTask task = ground_multizeno(cfg.instance);
            std::filesystem::path dir =
                cfg.out_dir.empty() ? ("run_" + std::to_string(seed)) : cfg.out_dir;
            write_run_outputs(dir, task, r);
            std::cout << "seed " << seed << ": " << r.evaluations << " evaluations, "
                      << r.front.size() << " front points, hypervolume deficit "
                      << metric_str(r.final_hypervolume) << "\n";
        } else if (exp_cmd->parsed()) {
            ExperimentConfig cfg = build_config(exp_flags);
            auto summaries = run_experiment(cfg);
            int ok = 0;
            for (const auto& s : summaries)
                if (s.status == "ok") ++ok;
            std::cout << ok << "/" << summaries.size() << " runs completed; outputs in "
                      << cfg.out_dir << "\n";
            if (ok != (int)summaries.size()) return 3;
        } else if (agg->parsed()) {
            std::filesystem::path out =
                agg_out.empty() ? std::filesystem::path(agg_dir) / "aggregate"
                                : std::filesystem::path(agg_out);
            aggregate(agg_dir, out);
            std::cout << "aggregates written to " << out.string() << "\n";
        } else if (stats->parsed()) {
            std::vector<CampaignSample> samples;
            for (const std::string& d : stats_dirs)
                samples.push_back(read_campaign_sample(d));
            emit(stats_out, wilcoxon_table(samples));
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
