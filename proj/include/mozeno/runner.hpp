// Experiment orchestration: the seeded generational loop, multi-run
// campaigns over a bounded worker pool, and aggregation of run outputs.
//
// With an evaluation-count stop every output file is a pure function of
// (config, seed); seconds columns are reported as 0 in that mode so reruns
// are byte-identical.  Wall-clock stopping records real elapsed times.
#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <thread>

#include "config.hpp"
#include "evaluate.hpp"
#include "hypervolume.hpp"
#include "io.hpp"
#include "moea.hpp"
#include "oracle.hpp"
#include "stats.hpp"

namespace mozeno {

/// Exact reference front for an instance: closed form where available,
/// exhaustive oracle otherwise (k <= 2).
inline ParetoFront reference_front(const MultiZenoConfig& cfg) {
    try {
        return exact_front_analytic(cfg);
    } catch (const ConfigError&) {
        return exact_front_oracle(cfg);
    }
}

struct Snapshot {
    long long evals = 0;
    double seconds = 0;
    double hypervolume = 0;
};

struct FrontEntry {
    ObjectivePoint point;
    ScheduledPlan plan;
};

struct RunResult {
    std::uint64_t seed = 0;
    std::vector<std::pair<ObjectivePoint, bool>> population; // evaluated finals
    std::vector<FrontEntry> front; // all-time feasible non-dominated, by makespan
    std::vector<Snapshot> trace;
    std::vector<AttainmentRecord> attainment;
    long long evaluations = 0;
    double seconds = 0;
    double final_hypervolume = 0;
};

namespace detail {

/// All-time non-dominated feasible points with a witness plan each.
class ResultArchive {
public:
    bool insert(const ObjectivePoint& p, const ScheduledPlan& plan) {
        for (const FrontEntry& e : entries_)
            if (weakly_dominates(e.point, p)) return false;
        std::erase_if(entries_, [&](const FrontEntry& e) {
            return weakly_dominates(p, e.point);
        });
        auto pos = std::find_if(entries_.begin(), entries_.end(), [&](const FrontEntry& e) {
            return p.makespan < e.point.makespan;
        });
        entries_.insert(pos, {p, plan});
        return true;
    }
    std::vector<ObjectivePoint> points() const {
        std::vector<ObjectivePoint> pts;
        for (const FrontEntry& e : entries_) pts.push_back(e.point);
        return pts;
    }
    const std::vector<FrontEntry>& entries() const { return entries_; }

private:
    std::vector<FrontEntry> entries_;
};

struct Generation {
    std::vector<Individual> members;

    std::vector<ScoredPoint> scored(int offset = 0) const {
        std::vector<ScoredPoint> pts;
        for (std::size_t i = 0; i < members.size(); ++i) {
            const EvalResult& ev = *members[i].evaluation;
            pts.push_back({ev.objectives, ev.feasible, offset + (int)i});
        }
        return pts;
    }
};

} // namespace detail

inline RunResult run_single(const ExperimentConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const GroundTask task = ground_multizeno(cfg.instance);
    const ParetoFront reference = reference_front(cfg.instance);
    const auto est = earliest_start_times(task);
    const AtomRestriction restriction(task, est);
    Evaluator evaluator(task, cfg.strategy, cfg.dae);
    Rng rng(seed);

    const int mu = cfg.moea.population_size;
    const bool timed = cfg.stop.max_seconds.has_value();
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    RunResult result;
    result.seed = seed;
    detail::ResultArchive archive;
    AttainmentTracker tracker(reference);
    long long evals = 0;
    bool stopped = false;

    auto snapshot = [&] {
        result.trace.push_back(
            {evals, timed ? elapsed() : 0.0, unary_hypervolume(archive.points(), reference)});
    };
    auto evaluate_individual = [&](Individual& ind) {
        if (stopped) return;
        if (!ind.evaluation) {
            Rng sub(split_seed(seed, (std::uint64_t)evals));
            ind.evaluation = evaluator.evaluate(ind, sub);
            ++evals;
            const EvalResult& ev = *ind.evaluation;
            if (ev.feasible) {
                archive.insert(ev.objectives, *ev.plan);
                tracker.update(ev.objectives, evals, timed ? elapsed() : 0.0);
            }
            if (evals % mu == 0) snapshot();
            if (cfg.stop.max_evaluations && evals >= *cfg.stop.max_evaluations) stopped = true;
        }
        if (timed && elapsed() >= *cfg.stop.max_seconds) stopped = true;
    };

    detail::Generation pop;
    for (int i = 0; i < mu; ++i) pop.members.push_back(init_individual(task, restriction, rng));
    for (Individual& ind : pop.members) {
        evaluate_individual(ind);
        if (stopped) break;
    }

    // Scheme state carried between generations.
    detail::Generation spea_archive;
    std::vector<double> ibea_fitness_values;
    if (!stopped && (cfg.moea.scheme == Scheme::IbeaEps || cfg.moea.scheme == Scheme::IbeaHyp))
        ibea_fitness_values = detail::ibea_fitness(pop.scored(), cfg.moea).fitness;

    auto breed = [&](const std::function<int(Rng&)>& pick_parent,
                     const std::vector<Individual>& parents) {
        detail::Generation offspring;
        for (int i = 0; i < mu; ++i) {
            int pa = pick_parent(rng);
            int pb = pick_parent(rng);
            Individual child;
            if (draw_bernoulli(rng, cfg.dae.crossover_probability))
                child = crossover(parents[pa], parents[pb], rng);
            else
                child = parents[pa]; // verbatim copy keeps its cached evaluation
            if (draw_bernoulli(rng, cfg.dae.mutation_probability))
                child = mutate(child, cfg.dae.mutation_weights, task, restriction, rng);
            offspring.members.push_back(std::move(child));
        }
        return offspring;
    };

    while (!stopped) {
        detail::Generation offspring;
        switch (cfg.moea.scheme) {
        case Scheme::Nsga2: {
            std::vector<ScoredPoint> scored = pop.scored();
            std::vector<int> rank = nondominated_sort(scored);
            std::vector<double> crowd(scored.size(), 0.0);
            int max_rank = *std::max_element(rank.begin(), rank.end());
            for (int r = 0; r <= max_rank; ++r) {
                std::vector<int> members;
                for (std::size_t i = 0; i < scored.size(); ++i)
                    if (rank[i] == r) members.push_back((int)i);
                std::vector<ScoredPoint> front;
                for (int i : members) front.push_back(scored[i]);
                std::vector<double> cd = crowding_distance(front);
                for (std::size_t i = 0; i < members.size(); ++i) crowd[members[i]] = cd[i];
            }
            auto pick = [&](Rng& r) {
                int x = (int)draw_below(r, pop.members.size());
                int y = (int)draw_below(r, pop.members.size());
                if (rank[x] != rank[y]) return rank[x] < rank[y] ? x : y;
                if (crowd[x] != crowd[y]) return crowd[x] > crowd[y] ? x : y;
                return x;
            };
            offspring = breed(pick, pop.members);
            for (Individual& ind : offspring.members) {
                evaluate_individual(ind);
                if (stopped) break;
            }
            if (stopped) break;
            detail::Generation pool;
            pool.members = pop.members;
            for (Individual& ind : offspring.members) pool.members.push_back(std::move(ind));
            std::vector<ScoredPoint> survivors = nsga2_survivors(pool.scored(), mu);
            detail::Generation next;
            for (const ScoredPoint& s : survivors) next.members.push_back(pool.members[s.owner]);
            pop = std::move(next);
            break;
        }
        case Scheme::Spea2: {
            detail::Generation pool;
            pool.members = pop.members;
            for (const Individual& ind : spea_archive.members) pool.members.push_back(ind);
            std::vector<ScoredPoint> scored = pool.scored();
            std::vector<double> fitness = spea2_fitness(scored);
            std::vector<ScoredPoint> kept = spea2_truncate(scored, fitness, cfg.moea.archive());
            detail::Generation next_archive;
            std::vector<double> archive_fitness;
            for (const ScoredPoint& s : kept) {
                next_archive.members.push_back(pool.members[s.owner]);
                archive_fitness.push_back(fitness[s.owner]);
            }
            spea_archive = std::move(next_archive);
            auto pick = [&](Rng& r) {
                return binary_tournament((int)spea_archive.members.size(), archive_fitness,
                                         false, r);
            };
            offspring = breed(pick, spea_archive.members);
            for (Individual& ind : offspring.members) {
                evaluate_individual(ind);
                if (stopped) break;
            }
            if (stopped) break;
            pop = std::move(offspring);
            break;
        }
        case Scheme::IbeaEps:
        case Scheme::IbeaHyp: {
            auto pick = [&](Rng& r) {
                return binary_tournament((int)pop.members.size(), ibea_fitness_values, true, r);
            };
            offspring = breed(pick, pop.members);
            for (Individual& ind : offspring.members) {
                evaluate_individual(ind);
                if (stopped) break;
            }
            if (stopped) break;
            detail::Generation pool;
            pool.members = pop.members;
            for (Individual& ind : offspring.members) pool.members.push_back(std::move(ind));
            detail::IbeaState st = detail::ibea_fitness(pool.scored(), cfg.moea);
            std::vector<int> kept = detail::ibea_environmental_selection(
                st, (int)pool.members.size(), mu, cfg.moea.kappa);
            detail::Generation next;
            ibea_fitness_values.clear();
            for (int i : kept) {
                next.members.push_back(std::move(pool.members[i]));
                ibea_fitness_values.push_back(st.fitness[i]);
            }
            pop = std::move(next);
            break;
        }
        }
    }

    if (result.trace.empty() || result.trace.back().evals != evals) snapshot();
    for (const Individual& ind : pop.members)
        if (ind.evaluation)
            result.population.emplace_back(ind.evaluation->objectives,
                                           ind.evaluation->feasible);
    result.front = archive.entries();
    result.attainment = tracker.records();
    result.evaluations = evals;
    result.seconds = timed ? elapsed() : 0.0;
    result.final_hypervolume = result.trace.back().hypervolume;
    return result;
}

// ---------------------------------------------------------------------------
// Run outputs.

inline void write_run_outputs(const std::filesystem::path& dir, const GroundTask& task,
                              const RunResult& r) {
    std::filesystem::create_directories(dir);
    {
        std::string csv = "makespan,secondary\n";
        for (const FrontEntry& e : r.front)
            csv += e.point.makespan.str() + "," + e.point.secondary.str() + "\n";
        write_text_file(dir / "front.csv", csv);
    }
    {
        std::string csv = "clock_evals,clock_seconds,hypervolume\n";
        for (const Snapshot& s : r.trace)
            csv += std::to_string(s.evals) + "," + seconds_str(s.seconds) + "," +
                   metric_str(s.hypervolume) + "\n";
        write_text_file(dir / "trace.csv", csv);
    }
    {
        std::string csv = "point_makespan,point_secondary,attained_evals,attained_seconds\n";
        for (const AttainmentRecord& a : r.attainment)
            csv += a.point.makespan.str() + "," + a.point.secondary.str() + "," +
                   std::to_string(a.attained_evals) + "," +
                   (a.attained_evals < 0 ? std::string("-1") : seconds_str(a.attained_seconds)) +
                   "\n";
        write_text_file(dir / "attainment.csv", csv);
    }
    {
        std::string csv = "makespan,secondary,feasible\n";
        for (const auto& [p, feasible] : r.population)
            csv += p.makespan.str() + "," + p.secondary.str() + "," +
                   (feasible ? "1" : "0") + "\n";
        write_text_file(dir / "population.csv", csv);
    }
    if (!r.front.empty())
        write_text_file(dir / "best_plan.csv", plan_to_csv(task, r.front.front().plan));
}

inline int worker_count() {
    if (const char* env = std::getenv("MOZENO_WORKERS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : (int)hw;
}

struct RunSummary {
    std::uint64_t seed = 0;
    long long evaluations = 0;
    double seconds = 0;
    double final_hypervolume = 0;
    int front_points = 0;
    std::string status = "ok";
};

/// Execute `runs` seeded runs concurrently (bounded by MOZENO_WORKERS),
/// write per-run outputs and the campaign summary.  A failing run is
/// recorded and the campaign continues.
inline std::vector<RunSummary> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const GroundTask task = ground_multizeno(cfg.instance);
    const ParetoFront reference = reference_front(cfg.instance);
    std::filesystem::path out(cfg.out_dir);
    std::filesystem::create_directories(out);
    write_text_file(out / "config.json", experiment_to_json(cfg).dump(2) + "\n");
    write_text_file(out / "reference_front.csv", front_to_csv(reference));

    std::vector<RunSummary> summaries(cfg.runs);
    std::atomic<int> next{0};
    auto work = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= cfg.runs) return;
            std::uint64_t seed = cfg.base_seed + (std::uint64_t)i;
            RunSummary& s = summaries[i];
            s.seed = seed;
            try {
                RunResult r = run_single(cfg, seed);
                write_run_outputs(out / ("run_" + std::to_string(seed)), task, r);
                s.evaluations = r.evaluations;
                s.seconds = r.seconds;
                s.final_hypervolume = r.final_hypervolume;
                s.front_points = (int)r.front.size();
            } catch (const std::exception& e) {
                s.status = std::string("error: ") + e.what();
            }
        }
    };
    int workers = std::min(worker_count(), cfg.runs);
    std::vector<std::thread> threads;
    for (int i = 1; i < workers; ++i) threads.emplace_back(work);
    work();
    for (auto& t : threads) t.join();

    std::string csv = "seed,evaluations,seconds,final_hypervolume,front_points,status\n";
    for (const RunSummary& s : summaries)
        csv += std::to_string(s.seed) + "," + std::to_string(s.evaluations) + "," +
               seconds_str(s.seconds) + "," + metric_str(s.final_hypervolume) + "," +
               std::to_string(s.front_points) + "," + s.status + "\n";
    write_text_file(out / "summary.csv", csv);
    return summaries;
}

// ---------------------------------------------------------------------------
// Aggregation across the runs of one campaign.

namespace detail {

struct TraceRow {
    long long evals;
    double seconds;
    double hv;
};

inline std::vector<TraceRow> read_trace(const std::filesystem::path& file) {
    std::istringstream in(read_text_file(file));
    std::string line;
    std::getline(in, line); // header
    std::vector<TraceRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        TraceRow r{};
        std::size_t c1 = line.find(','), c2 = line.find(',', c1 + 1);
        r.evals = std::stoll(line.substr(0, c1));
        r.seconds = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        r.hv = std::stod(line.substr(c2 + 1));
        rows.push_back(r);
    }
    return rows;
}

} // namespace detail

/// Summary files: per-snapshot mean/median hypervolume across runs, and per
/// front point the fraction of runs that attained it by each snapshot.
inline void aggregate(const std::filesystem::path& campaign_dir,
                      const std::filesystem::path& out_dir) {
    ParetoFront reference =
        front_from_csv(read_text_file(campaign_dir / "reference_front.csv"));
    std::vector<std::vector<detail::TraceRow>> traces;
    std::vector<std::vector<long long>> attain_evals; // per run, per front point
    std::vector<std::filesystem::path> run_dirs;
    for (const auto& entry : std::filesystem::directory_iterator(campaign_dir))
        if (entry.is_directory() && entry.path().filename().string().rfind("run_", 0) == 0)
            run_dirs.push_back(entry.path());
    std::sort(run_dirs.begin(), run_dirs.end());
    for (const auto& dir : run_dirs) {
        traces.push_back(detail::read_trace(dir / "trace.csv"));
        std::istringstream in(read_text_file(dir / "attainment.csv"));
        std::string line;
        std::getline(in, line);
        std::vector<long long> ae;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::size_t c1 = line.find(','), c2 = line.find(',', c1 + 1),
                        c3 = line.find(',', c2 + 1);
            ae.push_back(std::stoll(line.substr(c2 + 1, c3 - c2 - 1)));
        }
        attain_evals.push_back(ae);
    }
    if (traces.empty()) throw ConfigError("aggregate: no run directories in " +
                                          campaign_dir.string());

    std::vector<long long> grid;
    for (const auto& t : traces)
        for (const auto& row : t) grid.push_back(row.evals);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::filesystem::create_directories(out_dir);
    {
        std::string csv = "clock_evals,runs_reporting,mean_hypervolume,median_hypervolume\n";
        for (long long e : grid) {
            std::vector<double> vals;
            for (const auto& t : traces) {
                double latest = -1;
                for (const auto& row : t) {
                    if (row.evals > e) break;
                    latest = row.hv;
                }
                if (latest >= 0) vals.push_back(latest);
            }
            if (vals.empty()) continue;
            std::sort(vals.begin(), vals.end());
            double mean = 0;
            for (double v : vals) mean += v;
            mean /= (double)vals.size();
            double median = vals.size() % 2 ? vals[vals.size() / 2]
                                            : (vals[vals.size() / 2 - 1] + vals[vals.size() / 2]) / 2;
            csv += std::to_string(e) + "," + std::to_string(vals.size()) + "," +
                   metric_str(mean) + "," + metric_str(median) + "\n";
        }
        write_text_file(out_dir / "aggregate_hypervolume.csv", csv);
    }
    {
        std::string csv = "point_makespan,point_secondary,clock_evals,attained_fraction\n";
        for (std::size_t p = 0; p < reference.points.size(); ++p) {
            for (long long e : grid) {
                int attained = 0;
                for (const auto& ae : attain_evals)
                    if (p < ae.size() && ae[p] >= 0 && ae[p] <= e) ++attained;
                csv += reference.points[p].makespan.str() + "," +
                       reference.points[p].secondary.str() + "," + std::to_string(e) + "," +
                       metric_str((double)attained / (double)attain_evals.size()) + "\n";
            }
        }
        write_text_file(out_dir / "aggregate_attainment.csv", csv);
    }
}

// ---------------------------------------------------------------------------
// Pairwise Wilcoxon table over campaign summaries, one row/column per
// campaign, cells > / < / = for significantly-lower-deficit, significantly
// higher, and no significant difference.

struct CampaignSample {
    std::string name;
    std::map<std::uint64_t, double> final_hv_by_seed;
};

inline CampaignSample read_campaign_sample(const std::filesystem::path& dir) {
    CampaignSample s;
    s.name = dir.filename().string();
    std::istringstream in(read_text_file(dir / "summary.csv"));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (cells.size() < 5) {
            std::size_t c = line.find(',', pos);
            cells.push_back(line.substr(pos, c - pos));
            pos = c + 1;
        }
        if (line.substr(pos) != "ok") continue;
        s.final_hv_by_seed[std::stoull(cells[0])] = std::stod(cells[3]);
    }
    return s;
}

inline std::string wilcoxon_table(const std::vector<CampaignSample>& campaigns) {
    std::string out = "campaign";
    for (const auto& c : campaigns) out += "," + c.name;
    out += "\n";
    for (std::size_t i = 0; i < campaigns.size(); ++i) {
        out += campaigns[i].name;
        for (std::size_t j = 0; j < campaigns.size(); ++j) {
            if (i == j) { out += ",--"; continue; }
            std::vector<double> a, b;
            for (const auto& [seed, hv] : campaigns[i].final_hv_by_seed) {
                auto it = campaigns[j].final_hv_by_seed.find(seed);
                if (it == campaigns[j].final_hv_by_seed.end()) continue;
                a.push_back(hv);
                b.push_back(it->second);
            }
            WilcoxonResult w = wilcoxon_signed_rank(a, b);
            const char* cell = "=";
            if (w.significant)
                cell = w.direction == WilcoxonDirection::FirstLower ? ">" : "<";
            out += std::string(",") + cell;
        }
        out += "\n";
    }
    return out;
}

} // namespace mozeno
