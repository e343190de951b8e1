#include "cli.hpp"

#include <psrank/errors.hpp>
#include <psrank/experiments.hpp>
#include <psrank/graph.hpp>
#include <psrank/particle_swarm.hpp>
#include <psrank/reference_ranks.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <thread>
#include <vector>

namespace psrank::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sends `write` to the file at `path`, or to `out` when no path was given.
void emit(const std::string &path, std::ostream &out, const std::function<void(std::ostream &)> &write) {
    if (path.empty()) {
        write(out);
        return;
    }
    std::ofstream file(path);
    if (!file) {
        throw std::runtime_error("cannot open output file " + path);
    }
    write(file);
    if (!file) {
        throw std::runtime_error("write failed for " + path);
    }
}

const CLI::Validator kUnitInterval = CLI::Range(0.0, 1.0);

const CLI::Validator kOpenUnitInterval(
    [](const std::string &text) -> std::string {
        double v = 0.0;
        try {
            v = std::stod(text);
        } catch (const std::exception &) {
            return "not a number: " + text;
        }
        return v > 0.0 && v <= 1.0 ? std::string{} : "value must lie in (0, 1]";
    },
    "(0,1]");

struct GenerateArgs {
    std::size_t nodes = 0;
    double gamma = 2.5;
    std::uint64_t seed = 1;
    std::string out;
};

struct RankArgs {
    std::string method;
    std::string graph;
    double lambda = 0.15;
    double beta = 0.15;
    std::string roots;
    double tol = 1e-8;
    std::size_t max_iters = 200;
    std::string out;
};

struct SwarmArgs {
    std::string graph;
    double delta = 0.15;
    double beta = 0.0;
    std::string seeding = "uniform";
    std::size_t alpha = 1;
    double phi = 1.0;
    std::string roots;
    std::size_t per_root = 10;
    std::size_t iters = 0;
    double theta = 1e-8;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    std::string out;
    std::string stats;
};

struct ExperimentArgs {
    std::string id;
    std::size_t trials = 10;
    std::uint64_t seed = 1;
    std::size_t nodes = 1000;
    double gamma = 2.5;
    std::vector<double> gammas{2.0, 2.5, 3.0};
    bool parallel = false;
    std::string out;
};

int cmd_generate(const GenerateArgs &a, std::ostream &out, std::ostream &err) {
    const DirectedGraph g = generate_scale_free(a.nodes, a.gamma, a.seed);
    emit(a.out, out, [&](std::ostream &o) { write_graph(o, g); });
    const auto in = g.in_degrees();
    const std::size_t max_in = in.empty() ? 0 : *std::max_element(in.begin(), in.end());
    err << "nodes=" << g.node_count() << " edges=" << g.edge_count() << " max_in_degree=" << max_in
        << " gamma=" << a.gamma << " seed=" << a.seed << '\n';
    return kExitOk;
}

int cmd_rank(const RankArgs &a, std::ostream &out, std::ostream &err) {
    const DirectedGraph g = normalize_out_weights(load_graph(a.graph));
    RankVector ranks;
    if (a.method == "indegree") {
        ranks = indegree(g);
        err << "method=indegree nodes=" << g.node_count() << '\n';
    } else {
        RankResult r;
        if (a.method == "pagerank") {
            r = pagerank(g, {a.lambda, a.tol, a.max_iters});
            err << "method=pagerank lambda=" << a.lambda;
        } else {
            if (a.roots.empty()) {
                throw UsageError("priors requires --roots");
            }
            r = pagerank_priors(g, {a.beta, load_roots(a.roots, g.node_count()), a.tol,
                                    a.max_iters});
            err << "method=priors beta=" << a.beta;
        }
        err << " tol=" << a.tol << " iterations=" << r.report.iterations_used
            << " final_delta=" << r.report.final_delta << '\n';
        ranks = std::move(r.ranks);
    }
    emit(a.out, out, [&](std::ostream &o) { write_rank_csv(o, ranks); });
    return kExitOk;
}

int cmd_swarm(const SwarmArgs &a, std::ostream &out, std::ostream &err) {
    const DirectedGraph g = normalize_out_weights(load_graph(a.graph));
    SwarmConfig config;
    config.delta = a.delta;
    config.beta = a.beta;
    config.death_threshold = a.theta;
    config.rng_seed = a.seed;
    config.workers = a.workers;
    if (a.seeding == "uniform") {
        config.seeding = UniformPerNode{a.alpha};
    } else if (a.seeding == "random") {
        config.seeding = RandomProportion{a.phi, a.alpha};
    } else if (a.seeding == "outdegree") {
        config.seeding = ProportionalOutDegree{a.alpha};
    } else {
        if (a.roots.empty()) {
            throw UsageError("--seeding roots requires --roots");
        }
        config.seeding = RootSeeding{load_roots(a.roots, g.node_count()), a.per_root};
    }
    config.iterations = a.iters;
    if (config.iterations == 0) {
        // t_PS = t_PR: as many steps as PageRank needs at lambda = delta.
        config.iterations = pagerank(g, {a.delta, 1e-8, 200}).report.iterations_used;
    }

    const SwarmResult result = swarm_rank(g, config);
    emit(a.out, out, [&](std::ostream &o) { write_rank_csv(o, result.ranks); });
    err << "seeding=" << a.seeding << " delta=" << a.delta << " beta=" << a.beta
        << " iters=" << config.iterations << " theta=" << a.theta << " seed=" << a.seed << '\n';
    write_stats_csv(err, result.stats);
    if (!a.stats.empty()) {
        emit(a.stats, out, [&](std::ostream &o) { write_stats_csv(o, result.stats); });
    }
    return kExitOk;
}

int cmd_experiment(const ExperimentArgs &a, std::ostream &out, std::ostream &err) {
    const auto id = parse_experiment_id(a.id);
    if (!id) {
        throw UsageError("unknown experiment id '" + a.id +
                         "' (expected FIG1A, FIG1B, FIG2A, FIG2B, FIG3A, FIG3B, FIG4, SPEEDUP or TREND)");
    }
    const GraphSpec graph{a.nodes, a.gamma};
    if (*id == ExperimentId::Speedup) {
        const SpeedupReport report = benchmark_speedup(graph, a.trials, a.seed);
        emit(a.out, out, [&](std::ostream &o) { write_speedup_csv(o, report); });
        err << "experiment=SPEEDUP trials=" << a.trials << " seed=" << a.seed
            << " nominal_phi=" << report.nominal_theoretical
            << " measured_inputs_phi=" << report.theoretical << " mean_ratio=" << report.mean_ratio
            << '\n';
        return kExitOk;
    }
    if (*id == ExperimentId::Trend) {
        const auto rows = iteration_trend_check(a.gammas, a.trials, a.seed, a.nodes);
        emit(a.out, out, [&](std::ostream &o) { write_trend_csv(o, rows); });
        err << "experiment=TREND trials=" << a.trials << " seed=" << a.seed << '\n';
        return kExitOk;
    }

    SweepSpec spec = SweepSpec::defaults(*id);
    spec.graph = graph;
    spec.trials = a.trials;
    spec.rng_seed = a.seed;
    if (a.parallel) {
        spec.workers = std::max(1u, std::thread::hardware_concurrency());
    }
    const ExperimentResult result = run_sweep(spec);
    emit(a.out, out, [&](std::ostream &o) { write_sweep_csv(o, result); });
    const auto errors = std::count_if(result.rows.begin(), result.rows.end(),
                                      [](const SweepRow &r) { return !r.error.empty(); });
    err << "experiment=" << a.id << " trials=" << a.trials << " seed=" << a.seed
        << " rows=" << result.rows.size() << " error_rows=" << errors << '\n';
    return kExitOk;
}

} // namespace

int run(std::span<const std::string> args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Particle-swarm approximation of PageRank and PageRank-Priors"};
    app.require_subcommand(1);
    std::string format = "csv";
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv"}));
    app.fallthrough();

    GenerateArgs gen;
    auto *generate = app.add_subcommand("generate", "generate a scale-free graph as a TSV edge list");
    generate->add_option("--nodes", gen.nodes, "number of nodes")->required()->check(CLI::Range(2, 1 << 30));
    generate->add_option("--gamma", gen.gamma, "power-law exponent of the in-capacities")
        ->capture_default_str()->check(CLI::Range(1.0001, 100.0));
    generate->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
    generate->add_option("--out", gen.out, "output path (default: stdout)");

    RankArgs rank;
    auto *rank_cmd = app.add_subcommand("rank", "compute a reference ranking");
    rank_cmd->add_option("method", rank.method, "pagerank | priors | indegree")
        ->required()->check(CLI::IsMember({"pagerank", "priors", "indegree"}));
    rank_cmd->add_option("--graph", rank.graph, "TSV edge list")->required()->check(CLI::ExistingFile);
    rank_cmd->add_option("--lambda", rank.lambda, "teleport mass; 0.15 is the usual 0.85-damping complement")
        ->capture_default_str()->check(kUnitInterval);
    rank_cmd->add_option("--beta", rank.beta, "back-probability to the root set")
        ->capture_default_str()->check(kUnitInterval);
    rank_cmd->add_option("--roots", rank.roots, "roots file, one node id per line")->check(CLI::ExistingFile);
    rank_cmd->add_option("--tol", rank.tol, "L1 convergence tolerance")->capture_default_str()
        ->check(CLI::PositiveNumber);
    rank_cmd->add_option("--max-iters", rank.max_iters, "iteration cap")->capture_default_str()
        ->check(CLI::PositiveNumber);
    rank_cmd->add_option("--out", rank.out, "output path (default: stdout)");

    SwarmArgs sw;
    auto *swarm_cmd = app.add_subcommand("swarm", "run the particle swarm");
    swarm_cmd->add_option("--graph", sw.graph, "TSV edge list")->required()->check(CLI::ExistingFile);
    swarm_cmd->add_option("--delta", sw.delta, "energy decay per step; matches PageRank lambda")
        ->capture_default_str()->check(kUnitInterval);
    swarm_cmd->add_option("--beta", sw.beta, "probability of jumping home each step")
        ->capture_default_str()->check(kUnitInterval);
    swarm_cmd->add_option("--seeding", sw.seeding, "uniform | roots | random | outdegree")
        ->capture_default_str()->check(CLI::IsMember({"uniform", "roots", "random", "outdegree"}));
    swarm_cmd->add_option("--alpha", sw.alpha, "particles per seeded node (per out-edge for outdegree)")
        ->capture_default_str()->check(CLI::PositiveNumber);
    swarm_cmd->add_option("--phi", sw.phi, "fraction of nodes seeded by --seeding random")
        ->capture_default_str()->check(kOpenUnitInterval);
    swarm_cmd->add_option("--roots", sw.roots, "roots file, one node id per line")->check(CLI::ExistingFile);
    swarm_cmd->add_option("--per-root", sw.per_root, "particles per root")->capture_default_str()
        ->check(CLI::PositiveNumber);
    swarm_cmd->add_option("--iters", sw.iters,
                          "propagation steps (default: PageRank iterations at lambda = delta)")
        ->check(CLI::PositiveNumber);
    swarm_cmd->add_option("--theta", sw.theta, "death threshold")->capture_default_str()
        ->check(CLI::Range(1e-300, 0.999999));
    swarm_cmd->add_option("--seed", sw.seed, "RNG seed")->capture_default_str();
    swarm_cmd->add_option("--workers", sw.workers, "threads; >1 is not bitwise reproducible")
        ->capture_default_str()->check(CLI::PositiveNumber);
    swarm_cmd->add_option("--out", sw.out, "rank CSV path (default: stdout)");
    swarm_cmd->add_option("--stats", sw.stats, "also write the stats row to this path");

    ExperimentArgs ex;
    auto *exp_cmd = app.add_subcommand("experiment", "run a correlation sweep or benchmark");
    exp_cmd->add_option("id", ex.id, "FIG1A FIG1B FIG2A FIG2B FIG3A FIG3B FIG4 SPEEDUP TREND")->required();
    exp_cmd->add_option("--trials", ex.trials, "trials (graphs) per grid point")->capture_default_str()
        ->check(CLI::PositiveNumber);
    exp_cmd->add_option("--seed", ex.seed, "RNG seed")->capture_default_str();
    exp_cmd->add_option("--nodes", ex.nodes, "graph size")->capture_default_str()->check(CLI::Range(2, 1 << 30));
    exp_cmd->add_option("--gamma", ex.gamma, "graph power-law exponent")->capture_default_str()
        ->check(CLI::Range(1.0001, 100.0));
    exp_cmd->add_option("--gammas", ex.gammas, "gammas for TREND")->capture_default_str()
        ->check(CLI::Range(2.0, 3.0));
    exp_cmd->add_flag("--parallel", ex.parallel, "run trials concurrently");
    exp_cmd->add_option("--out", ex.out, "CSV path (default: stdout)");

    std::vector<const char *> argv{"psrank"};
    for (const std::string &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (generate->parsed()) {
            return cmd_generate(gen, out, err);
        }
        if (rank_cmd->parsed()) {
            return cmd_rank(rank, out, err);
        }
        if (swarm_cmd->parsed()) {
            return cmd_swarm(sw, out, err);
        }
        return cmd_experiment(ex, out, err);
    } catch (const UsageError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParameterError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

} // namespace psrank::cli
