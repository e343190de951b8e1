// Acceptance suite: one line per criterion, "[PASS]" or "[FAIL]", with the
// measured value next to its threshold. `--criterion N` runs a single one.

#include <psrank/errors.hpp>
#include <psrank/experiments.hpp>
#include <psrank/graph.hpp>
#include <psrank/particle_swarm.hpp>
#include <psrank/reference_ranks.hpp>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace psrank;

namespace {

// Fixed before any criterion was run; every criterion draws its graphs from it.
constexpr std::uint64_t kSeed = 271828;
constexpr std::size_t kTrials = 20;

struct Verdict {
    bool pass = true;
    std::string detail;
};

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

DirectedGraph trial_graph(std::size_t trial) {
    return normalize_out_weights(generate_scale_free(1000, 2.5, trial_graph_seed(kSeed, trial)));
}

SweepSpec sweep(ExperimentId id) {
    SweepSpec spec = SweepSpec::defaults(id);
    spec.trials = kTrials;
    spec.rng_seed = kSeed;
    return spec;
}

// Mean of the sweep's Pearson column at the single point that `match` selects.
PointSummary point(const ExperimentResult &result, const std::function<bool(const SweepRow &)> &match) {
    for (const SweepRow &r : result.rows) {
        if (!r.error.empty()) {
            throw std::runtime_error("sweep row failed: " + r.error);
        }
    }
    for (const PointSummary &p : summarize(result)) {
        if (match(p.parameters)) {
            return p;
        }
    }
    throw std::runtime_error("grid point missing from sweep");
}

std::string mean_se(const PointSummary &p) {
    return fmt(p.mean) + " (se " + fmt(p.standard_error) + ", n=" + std::to_string(p.count) + ")";
}

Verdict indegree_limit_pagerank() {
    SweepSpec spec = sweep(ExperimentId::Fig1A);
    spec.lambdas = {0.995};
    const PointSummary p = point(run_sweep(spec), [](const SweepRow &) { return true; });
    return {p.mean >= 0.99, "mean Pearson " + mean_se(p) + ", need >= 0.99"};
}

Verdict indegree_limit_swarm() {
    // Particles run until they retire; at delta = 0.995 that takes 4 deposits.
    double total = 0.0;
    for (std::size_t t = 0; t < kTrials; ++t) {
        const DirectedGraph g = trial_graph(t);
        SwarmConfig c;
        c.delta = 0.995;
        c.beta = 0.0;
        c.iterations = 200;
        c.seeding = UniformPerNode{10};
        c.rng_seed = derive_seed(kSeed, 2, t);
        total += pearson(swarm_rank(g, c).ranks, indegree(g));
    }
    const double mean = total / kTrials;
    return {mean >= 0.98, "mean Pearson " + fmt(mean) + " over " + std::to_string(kTrials) + " graphs, need >= 0.98"};
}

Verdict fidelity_diagonal() {
    Verdict v;
    for (double lambda : {0.15, 0.5, 0.85}) {
        SweepSpec spec = sweep(ExperimentId::Fig2A);
        spec.lambdas = {lambda};
        spec.deltas = {lambda};
        for (double off : {lambda - 0.4, lambda + 0.4}) {
            if (off >= 0.005 && off <= 0.995) {
                spec.deltas.push_back(off);
            }
        }
        const ExperimentResult result = run_sweep(spec);
        const PointSummary diag = point(result, [&](const SweepRow &r) { return r.delta == lambda; });
        v.pass = v.pass && diag.mean >= 0.98;
        v.detail += "lambda=" + fmt(lambda, 2) + ": diag " + fmt(diag.mean);
        for (std::size_t i = 1; i < spec.deltas.size(); ++i) {
            const double d = spec.deltas[i];
            const PointSummary off = point(result, [&](const SweepRow &r) { return r.delta == d; });
            v.pass = v.pass && diag.mean > off.mean;
            v.detail += ", delta=" + fmt(d, 2) + " " + fmt(off.mean);
        }
        v.detail += "; ";
    }
    v.detail += "need diag >= 0.98 and above off-diagonal";
    return v;
}

Verdict priors_fidelity() {
    SweepSpec spec = sweep(ExperimentId::Fig2B);
    spec.betas = {0.1, 0.5, 0.9};
    const ExperimentResult result = run_sweep(spec);
    Verdict v;
    for (double beta : spec.betas) {
        const PointSummary p = point(result, [&](const SweepRow &r) {
            return r.beta_swarm == beta && r.beta_reference == beta;
        });
        v.pass = v.pass && p.mean >= 0.95;
        v.detail += "beta=" + fmt(beta, 1) + ": " + fmt(p.mean) + "; ";
    }
    v.detail += "need each >= 0.95";
    return v;
}

Verdict iteration_constraining() {
    SweepSpec spec = sweep(ExperimentId::Fig3A);
    spec.iterations = {4};
    const PointSummary p = point(run_sweep(spec), [](const SweepRow &) { return true; });
    return {std::abs(p.mean - 0.953) <= 0.03, "mean Pearson " + mean_se(p) + ", need 0.953 +/- 0.03"};
}

Verdict random_seeding() {
    SweepSpec spec = sweep(ExperimentId::Fig3B);
    spec.phis = {0.24};
    const PointSummary p = point(run_sweep(spec), [](const SweepRow &) { return true; });
    return {std::abs(p.mean - 0.95) <= 0.03, "mean Pearson " + mean_se(p) + ", need 0.95 +/- 0.03"};
}

Verdict combined_optimum() {
    SweepSpec spec = sweep(ExperimentId::Fig4);
    spec.phis = {0.45};
    spec.iterations = {8};
    const PointSummary p = point(run_sweep(spec), [](const SweepRow &) { return true; });
    return {p.mean >= 0.93, "mean Pearson " + mean_se(p) + ", need >= 0.93"};
}

Verdict speedup_formula() {
    const double fast = theoretical_speedup(2575, 22.7, 0.45, 1000, 1, 8);
    const double even = theoretical_speedup(2575, 20, 1.0, 1000, 1, 20);
    return {std::abs(fast - 14.43) <= 0.01 && std::abs(even - 2.45) <= 0.01,
            "Phi(optimum) " + fmt(fast) + " (14.43 +/- 0.01), Phi(20 vs 20) " + fmt(even) +
                " (2.45 +/- 0.01)"};
}

Verdict particle_lifetime() {
    const DirectedGraph cycle = normalize_out_weights(DirectedGraph(2, {{0, 1, 1.0}, {1, 0, 1.0}}));
    SwarmConfig c;
    c.delta = 0.15;
    c.death_threshold = 1e-8;
    SwarmSimulator sim(cycle, {Particle{1.0, 0.15, 0, 0.0, 0, true}}, c);
    sim.run(10000);
    const std::size_t deposits = sim.deposit_counts()[0];
    // Closed form: ceil(ln theta / ln(1 - delta)) - 1.
    const auto oracle = static_cast<std::size_t>(std::ceil(std::log(1e-8) / std::log(0.85))) - 1;
    return {deposits == 113 && oracle == 113 && sim.alive_count() == 0,
            std::to_string(deposits) + " deposits, closed form " + std::to_string(oracle) + ", need 113"};
}

Verdict convergence_iterations() {
    double total = 0.0;
    for (std::size_t t = 0; t < kTrials; ++t) {
        total += static_cast<double>(pagerank(trial_graph(t), {0.15, 1e-8, 200}).report.iterations_used);
    }
    const double mean = total / kTrials;
    return {mean >= 15.0 && mean <= 35.0,
            "mean iterations " + fmt(mean, 2) + " over " + std::to_string(kTrials) + " graphs, need [15, 35]"};
}

Verdict edge_count() {
    double total = 0.0;
    for (std::size_t t = 0; t < kTrials; ++t) {
        total += static_cast<double>(generate_scale_free(1000, 2.5, trial_graph_seed(kSeed, t)).edge_count());
    }
    const double mean = total / kTrials;
    return {mean >= 2300.0 && mean <= 2900.0,
            "mean |E| " + fmt(mean, 1) + " over " + std::to_string(kTrials) + " seeds, need [2300, 2900]"};
}

Verdict measured_benchmark() {
    const SpeedupReport report = benchmark_speedup(GraphSpec{}, kTrials, kSeed);
    double worst = 1.0;
    for (const SpeedupTrial &t : report.trials) {
        worst = std::min(worst, t.pearson);
    }
    return {report.mean_ratio > 1.0 && worst >= 0.9,
            "mean wall-clock ratio " + fmt(report.mean_ratio, 2) + " (need > 1), min per-trial Pearson " +
                fmt(worst) + " (need >= 0.9), Phi from measured |E| and t_PR " + fmt(report.theoretical, 2)};
}

// Dense fixed point of the teleporting walk, used as the independent oracle.
Eigen::VectorXd dense_solve(const DirectedGraph &g, double mass, const Eigen::VectorXd &teleport) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const Edge &e : g.edges()) {
        a(e.target, e.source) += e.weight;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        if (g.out_degree(static_cast<NodeId>(j)) == 0) {
            a.col(j) = teleport;
        }
    }
    return (Eigen::MatrixXd::Identity(n, n) - (1.0 - mass) * a).fullPivLu().solve(mass * teleport);
}

Verdict property_suites() {
    std::vector<std::string> failures;
    auto check = [&](bool ok, const std::string &name) {
        if (!ok) {
            failures.push_back(name);
        }
    };
    auto sums_to_one = [](const RankVector &r) {
        const double s = std::accumulate(r.scores().begin(), r.scores().end(), 0.0);
        return r.is_normalized() && std::abs(s - 1.0) <= kRankSumTolerance &&
               std::all_of(r.scores().begin(), r.scores().end(), [](double x) { return x >= 0.0; });
    };

    bool normalization = true;
    bool determinism = true;
    bool confinement = true;
    for (std::size_t t = 0; t < 5; ++t) {
        const DirectedGraph g = trial_graph(t);
        std::vector<NodeId> members;
        for (NodeId k = static_cast<NodeId>(t); k < 1000; k += 10) {
            members.push_back(k);
        }
        const RootSet roots(members, 1000);
        normalization = normalization && sums_to_one(pagerank(g, {0.15, 1e-8, 200}).ranks) &&
                        sums_to_one(pagerank_priors(g, {0.3, roots, 1e-8, 200}).ranks) &&
                        sums_to_one(indegree(g));

        SwarmConfig c;
        c.delta = 0.15;
        c.beta = 0.1;
        c.iterations = 20;
        c.seeding = RandomProportion{0.45, 2};
        c.rng_seed = derive_seed(kSeed, 13, t);
        const SwarmResult a = swarm_rank(g, c);
        const SwarmResult b = swarm_rank(g, c);
        normalization = normalization && sums_to_one(a.ranks);
        determinism = determinism && std::equal(a.ranks.scores().begin(), a.ranks.scores().end(),
                                                b.ranks.scores().begin(), b.ranks.scores().end());

        SwarmConfig home;
        home.delta = 0.0;
        home.beta = 1.0;
        home.iterations = 25;
        home.seeding = RootSeeding{roots, 10};
        const RankVector confined = swarm_rank(g, home).ranks;
        const RankVector prior = pagerank_priors(g, {1.0, roots, 1e-8, 200}).ranks;
        for (NodeId k = 0; k < 1000; ++k) {
            const double want = roots.contains(k) ? 1.0 / static_cast<double>(roots.size()) : 0.0;
            confinement = confinement && std::abs(confined[k] - want) <= 1e-12 &&
                          std::abs(prior[k] - want) <= 1e-12;
        }
    }
    check(normalization, "normalization");
    check(determinism, "determinism");
    check(confinement, "root confinement");

    std::mt19937_64 rng(kSeed);
    std::normal_distribution<double> noise;
    bool invariance = true;
    for (int round = 0; round < 100; ++round) {
        std::vector<double> x(100), y(100), z(100);
        const double scale = std::exp(noise(rng));
        const double shift = 10.0 * noise(rng);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = noise(rng);
            y[i] = x[i] + noise(rng);
            z[i] = scale * y[i] + shift;
        }
        invariance = invariance && std::abs(pearson(x, y) - pearson(x, z)) <= 1e-12;
    }
    check(invariance, "Pearson linear invariance");

    double worst = 0.0;
    std::bernoulli_distribution coin(0.4);
    std::uniform_real_distribution<double> weight(0.1, 3.0);
    std::uniform_real_distribution<double> mass(0.05, 0.95);
    for (int round = 0; round < 200; ++round) {
        const std::size_t n = 2 + static_cast<std::size_t>(round) % 4;
        std::vector<Edge> edges;
        for (NodeId s = 0; s < n; ++s) {
            for (NodeId d = 0; d < n; ++d) {
                if (s != d && coin(rng)) {
                    edges.push_back({s, d, weight(rng)});
                }
            }
        }
        const DirectedGraph g = normalize_out_weights(DirectedGraph(n, std::move(edges)));
        const double m = mass(rng);
        const auto root = static_cast<NodeId>(round % static_cast<int>(n));
        const RankVector pr = pagerank(g, {m, 1e-15, 10000}).ranks;
        const RankVector prp = pagerank_priors(g, {m, RootSet({root}, n), 1e-15, 10000}).ranks;
        const Eigen::VectorXd uniform =
            Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n));
        Eigen::VectorXd rho = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        rho(root) = 1.0;
        const Eigen::VectorXd x = dense_solve(g, m, uniform);
        const Eigen::VectorXd y = dense_solve(g, m, rho);
        for (std::size_t k = 0; k < n; ++k) {
            const auto i = static_cast<Eigen::Index>(k);
            worst = std::max({worst, std::abs(pr[k] - x(i)), std::abs(prp[k] - y(i))});
        }
    }
    check(worst <= 1e-9, "dense-solve oracle");

    std::string detail = "normalization, determinism, root confinement, Pearson invariance; dense-solve max error " +
                         fmt(worst * 1e12, 3) + "e-12 (need <= 1e-9)";
    for (const std::string &f : failures) {
        detail += "; FAILED " + f;
    }
    return {failures.empty(), detail};
}

struct Criterion {
    const char *name;
    Verdict (*run)();
};

const std::vector<Criterion> kCriteria{
    {"in-degree limit, PageRank", indegree_limit_pagerank},
    {"in-degree limit, swarm", indegree_limit_swarm},
    {"PageRank fidelity diagonal", fidelity_diagonal},
    {"priors fidelity", priors_fidelity},
    {"iteration constraining", iteration_constraining},
    {"random seeding", random_seeding},
    {"combined optimum", combined_optimum},
    {"speedup formula", speedup_formula},
    {"particle lifetime", particle_lifetime},
    {"convergence iterations", convergence_iterations},
    {"edge count", edge_count},
    {"measured benchmark", measured_benchmark},
    {"property suites", property_suites},
};

bool report(std::size_t number) {
    const Criterion &c = kCriteria[number - 1];
    Verdict v;
    try {
        v = c.run();
    } catch (const std::exception &e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << number << ' ' << c.name << ": " << v.detail << '\n';
    return v.pass;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"acceptance criteria"};
    std::size_t only = 0;
    app.add_option("--criterion", only, "run a single criterion")->check(CLI::Range(std::size_t{1}, kCriteria.size()));
    CLI11_PARSE(app, argc, argv);

    bool all = true;
    for (std::size_t n = 1; n <= kCriteria.size(); ++n) {
        if (only == 0 || only == n) {
            all = report(n) && all;
        }
    }
    return all ? 0 : 1;
}
