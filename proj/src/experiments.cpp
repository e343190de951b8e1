#include <psrank/experiments.hpp>

#include <psrank/errors.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <thread>

namespace psrank {

double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw ParameterError("pearson: vectors differ in length");
    }
    if (a.size() < 2) {
        throw ParameterError("pearson: need at least two entries");
    }
    const auto n = static_cast<double>(a.size());
    const double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) {
        throw CorrelationError("pearson: correlation is undefined for a constant vector");
    }
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double theoretical_speedup(double edge_count, double t_pr, double phi, double node_count,
                           double alpha, double t_ps) {
    for (double v : {edge_count, t_pr, phi, node_count, alpha, t_ps}) {
        if (!std::isfinite(v) || v < 0.0) {
            throw ParameterError("speedup inputs must be finite and non-negative");
        }
    }
    const double population = phi * node_count * alpha;
    const double denominator = population + population * t_ps;
    if (denominator == 0.0) {
        throw ParameterError("speedup denominator is zero (empty particle population)");
    }
    return edge_count * t_pr / denominator;
}

namespace {

constexpr std::array<std::pair<ExperimentId, std::string_view>, 9> kExperimentNames{{
    {ExperimentId::Fig1A, "FIG1A"},
    {ExperimentId::Fig1B, "FIG1B"},
    {ExperimentId::Fig2A, "FIG2A"},
    {ExperimentId::Fig2B, "FIG2B"},
    {ExperimentId::Fig3A, "FIG3A"},
    {ExperimentId::Fig3B, "FIG3B"},
    {ExperimentId::Fig4, "FIG4"},
    {ExperimentId::Speedup, "SPEEDUP"},
    {ExperimentId::Trend, "TREND"},
}};

std::vector<double> arithmetic(double first, double step, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = first + step * static_cast<double>(i);
    }
    return out;
}

// 0.005, 0.05, 0.10, ..., 0.95, 0.995
std::vector<double> unit_sweep() {
    std::vector<double> out{0.005};
    for (int k = 1; k <= 19; ++k) {
        out.push_back(0.05 * k);
    }
    out.push_back(0.995);
    return out;
}

std::vector<std::size_t> counting(std::size_t first, std::size_t last) {
    std::vector<std::size_t> out(last - first + 1);
    std::iota(out.begin(), out.end(), first);
    return out;
}

} // namespace

std::string_view to_string(ExperimentId id) {
    for (const auto &[key, name] : kExperimentNames) {
        if (key == id) {
            return name;
        }
    }
    return "UNKNOWN";
}

std::optional<ExperimentId> parse_experiment_id(std::string_view text) {
    for (const auto &[key, name] : kExperimentNames) {
        if (name == text) {
            return key;
        }
    }
    return std::nullopt;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                      static_cast<std::uint32_t>(a),    static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b),    static_cast<std::uint32_t>(b >> 32)};
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

SweepSpec SweepSpec::defaults(ExperimentId id) {
    SweepSpec s;
    s.id = id;
    switch (id) {
    case ExperimentId::Fig1A:
        s.lambdas = unit_sweep();
        break;
    case ExperimentId::Fig1B:
        s.deltas = unit_sweep();
        s.alphas = counting(1, 20);
        break;
    case ExperimentId::Fig2A:
        s.deltas = unit_sweep();
        s.lambdas = unit_sweep();
        s.alphas = {10};
        break;
    case ExperimentId::Fig2B:
        s.betas = arithmetic(0.1, 0.1, 10);
        break;
    case ExperimentId::Fig3A:
        s.iterations = counting(1, 25);
        s.alphas = {1};
        break;
    case ExperimentId::Fig3B:
        s.phis = arithmetic(0.02, 0.02, 50);
        s.alphas = {1};
        break;
    case ExperimentId::Fig4:
        s.phis = arithmetic(0.01, 0.01, 50);
        s.iterations = counting(1, 25);
        s.alphas = {1};
        break;
    case ExperimentId::Speedup:
    case ExperimentId::Trend:
        throw ParameterError(std::string(to_string(id)) + " is not a grid sweep");
    }
    return s;
}

namespace {

void require(bool ok, const char *what) {
    if (!ok) {
        throw ParameterError(what);
    }
}

bool all_in(std::span<const double> values, double lo, double hi) {
    return std::all_of(values.begin(), values.end(),
                       [&](double v) { return v >= lo && v <= hi; });
}

} // namespace

void validate(const SweepSpec &spec) {
    require(spec.trials >= 1, "trials must be at least 1");
    require(spec.graph.node_count >= 2, "graph needs at least 2 nodes");
    require(spec.graph.gamma > 1.0, "gamma must exceed 1");
    // At lambda = 1 PageRank is flat and has no correlation to report.
    require(all_in(spec.lambdas, 0.005, 0.995), "lambda grid must lie in [0.005, 0.995]");
    require(all_in(spec.deltas, 0.005, 0.995), "delta grid must lie in [0.005, 0.995]");
    require(all_in(spec.betas, 0.0, 1.0), "beta grid must lie in [0, 1]");
    require(std::all_of(spec.phis.begin(), spec.phis.end(),
                        [](double p) { return p > 0.0 && p <= 1.0; }),
            "phi grid must lie in (0, 1]");
    require(std::all_of(spec.alphas.begin(), spec.alphas.end(), [](auto a) { return a >= 1; }),
            "alpha grid values must be at least 1");
    require(std::all_of(spec.iterations.begin(), spec.iterations.end(),
                        [](auto t) { return t >= 1; }),
            "iteration grid values must be at least 1");
    require(spec.lambda >= 0.0 && spec.lambda <= 1.0, "lambda must lie in [0, 1]");
    require(spec.root_fraction > 0.0 && spec.root_fraction <= 1.0,
            "root fraction must lie in (0, 1]");

    switch (spec.id) {
    case ExperimentId::Fig1A:
        require(!spec.lambdas.empty(), "FIG1A needs a lambda grid");
        break;
    case ExperimentId::Fig1B:
        require(!spec.deltas.empty() && !spec.alphas.empty(), "FIG1B needs delta and alpha grids");
        break;
    case ExperimentId::Fig2A:
        require(!spec.deltas.empty() && !spec.lambdas.empty() && !spec.alphas.empty(),
                "FIG2A needs delta, lambda and alpha grids");
        break;
    case ExperimentId::Fig2B:
        require(!spec.betas.empty(), "FIG2B needs a beta grid");
        break;
    case ExperimentId::Fig3A:
        require(!spec.iterations.empty() && !spec.alphas.empty(),
                "FIG3A needs iteration and alpha grids");
        break;
    case ExperimentId::Fig3B:
        require(!spec.phis.empty() && !spec.alphas.empty(), "FIG3B needs phi and alpha grids");
        break;
    case ExperimentId::Fig4:
        require(!spec.phis.empty() && !spec.iterations.empty() && !spec.alphas.empty(),
                "FIG4 needs phi, iteration and alpha grids");
        break;
    case ExperimentId::Speedup:
    case ExperimentId::Trend:
        throw ParameterError(std::string(to_string(spec.id)) + " is not a grid sweep");
    }
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

class TrialRunner {
public:
    TrialRunner(const SweepSpec &spec, std::size_t trial)
        : spec_(spec), trial_(trial),
          graph_(normalize_out_weights(generate_scale_free(
              spec.graph.node_count, spec.graph.gamma, trial_graph_seed(spec.rng_seed, trial)))) {}

    std::vector<SweepRow> run() {
        switch (spec_.id) {
        case ExperimentId::Fig1A: fig1a(); break;
        case ExperimentId::Fig1B: fig1b(); break;
        case ExperimentId::Fig2A: fig2a(); break;
        case ExperimentId::Fig2B: fig2b(); break;
        case ExperimentId::Fig3A: fig3a(); break;
        case ExperimentId::Fig3B: fig3b(); break;
        case ExperimentId::Fig4: fig4(); break;
        default: break;
        }
        return std::move(rows_);
    }

private:
    const RankResult &reference(double lambda) {
        auto it = pagerank_cache_.find(lambda);
        if (it == pagerank_cache_.end()) {
            it = pagerank_cache_
                     .emplace(lambda, pagerank(graph_, {lambda, spec_.tolerance,
                                                        spec_.max_iterations}))
                     .first;
        }
        return it->second;
    }

    SweepRow blank() const {
        SweepRow row;
        row.experiment = std::string(to_string(spec_.id));
        row.trial = trial_;
        row.point = rows_.size();
        return row;
    }

    SwarmConfig swarm(double delta, double beta, std::size_t iterations, Seeding seeding) const {
        SwarmConfig c;
        c.delta = delta;
        c.beta = beta;
        c.death_threshold = spec_.death_threshold;
        c.iterations = iterations;
        c.seeding = std::move(seeding);
        c.rng_seed = derive_seed(spec_.rng_seed, trial_ + 1, rows_.size() + 1);
        return c;
    }

    // Runs the swarm, records its timing and its correlation with `target`.
    void record_swarm(SweepRow row, const SwarmConfig &config, const RankVector &target) {
        try {
            row.swarm_iterations = config.iterations;
            const auto start = Clock::now();
            const SwarmResult result = swarm_rank(graph_, config);
            row.wall_seconds = seconds_since(start);
            row.pearson = pearson(result.ranks, target);
        } catch (const std::exception &e) {
            row.error = e.what();
        }
        rows_.push_back(std::move(row));
    }

    void fig1a() {
        const RankVector in = indegree(graph_);
        for (double lambda : spec_.lambdas) {
            SweepRow row = blank();
            row.lambda = lambda;
            try {
                const auto start = Clock::now();
                const RankResult &pr = reference(lambda);
                row.wall_seconds = seconds_since(start);
                row.reference_iterations = pr.report.iterations_used;
                row.pearson = pearson(pr.ranks, in);
            } catch (const std::exception &e) {
                row.error = e.what();
            }
            rows_.push_back(std::move(row));
        }
    }

    void fig1b() {
        const RankVector in = indegree(graph_);
        for (double delta : spec_.deltas) {
            for (std::size_t alpha : spec_.alphas) {
                SweepRow row = blank();
                row.delta = delta;
                row.beta_swarm = 0.0;
                row.alpha = alpha;
                const RankResult &pr = reference(delta);
                row.reference_iterations = pr.report.iterations_used;
                record_swarm(std::move(row),
                             swarm(delta, 0.0, pr.report.iterations_used, UniformPerNode{alpha}),
                             in);
            }
        }
    }

    void fig2a() {
        for (double lambda : spec_.lambdas) {
            const RankResult &pr = reference(lambda);
            for (double delta : spec_.deltas) {
                for (std::size_t alpha : spec_.alphas) {
                    SweepRow row = blank();
                    row.lambda = lambda;
                    row.delta = delta;
                    row.beta_swarm = 0.0;
                    row.alpha = alpha;
                    row.reference_iterations = pr.report.iterations_used;
                    record_swarm(std::move(row),
                                 swarm(delta, 0.0, pr.report.iterations_used,
                                       UniformPerNode{alpha}),
                                 pr.ranks);
                }
            }
        }
    }

    void fig2b() {
        const std::size_t n = graph_.node_count();
        const auto count = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::floor(spec_.root_fraction * n + 1e-9)));
        std::vector<NodeId> all(n);
        std::iota(all.begin(), all.end(), NodeId{0});
        std::vector<NodeId> picked;
        std::mt19937_64 rng(derive_seed(spec_.rng_seed, 0x726f6f74ull, trial_));
        std::sample(all.begin(), all.end(), std::back_inserter(picked), count, rng);
        const RootSet roots(std::move(picked), n);

        for (double beta_ref : spec_.betas) {
            const RankResult prp =
                pagerank_priors(graph_, {beta_ref, roots, spec_.tolerance, spec_.max_iterations});
            for (double beta_swarm : spec_.betas) {
                SweepRow row = blank();
                row.delta = 0.0;
                row.beta_swarm = beta_swarm;
                row.beta_reference = beta_ref;
                row.phi = spec_.root_fraction;
                row.alpha = spec_.per_root_count;
                row.reference_iterations = prp.report.iterations_used;
                record_swarm(std::move(row),
                             swarm(0.0, beta_swarm, prp.report.iterations_used,
                                   RootSeeding{roots, spec_.per_root_count}),
                             prp.ranks);
            }
        }
    }

    void fig3a() {
        const RankResult &pr = reference(spec_.lambda);
        for (std::size_t alpha : spec_.alphas) {
            for (std::size_t t : spec_.iterations) {
                SweepRow row = blank();
                row.lambda = spec_.lambda;
                row.delta = spec_.lambda;
                row.beta_swarm = 0.0;
                row.phi = 1.0;
                row.alpha = alpha;
                row.reference_iterations = pr.report.iterations_used;
                record_swarm(std::move(row), swarm(spec_.lambda, 0.0, t, UniformPerNode{alpha}),
                             pr.ranks);
            }
        }
    }

    void fig3b() {
        const RankResult &pr = reference(spec_.lambda);
        for (std::size_t alpha : spec_.alphas) {
            for (double phi : spec_.phis) {
                SweepRow row = blank();
                row.lambda = spec_.lambda;
                row.delta = spec_.lambda;
                row.beta_swarm = 0.0;
                row.phi = phi;
                row.alpha = alpha;
                row.reference_iterations = pr.report.iterations_used;
                record_swarm(std::move(row),
                             swarm(spec_.lambda, 0.0, pr.report.iterations_used,
                                   RandomProportion{phi, alpha}),
                             pr.ranks);
            }
        }
    }

    void fig4() {
        const RankResult &pr = reference(spec_.lambda);
        for (std::size_t alpha : spec_.alphas) {
            for (double phi : spec_.phis) {
                for (std::size_t t : spec_.iterations) {
                    SweepRow row = blank();
                    row.lambda = spec_.lambda;
                    row.delta = spec_.lambda;
                    row.beta_swarm = 0.0;
                    row.phi = phi;
                    row.alpha = alpha;
                    row.reference_iterations = pr.report.iterations_used;
                    record_swarm(std::move(row),
                                 swarm(spec_.lambda, 0.0, t, RandomProportion{phi, alpha}),
                                 pr.ranks);
                }
            }
        }
    }

    const SweepSpec &spec_;
    std::size_t trial_;
    DirectedGraph graph_;
    std::map<double, RankResult> pagerank_cache_;
    std::vector<SweepRow> rows_;
};

std::vector<SweepRow> run_trial(const SweepSpec &spec, std::size_t trial) {
    try {
        return TrialRunner(spec, trial).run();
    } catch (const std::exception &e) {
        // Graph construction failed; keep the sweep going with a marker row.
        SweepRow row;
        row.experiment = std::string(to_string(spec.id));
        row.trial = trial;
        row.error = e.what();
        return {row};
    }
}

} // namespace

ExperimentResult run_sweep(const SweepSpec &spec) {
    validate(spec);
    std::vector<std::vector<SweepRow>> per_trial(spec.trials);
    if (spec.workers <= 1) {
        for (std::size_t t = 0; t < spec.trials; ++t) {
            per_trial[t] = run_trial(spec, t);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < std::min(spec.workers, spec.trials); ++w) {
            pool.emplace_back([&] {
                for (std::size_t t = next++; t < spec.trials; t = next++) {
                    per_trial[t] = run_trial(spec, t);
                }
            });
        }
    }
    ExperimentResult result;
    for (auto &rows : per_trial) {
        std::move(rows.begin(), rows.end(), std::back_inserter(result.rows));
    }
    return result;
}

namespace {

constexpr std::string_view kSweepHeader =
    "experiment,trial,point,lambda,delta,beta_swarm,beta_reference,phi,alpha,swarm_iterations,"
    "reference_iterations,pearson,wall_seconds,error";

void put_double(std::ostream &out, double v) {
    if (std::isnan(v)) {
        return;
    }
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    out.write(buf.data(), ptr - buf.data());
}

void put_count(std::ostream &out, std::size_t v) {
    if (v != 0) {
        out << v;
    }
}

std::string csv_safe(std::string text) {
    for (char &c : text) {
        if (c == ',' || c == '\n' || c == '\r') {
            c = c == ',' ? ';' : ' ';
        }
    }
    return text;
}

template <typename T>
T get_field(std::string_view text, std::size_t line) {
    T value{};
    if (text.empty()) {
        if constexpr (std::is_floating_point_v<T>) {
            return std::numeric_limits<T>::quiet_NaN();
        } else {
            return T{};
        }
    }
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(line, "malformed field '" + std::string(text) + "'");
    }
    return value;
}

} // namespace

void write_sweep_csv(std::ostream &out, const ExperimentResult &result) {
    out << kSweepHeader << '\n';
    for (const SweepRow &r : result.rows) {
        out << r.experiment << ',' << r.trial << ',' << r.point << ',';
        put_double(out, r.lambda);
        out << ',';
        put_double(out, r.delta);
        out << ',';
        put_double(out, r.beta_swarm);
        out << ',';
        put_double(out, r.beta_reference);
        out << ',';
        put_double(out, r.phi);
        out << ',';
        put_count(out, r.alpha);
        out << ',';
        put_count(out, r.swarm_iterations);
        out << ',';
        put_count(out, r.reference_iterations);
        out << ',';
        put_double(out, r.pearson);
        out << ',';
        put_double(out, r.wall_seconds);
        out << ',' << csv_safe(r.error) << '\n';
    }
}

ExperimentResult read_sweep_csv(std::istream &in) {
    ExperimentResult result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line_no == 1) {
            if (line != kSweepHeader) {
                throw ParseError(line_no, "unexpected sweep header");
            }
            continue;
        }
        std::array<std::string_view, 14> f;
        std::string_view rest = line;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const auto comma = i + 1 < f.size() ? rest.find(',') : std::string_view::npos;
            if (i + 1 < f.size() && comma == std::string_view::npos) {
                throw ParseError(line_no, "expected 14 columns");
            }
            f[i] = rest.substr(0, comma);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        SweepRow r;
        r.experiment = std::string(f[0]);
        r.trial = get_field<std::size_t>(f[1], line_no);
        r.point = get_field<std::size_t>(f[2], line_no);
        r.lambda = get_field<double>(f[3], line_no);
        r.delta = get_field<double>(f[4], line_no);
        r.beta_swarm = get_field<double>(f[5], line_no);
        r.beta_reference = get_field<double>(f[6], line_no);
        r.phi = get_field<double>(f[7], line_no);
        r.alpha = get_field<std::size_t>(f[8], line_no);
        r.swarm_iterations = get_field<std::size_t>(f[9], line_no);
        r.reference_iterations = get_field<std::size_t>(f[10], line_no);
        r.pearson = get_field<double>(f[11], line_no);
        r.wall_seconds = get_field<double>(f[12], line_no);
        r.error = std::string(f[13]);
        result.rows.push_back(std::move(r));
    }
    return result;
}

std::vector<PointSummary> summarize(const ExperimentResult &result) {
    std::vector<PointSummary> out;
    std::vector<double> sum_sq;
    std::map<std::pair<std::string, std::size_t>, std::size_t> index;
    for (const SweepRow &r : result.rows) {
        if (!r.error.empty() || std::isnan(r.pearson)) {
            continue;
        }
        auto [it, inserted] = index.try_emplace({r.experiment, r.point}, out.size());
        if (inserted) {
            out.push_back({r, 0.0, 0.0, 0});
            sum_sq.push_back(0.0);
        }
        PointSummary &p = out[it->second];
        p.mean += r.pearson;
        sum_sq[it->second] += r.pearson * r.pearson;
        ++p.count;
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        PointSummary &p = out[i];
        const auto n = static_cast<double>(p.count);
        p.mean /= n;
        if (p.count > 1) {
            const double var = std::max(0.0, (sum_sq[i] - n * p.mean * p.mean) / (n - 1.0));
            p.standard_error = std::sqrt(var / n);
        }
    }
    return out;
}

std::optional<PointSummary> cheapest_point(std::span<const PointSummary> points, double threshold) {
    std::optional<PointSummary> best;
    double best_cost = std::numeric_limits<double>::infinity();
    for (const PointSummary &p : points) {
        if (p.mean < threshold) {
            continue;
        }
        const double cost = p.parameters.phi * static_cast<double>(p.parameters.swarm_iterations);
        if (cost < best_cost) {
            best_cost = cost;
            best = p;
        }
    }
    return best;
}

namespace {

template <typename F>
double best_time(F &&f, int repetitions = 3) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < repetitions; ++i) {
        const auto start = Clock::now();
        f();
        best = std::min(best, seconds_since(start));
    }
    return best;
}

} // namespace

SpeedupReport benchmark_speedup(const GraphSpec &graph_spec, std::size_t trials,
                                std::uint64_t rng_seed, double lambda) {
    if (trials < 1) {
        throw ParameterError("benchmark needs at least one trial");
    }
    SpeedupReport report;
    for (std::size_t t = 0; t < trials; ++t) {
        const DirectedGraph graph = normalize_out_weights(generate_scale_free(
            graph_spec.node_count, graph_spec.gamma, trial_graph_seed(rng_seed, t)));
        const PageRankParams params{lambda, 1e-8, 200};

        SwarmConfig config;
        config.delta = lambda;
        config.iterations = report.swarm_iterations;
        config.seeding = RandomProportion{report.phi, report.alpha};
        config.rng_seed = derive_seed(rng_seed, t + 1, 0x7370ull);

        RankResult pr;
        SwarmResult sw;
        SpeedupTrial row;
        row.pagerank_seconds = best_time([&] { pr = pagerank(graph, params); });
        row.swarm_seconds = best_time([&] { sw = swarm_rank(graph, config); });
        row.edges = graph.edge_count();
        row.reference_iterations = pr.report.iterations_used;
        row.ratio = row.pagerank_seconds / std::max(row.swarm_seconds, 1e-12);
        row.pearson = pearson(sw.ranks, pr.ranks);
        report.trials.push_back(row);
    }

    const auto n = static_cast<double>(trials);
    for (const SpeedupTrial &r : report.trials) {
        report.mean_edges += static_cast<double>(r.edges) / n;
        report.mean_reference_iterations += static_cast<double>(r.reference_iterations) / n;
        report.mean_ratio += r.ratio / n;
    }
    const auto nodes = static_cast<double>(graph_spec.node_count);
    const auto alpha = static_cast<double>(report.alpha);
    const auto t_ps = static_cast<double>(report.swarm_iterations);
    report.theoretical = theoretical_speedup(report.mean_edges, report.mean_reference_iterations,
                                             report.phi, nodes, alpha, t_ps);
    report.nominal_theoretical = theoretical_speedup(2575.0, 22.7, report.phi, 1000.0, alpha, t_ps);
    return report;
}

void write_speedup_csv(std::ostream &out, const SpeedupReport &report) {
    out << "row,edges,reference_iterations,phi,alpha,swarm_iterations,pagerank_seconds,"
           "swarm_seconds,ratio,pearson,theoretical\n";
    out << "nominal,2575,22.7," << report.phi << ',' << report.alpha << ','
        << report.swarm_iterations << ",,,,,";
    put_double(out, report.nominal_theoretical);
    out << '\n';
    out << "measured,";
    put_double(out, report.mean_edges);
    out << ',';
    put_double(out, report.mean_reference_iterations);
    out << ',' << report.phi << ',' << report.alpha << ',' << report.swarm_iterations << ",,,";
    put_double(out, report.mean_ratio);
    out << ",,";
    put_double(out, report.theoretical);
    out << '\n';
    for (std::size_t i = 0; i < report.trials.size(); ++i) {
        const SpeedupTrial &r = report.trials[i];
        out << "trial" << i << ',' << r.edges << ',' << r.reference_iterations << ','
            << report.phi << ',' << report.alpha << ',' << report.swarm_iterations << ',';
        put_double(out, r.pagerank_seconds);
        out << ',';
        put_double(out, r.swarm_seconds);
        out << ',';
        put_double(out, r.ratio);
        out << ',';
        put_double(out, r.pearson);
        out << ",\n";
    }
}

std::vector<TrendRow> iteration_trend_check(std::span<const double> gammas, std::size_t trials,
                                            std::uint64_t rng_seed, std::size_t node_count,
                                            double threshold) {
    std::vector<TrendRow> out;
    for (double gamma : gammas) {
        if (!(gamma >= 2.0 && gamma <= 3.0)) {
            throw ParameterError("trend check gammas must lie in [2, 3]");
        }
        SweepSpec spec = SweepSpec::defaults(ExperimentId::Fig3A);
        spec.graph = {node_count, gamma};
        spec.trials = trials;
        spec.rng_seed = derive_seed(rng_seed, static_cast<std::uint64_t>(std::llround(gamma * 1000)));
        const ExperimentResult result = run_sweep(spec);

        TrendRow row;
        row.gamma = gamma;
        std::map<std::size_t, std::size_t> t_pr_by_trial;
        for (const SweepRow &r : result.rows) {
            t_pr_by_trial[r.trial] = r.reference_iterations;
        }
        for (const auto &[trial, t] : t_pr_by_trial) {
            row.mean_reference_iterations +=
                static_cast<double>(t) / static_cast<double>(t_pr_by_trial.size());
        }
        for (const PointSummary &p : summarize(result)) {
            if (p.mean >= threshold) {
                row.minimal_swarm_iterations = p.parameters.swarm_iterations;
                row.ratio = static_cast<double>(p.parameters.swarm_iterations) /
                            row.mean_reference_iterations;
                break;
            }
        }
        out.push_back(row);
    }
    return out;
}

void write_trend_csv(std::ostream &out, std::span<const TrendRow> rows) {
    out << "gamma,mean_reference_iterations,minimal_swarm_iterations,ratio\n";
    for (const TrendRow &r : rows) {
        put_double(out, r.gamma);
        out << ',';
        put_double(out, r.mean_reference_iterations);
        out << ',';
        if (r.minimal_swarm_iterations) {
            out << *r.minimal_swarm_iterations;
        }
        out << ',';
        put_double(out, r.ratio);
        out << '\n';
    }
}

} // namespace psrank
