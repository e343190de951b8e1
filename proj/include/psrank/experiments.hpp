#pragma once

#include <psrank/graph.hpp>
#include <psrank/particle_swarm.hpp>
#include <psrank/reference_ranks.hpp>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace psrank {

/// Pearson product-moment correlation. Throws ParameterError on a length
/// mismatch or fewer than 2 entries, CorrelationError if either side is constant.
double pearson(std::span<const double> a, std::span<const double> b);
inline double pearson(const RankVector &a, const RankVector &b) {
    return pearson(a.scores(), b.scores());
}

/// |E| t_PR / (phi |N| alpha + phi |N| alpha t_PS).
double theoretical_speedup(double edge_count, double t_pr, double phi, double node_count,
                           double alpha, double t_ps);

enum class ExperimentId { Fig1A, Fig1B, Fig2A, Fig2B, Fig3A, Fig3B, Fig4, Speedup, Trend };

std::string_view to_string(ExperimentId id);
std::optional<ExperimentId> parse_experiment_id(std::string_view text);

struct GraphSpec {
    std::size_t node_count = 1000;
    double gamma = 2.5;
};

/// Deterministic sub-seed for (base, a, b).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

/// Seed of the scale-free graph used by a given trial.
inline std::uint64_t trial_graph_seed(std::uint64_t base, std::size_t trial) {
    return derive_seed(base, 0x67726170ull, trial);
}

/**
 * Parameter grid for one sweep. Only the grids that the experiment uses are
 * read:
 *
 *   FIG1A  lambdas                       PageRank vs In-Degree
 *   FIG1B  deltas x alphas               swarm (t_PS = t_PR at lambda = delta) vs In-Degree
 *   FIG2A  deltas x lambdas              swarm (alpha = 10, t_PS = t_PR) vs PageRank
 *   FIG2B  betas (swarm) x betas (ref)   root swarm (10% roots, 10 per root, delta = 0,
 *                                        t_PS = t_PRP) vs PageRank-Priors
 *   FIG3A  iterations                    full seeding, alpha = 1 vs PageRank
 *   FIG3B  phis                          random seeding, alpha = 1, t_PS = t_PR
 *   FIG4   phis x iterations             random seeding, alpha = 1
 */
struct SweepSpec {
    ExperimentId id = ExperimentId::Fig3A;
    GraphSpec graph;
    std::size_t trials = 10;
    std::uint64_t rng_seed = 1;

    std::vector<double> lambdas;
    std::vector<double> deltas;
    std::vector<double> betas;
    std::vector<double> phis;
    std::vector<std::size_t> alphas;
    std::vector<std::size_t> iterations;

    double lambda = 0.15; ///< reference lambda (and delta) for FIG3A/3B/4
    double root_fraction = 0.10;
    std::size_t per_root_count = 10;
    double tolerance = 1e-8;
    std::size_t max_iterations = 200;
    double death_threshold = 1e-8;
    std::size_t workers = 1; ///< trials run concurrently when > 1

    /// The default grid for an experiment.
    static SweepSpec defaults(ExperimentId id);
};

/// Throws ParameterError for empty or out-of-range grids.
void validate(const SweepSpec &spec);

/// One grid point of one trial. Parameters that do not apply are NaN (or 0
/// for the integer columns) and are written as empty CSV cells.
struct SweepRow {
    std::string experiment;
    std::size_t trial = 0;
    std::size_t point = 0; ///< grid point index within the trial
    double lambda = kNaN;
    double delta = kNaN;
    double beta_swarm = kNaN;
    double beta_reference = kNaN;
    double phi = kNaN;
    std::size_t alpha = 0;
    std::size_t swarm_iterations = 0;
    std::size_t reference_iterations = 0;
    double pearson = kNaN;
    double wall_seconds = kNaN;
    std::string error;

    static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
};

struct ExperimentResult {
    std::vector<SweepRow> rows;
};

/// Runs every grid point of every trial. A failing point yields a row with
/// `error` set; the sweep carries on.
ExperimentResult run_sweep(const SweepSpec &spec);

void write_sweep_csv(std::ostream &out, const ExperimentResult &result);
ExperimentResult read_sweep_csv(std::istream &in);

/// Mean and standard error of the Pearson column for one parameter tuple.
struct PointSummary {
    SweepRow parameters; ///< trial/pearson/wall_seconds fields are meaningless
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t count = 0;
};

/// Groups rows by parameter tuple (ignoring trial) in first-seen order.
/// Error rows are skipped.
std::vector<PointSummary> summarize(const ExperimentResult &result);

/// Cheapest FIG4 point by phi * t_PS among those with mean Pearson >= threshold.
std::optional<PointSummary> cheapest_point(std::span<const PointSummary> points,
                                           double threshold = 0.95);

struct SpeedupTrial {
    std::size_t edges = 0;
    std::size_t reference_iterations = 0;
    double pagerank_seconds = 0.0;
    double swarm_seconds = 0.0;
    double ratio = 0.0;
    double pearson = 0.0;
};

struct SpeedupReport {
    double phi = 0.45;
    std::size_t alpha = 1;
    std::size_t swarm_iterations = 8;
    double mean_edges = 0.0;
    double mean_reference_iterations = 0.0;
    double theoretical = 0.0;         ///< Phi from the measured mean |E| and t_PR
    double nominal_theoretical = 0.0; ///< Phi from |E| = 2575, t_PR = 22.7
    double mean_ratio = 0.0;
    std::vector<SpeedupTrial> trials;
};

/// Times PageRank to convergence against the random-seeded swarm on fresh
/// graphs. Graph generation is not timed.
SpeedupReport benchmark_speedup(const GraphSpec &graph, std::size_t trials, std::uint64_t rng_seed,
                                double lambda = 0.15);

void write_speedup_csv(std::ostream &out, const SpeedupReport &report);

struct TrendRow {
    double gamma = 0.0;
    double mean_reference_iterations = 0.0;
    std::optional<std::size_t> minimal_swarm_iterations;
    double ratio = kNaN; ///< minimal t_PS / mean t_PR

    static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
};

/// Per gamma: mean t_PR and the smallest t_PS in [1, 25] whose mean Pearson
/// against PageRank reaches `threshold` (full seeding, alpha = 1).
std::vector<TrendRow> iteration_trend_check(std::span<const double> gammas, std::size_t trials,
                                            std::uint64_t rng_seed, std::size_t node_count = 1000,
                                            double threshold = 0.95);

void write_trend_csv(std::ostream &out, std::span<const TrendRow> rows);

} // namespace psrank
