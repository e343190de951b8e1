#include <psrank/errors.hpp>
#include <psrank/experiments.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace psrank;

TEST(Pearson, Examples) {
    const std::vector<double> a{1.0, 2.0, 3.0, 5.0, 8.0};
    std::vector<double> b;
    for (double x : a) {
        b.push_back(2.0 * x + 3.0);
    }
    EXPECT_NEAR(pearson(a, a), 1.0, 1e-15);
    EXPECT_NEAR(pearson(a, b), 1.0, 1e-15);
    EXPECT_NEAR(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}), -1.0, 1e-15);
    // Hand-computed: x = [1,2,3], y = [1,3,2] -> cov 0.5, var 1 each -> 0.5
    EXPECT_NEAR(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 2}), 0.5, 1e-15);
}

TEST(Pearson, LinearInvarianceOnRandomVectors) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise;
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    for (int round = 0; round < 100; ++round) {
        std::vector<double> x(50), y(50), z(50);
        const double s = scale(rng);
        const double shift = noise(rng) * 100;
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = noise(rng);
            y[i] = x[i] + noise(rng);
            z[i] = s * y[i] + shift;
        }
        const double r = pearson(x, y);
        EXPECT_GE(r, -1.0);
        EXPECT_LE(r, 1.0);
        EXPECT_NEAR(pearson(x, z), r, 1e-12);
        EXPECT_NEAR(pearson(y, x), r, 1e-15);
    }
}

TEST(Pearson, Errors) {
    EXPECT_THROW(pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), CorrelationError);
    EXPECT_THROW(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), ParameterError);
    EXPECT_THROW(pearson(std::vector<double>{1}, std::vector<double>{1}), ParameterError);
}

TEST(TheoreticalSpeedup, KnownConfigurations) {
    EXPECT_NEAR(theoretical_speedup(2575, 22.7, 0.45, 1000, 1, 8), 14.43, 0.01);
    EXPECT_NEAR(theoretical_speedup(2575, 20, 1.0, 1000, 1, 20), 2.45, 0.01);
    // Exact arithmetic: 2575 * 22.7 / (450 * 9)
    EXPECT_DOUBLE_EQ(theoretical_speedup(2575, 22.7, 0.45, 1000, 1, 8), 2575 * 22.7 / (450.0 * 9.0));
}

TEST(TheoreticalSpeedup, DegenerateAndInvalid) {
    EXPECT_DOUBLE_EQ(theoretical_speedup(2575, 20, 0.5, 1000, 2, 0), 2575.0 * 20 / 1000.0);
    EXPECT_THROW(theoretical_speedup(2575, 20, 0.0, 1000, 1, 8), ParameterError);
    EXPECT_THROW(theoretical_speedup(2575, 20, 0.5, 1000, -1, 8), ParameterError);
}

TEST(ExperimentId, ParseAndPrint) {
    for (ExperimentId id : {ExperimentId::Fig1A, ExperimentId::Fig1B, ExperimentId::Fig2A,
                            ExperimentId::Fig2B, ExperimentId::Fig3A, ExperimentId::Fig3B,
                            ExperimentId::Fig4, ExperimentId::Speedup, ExperimentId::Trend}) {
        EXPECT_EQ(parse_experiment_id(to_string(id)), id);
    }
    EXPECT_FALSE(parse_experiment_id("FIG9").has_value());
}

TEST(SweepSpec, DefaultsValidateAndBadGridsFail) {
    for (ExperimentId id : {ExperimentId::Fig1A, ExperimentId::Fig1B, ExperimentId::Fig2A,
                            ExperimentId::Fig2B, ExperimentId::Fig3A, ExperimentId::Fig3B,
                            ExperimentId::Fig4}) {
        EXPECT_NO_THROW(validate(SweepSpec::defaults(id)));
    }
    SweepSpec spec = SweepSpec::defaults(ExperimentId::Fig1A);
    spec.lambdas = {1.0};
    EXPECT_THROW(validate(spec), ParameterError);
    spec = SweepSpec::defaults(ExperimentId::Fig3B);
    spec.phis = {0.0};
    EXPECT_THROW(validate(spec), ParameterError);
    spec = SweepSpec::defaults(ExperimentId::Fig3A);
    spec.trials = 0;
    EXPECT_THROW(validate(spec), ParameterError);
}

TEST(RunSweep, RowCountsFollowGrid) {
    SweepSpec spec = SweepSpec::defaults(ExperimentId::Fig3A);
    spec.trials = 2;
    spec.graph.node_count = 200;
    EXPECT_EQ(run_sweep(spec).rows.size(), 50u);

    SweepSpec grid = SweepSpec::defaults(ExperimentId::Fig4);
    grid.trials = 1;
    grid.graph.node_count = 200;
    EXPECT_EQ(run_sweep(grid).rows.size(), 1250u);
}

TEST(RunSweep, ReproducibleAndRoundTrips) {
    SweepSpec spec = SweepSpec::defaults(ExperimentId::Fig2B);
    spec.trials = 2;
    spec.graph.node_count = 300;
    spec.betas = {0.2, 0.8};
    const ExperimentResult a = run_sweep(spec);
    const ExperimentResult b = run_sweep(spec);
    ASSERT_EQ(a.rows.size(), 8u);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].pearson, b.rows[i].pearson);
        EXPECT_TRUE(a.rows[i].error.empty());
    }

    std::stringstream buf;
    write_sweep_csv(buf, a);
    const ExperimentResult back = read_sweep_csv(buf);
    ASSERT_EQ(back.rows.size(), a.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(back.rows[i].pearson, a.rows[i].pearson);
        EXPECT_EQ(back.rows[i].beta_swarm, a.rows[i].beta_swarm);
        EXPECT_TRUE(std::isnan(back.rows[i].lambda));
        EXPECT_EQ(back.rows[i].trial, a.rows[i].trial);
    }
}

TEST(RunSweep, ParallelTrialsMatchSerial) {
    SweepSpec spec = SweepSpec::defaults(ExperimentId::Fig3B);
    spec.trials = 3;
    spec.graph.node_count = 300;
    spec.phis = {0.3, 0.9};
    const ExperimentResult serial = run_sweep(spec);
    spec.workers = 3;
    const ExperimentResult parallel = run_sweep(spec);
    ASSERT_EQ(serial.rows.size(), parallel.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        EXPECT_EQ(serial.rows[i].pearson, parallel.rows[i].pearson);
    }
}

TEST(RunSweep, ConstrainedIterationsLevel) {
    SweepSpec spec = SweepSpec::defaults(ExperimentId::Fig3A);
    spec.trials = 10;
    spec.rng_seed = 31;
    spec.iterations = {4};
    const auto points = summarize(run_sweep(spec));
    ASSERT_EQ(points.size(), 1u);
    EXPECT_NEAR(points[0].mean, 0.953, 0.03);
}

TEST(RunSweep, RandomSeedingLevel) {
    SweepSpec spec = SweepSpec::defaults(ExperimentId::Fig3B);
    spec.trials = 10;
    spec.rng_seed = 32;
    spec.phis = {0.24};
    const auto points = summarize(run_sweep(spec));
    ASSERT_EQ(points.size(), 1u);
    EXPECT_NEAR(points[0].mean, 0.95, 0.03);
}

TEST(RunSweep, FidelityDiagonal) {
    SweepSpec spec = SweepSpec::defaults(ExperimentId::Fig2A);
    spec.trials = 5;
    spec.rng_seed = 33;
    spec.deltas = {0.15};
    spec.lambdas = {0.15};
    const auto points = summarize(run_sweep(spec));
    ASSERT_EQ(points.size(), 1u);
    EXPECT_GE(points[0].mean, 0.98);
}

TEST(RunSweep, IterationCurveIsMonotoneUpToReferenceCount) {
    SweepSpec spec = SweepSpec::defaults(ExperimentId::Fig3A);
    spec.trials = 10;
    spec.rng_seed = 34;
    const ExperimentResult result = run_sweep(spec);
    double t_pr = 0.0;
    for (const SweepRow &r : result.rows) {
        t_pr += static_cast<double>(r.reference_iterations) / static_cast<double>(result.rows.size());
    }
    const auto points = summarize(result);
    ASSERT_EQ(points.size(), 25u);
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (static_cast<double>(points[i].parameters.swarm_iterations) > t_pr) {
            break;
        }
        const double slack = 2.0 * std::hypot(points[i].standard_error, points[i - 1].standard_error);
        EXPECT_GE(points[i].mean, points[i - 1].mean - slack)
            << "t_PS=" << points[i].parameters.swarm_iterations;
    }
}

TEST(RunSweep, CostSurfaceOptimumIsInterior) {
    SweepSpec spec = SweepSpec::defaults(ExperimentId::Fig4);
    spec.trials = 10;
    spec.rng_seed = 35;
    const auto points = summarize(run_sweep(spec));
    const auto best = cheapest_point(points);
    ASSERT_TRUE(best.has_value());
    EXPECT_GE(best->parameters.phi, 0.2);
    EXPECT_LE(best->parameters.phi, 0.7);
    EXPECT_GE(best->parameters.swarm_iterations, 4u);
    EXPECT_LE(best->parameters.swarm_iterations, 15u);
}

TEST(Summarize, MeanAndStandardErrorSkipErrors) {
    ExperimentResult r;
    SweepRow row;
    row.experiment = "FIG3A";
    row.swarm_iterations = 4;
    for (double p : {0.90, 0.92, 0.94}) {
        row.pearson = p;
        r.rows.push_back(row);
    }
    row.pearson = SweepRow::kNaN;
    row.error = "boom";
    r.rows.push_back(row);
    const auto points = summarize(r);
    ASSERT_EQ(points.size(), 1u);
    EXPECT_EQ(points[0].count, 3u);
    EXPECT_NEAR(points[0].mean, 0.92, 1e-12);
    // sample sd = 0.02, se = 0.02 / sqrt(3)
    EXPECT_NEAR(points[0].standard_error, 0.02 / std::sqrt(3.0), 1e-12);
}

TEST(CheapestPoint, PicksSmallestCostAboveThreshold) {
    std::vector<PointSummary> points(3);
    points[0].parameters.phi = 0.5;
    points[0].parameters.swarm_iterations = 10;
    points[0].mean = 0.96;
    points[1].parameters.phi = 0.2;
    points[1].parameters.swarm_iterations = 5;
    points[1].mean = 0.90;
    points[2].parameters.phi = 0.3;
    points[2].parameters.swarm_iterations = 8;
    points[2].mean = 0.951;
    const auto best = cheapest_point(points);
    ASSERT_TRUE(best.has_value());
    EXPECT_EQ(best->parameters.swarm_iterations, 8u);
    points[0].mean = points[2].mean = 0.5;
    EXPECT_FALSE(cheapest_point(points).has_value());
}

TEST(BenchmarkSpeedup, SingleTrialReport) {
    const SpeedupReport report = benchmark_speedup({}, 1, 77);
    ASSERT_EQ(report.trials.size(), 1u);
    EXPECT_NEAR(report.nominal_theoretical, 14.43, 0.01);
    EXPECT_DOUBLE_EQ(report.theoretical,
                     theoretical_speedup(report.mean_edges, report.mean_reference_iterations, 0.45,
                                         1000, 1, 8));
    EXPECT_GT(report.trials[0].ratio, 1.0);
    EXPECT_GE(report.trials[0].pearson, 0.9);

    std::ostringstream csv;
    write_speedup_csv(csv, report);
    EXPECT_NE(csv.str().find("14.43"), std::string::npos);
}

TEST(IterationTrend, ShorterRunsOnFlatterTails) {
    const std::vector<double> gammas{2.0, 3.0};
    const auto rows = iteration_trend_check(gammas, 10, 36);
    ASSERT_EQ(rows.size(), 2u);
    ASSERT_TRUE(rows[0].minimal_swarm_iterations.has_value());
    ASSERT_TRUE(rows[1].minimal_swarm_iterations.has_value());
    EXPECT_GE(*rows[0].minimal_swarm_iterations, 2u);
    EXPECT_LE(*rows[0].minimal_swarm_iterations, 5u);
    EXPECT_GE(*rows[1].minimal_swarm_iterations, 4u);
    EXPECT_LE(*rows[1].minimal_swarm_iterations, 9u);
    for (const TrendRow &r : rows) {
        EXPECT_GE(r.ratio, 0.1) << "gamma " << r.gamma;
        EXPECT_LE(r.ratio, 0.5) << "gamma " << r.gamma;
    }
    EXPECT_THROW(iteration_trend_check(std::vector<double>{3.5}, 1, 1), ParameterError);
}
