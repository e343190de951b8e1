#include <psrank/reference_ranks.hpp>

#include <psrank/errors.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

namespace psrank {

RankVector RankVector::normalized() const {
    double sum = 0.0;
    for (double s : scores_) {
        if (!(s >= 0.0)) {
            throw ParameterError("rank scores must be non-negative");
        }
        sum += s;
    }
    if (!(sum > 0.0)) {
        throw ParameterError("cannot normalize a rank vector with zero mass");
    }
    std::vector<double> out(scores_);
    for (double &s : out) {
        s /= sum;
    }
    return RankVector(std::move(out), true);
}

namespace {

// One damped power iteration driver shared by pagerank and pagerank_priors.
// `teleport` is the distribution receiving both the damped mass and the
// mass of dangling nodes.
RankResult power_iterate(const DirectedGraph &graph, double teleport_mass,
                         std::span<const double> teleport, double tolerance,
                         std::size_t max_iterations) {
    const std::size_t n = graph.node_count();
    std::vector<double> current(teleport.begin(), teleport.end());
    std::vector<double> next(n);
    const double follow = 1.0 - teleport_mass;

    ConvergenceReport report;
    while (report.iterations_used < max_iterations) {
        std::fill(next.begin(), next.end(), 0.0);
        double dangling = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const auto out = graph.out_edges(static_cast<NodeId>(j));
            if (out.empty()) {
                dangling += current[j];
                continue;
            }
            const double mass = follow * current[j];
            for (const OutEdge &e : out) {
                next[e.target] += mass * e.weight;
            }
        }
        const double redistributed = teleport_mass + follow * dangling;
        double delta = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            next[k] += redistributed * teleport[k];
            delta += std::abs(next[k] - current[k]);
        }
        current.swap(next);
        ++report.iterations_used;
        report.final_delta = delta;
        if (delta < tolerance) {
            break;
        }
    }
    return {RankVector(std::move(current)).normalized(), report};
}

void check_common(const DirectedGraph &graph, double tolerance, std::size_t max_iterations) {
    if (!graph.is_normalized()) {
        throw ContractError("reference ranks require a graph with normalized out-weights");
    }
    if (graph.node_count() == 0) {
        throw ParameterError("graph has no nodes");
    }
    if (!(tolerance > 0.0)) {
        throw ParameterError("tolerance must be positive");
    }
    if (max_iterations == 0) {
        throw ParameterError("max_iterations must be at least 1");
    }
}

} // namespace

RankResult pagerank(const DirectedGraph &graph, const PageRankParams &params) {
    check_common(graph, params.tolerance, params.max_iterations);
    if (!(params.lambda >= 0.0 && params.lambda <= 1.0)) {
        throw ParameterError("lambda must lie in [0, 1]");
    }
    const std::vector<double> uniform(graph.node_count(),
                                      1.0 / static_cast<double>(graph.node_count()));
    return power_iterate(graph, params.lambda, uniform, params.tolerance, params.max_iterations);
}

RankResult pagerank_priors(const DirectedGraph &graph, const PriorsParams &params) {
    check_common(graph, params.tolerance, params.max_iterations);
    if (!(params.beta >= 0.0 && params.beta <= 1.0)) {
        throw ParameterError("beta must lie in [0, 1]");
    }
    if (params.roots.empty()) {
        throw ParameterError("PageRank-Priors needs a non-empty root set");
    }
    std::vector<double> prior(graph.node_count(), 0.0);
    const double share = 1.0 / static_cast<double>(params.roots.size());
    for (NodeId r : params.roots.members()) {
        if (r >= graph.node_count()) {
            throw ParameterError("root " + std::to_string(r) + " is not a node of the graph");
        }
        prior[r] = share;
    }
    return power_iterate(graph, params.beta, prior, params.tolerance, params.max_iterations);
}

RankVector indegree(const DirectedGraph &graph) {
    const std::size_t n = graph.node_count();
    if (graph.edge_count() == 0) {
        return RankVector(std::vector<double>(n, n ? 1.0 / static_cast<double>(n) : 0.0), true);
    }
    std::vector<double> counts(n);
    for (std::size_t k = 0; k < n; ++k) {
        counts[k] = static_cast<double>(graph.in_degree(static_cast<NodeId>(k)));
    }
    return RankVector(std::move(counts)).normalized();
}

void write_rank_csv(std::ostream &out, const RankVector &ranks) {
    out << "node_id,score\n";
    std::array<char, 32> buf{};
    for (std::size_t k = 0; k < ranks.size(); ++k) {
        const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), ranks[k]);
        out << k << ',';
        out.write(buf.data(), ptr - buf.data());
        out << '\n';
    }
}

RankVector read_rank_csv(std::istream &in) {
    std::vector<double> scores;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || (line_no == 1 && line == "node_id,score")) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ParseError(line_no, "expected node_id,score");
        }
        std::size_t id = 0;
        double score = 0.0;
        const std::string_view id_text(line.data(), comma);
        const std::string_view score_text(line.data() + comma + 1, line.size() - comma - 1);
        auto r1 = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
        auto r2 = std::from_chars(score_text.data(), score_text.data() + score_text.size(), score);
        if (r1.ec != std::errc{} || r1.ptr != id_text.data() + id_text.size() ||
            r2.ec != std::errc{} || r2.ptr != score_text.data() + score_text.size()) {
            throw ParseError(line_no, "malformed rank row");
        }
        if (id != scores.size()) {
            throw ParseError(line_no, "rows must be sorted by node_id without gaps");
        }
        scores.push_back(score);
    }
    const double sum = std::accumulate(scores.begin(), scores.end(), 0.0);
    const bool normalized = !scores.empty() && std::abs(sum - 1.0) <= kRankSumTolerance;
    return RankVector(std::move(scores), normalized);
}

} // namespace psrank
