#pragma once

#include <psrank/graph.hpp>

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace psrank {

/// Tolerance on the score sum of a normalized RankVector.
inline constexpr double kRankSumTolerance = 1e-9;

/// Dense node-indexed influence scores.
class RankVector {
public:
    RankVector() = default;
    explicit RankVector(std::vector<double> scores, bool normalized = false)
        : scores_(std::move(scores)), normalized_(normalized) {}

    std::size_t size() const noexcept { return scores_.size(); }
    double operator[](std::size_t k) const noexcept { return scores_[k]; }
    std::span<const double> scores() const noexcept { return scores_; }
    bool is_normalized() const noexcept { return normalized_; }

    /// Returns a copy scaled to sum to 1. Throws ParameterError when the
    /// scores are negative or sum to zero.
    RankVector normalized() const;

private:
    std::vector<double> scores_;
    bool normalized_ = false;
};

struct ConvergenceReport {
    std::size_t iterations_used = 0;
    double final_delta = 0.0;
};

struct RankResult {
    RankVector ranks;
    ConvergenceReport report;
};

struct PageRankParams {
    double lambda = 0.15; ///< teleport mass per step
    double tolerance = 1e-8;
    std::size_t max_iterations = 200;
};

struct PriorsParams {
    double beta = 0.15; ///< back-probability to the root set
    RootSet roots;
    double tolerance = 1e-8;
    std::size_t max_iterations = 200;
};

/**
 * Power-iteration PageRank with teleport mass lambda:
 *
 *   I_k <- (1 - lambda) * sum_{j -> k} w_jk * I_j + lambda / |N|
 *
 * starting from the uniform vector. Mass sitting on nodes without out-edges is
 * spread uniformly over all nodes each step. Stops when the L1 change between
 * successive vectors drops below the tolerance or max_iterations is reached.
 *
 * Throws ContractError if the graph is not normalized and ParameterError on
 * out-of-range parameters.
 */
RankResult pagerank(const DirectedGraph &graph, const PageRankParams &params);

/**
 * PageRank-Priors: like pagerank() but teleporting (with probability beta)
 * and dangling mass both go to the uniform prior over the root set, and the
 * iteration starts from that prior.
 */
RankResult pagerank_priors(const DirectedGraph &graph, const PriorsParams &params);

/// In-degree scores normalized to sum to 1. A graph without edges yields the
/// uniform vector.
RankVector indegree(const DirectedGraph &graph);

/// CSV with header `node_id,score`, one row per node in id order.
void write_rank_csv(std::ostream &out, const RankVector &ranks);
RankVector read_rank_csv(std::istream &in);

} // namespace psrank
