#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace psrank {

using NodeId = std::uint32_t;

struct Edge {
    NodeId source;
    NodeId target;
    double weight;

    friend bool operator==(const Edge &, const Edge &) = default;
};

struct OutEdge {
    NodeId target;
    double weight;
};

/// Tolerance on the per-node out-weight sum for a graph to count as normalized.
inline constexpr double kNormalizationTolerance = 1e-12;

/**
 * Immutable directed weighted graph stored in CSR form.
 *
 * Node ids are dense in [0, node_count). Edges are kept sorted by
 * (source, target); self-loops and duplicate (source, target) pairs are
 * rejected at construction with ValidationError. Weights must be finite and
 * non-negative; they only become a probability distribution per node after
 * normalize_out_weights().
 */
class DirectedGraph {
public:
    DirectedGraph() = default;
    DirectedGraph(std::size_t node_count, std::vector<Edge> edges);

    std::size_t node_count() const noexcept { return in_degree_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    /// All edges, sorted by (source, target).
    std::span<const Edge> edges() const noexcept { return edges_; }

    std::span<const OutEdge> out_edges(NodeId node) const noexcept {
        return {out_.data() + offsets_[node], out_.data() + offsets_[node + 1]};
    }

    std::size_t out_degree(NodeId node) const noexcept {
        return offsets_[node + 1] - offsets_[node];
    }
    std::size_t in_degree(NodeId node) const noexcept { return in_degree_[node]; }
    std::span<const std::size_t> in_degrees() const noexcept { return in_degree_; }

    double out_weight_sum(NodeId node) const noexcept;

    /// True when every node with out-edges has weights summing to 1 within
    /// kNormalizationTolerance.
    bool is_normalized() const noexcept { return normalized_; }

    friend bool operator==(const DirectedGraph &a, const DirectedGraph &b) {
        return a.node_count() == b.node_count() && a.edges_ == b.edges_;
    }

private:
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<OutEdge> out_;
    std::vector<std::size_t> in_degree_;
    bool normalized_ = true;
};

/// Non-empty subset of a graph's nodes, stored sorted and without duplicates.
class RootSet {
public:
    RootSet() = default;
    /// Throws ParameterError on duplicates or ids outside [0, node_count).
    RootSet(std::vector<NodeId> members, std::size_t node_count);

    std::span<const NodeId> members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    bool contains(NodeId node) const noexcept;

private:
    std::vector<NodeId> members_;
};

/// In-capacity for one node: floor(psi^(-1/(gamma-1))) capped at node_count-1.
std::size_t in_capacity(double psi, double gamma, std::size_t node_count);

/**
 * Scale-free directed graph with a power-law in-degree profile.
 *
 * Every node draws an in-capacity via in_capacity() with psi uniform on
 * (0, 1]. Edges are then added one at a time, uniformly among the
 * (source, target) pairs that are still feasible: no self-loop, no duplicate,
 * target below capacity. Generation stops when every capacity is filled or
 * after 50 * node_count^2 consecutive rejected proposals. All weights are 1.
 */
DirectedGraph generate_scale_free(std::size_t node_count, double gamma, std::uint64_t rng_seed);

/// Draws the per-node capacities used by generate_scale_free().
std::vector<std::size_t> draw_in_capacities(std::size_t node_count, double gamma,
                                            std::mt19937_64 &rng);

/// Divides every out-weight by its node's out-weight sum. Nodes that are
/// already normalized (within kNormalizationTolerance) are copied unchanged,
/// which makes the operation idempotent.
DirectedGraph normalize_out_weights(const DirectedGraph &graph);

/**
 * Edge-list text format: optional header `# nodes=<n>`, then one edge per line
 * as `source<TAB>target[<TAB>weight]` (weight defaults to 1.0). Other lines
 * starting with '#' and blank lines are ignored. Without a header the node
 * count is max id + 1.
 */
DirectedGraph read_graph(std::istream &in);
void write_graph(std::ostream &out, const DirectedGraph &graph);

DirectedGraph load_graph(const std::filesystem::path &path);
void save_graph(const DirectedGraph &graph, const std::filesystem::path &path);

/// Reads a roots file: one node id per line, blank lines and '#' comments ignored.
RootSet read_roots(std::istream &in, std::size_t node_count);
RootSet load_roots(const std::filesystem::path &path, std::size_t node_count);

} // namespace psrank
