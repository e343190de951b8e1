#pragma once

#include <psrank/graph.hpp>
#include <psrank/reference_ranks.hpp>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <variant>
#include <vector>

namespace psrank {

/// Mobile walker carrying energy that it deposits on every node it visits.
struct Particle {
    double energy = 1.0;
    double decay = 0.0;
    NodeId home = 0;
    double back_probability = 0.0;
    NodeId current = 0;
    bool alive = true; ///< kept equal to (energy > death threshold)
};

/// alpha particles on every node.
struct UniformPerNode {
    std::size_t alpha = 1;
};

/// per_root_count particles on every root; particles return to their own root.
struct RootSeeding {
    RootSet roots;
    std::size_t per_root_count = 10;
};

/// alpha particles on each of floor(phi * |N|) distinct nodes drawn uniformly.
struct RandomProportion {
    double phi = 1.0;
    std::size_t alpha = 1;
};

/// alpha * out_degree(n) particles on every node n.
struct ProportionalOutDegree {
    std::size_t alpha = 1;
};

using Seeding = std::variant<UniformPerNode, RootSeeding, RandomProportion, ProportionalOutDegree>;

struct SwarmConfig {
    double delta = 0.15;
    double beta = 0.0;
    double death_threshold = 1e-8;
    std::size_t iterations = 1;
    Seeding seeding = UniformPerNode{1};
    std::uint64_t rng_seed = 0;
    /// 1 runs the reproducible single-threaded loop. Larger values split the
    /// particles across threads with independent RNG streams; results are
    /// statistically equivalent but not bitwise equal to the single-threaded run.
    std::size_t workers = 1;
};

/// Throws ParameterError when the config violates its invariants.
void validate(const SwarmConfig &config);

/// Per-node accumulated energy.
struct EnergyField {
    std::vector<double> energy;

    double total() const noexcept;
    RankVector normalized() const { return RankVector(energy).normalized(); }
};

/// Energy currently carried by live particles, summed per current node. After
/// one step of ProportionalOutDegree seeding this is the in-degree profile.
EnergyField occupancy(std::span<const Particle> particles, std::size_t node_count,
                      double death_threshold);

struct SwarmStats {
    std::size_t particles_seeded = 0;
    std::size_t particles_dead = 0;
    std::size_t deposit_steps = 0;
};

/// Writes `particles_seeded,particles_dead,deposit_steps` header and one row.
void write_stats_csv(std::ostream &out, const SwarmStats &stats);

/**
 * Death rule applied right after a particle decays: the particle retires once
 * one more decay would leave it at or below the threshold. With delta = 0.15
 * and threshold 1e-8 a particle that never meets a dangling node therefore
 * deposits exactly 113 times (energies 0.85^0 .. 0.85^112). With delta = 0 a
 * particle never retires by decay; with delta = 1 it deposits once.
 */
inline bool retires_after_decay(double energy, double delta, double threshold) noexcept {
    return energy * (1.0 - delta) <= threshold;
}

/// Weighted out-edge selection over a normalized graph.
class EdgeSampler {
public:
    explicit EdgeSampler(const DirectedGraph &graph);

    /// Target of an out-edge of `from`, drawn with probability equal to its weight.
    /// `from` must have at least one out-edge.
    NodeId sample(NodeId from, std::mt19937_64 &rng) const;

private:
    const DirectedGraph *graph_;
};

/// Places the initial particles. Particle order follows node order (and root
/// order for RootSeeding); every particle starts with energy 1 at its home.
std::vector<Particle> seed_particles(const DirectedGraph &graph, const SwarmConfig &config);

/**
 * Step-wise particle propagation in the reproducible single-threaded mode.
 *
 * Each step visits particles in index order. A live particle deposits its
 * energy on its current node, decays by delta, then draws B(beta): on 1 it
 * jumps home, on 0 it follows a weighted out-edge, or dies if the node has
 * none. All random draws come from one stream seeded by the config.
 */
class SwarmSimulator {
public:
    SwarmSimulator(const DirectedGraph &graph, std::vector<Particle> particles,
                   const SwarmConfig &config);

    void step();
    /// Runs up to `iterations` steps, stopping early once every particle is dead.
    void run(std::size_t iterations);

    std::span<const Particle> particles() const noexcept { return particles_; }
    const EnergyField &field() const noexcept { return field_; }
    /// Number of deposits made by each particle.
    std::span<const std::uint32_t> deposit_counts() const noexcept { return deposits_; }
    std::size_t alive_count() const noexcept { return alive_; }
    std::size_t steps_taken() const noexcept { return steps_; }
    SwarmStats stats() const;

private:
    const DirectedGraph *graph_;
    EdgeSampler sampler_;
    SwarmConfig config_;
    std::mt19937_64 rng_;
    std::vector<Particle> particles_;
    std::vector<std::uint32_t> deposits_;
    EnergyField field_;
    std::size_t alive_ = 0;
    std::size_t steps_ = 0;
};

struct Propagation {
    EnergyField field;
    SwarmStats stats;
    std::vector<std::uint32_t> deposit_counts;
};

/// Runs config.iterations propagation steps. Requires normalized out-weights
/// (ContractError otherwise). An empty particle list yields an all-zero field.
Propagation propagate(const DirectedGraph &graph, std::vector<Particle> particles,
                      const SwarmConfig &config);

struct SwarmResult {
    RankVector ranks;
    SwarmStats stats;
};

/// seed_particles + propagate + normalize.
SwarmResult swarm_rank(const DirectedGraph &graph, const SwarmConfig &config);

} // namespace psrank
