#include <psrank/particle_swarm.hpp>

#include <psrank/errors.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>
#include <thread>
#include <type_traits>

namespace psrank {

namespace {

// splitmix64 finalizer; spreads (seed, stream, sub) into well-separated engine seeds.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Independent streams for seeding, sequential propagation, and each parallel
// worker. Seeding through std::seed_seq costs more than a whole short run.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint32_t stream, std::uint32_t sub = 0) {
    return std::mt19937_64(mix(mix(mix(seed) ^ stream) ^ sub));
}

// Uniform on [0, 1) from the top 53 bits. libstdc++'s generate_canonical
// recomputes logarithms on every call, which dominates a particle step.
double unit_draw(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

constexpr std::uint32_t kSeedingStream = 0;
constexpr std::uint32_t kPropagationStream = 1;
constexpr std::uint32_t kWorkerStream = 2;

std::size_t seeded_node_count(double phi, std::size_t node_count) {
    // The epsilon keeps values like 0.29 * 100 from flooring to 28.
    return static_cast<std::size_t>(std::floor(phi * static_cast<double>(node_count) + 1e-9));
}

// One step of a single particle. Returns false when the particle died during it.
bool advance(Particle &p, std::uint32_t &deposits, std::vector<double> &field,
             const DirectedGraph &graph, const EdgeSampler &sampler, double threshold,
             std::mt19937_64 &rng) {
    field[p.current] += p.energy;
    ++deposits;
    p.energy -= p.decay * p.energy;
    if (retires_after_decay(p.energy, p.decay, threshold)) {
        p.energy = std::min(p.energy, threshold);
        p.alive = false;
        return false;
    }
    // B(0) and B(1) are certain, so no draw is spent on them.
    const bool go_home = p.back_probability >= 1.0 ||
                         (p.back_probability > 0.0 &&
                          unit_draw(rng) < p.back_probability);
    if (go_home) {
        p.current = p.home;
    } else if (graph.out_degree(p.current) == 0) {
        p.energy = threshold;
        p.alive = false;
        return false;
    } else {
        p.current = sampler.sample(p.current, rng);
    }
    return true;
}

void check_graph(const DirectedGraph &graph) {
    if (!graph.is_normalized()) {
        throw ContractError("particle propagation requires normalized out-weights");
    }
}

} // namespace

void validate(const SwarmConfig &config) {
    if (!(config.delta >= 0.0 && config.delta <= 1.0)) {
        throw ParameterError("delta must lie in [0, 1]");
    }
    if (!(config.beta >= 0.0 && config.beta <= 1.0)) {
        throw ParameterError("beta must lie in [0, 1]");
    }
    if (!(config.death_threshold > 0.0 && config.death_threshold < 1.0)) {
        throw ParameterError("death threshold must lie in (0, 1)");
    }
    if (config.iterations < 1) {
        throw ParameterError("iterations must be at least 1");
    }
    if (config.workers < 1) {
        throw ParameterError("workers must be at least 1");
    }
    std::visit(
        [](const auto &s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, RootSeeding>) {
                if (s.roots.empty()) {
                    throw ParameterError("root seeding needs a non-empty root set");
                }
                if (s.per_root_count < 1) {
                    throw ParameterError("per_root_count must be at least 1");
                }
            } else {
                if (s.alpha < 1) {
                    throw ParameterError("alpha must be at least 1");
                }
                if constexpr (std::is_same_v<S, RandomProportion>) {
                    if (!(s.phi > 0.0 && s.phi <= 1.0)) {
                        throw ParameterError("phi must lie in (0, 1]");
                    }
                }
            }
        },
        config.seeding);
}

double EnergyField::total() const noexcept {
    return std::accumulate(energy.begin(), energy.end(), 0.0);
}

EnergyField occupancy(std::span<const Particle> particles, std::size_t node_count,
                      double death_threshold) {
    EnergyField f;
    f.energy.assign(node_count, 0.0);
    for (const Particle &p : particles) {
        if (p.energy > death_threshold) {
            f.energy.at(p.current) += p.energy;
        }
    }
    return f;
}

void write_stats_csv(std::ostream &out, const SwarmStats &stats) {
    out << "particles_seeded,particles_dead,deposit_steps\n"
        << stats.particles_seeded << ',' << stats.particles_dead << ',' << stats.deposit_steps
        << '\n';
}

EdgeSampler::EdgeSampler(const DirectedGraph &graph) : graph_(&graph) {}

NodeId EdgeSampler::sample(NodeId from, std::mt19937_64 &rng) const {
    // Out-weights are normalized, so a linear scan over the (short) edge list
    // beats building a cumulative table for every run.
    const auto out = graph_->out_edges(from);
    const double u = unit_draw(rng) * graph_->out_weight_sum(from);
    double running = 0.0;
    for (const OutEdge &e : out) {
        running += e.weight;
        if (u < running) {
            return e.target;
        }
    }
    return out.back().target; // u landed on the rounding gap at the top
}

std::vector<Particle> seed_particles(const DirectedGraph &graph, const SwarmConfig &config) {
    validate(config);
    const std::size_t n = graph.node_count();
    std::vector<Particle> particles;
    auto place = [&](NodeId node, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) {
            particles.push_back({1.0, config.delta, node, config.beta, node, true});
        }
    };

    std::visit(
        [&](const auto &s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, UniformPerNode>) {
                particles.reserve(n * s.alpha);
                for (std::size_t k = 0; k < n; ++k) {
                    place(static_cast<NodeId>(k), s.alpha);
                }
            } else if constexpr (std::is_same_v<S, RootSeeding>) {
                particles.reserve(s.roots.size() * s.per_root_count);
                for (NodeId r : s.roots.members()) {
                    if (r >= n) {
                        throw ParameterError("root " + std::to_string(r) +
                                             " is not a node of the graph");
                    }
                    place(r, s.per_root_count);
                }
            } else if constexpr (std::is_same_v<S, RandomProportion>) {
                const std::size_t count = seeded_node_count(s.phi, n);
                if (count == 0) {
                    throw ParameterError("phi * |N| rounds down to zero seeded nodes");
                }
                std::vector<NodeId> all(n);
                std::iota(all.begin(), all.end(), NodeId{0});
                std::vector<NodeId> chosen;
                chosen.reserve(count);
                auto rng = make_stream(config.rng_seed, kSeedingStream);
                std::sample(all.begin(), all.end(), std::back_inserter(chosen), count, rng);
                particles.reserve(count * s.alpha);
                for (NodeId node : chosen) {
                    place(node, s.alpha);
                }
            } else {
                for (std::size_t k = 0; k < n; ++k) {
                    const auto node = static_cast<NodeId>(k);
                    place(node, s.alpha * graph.out_degree(node));
                }
            }
        },
        config.seeding);
    return particles;
}

SwarmSimulator::SwarmSimulator(const DirectedGraph &graph, std::vector<Particle> particles,
                               const SwarmConfig &config)
    : graph_(&graph), sampler_(graph), config_(config),
      rng_(make_stream(config.rng_seed, kPropagationStream)), particles_(std::move(particles)),
      deposits_(particles_.size(), 0) {
    check_graph(graph);
    field_.energy.assign(graph.node_count(), 0.0);
    for (Particle &p : particles_) {
        if (p.home >= graph.node_count() || p.current >= graph.node_count()) {
            throw ParameterError("particle references a node outside the graph");
        }
        p.alive = p.energy > config_.death_threshold;
        alive_ += p.alive ? 1 : 0;
    }
}

void SwarmSimulator::step() {
    ++steps_;
    for (std::size_t i = 0; i < particles_.size(); ++i) {
        Particle &p = particles_[i];
        if (!(p.energy > config_.death_threshold)) {
            continue;
        }
        if (!advance(p, deposits_[i], field_.energy, *graph_, sampler_, config_.death_threshold,
                     rng_)) {
            --alive_;
        }
    }
}

void SwarmSimulator::run(std::size_t iterations) {
    for (std::size_t t = 0; t < iterations && alive_ > 0; ++t) {
        step();
    }
}

SwarmStats SwarmSimulator::stats() const {
    SwarmStats s;
    s.particles_seeded = particles_.size();
    s.particles_dead = particles_.size() - alive_;
    for (std::uint32_t d : deposits_) {
        s.deposit_steps += d;
    }
    return s;
}

namespace {

Propagation propagate_parallel(const DirectedGraph &graph, std::vector<Particle> particles,
                               const SwarmConfig &config) {
    const std::size_t workers = std::min(config.workers, std::max<std::size_t>(particles.size(), 1));
    const EdgeSampler sampler(graph);
    for (Particle &p : particles) {
        p.alive = p.energy > config.death_threshold;
    }
    std::vector<std::vector<double>> fields(workers, std::vector<double>(graph.node_count(), 0.0));
    std::vector<std::uint32_t> deposits(particles.size(), 0);

    const std::size_t chunk = (particles.size() + workers - 1) / workers;
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(w * chunk, particles.size());
        const std::size_t end = std::min(begin + chunk, particles.size());
        threads.emplace_back([&, w, begin, end] {
            auto rng = make_stream(config.rng_seed, kWorkerStream, static_cast<std::uint32_t>(w));
            for (std::size_t t = 0; t < config.iterations; ++t) {
                bool any = false;
                for (std::size_t i = begin; i < end; ++i) {
                    Particle &p = particles[i];
                    if (p.energy > config.death_threshold) {
                        any |= advance(p, deposits[i], fields[w], graph, sampler,
                                       config.death_threshold, rng);
                    }
                }
                if (!any) {
                    break;
                }
            }
        });
    }
    threads.clear();

    Propagation result;
    result.field.energy.assign(graph.node_count(), 0.0);
    for (const auto &f : fields) {
        for (std::size_t k = 0; k < f.size(); ++k) {
            result.field.energy[k] += f[k];
        }
    }
    result.stats.particles_seeded = particles.size();
    for (std::size_t i = 0; i < particles.size(); ++i) {
        result.stats.particles_dead += particles[i].alive ? 0 : 1;
        result.stats.deposit_steps += deposits[i];
    }
    result.deposit_counts = std::move(deposits);
    return result;
}

} // namespace

Propagation propagate(const DirectedGraph &graph, std::vector<Particle> particles,
                      const SwarmConfig &config) {
    validate(config);
    check_graph(graph);
    if (config.workers > 1) {
        return propagate_parallel(graph, std::move(particles), config);
    }
    SwarmSimulator sim(graph, std::move(particles), config);
    sim.run(config.iterations);
    Propagation result;
    result.field = sim.field();
    result.stats = sim.stats();
    result.deposit_counts.assign(sim.deposit_counts().begin(), sim.deposit_counts().end());
    return result;
}

SwarmResult swarm_rank(const DirectedGraph &graph, const SwarmConfig &config) {
    Propagation p = propagate(graph, seed_particles(graph, config), config);
    return {p.field.normalized(), p.stats};
}

} // namespace psrank
