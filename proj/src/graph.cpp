#include <psrank/graph.hpp>

#include <psrank/errors.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>

namespace psrank {

DirectedGraph::DirectedGraph(std::size_t node_count, std::vector<Edge> edges)
    : edges_(std::move(edges)), in_degree_(node_count, 0) {
    if (node_count > std::numeric_limits<NodeId>::max()) {
        throw ValidationError("node count exceeds NodeId range");
    }
    for (const Edge &e : edges_) {
        if (e.source >= node_count || e.target >= node_count) {
            throw ValidationError("edge (" + std::to_string(e.source) + ", " +
                                  std::to_string(e.target) + ") references a node outside [0, " +
                                  std::to_string(node_count) + ")");
        }
        if (e.source == e.target) {
            throw ValidationError("self-loop on node " + std::to_string(e.source));
        }
        if (!std::isfinite(e.weight) || e.weight < 0.0) {
            throw ValidationError("edge (" + std::to_string(e.source) + ", " +
                                  std::to_string(e.target) + ") has invalid weight");
        }
    }

    std::sort(edges_.begin(), edges_.end(), [](const Edge &a, const Edge &b) {
        return a.source != b.source ? a.source < b.source : a.target < b.target;
    });
    for (std::size_t i = 1; i < edges_.size(); ++i) {
        if (edges_[i].source == edges_[i - 1].source && edges_[i].target == edges_[i - 1].target) {
            throw ValidationError("duplicate edge (" + std::to_string(edges_[i].source) + ", " +
                                  std::to_string(edges_[i].target) + ")");
        }
    }

    offsets_.assign(node_count + 1, 0);
    out_.reserve(edges_.size());
    for (const Edge &e : edges_) {
        ++offsets_[e.source + 1];
        ++in_degree_[e.target];
        out_.push_back({e.target, e.weight});
    }
    for (std::size_t k = 0; k < node_count; ++k) {
        offsets_[k + 1] += offsets_[k];
    }

    for (std::size_t k = 0; k < node_count; ++k) {
        if (out_degree(static_cast<NodeId>(k)) != 0 &&
            std::abs(out_weight_sum(static_cast<NodeId>(k)) - 1.0) > kNormalizationTolerance) {
            normalized_ = false;
            break;
        }
    }
}

double DirectedGraph::out_weight_sum(NodeId node) const noexcept {
    double sum = 0.0;
    for (const OutEdge &e : out_edges(node)) {
        sum += e.weight;
    }
    return sum;
}

RootSet::RootSet(std::vector<NodeId> members, std::size_t node_count) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
        throw ParameterError("root set contains duplicate nodes");
    }
    if (!members_.empty() && members_.back() >= node_count) {
        throw ParameterError("root " + std::to_string(members_.back()) + " is outside [0, " +
                             std::to_string(node_count) + ")");
    }
}

bool RootSet::contains(NodeId node) const noexcept {
    return std::binary_search(members_.begin(), members_.end(), node);
}

std::size_t in_capacity(double psi, double gamma, std::size_t node_count) {
    const double cap = static_cast<double>(node_count - 1);
    const double raw = std::floor(std::pow(psi, -1.0 / (gamma - 1.0)));
    if (!(raw < cap)) { // also catches +inf at psi == 0
        return node_count - 1;
    }
    return static_cast<std::size_t>(raw);
}

namespace {

void check_generator_params(std::size_t node_count, double gamma) {
    if (node_count < 2) {
        throw ParameterError("scale-free generation needs at least 2 nodes");
    }
    if (!std::isfinite(gamma) || gamma <= 1.0) {
        throw ParameterError("gamma must be a finite value > 1");
    }
}

} // namespace

std::vector<std::size_t> draw_in_capacities(std::size_t node_count, double gamma,
                                            std::mt19937_64 &rng) {
    check_generator_params(node_count, gamma);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::size_t> caps(node_count);
    for (auto &c : caps) {
        const double psi = 1.0 - unit(rng); // (0, 1]
        c = in_capacity(psi, gamma, node_count);
    }
    return caps;
}

DirectedGraph generate_scale_free(std::size_t node_count, double gamma, std::uint64_t rng_seed) {
    check_generator_params(node_count, gamma);
    std::mt19937_64 rng(rng_seed);
    const std::vector<std::size_t> caps = draw_in_capacities(node_count, gamma, rng);

    // Targets that still have free in-capacity. Drawing the target from this
    // list and the source from all nodes yields the same accepted-edge
    // distribution as rejecting full targets from fully uniform proposals.
    std::vector<NodeId> open;
    open.reserve(node_count);
    std::size_t total = 0;
    for (std::size_t k = 0; k < node_count; ++k) {
        if (caps[k] > 0) {
            open.push_back(static_cast<NodeId>(k));
        }
        total += caps[k];
    }
    std::vector<std::size_t> filled(node_count, 0);
    std::vector<Edge> edges;
    edges.reserve(total);
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(total * 2);

    const auto budget = 50ull * node_count * node_count;
    std::uint64_t failures = 0;
    std::uniform_int_distribution<NodeId> any_node(0, static_cast<NodeId>(node_count - 1));

    while (!open.empty() && failures < budget) {
        std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
        const std::size_t slot = pick(rng);
        const NodeId target = open[slot];
        const NodeId source = any_node(rng);
        const std::uint64_t key = (static_cast<std::uint64_t>(source) << 32) | target;
        if (source == target || seen.contains(key)) {
            ++failures;
            continue;
        }
        failures = 0;
        seen.insert(key);
        edges.push_back({source, target, 1.0});
        if (++filled[target] == caps[target]) {
            open[slot] = open.back();
            open.pop_back();
        }
    }
    return DirectedGraph(node_count, std::move(edges));
}

DirectedGraph normalize_out_weights(const DirectedGraph &graph) {
    std::vector<Edge> edges(graph.edges().begin(), graph.edges().end());
    std::size_t i = 0;
    for (std::size_t k = 0; k < graph.node_count(); ++k) {
        const auto node = static_cast<NodeId>(k);
        const std::size_t degree = graph.out_degree(node);
        if (degree == 0) {
            continue;
        }
        const double sum = graph.out_weight_sum(node);
        if (!(sum > 0.0)) {
            throw NormalizationError("node " + std::to_string(k) +
                                     " has out-edges but zero total weight");
        }
        if (std::abs(sum - 1.0) > kNormalizationTolerance) {
            for (std::size_t j = i; j < i + degree; ++j) {
                edges[j].weight /= sum;
            }
        }
        i += degree;
    }
    return DirectedGraph(graph.node_count(), std::move(edges));
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_field(std::string_view text, std::size_t line, const char *name) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(line, std::string("invalid ") + name + " '" + std::string(text) + "'");
    }
    return value;
}

// Splits on tabs; returns the number of fields found (at most out.size() + 1
// so callers can detect extras).
std::size_t split_tabs(std::string_view line, std::span<std::string_view> out) {
    std::size_t n = 0;
    while (true) {
        const auto tab = line.find('\t');
        if (n < out.size()) {
            out[n] = line.substr(0, tab);
        }
        ++n;
        if (tab == std::string_view::npos || n > out.size()) {
            return n;
        }
        line.remove_prefix(tab + 1);
    }
}

} // namespace

DirectedGraph read_graph(std::istream &in) {
    std::vector<Edge> edges;
    std::size_t declared = 0;
    bool has_header = false;
    std::size_t max_id_plus_one = 0;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            const std::string_view body = trim(line.substr(1));
            constexpr std::string_view key = "nodes=";
            if (body.starts_with(key)) {
                if (has_header || !edges.empty()) {
                    throw ParseError(line_no, "node count header must appear once, before edges");
                }
                declared = parse_field<std::size_t>(trim(body.substr(key.size())), line_no,
                                                    "node count");
                has_header = true;
            }
            continue;
        }

        std::array<std::string_view, 3> fields;
        const std::size_t n = split_tabs(line, fields);
        if (n < 2 || n > 3) {
            throw ParseError(line_no, "expected source<TAB>target[<TAB>weight]");
        }
        Edge e{};
        e.source = parse_field<NodeId>(trim(fields[0]), line_no, "source id");
        e.target = parse_field<NodeId>(trim(fields[1]), line_no, "target id");
        e.weight = n == 3 ? parse_field<double>(trim(fields[2]), line_no, "weight") : 1.0;
        if (e.source == e.target) {
            throw ValidationError("line " + std::to_string(line_no) + ": self-loop on node " +
                                  std::to_string(e.source));
        }
        if (!std::isfinite(e.weight) || e.weight < 0.0) {
            throw ParseError(line_no, "weight must be finite and non-negative");
        }
        max_id_plus_one = std::max<std::size_t>(max_id_plus_one, std::max(e.source, e.target) + 1ull);
        edges.push_back(e);
    }

    if (has_header && max_id_plus_one > declared) {
        throw ValidationError("edge references node " + std::to_string(max_id_plus_one - 1) +
                              " but header declares " + std::to_string(declared) + " nodes");
    }
    return DirectedGraph(has_header ? declared : max_id_plus_one, std::move(edges));
}

namespace {

void write_double(std::ostream &out, double v) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    out.write(buf.data(), ptr - buf.data());
}

} // namespace

void write_graph(std::ostream &out, const DirectedGraph &graph) {
    out << "# nodes=" << graph.node_count() << '\n';
    for (const Edge &e : graph.edges()) {
        out << e.source << '\t' << e.target << '\t';
        write_double(out, e.weight);
        out << '\n';
    }
}

DirectedGraph load_graph(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open graph file " + path.string());
    }
    return read_graph(in);
}

void save_graph(const DirectedGraph &graph, const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write graph file " + path.string());
    }
    write_graph(out, graph);
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

RootSet read_roots(std::istream &in, std::size_t node_count) {
    std::vector<NodeId> roots;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        roots.push_back(parse_field<NodeId>(line, line_no, "root id"));
    }
    return RootSet(std::move(roots), node_count);
}

RootSet load_roots(const std::filesystem::path &path, std::size_t node_count) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open roots file " + path.string());
    }
    return read_roots(in, node_count);
}

} // namespace psrank
