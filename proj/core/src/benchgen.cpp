#include <algorithm>
#include <random>

#include "planshield/benchgen.hpp"

namespace planshield {

namespace {

// mt19937_64 output reduced by modulo: portable across standard libraries,
// unlike uniform_int_distribution.
std::uint64_t rand_below(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

int rand_range(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rand_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

bool rand_chance(std::mt19937_64& rng, double p) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

struct Edge {
    int from;
    int to;
};

struct Graph {
    int num_nodes = 2;  // node 0: source, node 1: sink
    std::vector<Edge> edges;
    std::vector<std::vector<int>> paths;  // edge indices per generated path

    int fresh_node() { return num_nodes++; }
    int add_edge(int from, int to) {
        edges.push_back(Edge{from, to});
        return static_cast<int>(edges.size()) - 1;
    }
};

constexpr int kSource = 0;
constexpr int kSink = 1;

std::uint64_t count_paths(const Graph& g) {
    // Edges always lead to younger nodes or to the sink, so id order (sink
    // last) is topological.
    std::vector<std::uint64_t> count(static_cast<std::size_t>(g.num_nodes), 0);
    count[kSource] = 1;
    std::vector<int> order;
    for (int n = 0; n < g.num_nodes; ++n)
        if (n != kSink) order.push_back(n);
    order.push_back(kSink);
    for (int n : order) {
        if (count[static_cast<std::size_t>(n)] == 0) continue;
        for (const Edge& e : g.edges)
            if (e.from == n) count[static_cast<std::size_t>(e.to)] += count[static_cast<std::size_t>(n)];
    }
    return count[kSink];
}

bool build_graph(const BenchConfig& config, std::mt19937_64& rng, Graph& g) {
    for (int p = 0; p < config.num_plans; ++p) {
        const int length = rand_range(rng, config.min_len, config.max_len);
        std::vector<int> path_edges;

        int start_node = kSource;
        int remaining = length;
        if (p > 0 && rand_chance(rng, config.share_fraction)) {
            // graft onto a random prefix of an earlier path; the new suffix
            // needs at least one fresh pre-sink node, hence length - 2
            const std::vector<int>& donor =
                g.paths[static_cast<std::size_t>(rand_below(rng, g.paths.size()))];
            const int max_prefix = std::min(static_cast<int>(donor.size()) - 1, length - 2);
            if (max_prefix >= 1) {
                const int prefix = rand_range(rng, 1, max_prefix);
                for (int i = 0; i < prefix; ++i) path_edges.push_back(donor[static_cast<std::size_t>(i)]);
                start_node = g.edges[static_cast<std::size_t>(donor[static_cast<std::size_t>(prefix - 1)])].to;
                remaining = length - prefix;
            }
        }

        int cur = start_node;
        for (int i = 0; i < remaining - 1; ++i) {
            const int next = g.fresh_node();
            path_edges.push_back(g.add_edge(cur, next));
            cur = next;
        }
        path_edges.push_back(g.add_edge(cur, kSink));
        g.paths.push_back(std::move(path_edges));
    }
    return count_paths(g) == static_cast<std::uint64_t>(config.num_plans);
}

}  // namespace

GeneratedBenchmark generate(const BenchConfig& config) {
    if (config.num_plans < 1) throw GenerationError("benchgen: num_plans must be >= 1");
    if (config.min_len < 1 || config.min_len > config.max_len)
        throw GenerationError("benchgen: need 1 <= min_len <= max_len");
    if (config.share_fraction < 0.0 || config.share_fraction > 1.0)
        throw GenerationError("benchgen: share_fraction must be in [0, 1]");

    constexpr int kMaxAttempts = 64;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::mt19937_64 rng(config.seed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(attempt));
        Graph g;
        if (!build_graph(config, rng, g)) continue;

        PlanningTask task;
        const std::size_t nf = static_cast<std::size_t>(g.num_nodes);
        task.fluents.reserve(nf);
        for (int n = 0; n < g.num_nodes; ++n)
            task.fluents.push_back(Fluent{n, "at(n" + std::to_string(n) + ")"});
        task.actions.reserve(g.edges.size());
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            GroundAction a;
            a.name = "e" + std::to_string(e) + "_n" + std::to_string(g.edges[e].from) + "_n" +
                     std::to_string(g.edges[e].to);
            a.pre = Bitset(nf);
            a.pre.set(static_cast<std::size_t>(g.edges[e].from));
            a.add = Bitset(nf);
            a.add.set(static_cast<std::size_t>(g.edges[e].to));
            a.del = Bitset(nf);
            a.del.set(static_cast<std::size_t>(g.edges[e].from));
            task.actions.push_back(std::move(a));
        }
        task.init = Bitset(nf);
        task.init.set(kSource);
        task.goal = Bitset(nf);
        task.goal.set(kSink);

        GeneratedBenchmark out;
        out.task = std::move(task);
        out.expected_plan_count = static_cast<std::uint64_t>(config.num_plans);
        return out;
    }
    throw GenerationError("benchgen: could not realize " + std::to_string(config.num_plans) +
                          " plans within " + std::to_string(kMaxAttempts) +
                          " attempts (lengths too tight for the requested sharing)");
}

}  // namespace planshield
