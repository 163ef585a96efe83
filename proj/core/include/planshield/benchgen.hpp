#pragma once

#include <cstdint>

#include "planshield/strips.hpp"

namespace planshield {

struct BenchConfig {
    int num_plans = 8;
    int min_len = 2;
    int max_len = 4;
    double share_fraction = 0.4;  // probability that a path grafts onto an earlier one
    std::uint64_t seed = 0;
};

struct GeneratedBenchmark {
    PlanningTask task;
    std::uint64_t expected_plan_count = 0;  // distinct source-to-sink paths in the graph
};

// Builds a DAG-shaped task: one at(node) fluent per node, one action per
// edge, init at the source, goal at the single sink. Paths either start
// fresh or share a prefix of a previously generated path before branching
// off through fresh nodes. Seed-deterministic; retries with derived
// sub-seeds until the graph's path count matches num_plans and throws
// GenerationError when the config cannot be realized.
GeneratedBenchmark generate(const BenchConfig& config);

}  // namespace planshield
