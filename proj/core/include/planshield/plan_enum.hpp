#pragma once

#include <chrono>
#include <cstdint>
#include <optional>

#include "planshield/strips.hpp"

namespace planshield {

struct EnumerationConfig {
    std::optional<int> top_k;  // nullopt: enumerate the whole space
    std::uint64_t node_budget = 10'000'000;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct PlanSet {
    std::vector<Plan> plans;  // sorted by (cost, length, action-name tuple)
    bool complete = false;    // true iff the search space was exhausted and nothing was truncated
    Bitset action_support;    // actions occurring in at least one plan

    std::size_t size() const { return plans.size(); }
};

struct BudgetExceededError : Error {
    BudgetExceededError(const std::string& msg, PlanSet partial_)
        : Error(msg), partial(std::move(partial_)) {}
    PlanSet partial;
};

// Depth-first enumeration of every simple (loopless) solution plan: a branch
// is cut as soon as the successor state already occurs on the current path.
// Plans whose strict prefix already satisfies the goal are extended further
// and recorded again at every later goal state. Throws BudgetExceededError
// (carrying the partial result) when node_budget or the deadline trips.
PlanSet enumerate_simple_plans(const PlanningTask& task, const EnumerationConfig& config = {});

// True iff the plan replays from init, ends in a goal state, and its state
// trace is loop-free.
bool verify_plan(const PlanningTask& task, const Plan& plan);

}  // namespace planshield
