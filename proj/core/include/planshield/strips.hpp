#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "planshield/bitset.hpp"
#include "planshield/errors.hpp"

namespace planshield {

struct Fluent {
    int id = 0;
    std::string name;
};

// A state is the set of fluents that currently hold.
using State = Bitset;

struct GroundAction {
    std::string name;
    Bitset pre;
    Bitset add;
    Bitset del;
    double cost = 1.0;
};

struct PlanningTask {
    std::vector<Fluent> fluents;
    std::vector<GroundAction> actions;
    State init;
    Bitset goal;

    std::size_t num_fluents() const { return fluents.size(); }
    std::size_t num_actions() const { return actions.size(); }
    const std::string& fluent_name(int id) const { return fluents[static_cast<std::size_t>(id)].name; }
    std::optional<int> fluent_id(std::string_view name) const;
    std::optional<int> action_id(std::string_view name) const;
};

// Checked action builder: rejects out-of-range ids and add/del overlap.
GroundAction make_action(std::size_t num_fluents, std::string name, const std::vector<int>& pre,
                         const std::vector<int>& add, const std::vector<int>& del, double cost = 1.0);

struct Plan {
    std::vector<int> steps;  // indices into the owning task's action list
    double cost = 0.0;
};

struct SimulationOutcome {
    bool valid = false;
    // valid: one layer per step plus the initial state; blocked: layers up to
    // (not including) the first inapplicable step.
    std::vector<State> trace;
    int blocked_step = 0;  // 1-based position of the first inapplicable action, 0 when valid
    Bitset missing;        // preconditions unsatisfied at that step

    const State& final_state() const { return trace.back(); }
};

// Returns one human-readable description per violated task invariant.
std::vector<std::string> validate_task(const PlanningTask& task);

bool applicable(const State& state, const GroundAction& action);

// (state \ del) U add; throws InapplicableError when the precondition fails.
State apply(const State& state, const GroundAction& action);

// Replays a plan from the initial state. When actions_override is given the
// plan indices are resolved against it instead (same indexing), which replays
// the plan under a modified action set.
SimulationOutcome simulate_plan(const PlanningTask& task, const Plan& plan,
                                const std::vector<GroundAction>* actions_override = nullptr);

struct ReachabilityOptions {
    std::uint64_t state_cap = 10'000'000;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

// Exhaustive BFS over the reachable state space. Throws ResourceLimitError
// when the cap or deadline trips, so "unknown" is never reported as
// "unsolvable".
bool goal_reachable(const PlanningTask& task, const ReachabilityOptions& opts = {});

}  // namespace planshield
