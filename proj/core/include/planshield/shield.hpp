#pragma once

#include <set>
#include <utility>

#include "planshield/ilp.hpp"
#include "planshield/plan_enum.hpp"
#include "planshield/strips.hpp"

namespace planshield {

// Variable layout of one shielding model. Modification variables exist only
// for actions occurring in some plan, and never for the artificial goal
// action; -1 marks an absent variable.
struct VarIndexMap {
    int goal_action = -1;                             // index of the appended goal action
    std::vector<std::vector<int>> pre;                // [action][fluent], f not in pre(a)
    std::vector<std::vector<int>> addrm;              // [action][fluent], f in add(a)
    std::vector<std::vector<int>> deladd;             // [action][fluent], f outside add(a)+del(a)
    std::vector<std::vector<std::vector<int>>> state; // [plan][layer 0..|pi|][fluent]
    std::vector<std::vector<int>> enabled;            // [plan][step 1..|pi|], stored 0-based
    std::vector<std::vector<std::vector<int>>> pre_unsat;  // [plan][step][fluent]

    std::size_t num_modification_vars() const;
};

// The three edit kinds, each a set of (action index, fluent id) pairs over
// the original (unaugmented) action list.
struct ModificationSet {
    std::set<std::pair<int, int>> pre_additions;
    std::set<std::pair<int, int>> add_removals;
    std::set<std::pair<int, int>> del_additions;

    std::size_t cardinality() const {
        return pre_additions.size() + add_removals.size() + del_additions.size();
    }
    bool empty() const { return cardinality() == 0; }
};

struct StageTimings {
    double enum_s = 0.0;
    double ilp_s = 0.0;
    double verify_s = 0.0;
    double total_s = 0.0;
};

struct ShieldReport {
    PlanSet plans;                      // plans the model was built from (pre-augmentation)
    bool enumeration_complete = false;
    ModificationSet modifications;
    SolveStats solver_stats;
    long long objective = 0;
    bool verified_unsolvable = false;
    bool success = false;  // == verified_unsolvable
    StageTimings timings;
    std::vector<std::string> notes;
};

struct Budgets {
    std::uint64_t enum_node_budget = 10'000'000;
    std::uint64_t bfs_state_cap = 10'000'000;
    double time_limit_s = 1800.0;
};

// Adds the artificial goal-achievement action (pre = G, no effects, cost 0)
// and appends it to every plan, so that goal satisfaction becomes action
// enabledness in the model.
std::pair<PlanningTask, std::vector<Plan>> append_goal_action(const PlanningTask& task,
                                                              const std::vector<Plan>& plans);

// Builds the 0-1 model whose optimum is the minimum number of action edits
// blocking every given plan. Expects the augmented task/plans from
// append_goal_action. Throws EmptyPlanSetError when there is nothing to
// block and UnshieldableError when a plan consists of the goal action alone
// (the empty plan solves the task, which action edits cannot prevent).
std::pair<IlpModel, VarIndexMap> build_shield_model(const PlanningTask& augmented_task,
                                                    const std::vector<Plan>& augmented_plans);

ModificationSet extract_modifications(const VarIndexMap& varmap,
                                      const std::vector<std::uint8_t>& assignment);

// A' = A with preconditions added, add effects removed, delete effects added.
// Throws RangeError when an edit falls outside its legal range.
PlanningTask apply_modifications(const PlanningTask& task, const ModificationSet& mods);

// Full pipeline: enumerate -> append goal action -> build model -> solve ->
// extract -> apply -> BFS unsolvability check. Errors are rethrown as
// StageError with stage one of: enum-budget, ilp-timeout, verify-budget.
ShieldReport shield(const PlanningTask& task, const EnumerationConfig& config,
                    const Budgets& budgets = {});

// One edit per line: "ACTION <name>: +pre <fluent>" / "-add <fluent>" / "+del <fluent>".
std::string modifications_to_diff(const PlanningTask& task, const ModificationSet& mods);

std::string report_to_json(const PlanningTask& task, const ShieldReport& report);

}  // namespace planshield
