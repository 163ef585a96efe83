#include "planshield/strips.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace planshield {

std::optional<int> PlanningTask::fluent_id(std::string_view name) const {
    for (const auto& f : fluents)
        if (f.name == name) return f.id;
    return std::nullopt;
}

std::optional<int> PlanningTask::action_id(std::string_view name) const {
    for (std::size_t i = 0; i < actions.size(); ++i)
        if (actions[i].name == name) return static_cast<int>(i);
    return std::nullopt;
}

GroundAction make_action(std::size_t num_fluents, std::string name, const std::vector<int>& pre,
                         const std::vector<int>& add, const std::vector<int>& del, double cost) {
    auto check = [&](const std::vector<int>& ids, const char* field) {
        for (int id : ids)
            if (id < 0 || static_cast<std::size_t>(id) >= num_fluents)
                throw RangeError("action '" + name + "': " + field + " fluent id " +
                                 std::to_string(id) + " outside universe of size " +
                                 std::to_string(num_fluents));
    };
    check(pre, "pre");
    check(add, "add");
    check(del, "del");
    GroundAction a;
    a.name = std::move(name);
    a.pre = Bitset::from_indices(num_fluents, pre);
    a.add = Bitset::from_indices(num_fluents, add);
    a.del = Bitset::from_indices(num_fluents, del);
    a.cost = cost;
    if (a.add.intersects(a.del))
        throw RangeError("action '" + a.name + "': add and delete effects overlap");
    if (cost < 0) throw RangeError("action '" + a.name + "': negative cost");
    return a;
}

std::vector<std::string> validate_task(const PlanningTask& task) {
    std::vector<std::string> violations;
    const std::size_t n = task.num_fluents();

    for (std::size_t i = 0; i < task.fluents.size(); ++i) {
        if (task.fluents[i].id != static_cast<int>(i))
            violations.push_back("fluent at position " + std::to_string(i) + " has id " +
                                 std::to_string(task.fluents[i].id) + " (ids must be 0..|F|-1)");
    }
    {
        std::unordered_set<std::string> seen;
        for (const auto& f : task.fluents)
            if (!seen.insert(f.name).second)
                violations.push_back("duplicate fluent name '" + f.name + "'");
    }
    {
        std::unordered_set<std::string> seen;
        for (const auto& a : task.actions)
            if (!seen.insert(a.name).second)
                violations.push_back("duplicate action name '" + a.name + "'");
    }

    // A set indexes the universe correctly iff it is sized |F|; a larger set
    // can carry out-of-range ids, which is the actual violation to report.
    auto check_set = [&](const Bitset& s, const std::string& what) {
        if (s.size() == n) return true;
        bool out_of_universe = false;
        s.for_each([&](std::size_t i) { out_of_universe |= i >= n; });
        if (out_of_universe)
            violations.push_back(what + " fluent out of universe");
        else
            violations.push_back(what + " sized for a universe of " + std::to_string(s.size()) +
                                 " fluents, task has " + std::to_string(n));
        return false;
    };

    for (const auto& a : task.actions) {
        const bool sized = check_set(a.pre, "pre of action '" + a.name + "'") &
                           check_set(a.add, "add of action '" + a.name + "'") &
                           check_set(a.del, "del of action '" + a.name + "'");
        if (!sized) continue;
        if (a.add.intersects(a.del))
            violations.push_back("action '" + a.name + "': add and delete effects overlap");
        if (a.cost < 0) violations.push_back("action '" + a.name + "': negative cost");
    }
    check_set(task.init, "init");
    check_set(task.goal, "goal");
    return violations;
}

bool applicable(const State& state, const GroundAction& action) {
    return action.pre.subset_of(state);
}

State apply(const State& state, const GroundAction& action) {
    if (!applicable(state, action)) {
        Bitset missing = action.pre;
        missing.subtract(state);
        std::string names;
        missing.for_each([&](std::size_t i) {
            if (!names.empty()) names += ", ";
            names += std::to_string(i);
        });
        throw InapplicableError("action '" + action.name +
                                "' not applicable: missing precondition ids {" + names + "}");
    }
    State next = state;
    next.subtract(action.del);
    next |= action.add;
    return next;
}

SimulationOutcome simulate_plan(const PlanningTask& task, const Plan& plan,
                                const std::vector<GroundAction>* actions_override) {
    const std::vector<GroundAction>& actions = actions_override ? *actions_override : task.actions;

    SimulationOutcome out;
    out.trace.reserve(plan.steps.size() + 1);
    out.trace.push_back(task.init);

    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        const int idx = plan.steps[i];
        if (idx < 0 || static_cast<std::size_t>(idx) >= actions.size())
            throw RangeError("plan step " + std::to_string(i + 1) + " references action index " +
                             std::to_string(idx) + ", action list has " +
                             std::to_string(actions.size()));
        const GroundAction& a = actions[static_cast<std::size_t>(idx)];
        const State& cur = out.trace.back();
        if (!applicable(cur, a)) {
            out.valid = false;
            out.blocked_step = static_cast<int>(i) + 1;
            out.missing = a.pre;
            out.missing.subtract(cur);
            return out;
        }
        State next = cur;
        next.subtract(a.del);
        next |= a.add;
        out.trace.push_back(std::move(next));
    }
    out.valid = true;
    out.blocked_step = 0;
    out.missing = Bitset(task.num_fluents());
    return out;
}

bool goal_reachable(const PlanningTask& task, const ReachabilityOptions& opts) {
    if (task.goal.subset_of(task.init)) return true;

    std::unordered_set<Bitset, BitsetHash> visited;
    visited.reserve(1024);
    std::deque<State> open;
    visited.insert(task.init);
    open.push_back(task.init);

    std::uint64_t since_clock_check = 0;
    while (!open.empty()) {
        State s = std::move(open.front());
        open.pop_front();

        for (const auto& a : task.actions) {
            if (!applicable(s, a)) continue;
            State next = s;
            next.subtract(a.del);
            next |= a.add;
            if (visited.contains(next)) continue;
            if (task.goal.subset_of(next)) return true;
            if (visited.size() >= opts.state_cap)
                throw ResourceLimitError("goal_reachable: visited-state cap of " +
                                         std::to_string(opts.state_cap) +
                                         " exceeded, reachability unknown");
            visited.insert(next);
            open.push_back(std::move(next));
        }
        if (opts.deadline && (++since_clock_check & 1023u) == 0 &&
            std::chrono::steady_clock::now() > *opts.deadline)
            throw ResourceLimitError("goal_reachable: time budget exceeded, reachability unknown");
    }
    return false;
}

}  // namespace planshield
