#include "planshield/plan_enum.hpp"

#include <algorithm>
#include <unordered_set>

namespace planshield {

namespace {

struct DfsContext {
    const PlanningTask& task;
    const EnumerationConfig& config;
    std::vector<State> path;
    std::unordered_set<Bitset, BitsetHash> on_path;
    std::vector<int> steps;
    double cost = 0.0;
    std::uint64_t expanded = 0;
    std::vector<Plan> found;
    bool exhausted = true;

    explicit DfsContext(const PlanningTask& t, const EnumerationConfig& c) : task(t), config(c) {}

    bool budget_ok() {
        if (++expanded > config.node_budget) return false;
        if (config.deadline && (expanded & 1023u) == 0 &&
            std::chrono::steady_clock::now() > *config.deadline)
            return false;
        return true;
    }

    // Returns false when the budget tripped somewhere below. Works on a copy
    // of the current state: path reallocates as the recursion deepens.
    bool expand() {
        if (!budget_ok()) {
            exhausted = false;
            return false;
        }
        const State state = path.back();
        if (task.goal.subset_of(state)) found.push_back(Plan{steps, cost});

        for (std::size_t ai = 0; ai < task.actions.size(); ++ai) {
            const GroundAction& a = task.actions[ai];
            if (!applicable(state, a)) continue;
            State next = state;
            next.subtract(a.del);
            next |= a.add;
            if (on_path.contains(next)) continue;  // would revisit a state on this path

            path.push_back(next);
            on_path.insert(next);
            steps.push_back(static_cast<int>(ai));
            cost += a.cost;
            const bool ok = expand();
            cost -= a.cost;
            steps.pop_back();
            on_path.erase(path.back());
            path.pop_back();
            if (!ok) return false;
        }
        return true;
    }
};

bool plan_order_less(const PlanningTask& task, const Plan& a, const Plan& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.steps.size() != b.steps.size()) return a.steps.size() < b.steps.size();
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
        const std::string& na = task.actions[static_cast<std::size_t>(a.steps[i])].name;
        const std::string& nb = task.actions[static_cast<std::size_t>(b.steps[i])].name;
        if (na != nb) return na < nb;
    }
    return false;
}

PlanSet assemble(const PlanningTask& task, std::vector<Plan> plans, bool exhausted,
                 const EnumerationConfig& config) {
    std::sort(plans.begin(), plans.end(),
              [&](const Plan& a, const Plan& b) { return plan_order_less(task, a, b); });
    bool truncated = false;
    if (config.top_k && plans.size() > static_cast<std::size_t>(*config.top_k)) {
        plans.resize(static_cast<std::size_t>(*config.top_k));
        truncated = true;
    }
    PlanSet out;
    out.plans = std::move(plans);
    out.complete = exhausted && !truncated;
    out.action_support = Bitset(task.num_actions());
    for (const Plan& p : out.plans)
        for (int s : p.steps) out.action_support.set(static_cast<std::size_t>(s));
    return out;
}

}  // namespace

PlanSet enumerate_simple_plans(const PlanningTask& task, const EnumerationConfig& config) {
    if (config.top_k && *config.top_k < 1)
        throw RangeError("enumerate_simple_plans: top_k must be >= 1");

    DfsContext ctx(task, config);
    ctx.path.push_back(task.init);
    ctx.on_path.insert(task.init);
    const bool ok = ctx.expand();

    PlanSet result = assemble(task, std::move(ctx.found), ctx.exhausted, config);
    if (!ok)
        throw BudgetExceededError("enumerate_simple_plans: node budget of " +
                                      std::to_string(config.node_budget) + " exceeded",
                                  std::move(result));
    return result;
}

bool verify_plan(const PlanningTask& task, const Plan& plan) {
    SimulationOutcome sim;
    try {
        sim = simulate_plan(task, plan);
    } catch (const RangeError&) {
        return false;
    }
    if (!sim.valid) return false;
    if (!task.goal.subset_of(sim.final_state())) return false;
    std::unordered_set<Bitset, BitsetHash> seen;
    for (const State& s : sim.trace)
        if (!seen.insert(s).second) return false;
    return true;
}

}  // namespace planshield
