#include <doctest.h>

#include "planshield/plan_enum.hpp"
#include "planshield/shield.hpp"
#include "testutil.hpp"

using namespace planshield;
using namespace testutil;

namespace {

// Builds the workflow model plus everything around it once.
struct WorkflowModel {
    PlanningTask task = workflow_task();
    PlanSet plans;
    PlanningTask augmented;
    std::vector<Plan> augmented_plans;
    IlpModel model;
    VarIndexMap varmap;

    WorkflowModel() {
        plans = enumerate_simple_plans(task);
        auto [at, ap] = append_goal_action(task, plans.plans);
        augmented = std::move(at);
        augmented_plans = std::move(ap);
        auto [m, vm] = build_shield_model(augmented, augmented_plans);
        model = std::move(m);
        varmap = std::move(vm);
    }
};

}  // namespace

TEST_CASE("append_goal_action: plans gain one final step, still valid") {
    const PlanningTask task = workflow_task();
    const PlanSet plans = enumerate_simple_plans(task);
    auto [augmented, augmented_plans] = append_goal_action(task, plans.plans);

    CHECK(augmented.num_actions() == task.num_actions() + 1);
    const GroundAction& goal_action = augmented.actions.back();
    CHECK(goal_action.pre == task.goal);
    CHECK(goal_action.add.none());
    CHECK(goal_action.del.none());
    CHECK(goal_action.cost == 0.0);

    REQUIRE(augmented_plans.size() == 2);
    for (const Plan& p : augmented_plans) {
        CHECK(p.steps.size() == 4);
        CHECK(p.steps.back() == static_cast<int>(augmented.num_actions()) - 1);
        CHECK(simulate_plan(augmented, p).valid);
    }

    // goal within init: the augmented empty plan is just the goal action
    auto [aug2, plans2] = append_goal_action(task, {Plan{}});
    CHECK(plans2.front().steps.size() == 1);
    (void)aug2;
}

TEST_CASE("build_shield_model: variable counts match the range rules") {
    WorkflowModel w;

    // state variables: 2 plans x 4 layers x 6 fluents beyond layer 0
    std::size_t state_vars = 0, layer0 = 0;
    for (const auto& plan_layers : w.varmap.state)
        for (std::size_t layer = 0; layer < plan_layers.size(); ++layer)
            for (int v : plan_layers[layer]) {
                if (v < 0) continue;
                if (layer == 0)
                    ++layer0;
                else
                    ++state_vars;
            }
    CHECK(state_vars == 48);
    CHECK(layer0 == 12);

    std::size_t enabled = 0;
    for (const auto& per_plan : w.varmap.enabled) enabled += per_plan.size();
    CHECK(enabled == 8);

    // modification variables only on the three original actions: 10 + 11 + 10
    CHECK(w.varmap.num_modification_vars() == 31);
    const int goal_action = w.varmap.goal_action;
    for (std::size_t f = 0; f < w.task.num_fluents(); ++f) {
        CHECK(w.varmap.pre[static_cast<std::size_t>(goal_action)][f] == -1);
        CHECK(w.varmap.addrm[static_cast<std::size_t>(goal_action)][f] == -1);
        CHECK(w.varmap.deladd[static_cast<std::size_t>(goal_action)][f] == -1);
    }
    CHECK(w.model.objective.size() == 31);
}

TEST_CASE("build_shield_model: degenerate inputs") {
    const PlanningTask task = workflow_task();
    auto [augmented, no_plans] = append_goal_action(task, {});
    CHECK_THROWS_AS(build_shield_model(augmented, no_plans), EmptyPlanSetError);

    auto [aug2, empty_plan] = append_goal_action(task, {Plan{}});
    CHECK_THROWS_AS(build_shield_model(aug2, empty_plan), UnshieldableError);
}

TEST_CASE("single-action task: optimum is one modification") {
    // one action with empty precondition whose add effect is the goal
    PlanningTask task;
    task.fluents = {Fluent{0, "f0"}, Fluent{1, "goal_f"}};
    task.actions.push_back(make_action(2, "reach", {}, {1}, {}));
    task.init = Bitset(2);
    task.goal = Bitset(2);
    task.goal.set(1);

    const PlanSet plans = enumerate_simple_plans(task);
    REQUIRE(plans.size() == 1);
    auto [augmented, augmented_plans] = append_goal_action(task, plans.plans);
    auto [model, varmap] = build_shield_model(augmented, augmented_plans);
    const SolveResult result = solve(model);
    REQUIRE(result.status == SolveStatus::Optimal);
    CHECK(result.objective == 1);

    // brute force over all 0- and 1-edit sets agrees
    const auto universe = edit_universe(task, plans.action_support);
    const auto smaller = min_edit_set_below(universe, 1, [&](const std::vector<Edit>& edits) {
        return blocks_all(task, plans.plans, to_modset(edits));
    });
    CHECK_FALSE(smaller.has_value());
    const ModificationSet mods = extract_modifications(varmap, result.assignment);
    CHECK(blocks_all(task, plans.plans, mods));
}

TEST_CASE("extract_modifications: cardinality equals the objective, empty when all-zero") {
    WorkflowModel w;
    const std::vector<std::uint8_t> zeros(w.model.vars.size(), 0);
    CHECK(extract_modifications(w.varmap, zeros).cardinality() == 0);

    const SolveResult result = solve(w.model);
    REQUIRE(result.status == SolveStatus::Optimal);
    const ModificationSet mods = extract_modifications(w.varmap, result.assignment);
    CHECK(mods.cardinality() == static_cast<std::size_t>(result.objective));
}

TEST_CASE("apply_modifications: paper's single fixes make the workflow unsolvable") {
    const PlanningTask task = workflow_task();

    CHECK(isomorphic(task, apply_modifications(task, ModificationSet{})));

    const int direct = *task.action_id("direct_approval");
    const int escalation = *task.action_id("escalation");
    const int safe = *task.fluent_id("safe_client");
    const int escalated = *task.fluent_id("escalated");

    ModificationSet add_pre;
    add_pre.pre_additions.insert({direct, safe});
    CHECK_FALSE(goal_reachable(apply_modifications(task, add_pre)));

    ModificationSet drop_add;
    drop_add.add_removals.insert({escalation, escalated});
    CHECK_FALSE(goal_reachable(apply_modifications(task, drop_add)));

    ModificationSet bad;
    bad.add_removals.insert({direct, safe});  // not an add effect of direct_approval
    CHECK_THROWS_AS(apply_modifications(task, bad), RangeError);
}

TEST_CASE("shield: workflow end to end, one edit, verified unsolvable") {
    const PlanningTask task = workflow_task();
    const ShieldReport report = shield(task, EnumerationConfig{});
    CHECK(report.enumeration_complete);
    CHECK(report.plans.size() == 2);
    CHECK(report.modifications.cardinality() == 1);
    CHECK(report.verified_unsolvable);
    CHECK(report.success);
    CHECK(report.success == report.verified_unsolvable);

    const std::string diff = modifications_to_diff(task, report.modifications);
    CHECK(diff.find("ACTION ") == 0);
    const std::string json = report_to_json(task, report);
    CHECK(json.find("\"success\": true") != std::string::npos);
    CHECK(json.find("\"num_modifications\": 1") != std::string::npos);
}

TEST_CASE("shield: already-unsolvable task reports success with a note") {
    PlanningTask task;
    task.fluents = {Fluent{0, "f0"}, Fluent{1, "f1"}};
    task.actions.push_back(make_action(2, "noop_like", {0}, {1}, {}));
    task.init = Bitset(2);  // nothing holds, the action never fires
    task.goal = Bitset(2);
    task.goal.set(1);

    const ShieldReport report = shield(task, EnumerationConfig{});
    CHECK(report.plans.plans.empty());
    CHECK(report.modifications.empty());
    CHECK(report.success);
    REQUIRE(report.notes.size() == 1);
    CHECK(report.notes.front() == "no plans found");
}

TEST_CASE("shield: goal within init is unshieldable") {
    PlanningTask task;
    task.fluents = {Fluent{0, "f0"}};
    task.init = Bitset(1);
    task.init.set(0);
    task.goal = task.init;
    CHECK_THROWS_AS(shield(task, EnumerationConfig{}), UnshieldableError);
}

TEST_CASE("blocking soundness: every input plan is blocked under the optimum") {
    std::mt19937_64 rng(515);
    int checked = 0;
    for (int trial = 0; trial < 60 && checked < 25; ++trial) {
        const PlanningTask task = random_task(rng, 8, 5);
        if (task.goal.subset_of(task.init)) continue;
        EnumerationConfig config;
        config.node_budget = 50'000;
        PlanSet plans;
        try {
            plans = enumerate_simple_plans(task, config);
        } catch (const BudgetExceededError&) {
            continue;
        }
        if (plans.plans.empty() || plans.size() > 12) continue;

        auto [augmented, augmented_plans] = append_goal_action(task, plans.plans);
        auto [model, varmap] = build_shield_model(augmented, augmented_plans);
        const SolveResult result = solve(model, 20.0);
        REQUIRE(result.status == SolveStatus::Optimal);
        const ModificationSet mods = extract_modifications(varmap, result.assignment);
        const PlanningTask modified = apply_modifications(task, mods);
        for (const Plan& p : plans.plans) {
            const SimulationOutcome sim = simulate_plan(task, p, &modified.actions);
            const bool survives = sim.valid && task.goal.subset_of(sim.final_state());
            CHECK_FALSE(survives);
        }
        ++checked;
    }
    CHECK(checked >= 10);
}

TEST_CASE("trace variables equal the replayed states for pinned modification sets") {
    std::mt19937_64 rng(616);
    int checked = 0;
    for (int trial = 0; trial < 80 && checked < 12; ++trial) {
        const PlanningTask task = random_task(rng, 7, 4);
        if (task.goal.subset_of(task.init)) continue;
        EnumerationConfig config;
        config.node_budget = 20'000;
        PlanSet plans;
        try {
            plans = enumerate_simple_plans(task, config);
        } catch (const BudgetExceededError&) {
            continue;
        }
        if (plans.plans.empty() || plans.size() > 6) continue;

        auto [augmented, augmented_plans] = append_goal_action(task, plans.plans);
        auto [model, varmap] = build_shield_model(augmented, augmented_plans);

        // pick a random edit set over the variable map and pin those variables
        IlpModel pinned = model;
        ModificationSet mods;
        for (std::size_t a = 0; a < task.num_actions(); ++a) {
            auto maybe_pin = [&](const std::vector<std::vector<int>>& table,
                                 std::set<std::pair<int, int>>& out) {
                for (std::size_t f = 0; f < task.num_fluents(); ++f) {
                    const int v = table[a][f];
                    if (v < 0) continue;
                    const bool on = rand_chance(rng, 0.1);
                    pinned.add_constraint("pin_" + std::to_string(v), {{1, v}}, Rel::Eq, on ? 1 : 0);
                    if (on) out.insert({static_cast<int>(a), static_cast<int>(f)});
                }
            };
            maybe_pin(varmap.pre, mods.pre_additions);
            maybe_pin(varmap.addrm, mods.add_removals);
            maybe_pin(varmap.deladd, mods.del_additions);
        }
        pinned.objective.clear();  // any feasible completion will do
        const SolveResult result = solve(pinned, 20.0);
        if (result.status != SolveStatus::Optimal) continue;  // edits may not block every plan

        // decode each plan's trace layers and compare with the replay
        const PlanningTask modified = apply_modifications(task, mods);
        auto [aug_mod, aug_mod_plans] = append_goal_action(modified, plans.plans);
        for (std::size_t p = 0; p < aug_mod_plans.size(); ++p) {
            const SimulationOutcome sim = simulate_plan(aug_mod, aug_mod_plans[p], &aug_mod.actions);
            const std::size_t decode_until =
                sim.valid ? sim.trace.size() : static_cast<std::size_t>(sim.blocked_step);
            for (std::size_t layer = 0; layer < decode_until; ++layer)
                for (std::size_t f = 0; f < task.num_fluents(); ++f) {
                    const bool model_bit =
                        result.assignment[static_cast<std::size_t>(varmap.state[p][layer][f])];
                    CHECK(model_bit == sim.trace[layer].test(f));
                }
        }
        ++checked;
    }
    CHECK(checked >= 5);
}

TEST_CASE("model optimum equals the brute-force minimum blocking set") {
    std::mt19937_64 rng(717);
    int checked = 0;
    for (int trial = 0; trial < 120 && checked < 20; ++trial) {
        const PlanningTask task = random_task(rng, 7, 4);
        if (task.goal.subset_of(task.init)) continue;
        EnumerationConfig config;
        config.node_budget = 20'000;
        PlanSet plans;
        try {
            plans = enumerate_simple_plans(task, config);
        } catch (const BudgetExceededError&) {
            continue;
        }
        if (plans.plans.empty() || plans.size() > 6) continue;

        auto [augmented, augmented_plans] = append_goal_action(task, plans.plans);
        auto [model, varmap] = build_shield_model(augmented, augmented_plans);
        const SolveResult result = solve(model, 30.0);
        REQUIRE(result.status == SolveStatus::Optimal);

        const auto universe = edit_universe(task, plans.action_support);
        const auto below =
            min_edit_set_below(universe, static_cast<int>(result.objective),
                               [&](const std::vector<Edit>& edits) {
                                   return blocks_all(task, plans.plans, to_modset(edits));
                               });
        CHECK_FALSE(below.has_value());  // nothing smaller blocks everything
        CHECK(blocks_all(task, plans.plans, extract_modifications(varmap, result.assignment)));
        ++checked;
    }
    CHECK(checked >= 10);
}

TEST_CASE("monotone applicability under shrinking modifications") {
    std::mt19937_64 rng(818);
    for (int trial = 0; trial < 500; ++trial) {
        const PlanningTask task = random_task(rng, 8, 4);
        Bitset all(task.num_actions());
        for (std::size_t i = 0; i < task.num_actions(); ++i) all.set(i);
        const auto universe = edit_universe(task, all);
        if (universe.empty()) continue;
        const Edit edit = universe[rand_below(rng, universe.size())];
        const PlanningTask modified = apply_modifications(task, to_modset({edit}));

        State s(task.num_fluents());
        for (std::size_t f = 0; f < task.num_fluents(); ++f)
            if (rand_chance(rng, 0.5)) s.set(f);
        const std::size_t a = rand_below(rng, task.num_actions());
        const GroundAction& original = task.actions[a];
        const GroundAction& edited = modified.actions[a];

        if (applicable(s, edited)) {
            CHECK(applicable(s, original));
            CHECK(apply(s, edited).subset_of(apply(s, original)));
        }
    }
}
