#include <algorithm>

#include "planshield/shield.hpp"

namespace planshield {

std::size_t VarIndexMap::num_modification_vars() const {
    std::size_t n = 0;
    auto count = [&n](const std::vector<std::vector<int>>& table) {
        for (const auto& row : table)
            for (int v : row) n += v >= 0;
    };
    count(pre);
    count(addrm);
    count(deladd);
    return n;
}

std::pair<PlanningTask, std::vector<Plan>> append_goal_action(const PlanningTask& task,
                                                              const std::vector<Plan>& plans) {
    PlanningTask augmented = task;
    GroundAction goal_action;
    goal_action.name = "goal_action";
    while (augmented.action_id(goal_action.name)) goal_action.name += "_";
    goal_action.pre = task.goal;
    goal_action.add = Bitset(task.num_fluents());
    goal_action.del = Bitset(task.num_fluents());
    goal_action.cost = 0.0;
    augmented.actions.push_back(std::move(goal_action));

    const int goal_idx = static_cast<int>(augmented.actions.size()) - 1;
    std::vector<Plan> augmented_plans = plans;
    for (Plan& p : augmented_plans) p.steps.push_back(goal_idx);
    return {std::move(augmented), std::move(augmented_plans)};
}

std::pair<IlpModel, VarIndexMap> build_shield_model(const PlanningTask& augmented_task,
                                                    const std::vector<Plan>& augmented_plans) {
    const std::size_t nf = augmented_task.num_fluents();
    const std::size_t na = augmented_task.num_actions();
    const int goal_action = static_cast<int>(na) - 1;

    if (augmented_plans.empty())
        throw EmptyPlanSetError(
            "build_shield_model: no plans to block (task is already unsolvable)");
    for (const Plan& p : augmented_plans)
        if (p.steps.size() <= 1)
            throw UnshieldableError(
                "unshieldable: empty plan solves task (goal holds in the initial state)");

    IlpModel model;
    VarIndexMap map;
    map.goal_action = goal_action;
    map.pre.assign(na, std::vector<int>(nf, -1));
    map.addrm.assign(na, std::vector<int>(nf, -1));
    map.deladd.assign(na, std::vector<int>(nf, -1));

    // Action support over the augmented plans; only these actions get
    // modification variables, and the goal action gets none at all.
    Bitset support(na);
    for (const Plan& p : augmented_plans)
        for (int s : p.steps) {
            if (s < 0 || static_cast<std::size_t>(s) >= na)
                throw RangeError("build_shield_model: plan step out of range");
            support.set(static_cast<std::size_t>(s));
        }

    for (std::size_t a = 0; a < na; ++a) {
        if (!support.test(a) || static_cast<int>(a) == goal_action) continue;
        const GroundAction& act = augmented_task.actions[a];
        for (std::size_t f = 0; f < nf; ++f) {
            if (!act.pre.test(f))
                map.pre[a][f] = model.add_var("pre_a" + std::to_string(a) + "_f" + std::to_string(f));
        }
        for (std::size_t f = 0; f < nf; ++f) {
            if (act.add.test(f))
                map.addrm[a][f] =
                    model.add_var("addrm_a" + std::to_string(a) + "_f" + std::to_string(f));
        }
        for (std::size_t f = 0; f < nf; ++f) {
            if (!act.add.test(f) && !act.del.test(f))
                map.deladd[a][f] =
                    model.add_var("deladd_a" + std::to_string(a) + "_f" + std::to_string(f));
        }
    }

    const std::size_t np = augmented_plans.size();
    map.state.assign(np, {});
    map.enabled.assign(np, {});
    map.pre_unsat.assign(np, {});
    for (std::size_t p = 0; p < np; ++p) {
        const std::size_t len = augmented_plans[p].steps.size();
        map.state[p].assign(len + 1, std::vector<int>(nf, -1));
        for (std::size_t layer = 0; layer <= len; ++layer)
            for (std::size_t f = 0; f < nf; ++f)
                map.state[p][layer][f] = model.add_var("s_p" + std::to_string(p) + "_i" +
                                                       std::to_string(layer) + "_f" +
                                                       std::to_string(f));
        map.enabled[p].assign(len, -1);
        map.pre_unsat[p].assign(len, std::vector<int>(nf, -1));
        for (std::size_t i = 0; i < len; ++i) {
            map.enabled[p][i] =
                model.add_var("en_p" + std::to_string(p) + "_i" + std::to_string(i + 1));
            const int a = augmented_plans[p].steps[i];
            const GroundAction& act = augmented_task.actions[static_cast<std::size_t>(a)];
            for (std::size_t f = 0; f < nf; ++f) {
                // pre_unsat exists for original preconditions and wherever a
                // precondition could be added; for the goal action that is
                // exactly the goal fluents, which realizes goal persistence
                // structurally.
                if (act.pre.test(f) || map.pre[static_cast<std::size_t>(a)][f] >= 0)
                    map.pre_unsat[p][i][f] = model.add_var("u_p" + std::to_string(p) + "_i" +
                                                           std::to_string(i + 1) + "_f" +
                                                           std::to_string(f));
            }
        }
    }

    // Step convention: the action at 1-based position i reads state layer i-1
    // and writes layer i; enabled/pre_unsat are indexed by position i.
    for (std::size_t p = 0; p < np; ++p) {
        const Plan& plan = augmented_plans[p];
        const std::string ps = "p" + std::to_string(p);

        // initial layer pinned to I
        for (std::size_t f = 0; f < nf; ++f)
            model.add_constraint("init_" + ps + "_f" + std::to_string(f),
                                 {{1, map.state[p][0][f]}}, Rel::Eq,
                                 augmented_task.init.test(f) ? 1 : 0);

        for (std::size_t i = 0; i < plan.steps.size(); ++i) {
            const std::size_t a = static_cast<std::size_t>(plan.steps[i]);
            const GroundAction& act = augmented_task.actions[a];
            const std::string ss = ps + "_i" + std::to_string(i + 1);

            for (std::size_t f = 0; f < nf; ++f) {
                const std::string fs = ss + "_f" + std::to_string(f);
                const int s_prev = map.state[p][i][f];
                const int s_next = map.state[p][i + 1][f];
                const int u = map.pre_unsat[p][i][f];

                // precondition satisfaction
                if (act.pre.test(f)) {
                    // u = 1 - s_prev
                    model.add_constraint("unsat_eq_" + fs, {{1, u}, {1, s_prev}}, Rel::Eq, 1);
                } else if (map.pre[a][f] >= 0) {
                    const int pv = map.pre[a][f];
                    // u = pv AND (1 - s_prev)
                    model.add_constraint("unsat_lo_" + fs, {{1, u}, {-1, pv}, {1, s_prev}},
                                         Rel::Ge, 0);
                    model.add_constraint("unsat_hi1_" + fs, {{1, u}, {-1, pv}}, Rel::Le, 0);
                    model.add_constraint("unsat_hi2_" + fs, {{1, u}, {1, s_prev}}, Rel::Le, 1);
                }

                // effect propagation
                if (act.add.test(f)) {
                    const int rm = map.addrm[a][f];
                    // kept add forces s_next = 1; removed add forces the frame
                    model.add_constraint("add_keep_" + fs, {{1, s_next}, {1, rm}}, Rel::Ge, 1);
                    model.add_constraint("add_fr1_" + fs, {{1, s_next}, {-1, s_prev}, {1, rm}},
                                         Rel::Le, 1);
                    model.add_constraint("add_fr2_" + fs, {{1, s_prev}, {-1, s_next}, {1, rm}},
                                         Rel::Le, 1);
                } else if (act.del.test(f)) {
                    model.add_constraint("del_" + fs, {{1, s_next}}, Rel::Eq, 0);
                } else if (map.deladd[a][f] >= 0) {
                    const int dv = map.deladd[a][f];
                    // added delete forces s_next = 0; otherwise the frame
                    model.add_constraint("deladd_cap_" + fs, {{1, s_next}, {1, dv}}, Rel::Le, 1);
                    model.add_constraint("deladd_fr1_" + fs, {{1, s_next}, {-1, s_prev}, {-1, dv}},
                                         Rel::Le, 0);
                    model.add_constraint("deladd_fr2_" + fs, {{1, s_prev}, {-1, s_next}, {-1, dv}},
                                         Rel::Le, 0);
                } else {
                    // untouched fluent of the goal action: plain frame
                    model.add_constraint("frame_" + fs, {{1, s_next}, {-1, s_prev}}, Rel::Eq, 0);
                }
            }

            // enabled >= 1 - sum of pre_unsat
            std::vector<std::pair<long long, int>> terms{{1, map.enabled[p][i]}};
            for (std::size_t f = 0; f < nf; ++f)
                if (map.pre_unsat[p][i][f] >= 0) terms.push_back({1, map.pre_unsat[p][i][f]});
            model.add_constraint("enabled_" + ss, std::move(terms), Rel::Ge, 1);
        }

        // plan blocking: at least one step disabled
        std::vector<std::pair<long long, int>> blocking;
        blocking.reserve(plan.steps.size());
        for (std::size_t i = 0; i < plan.steps.size(); ++i)
            blocking.push_back({1, map.enabled[p][i]});
        model.add_constraint("block_" + ps, std::move(blocking), Rel::Le,
                             static_cast<long long>(plan.steps.size()) - 1);
    }

    // objective: total number of modifications
    for (const auto& table : {&map.pre, &map.addrm, &map.deladd})
        for (const auto& row : *table)
            for (int v : row)
                if (v >= 0) model.objective.push_back({1, v});
    std::sort(model.objective.begin(), model.objective.end(),
              [](const auto& x, const auto& y) { return x.second < y.second; });

    return {std::move(model), std::move(map)};
}

ModificationSet extract_modifications(const VarIndexMap& varmap,
                                      const std::vector<std::uint8_t>& assignment) {
    ModificationSet mods;
    auto collect = [&](const std::vector<std::vector<int>>& table,
                       std::set<std::pair<int, int>>& out) {
        for (std::size_t a = 0; a < table.size(); ++a)
            for (std::size_t f = 0; f < table[a].size(); ++f) {
                const int v = table[a][f];
                if (v >= 0 && assignment.at(static_cast<std::size_t>(v)))
                    out.insert({static_cast<int>(a), static_cast<int>(f)});
            }
    };
    collect(varmap.pre, mods.pre_additions);
    collect(varmap.addrm, mods.add_removals);
    collect(varmap.deladd, mods.del_additions);
    return mods;
}

PlanningTask apply_modifications(const PlanningTask& task, const ModificationSet& mods) {
    PlanningTask out = task;
    const std::size_t nf = task.num_fluents();
    auto check = [&](const std::pair<int, int>& edit, const char* kind) {
        const auto [a, f] = edit;
        if (a < 0 || static_cast<std::size_t>(a) >= task.num_actions() || f < 0 ||
            static_cast<std::size_t>(f) >= nf)
            throw RangeError(std::string("apply_modifications: ") + kind + " edit (" +
                             std::to_string(a) + ", " + std::to_string(f) + ") out of range");
    };
    for (const auto& edit : mods.pre_additions) {
        check(edit, "pre");
        GroundAction& act = out.actions[static_cast<std::size_t>(edit.first)];
        if (act.pre.test(static_cast<std::size_t>(edit.second)))
            throw RangeError("apply_modifications: fluent already a precondition of '" + act.name +
                             "'");
        act.pre.set(static_cast<std::size_t>(edit.second));
    }
    for (const auto& edit : mods.add_removals) {
        check(edit, "add-removal");
        GroundAction& act = out.actions[static_cast<std::size_t>(edit.first)];
        if (!act.add.test(static_cast<std::size_t>(edit.second)))
            throw RangeError("apply_modifications: fluent not an add effect of '" + act.name + "'");
        act.add.reset(static_cast<std::size_t>(edit.second));
    }
    for (const auto& edit : mods.del_additions) {
        check(edit, "del-addition");
        GroundAction& act = out.actions[static_cast<std::size_t>(edit.first)];
        if (act.add.test(static_cast<std::size_t>(edit.second)) ||
            act.del.test(static_cast<std::size_t>(edit.second)))
            throw RangeError(
                "apply_modifications: fluent is an existing effect of '" + act.name + "'");
        act.del.set(static_cast<std::size_t>(edit.second));
    }
    return out;
}

}  // namespace planshield
