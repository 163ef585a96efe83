#include <chrono>

#include <json.hpp>

#include "planshield/shield.hpp"

namespace planshield {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

ShieldReport shield(const PlanningTask& task, const EnumerationConfig& config,
                    const Budgets& budgets) {
    const auto t_start = std::chrono::steady_clock::now();
    const auto deadline = t_start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                        std::chrono::duration<double>(budgets.time_limit_s));
    ShieldReport report;

    // stage 1: plan enumeration
    {
        const auto t0 = std::chrono::steady_clock::now();
        EnumerationConfig cfg = config;
        cfg.node_budget = std::min<std::uint64_t>(cfg.node_budget, budgets.enum_node_budget);
        cfg.deadline = deadline;
        try {
            report.plans = enumerate_simple_plans(task, cfg);
        } catch (const BudgetExceededError& e) {
            throw StageError("enum-budget", e.what());
        }
        report.timings.enum_s = seconds_since(t0);
        report.enumeration_complete = report.plans.complete;
    }

    if (report.plans.plans.empty()) {
        // Nothing reaches the flawed state; verify and report as-is.
        const auto t0 = std::chrono::steady_clock::now();
        try {
            report.verified_unsolvable =
                !goal_reachable(task, {budgets.bfs_state_cap, deadline});
        } catch (const ResourceLimitError& e) {
            throw StageError("verify-budget", e.what());
        }
        report.timings.verify_s = seconds_since(t0);
        report.success = report.verified_unsolvable;
        report.notes.push_back("no plans found");
        report.timings.total_s = seconds_since(t_start);
        return report;
    }

    // stage 2: build and solve the modification model
    ModificationSet mods;
    {
        const auto t0 = std::chrono::steady_clock::now();
        auto [augmented_task, augmented_plans] = append_goal_action(task, report.plans.plans);
        auto [model, varmap] = build_shield_model(augmented_task, augmented_plans);
        const double remaining =
            std::max(0.0, budgets.time_limit_s - seconds_since(t_start));
        SolveResult result;
        try {
            result = solve(model, remaining);
        } catch (const IlpTimeoutError& e) {
            throw StageError("ilp-timeout", e.what());
        }
        if (result.status != SolveStatus::Optimal)
            throw StageError("ilp", "shielding model infeasible (internal error)");
        mods = extract_modifications(varmap, result.assignment);
        report.modifications = mods;
        report.solver_stats = result.stats;
        report.objective = result.objective;
        report.timings.ilp_s = seconds_since(t0);
    }

    // stage 3: verify unsolvability of the modified task
    {
        const auto t0 = std::chrono::steady_clock::now();
        const PlanningTask modified = apply_modifications(task, mods);
        try {
            report.verified_unsolvable =
                !goal_reachable(modified, {budgets.bfs_state_cap, deadline});
        } catch (const ResourceLimitError& e) {
            throw StageError("verify-budget", e.what());
        }
        report.timings.verify_s = seconds_since(t0);
        report.success = report.verified_unsolvable;
    }

    report.timings.total_s = seconds_since(t_start);
    return report;
}

std::string modifications_to_diff(const PlanningTask& task, const ModificationSet& mods) {
    std::string out;
    auto emit = [&](const std::set<std::pair<int, int>>& edits, const char* op) {
        for (const auto& [a, f] : edits) {
            out += "ACTION " + task.actions[static_cast<std::size_t>(a)].name + ": " + op + " " +
                   task.fluent_name(f) + "\n";
        }
    };
    emit(mods.pre_additions, "+pre");
    emit(mods.add_removals, "-add");
    emit(mods.del_additions, "+del");
    return out;
}

std::string report_to_json(const PlanningTask& task, const ShieldReport& report) {
    nlohmann::json j;

    nlohmann::json plans = nlohmann::json::array();
    for (const Plan& p : report.plans.plans) {
        nlohmann::json steps = nlohmann::json::array();
        for (int s : p.steps) steps.push_back(task.actions[static_cast<std::size_t>(s)].name);
        plans.push_back({{"steps", steps}, {"cost", p.cost}});
    }
    j["plans"] = plans;
    j["num_plans"] = report.plans.plans.size();
    j["enumeration_complete"] = report.enumeration_complete;

    auto edits = [&](const std::set<std::pair<int, int>>& set) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [a, f] : set)
            arr.push_back({{"action", task.actions[static_cast<std::size_t>(a)].name},
                           {"fluent", task.fluent_name(f)}});
        return arr;
    };
    j["modifications"] = {{"pre_additions", edits(report.modifications.pre_additions)},
                          {"add_removals", edits(report.modifications.add_removals)},
                          {"del_additions", edits(report.modifications.del_additions)}};
    j["num_modifications"] = report.modifications.cardinality();
    j["diff"] = modifications_to_diff(task, report.modifications);
    j["solver"] = {{"nodes", report.solver_stats.nodes},
                   {"seconds", report.solver_stats.seconds},
                   {"objective", report.objective}};
    j["verified_unsolvable"] = report.verified_unsolvable;
    j["success"] = report.success;
    j["timings"] = {{"enum_s", report.timings.enum_s},
                    {"ilp_s", report.timings.ilp_s},
                    {"verify_s", report.timings.verify_s},
                    {"total_s", report.timings.total_s}};
    j["notes"] = report.notes;
    return j.dump(2) + "\n";
}

}  // namespace planshield
