#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "planshield/errors.hpp"

namespace planshield {

struct BinVar {
    int index = 0;
    std::string name;
};

enum class Rel { Le, Ge, Eq };

struct LinearConstraint {
    std::string name;
    std::vector<std::pair<long long, int>> terms;  // (coefficient, variable index)
    Rel rel = Rel::Le;
    long long bound = 0;
};

// Pure 0-1 minimization model with integer coefficients and a non-negative
// objective (every term weight in the shielding objective is 1).
struct IlpModel {
    std::vector<BinVar> vars;
    std::vector<LinearConstraint> constraints;
    std::vector<std::pair<long long, int>> objective;

    int add_var(std::string name);
    void add_constraint(std::string name, std::vector<std::pair<long long, int>> terms, Rel rel,
                        long long bound);
    std::vector<std::string> validate() const;
};

struct SolveStats {
    std::uint64_t nodes = 0;  // branch decisions explored
    double seconds = 0.0;
};

enum class SolveStatus { Optimal, Infeasible };

struct SolveResult {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<std::uint8_t> assignment;  // per variable, only meaningful for Optimal
    long long objective = 0;
    SolveStats stats;
};

struct Incumbent {
    std::vector<std::uint8_t> assignment;
    long long objective = 0;
};

struct IlpTimeoutError : Error {
    IlpTimeoutError(const std::string& msg, std::optional<Incumbent> incumbent_, SolveStats stats_)
        : Error(msg), incumbent(std::move(incumbent_)), stats(stats_) {}
    std::optional<Incumbent> incumbent;  // best feasible found before the timeout, not optimal
    SolveStats stats;
};

// Exact depth-first branch and bound. Branches in variable creation order,
// value 0 before 1; per-constraint interval propagation fixes forced
// variables; a node is pruned when its fixed objective already reaches the
// incumbent. Among equal-objective optima the reported assignment is the
// lexicographically smallest in branch order. Deterministic.
SolveResult solve(const IlpModel& model, double time_budget_s = 1e18);

// CPLEX-LP text: Minimize / Subject To / Binary / End. Variable names are
// sanitized to [A-Za-z0-9_] and uniqued.
std::string export_lp(const IlpModel& model);

}  // namespace planshield
