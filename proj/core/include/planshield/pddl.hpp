#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "planshield/strips.hpp"

namespace planshield {

struct TypedName {
    std::string name;
    std::string type = "object";
};

struct Atom {
    std::string predicate;
    std::vector<std::string> args;  // ?variables or constants
    int line = 0;
    int col = 0;
};

struct EqualityCondition {
    std::string lhs;  // ?variable or constant
    std::string rhs;
    bool negated = false;
};

struct ActionSchema {
    std::string name;
    std::vector<TypedName> parameters;
    std::vector<Atom> pre;
    std::vector<Atom> add;
    std::vector<Atom> del;
    std::vector<EqualityCondition> equalities;  // evaluated statically at grounding
};

struct PredicateDef {
    std::string name;
    std::vector<TypedName> parameters;
};

struct DomainAst {
    std::string name;
    std::vector<std::string> requirements;  // only :strips and :typing are accepted
    std::vector<TypedName> types;           // name + parent
    std::vector<PredicateDef> predicates;
    std::vector<ActionSchema> schemas;
};

struct ProblemAst {
    std::string name;
    std::string domain_name;
    std::vector<TypedName> objects;
    std::vector<Atom> init;
    std::vector<Atom> goal;  // positive conjunction only
};

// Whitespace- and case-insensitive; ';' starts a comment. Parse errors carry
// line/column; rejected constructs raise UnsupportedFeatureError naming them.
DomainAst parse_domain(std::string_view text);
ProblemAst parse_problem(std::string_view text);

struct GroundOptions {
    std::size_t max_ground_actions = 1'000'000;
    std::vector<std::string>* warnings = nullptr;  // collects dropped-action notices
};

// Full enumeration of type-consistent bindings, lexicographic by schema name
// then binding tuple. The fluent universe is every ground atom reachable from
// the ground actions, init and goal, plus the instances of declared zero-ary
// predicates (so declared-but-unused facts stay addressable by edits).
PlanningTask ground(const DomainAst& domain, const ProblemAst& problem,
                    const GroundOptions& opts = {});

// Grounded re-emission: one zero-parameter action block per ground action.
// Parsing and grounding the emitted pair reproduces the task up to action
// names (fluent names and all pre/add/del sets are preserved).
std::string emit_grounded_domain(const PlanningTask& task,
                                 std::string_view domain_name = "grounded");
std::string emit_grounded_problem(const PlanningTask& task,
                                  std::string_view domain_name = "grounded",
                                  std::string_view problem_name = "grounded-p");

}  // namespace planshield
