#include <doctest.h>

#include "planshield/pddl.hpp"
#include "planshield/plan_enum.hpp"
#include "planshield/task_json.hpp"
#include "testutil.hpp"

using namespace planshield;
using namespace testutil;

namespace {

// 3-block blocksworld, the usual 4-schema encoding
const char* kBlocksDomain = R"(
(define (domain blocksworld)
  (:requirements :strips :typing)
  (:types block)
  (:predicates (on ?x - block ?y - block) (ontable ?x - block) (clear ?x - block)
               (handempty) (holding ?x - block))
  (:action pick-up
    :parameters (?x - block)
    :precondition (and (clear ?x) (ontable ?x) (handempty))
    :effect (and (not (ontable ?x)) (not (clear ?x)) (not (handempty)) (holding ?x)))
  (:action put-down
    :parameters (?x - block)
    :precondition (holding ?x)
    :effect (and (not (holding ?x)) (clear ?x) (handempty) (ontable ?x)))
  (:action stack
    :parameters (?x - block ?y - block)
    :precondition (and (holding ?x) (clear ?y) (not (= ?x ?y)))
    :effect (and (not (holding ?x)) (not (clear ?y)) (clear ?x) (handempty) (on ?x ?y)))
  (:action unstack
    :parameters (?x - block ?y - block)
    :precondition (and (on ?x ?y) (clear ?x) (handempty) (not (= ?x ?y)))
    :effect (and (holding ?x) (clear ?y) (not (clear ?x)) (not (handempty)) (not (on ?x ?y)))))
)";

const char* kBlocksProblem = R"(
(define (problem blocks-3)
  (:domain blocksworld)
  (:objects a b c - block)
  (:init (clear a) (on a b) (on b c) (ontable c) (handempty))
  (:goal (and (on c b) (on b a))))
)";

}  // namespace

TEST_CASE("parse_domain: workflow text yields 3 parameterless schemas") {
    const DomainAst domain = parse_domain(kWorkflowDomain);
    CHECK(domain.name == "approval-workflow");
    REQUIRE(domain.schemas.size() == 3);
    for (const auto& s : domain.schemas) CHECK(s.parameters.empty());

    const auto& submit = domain.schemas.front();
    CHECK(submit.name == "submit_application");
    REQUIRE(submit.pre.size() == 1);
    CHECK(submit.pre.front().predicate == "documents_submitted");
    REQUIRE(submit.add.size() == 1);
    CHECK(submit.add.front().predicate == "application_complete");
    REQUIRE(submit.del.size() == 1);
    CHECK(submit.del.front().predicate == "documents_submitted");
}

TEST_CASE("parse_domain: empty domain and rejected constructs") {
    CHECK(parse_domain("(define (domain d))").schemas.empty());

    try {
        parse_domain("(define (domain d) (:action a :parameters () :effect (when (p) (q))))");
        FAIL("expected UnsupportedFeatureError");
    } catch (const UnsupportedFeatureError& e) {
        CHECK(e.construct == "when");
    }

    try {
        parse_domain("(define (domain d) (:requirements :strips :disjunctive-preconditions))");
        FAIL("expected UnsupportedFeatureError");
    } catch (const UnsupportedFeatureError& e) {
        CHECK(e.construct == ":disjunctive-preconditions");
    }

    CHECK_THROWS_AS(parse_domain("(define (domain d)"), ParseError);
    try {
        parse_domain("(define (domain d) (:action a :parameters () :precondition (or (p) (q))))");
        FAIL("expected UnsupportedFeatureError");
    } catch (const UnsupportedFeatureError& e) {
        CHECK(e.construct == "or");
    }
}

TEST_CASE("parse_problem: workflow init and goal, empty goal, negative goal rejected") {
    const ProblemAst problem = parse_problem(kWorkflowProblem);
    CHECK(problem.init.size() == 2);
    CHECK(problem.goal.size() == 2);

    const ProblemAst empty_goal =
        parse_problem("(define (problem p) (:domain d) (:init) (:goal (and)))");
    CHECK(empty_goal.goal.empty());

    CHECK_THROWS_AS(
        parse_problem("(define (problem p) (:domain d) (:init) (:goal (not (p))))"),
        UnsupportedFeatureError);
}

TEST_CASE("ground: workflow has 3 actions and 6 fluents including the declared spare") {
    const PlanningTask task = workflow_task();
    CHECK(task.num_actions() == 3);
    CHECK(task.num_fluents() == 6);
    CHECK(task.fluent_id("safe_client").has_value());
    CHECK(validate_task(task).empty());

    // actions ordered lexicographically by schema name
    CHECK(task.actions[0].name == "direct_approval");
    CHECK(task.actions[1].name == "escalation");
    CHECK(task.actions[2].name == "submit_application");
}

TEST_CASE("ground: one-parameter schema over three objects yields three actions") {
    const char* domain_text = R"(
(define (domain d)
  (:predicates (p ?x) (q ?x))
  (:action act
    :parameters (?x)
    :precondition (p ?x)
    :effect (q ?x)))
)";
    const char* problem_text = R"(
(define (problem pr) (:domain d) (:objects o1 o2 o3) (:init (p o1)) (:goal (q o1)))
)";
    const PlanningTask task = ground(parse_domain(domain_text), parse_problem(problem_text));
    CHECK(task.num_actions() == 3);
    CHECK(task.actions[0].name == "act(o1)");
    CHECK(task.actions[1].name == "act(o2)");
    CHECK(task.actions[2].name == "act(o3)");
}

TEST_CASE("ground: blocksworld grounds, prunes equalities, and is solvable") {
    const PlanningTask task = ground(parse_domain(kBlocksDomain), parse_problem(kBlocksProblem));
    // stack/unstack lose their x=y bindings: 3 + 3 + 6 + 6
    CHECK(task.num_actions() == 18);
    CHECK(goal_reachable(task));
}

TEST_CASE("ground: arity and unknown-symbol errors") {
    const char* domain_text = "(define (domain d) (:predicates (p ?x)))";
    CHECK_THROWS_AS(ground(parse_domain(domain_text),
                           parse_problem("(define (problem q) (:domain d) (:init (p a b)) "
                                         "(:goal (and)))")),
                    GroundingError);
    CHECK_THROWS_AS(ground(parse_domain(domain_text),
                           parse_problem("(define (problem q) (:domain d) (:init (p a)) "
                                         "(:goal (and)))")),
                    GroundingError);  // object a undeclared
}

TEST_CASE("ground: action cap raises") {
    const char* domain_text = R"(
(define (domain d)
  (:predicates (p ?x ?y ?z))
  (:action a
    :parameters (?x ?y ?z)
    :precondition (and)
    :effect (p ?x ?y ?z)))
)";
    std::string problem_text = "(define (problem q) (:domain d) (:objects";
    for (int i = 0; i < 30; ++i) problem_text += " o" + std::to_string(i);
    problem_text += ") (:init) (:goal (and)))";
    GroundOptions opts;
    opts.max_ground_actions = 1000;  // 30^3 bindings blow through this
    CHECK_THROWS_AS(ground(parse_domain(domain_text), parse_problem(problem_text), opts),
                    GroundingError);
}

TEST_CASE("ground: overlapping effects after grounding are dropped with a warning") {
    const char* domain_text = R"(
(define (domain d)
  (:predicates (p ?x ?y))
  (:action a
    :parameters (?x ?y)
    :precondition (and)
    :effect (and (p ?x ?y) (not (p ?y ?x)))))
)";
    const char* problem_text =
        "(define (problem q) (:domain d) (:objects o1 o2) (:init) (:goal (and)))";
    std::vector<std::string> warnings;
    GroundOptions opts;
    opts.warnings = &warnings;
    const PlanningTask task = ground(parse_domain(domain_text), parse_problem(problem_text), opts);
    // a(o1 o1) and a(o2 o2) self-overlap and are dropped
    CHECK(task.num_actions() == 2);
    CHECK(warnings.size() == 2);
}

TEST_CASE("grounding is deterministic") {
    const std::string first = emit_task_json(workflow_task());
    const std::string second = emit_task_json(workflow_task());
    CHECK(first == second);
}

TEST_CASE("emitted grounded PDDL parses back to an isomorphic task") {
    const PlanningTask original = workflow_task();
    const std::string domain_text = emit_grounded_domain(original);
    const std::string problem_text = emit_grounded_problem(original);
    CHECK(domain_text.find("(:action escalation") != std::string::npos);
    CHECK(domain_text.find("(client_concerns)") != std::string::npos);

    const PlanningTask reparsed =
        ground(parse_domain(domain_text), parse_problem(problem_text));
    CHECK(isomorphic(original, reparsed));

    // empty-action task: no :action blocks
    PlanningTask empty;
    empty.fluents = {Fluent{0, "f0"}};
    empty.init = Bitset(1);
    empty.goal = Bitset(1);
    CHECK(emit_grounded_domain(empty).find(":action") == std::string::npos);
}

TEST_CASE("blocksworld round-trips through grounded emission") {
    const PlanningTask original =
        ground(parse_domain(kBlocksDomain), parse_problem(kBlocksProblem));
    const PlanningTask reparsed = ground(parse_domain(emit_grounded_domain(original)),
                                         parse_problem(emit_grounded_problem(original)));
    CHECK(isomorphic(original, reparsed));
}

TEST_CASE("task JSON round trip is the identity") {
    const PlanningTask task = workflow_task();
    const std::string text = emit_task_json(task);
    const PlanningTask parsed = parse_task_json(text);
    CHECK(emit_task_json(parsed) == text);
    CHECK(validate_task(parsed).empty());
    CHECK(parsed.num_fluents() == task.num_fluents());
    CHECK(parsed.init == task.init);
    CHECK(parsed.goal == task.goal);
}

TEST_CASE("task JSON schema errors carry a pointer") {
    try {
        parse_task_json(R"({"fluents": ["f"], "actions": [], "init": []})");
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.pointer == "/goal");
    }
    try {
        parse_task_json(R"({"fluents": ["f"], "actions": [], "init": [3], "goal": []})");
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.pointer == "/init/0");
    }
    CHECK_THROWS_AS(parse_task_json("not json at all"), SchemaError);
}
