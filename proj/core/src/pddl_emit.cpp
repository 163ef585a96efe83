#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "planshield/pddl.hpp"

namespace planshield {

namespace {

std::string sanitize_symbol(const std::string& raw) {
    std::string out;
    for (char c : raw)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') ? c : '_';
    if (out.empty()) out = "x";
    return out;
}

// Fluent names follow the "pred" / "pred(a b)" shape produced by grounding.
struct FluentAtom {
    std::string predicate;
    std::vector<std::string> args;
};

FluentAtom split_fluent_name(const std::string& name) {
    FluentAtom atom;
    const std::size_t open = name.find('(');
    if (open == std::string::npos) {
        atom.predicate = sanitize_symbol(name);
        return atom;
    }
    atom.predicate = sanitize_symbol(name.substr(0, open));
    std::string inner = name.substr(open + 1);
    if (!inner.empty() && inner.back() == ')') inner.pop_back();
    std::istringstream in(inner);
    std::string arg;
    while (in >> arg) atom.args.push_back(sanitize_symbol(arg));
    return atom;
}

std::string atom_sexpr(const FluentAtom& atom) {
    std::string out = "(" + atom.predicate;
    for (const std::string& a : atom.args) out += " " + a;
    out += ")";
    return out;
}

}  // namespace

std::string emit_grounded_domain(const PlanningTask& task, std::string_view domain_name) {
    std::ostringstream os;
    os << "(define (domain " << domain_name << ")\n";
    os << "  (:requirements :strips)\n";

    // one declaration per predicate signature observed in the universe
    std::map<std::pair<std::string, std::size_t>, bool> signatures;
    for (const Fluent& f : task.fluents) {
        const FluentAtom atom = split_fluent_name(f.name);
        signatures[{atom.predicate, atom.args.size()}] = true;
    }
    os << "  (:predicates";
    for (const auto& [sig, _] : signatures) {
        os << "\n    (" << sig.first;
        for (std::size_t i = 0; i < sig.second; ++i) os << " ?x" << i << " - object";
        os << ")";
    }
    os << ")\n";

    std::set<std::string> used_names;
    for (const GroundAction& action : task.actions) {
        std::string name = sanitize_symbol(action.name);
        while (!used_names.insert(name).second) name += "_";
        os << "\n  (:action " << name << "\n    :parameters ()\n    :precondition (and";
        action.pre.for_each(
            [&](std::size_t f) { os << " " << atom_sexpr(split_fluent_name(task.fluent_name(static_cast<int>(f)))); });
        os << ")\n    :effect (and";
        action.add.for_each(
            [&](std::size_t f) { os << " " << atom_sexpr(split_fluent_name(task.fluent_name(static_cast<int>(f)))); });
        action.del.for_each([&](std::size_t f) {
            os << " (not " << atom_sexpr(split_fluent_name(task.fluent_name(static_cast<int>(f)))) << ")";
        });
        os << "))\n";
    }
    os << ")\n";
    return os.str();
}

std::string emit_grounded_problem(const PlanningTask& task, std::string_view domain_name,
                                  std::string_view problem_name) {
    std::ostringstream os;
    os << "(define (problem " << problem_name << ")\n";
    os << "  (:domain " << domain_name << ")\n";

    std::set<std::string> objects;
    for (const Fluent& f : task.fluents) {
        const FluentAtom atom = split_fluent_name(f.name);
        for (const std::string& a : atom.args) objects.insert(a);
    }
    os << "  (:objects";
    for (const std::string& o : objects) os << " " << o;
    os << ")\n";

    os << "  (:init";
    task.init.for_each(
        [&](std::size_t f) { os << " " << atom_sexpr(split_fluent_name(task.fluent_name(static_cast<int>(f)))); });
    os << ")\n";

    os << "  (:goal (and";
    task.goal.for_each(
        [&](std::size_t f) { os << " " << atom_sexpr(split_fluent_name(task.fluent_name(static_cast<int>(f)))); });
    os << ")))\n";
    return os.str();
}

}  // namespace planshield
