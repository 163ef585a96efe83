#include <algorithm>
#include <map>
#include <unordered_map>

#include "planshield/pddl.hpp"

namespace planshield {

namespace {

struct TypeTable {
    std::unordered_map<std::string, std::string> parent;  // type -> supertype

    void declare(const std::string& type, const std::string& super) {
        if (type == "object") return;
        parent[type] = super;
    }
    bool known(const std::string& type) const {
        return type == "object" || parent.contains(type);
    }
    bool is_subtype(const std::string& type, const std::string& super) const {
        std::string cur = type;
        for (std::size_t hops = 0; hops <= parent.size() + 1; ++hops) {
            if (cur == super) return true;
            if (cur == "object") return false;
            auto it = parent.find(cur);
            if (it == parent.end()) return false;
            cur = it->second;
        }
        return false;  // cycle guard
    }
};

std::string format_atom(const std::string& predicate, const std::vector<std::string>& args) {
    if (args.empty()) return predicate;
    std::string out = predicate + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ' ';
        out += args[i];
    }
    out += ')';
    return out;
}

struct Interner {
    std::vector<std::string> names;
    std::unordered_map<std::string, int> ids;

    int intern(const std::string& name) {
        auto [it, inserted] = ids.try_emplace(name, static_cast<int>(names.size()));
        if (inserted) names.push_back(name);
        return it->second;
    }
};

}  // namespace

PlanningTask ground(const DomainAst& domain, const ProblemAst& problem, const GroundOptions& opts) {
    TypeTable types;
    for (const TypedName& t : domain.types) types.declare(t.name, t.type);
    for (const TypedName& t : domain.types)
        if (!types.known(t.type))
            throw GroundingError("type '" + t.name + "' has undeclared supertype '" + t.type + "'");

    std::unordered_map<std::string, const PredicateDef*> predicates;
    for (const PredicateDef& p : domain.predicates) {
        if (!predicates.emplace(p.name, &p).second)
            throw GroundingError("predicate '" + p.name + "' declared twice");
        for (const TypedName& param : p.parameters)
            if (!types.known(param.type))
                throw GroundingError("predicate '" + p.name + "' uses undeclared type '" +
                                     param.type + "'");
    }

    std::unordered_map<std::string, std::string> object_type;  // object -> type
    for (const TypedName& o : problem.objects) {
        if (!types.known(o.type))
            throw GroundingError("object '" + o.name + "' has undeclared type '" + o.type + "'");
        if (!object_type.emplace(o.name, o.type).second)
            throw GroundingError("object '" + o.name + "' declared twice");
    }

    auto check_atom = [&](const Atom& atom,
                          const std::vector<std::string>& args) -> const PredicateDef* {
        auto it = predicates.find(atom.predicate);
        if (it == predicates.end())
            throw GroundingError("undeclared predicate '" + atom.predicate + "'");
        const PredicateDef& def = *it->second;
        if (def.parameters.size() != args.size())
            throw GroundingError("predicate '" + atom.predicate + "' used with " +
                                 std::to_string(args.size()) + " arguments, declared with " +
                                 std::to_string(def.parameters.size()));
        for (std::size_t i = 0; i < args.size(); ++i) {
            auto ot = object_type.find(args[i]);
            if (ot == object_type.end())
                throw GroundingError("atom '" + atom.predicate + "' references undeclared object '" +
                                     args[i] + "'");
            if (!types.is_subtype(ot->second, def.parameters[i].type))
                throw GroundingError("object '" + args[i] + "' of type '" + ot->second +
                                     "' does not fit parameter " + std::to_string(i + 1) +
                                     " of predicate '" + atom.predicate + "' (wants '" +
                                     def.parameters[i].type + "')");
        }
        return &def;
    };

    // schemas in lexicographic name order; duplicate names are ambiguous
    std::vector<const ActionSchema*> schemas;
    schemas.reserve(domain.schemas.size());
    for (const ActionSchema& s : domain.schemas) schemas.push_back(&s);
    std::sort(schemas.begin(), schemas.end(),
              [](const ActionSchema* a, const ActionSchema* b) { return a->name < b->name; });
    for (std::size_t i = 1; i < schemas.size(); ++i)
        if (schemas[i]->name == schemas[i - 1]->name)
            throw GroundingError("action schema '" + schemas[i]->name + "' declared twice");

    struct PendingAction {
        std::string name;
        std::vector<std::string> pre, add, del;  // atom names
    };
    std::vector<PendingAction> pending;
    std::size_t bindings_seen = 0;

    for (const ActionSchema* schema : schemas) {
        // candidate objects per parameter, sorted by name
        std::vector<std::vector<std::string>> candidates(schema->parameters.size());
        for (std::size_t p = 0; p < schema->parameters.size(); ++p) {
            const std::string& want = schema->parameters[p].type;
            if (!types.known(want))
                throw GroundingError("action '" + schema->name + "' uses undeclared type '" + want +
                                     "'");
            for (const TypedName& o : problem.objects)
                if (types.is_subtype(o.type, want)) candidates[p].push_back(o.name);
            std::sort(candidates[p].begin(), candidates[p].end());
        }

        std::unordered_map<std::string, std::string> binding;
        std::vector<std::string> bound_names(schema->parameters.size());

        auto resolve = [&](const std::string& term) -> std::string {
            if (!term.empty() && term.front() == '?') {
                auto it = binding.find(term);
                if (it == binding.end())
                    throw GroundingError("action '" + schema->name + "' references unbound variable '" +
                                         term + "'");
                return it->second;
            }
            return term;
        };

        auto instantiate = [&](const std::vector<Atom>& atoms, std::vector<std::string>& out) {
            for (const Atom& atom : atoms) {
                std::vector<std::string> args;
                args.reserve(atom.args.size());
                for (const std::string& arg : atom.args) args.push_back(resolve(arg));
                check_atom(atom, args);
                std::string name = format_atom(atom.predicate, args);
                if (std::find(out.begin(), out.end(), name) == out.end())
                    out.push_back(std::move(name));
            }
        };

        auto emit_binding = [&]() {
            if (++bindings_seen > opts.max_ground_actions)
                throw GroundingError("grounding exceeds the cap of " +
                                     std::to_string(opts.max_ground_actions) + " ground actions");
            for (const EqualityCondition& eq : schema->equalities) {
                const bool equal = resolve(eq.lhs) == resolve(eq.rhs);
                if (equal == eq.negated) return;  // statically false, prune the binding
            }
            PendingAction act;
            act.name = schema->name;
            if (!schema->parameters.empty()) {
                act.name += '(';
                for (std::size_t p = 0; p < bound_names.size(); ++p) {
                    if (p) act.name += ' ';
                    act.name += bound_names[p];
                }
                act.name += ')';
            }
            instantiate(schema->pre, act.pre);
            instantiate(schema->add, act.add);
            instantiate(schema->del, act.del);
            for (const std::string& atom : act.add)
                if (std::find(act.del.begin(), act.del.end(), atom) != act.del.end()) {
                    if (opts.warnings)
                        opts.warnings->push_back("dropped ground action '" + act.name +
                                                 "': add and delete effects overlap on '" + atom +
                                                 "'");
                    return;
                }
            pending.push_back(std::move(act));
        };

        // nested lexicographic enumeration over the candidate lists
        auto enumerate = [&](auto&& self, std::size_t p) -> void {
            if (p == schema->parameters.size()) {
                emit_binding();
                return;
            }
            for (const std::string& obj : candidates[p]) {
                binding[schema->parameters[p].name] = obj;
                bound_names[p] = obj;
                self(self, p + 1);
            }
            binding.erase(schema->parameters[p].name);
        };
        enumerate(enumerate, 0);
    }

    // fluent universe: action atoms, then init, then goal, then declared
    // zero-ary predicates
    Interner interner;
    for (const PendingAction& a : pending) {
        for (const auto* atoms : {&a.pre, &a.add, &a.del})
            for (const std::string& name : *atoms) interner.intern(name);
    }
    std::vector<std::string> init_atoms, goal_atoms;
    for (const Atom& atom : problem.init) {
        check_atom(atom, atom.args);
        init_atoms.push_back(format_atom(atom.predicate, atom.args));
        interner.intern(init_atoms.back());
    }
    for (const Atom& atom : problem.goal) {
        check_atom(atom, atom.args);
        goal_atoms.push_back(format_atom(atom.predicate, atom.args));
        interner.intern(goal_atoms.back());
    }
    for (const PredicateDef& p : domain.predicates)
        if (p.parameters.empty()) interner.intern(p.name);

    PlanningTask task;
    const std::size_t nf = interner.names.size();
    task.fluents.reserve(nf);
    for (std::size_t i = 0; i < nf; ++i)
        task.fluents.push_back(Fluent{static_cast<int>(i), interner.names[i]});

    task.actions.reserve(pending.size());
    for (const PendingAction& a : pending) {
        GroundAction act;
        act.name = a.name;
        act.pre = Bitset(nf);
        act.add = Bitset(nf);
        act.del = Bitset(nf);
        act.cost = 1.0;
        for (const std::string& atom : a.pre)
            act.pre.set(static_cast<std::size_t>(interner.ids.at(atom)));
        for (const std::string& atom : a.add)
            act.add.set(static_cast<std::size_t>(interner.ids.at(atom)));
        for (const std::string& atom : a.del)
            act.del.set(static_cast<std::size_t>(interner.ids.at(atom)));
        task.actions.push_back(std::move(act));
    }

    task.init = Bitset(nf);
    for (const std::string& atom : init_atoms)
        task.init.set(static_cast<std::size_t>(interner.ids.at(atom)));
    task.goal = Bitset(nf);
    for (const std::string& atom : goal_atoms)
        task.goal.set(static_cast<std::size_t>(interner.ids.at(atom)));

    if (!problem.domain_name.empty() && problem.domain_name != domain.name)
        throw GroundingError("problem is for domain '" + problem.domain_name +
                             "', domain file declares '" + domain.name + "'");
    return task;
}

}  // namespace planshield
