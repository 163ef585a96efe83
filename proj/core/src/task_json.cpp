#include <json.hpp>

#include "planshield/task_json.hpp"

namespace planshield {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& pointer) {
    if (!obj.is_object()) throw SchemaError("expected an object", pointer);
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(std::string("missing key \"") + key + "\"",
                                           pointer + "/" + key);
    return *it;
}

std::vector<int> id_array(const json& arr, std::size_t universe, const std::string& pointer) {
    if (!arr.is_array()) throw SchemaError("expected an array of fluent indices", pointer);
    std::vector<int> out;
    out.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& v = arr[i];
        const std::string at = pointer + "/" + std::to_string(i);
        if (!v.is_number_integer()) throw SchemaError("expected an integer fluent index", at);
        const long long id = v.get<long long>();
        if (id < 0 || static_cast<std::size_t>(id) >= universe)
            throw SchemaError("fluent index " + std::to_string(id) + " outside universe of size " +
                                  std::to_string(universe),
                              at);
        out.push_back(static_cast<int>(id));
    }
    return out;
}

}  // namespace

PlanningTask parse_task_json(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what(), "");
    }

    const json& fluents = require(root, "fluents", "");
    if (!fluents.is_array()) throw SchemaError("expected an array of fluent names", "/fluents");

    PlanningTask task;
    task.fluents.reserve(fluents.size());
    for (std::size_t i = 0; i < fluents.size(); ++i) {
        if (!fluents[i].is_string())
            throw SchemaError("expected a fluent name string", "/fluents/" + std::to_string(i));
        task.fluents.push_back(Fluent{static_cast<int>(i), fluents[i].get<std::string>()});
    }
    const std::size_t nf = task.fluents.size();

    const json& actions = require(root, "actions", "");
    if (!actions.is_array()) throw SchemaError("expected an array of actions", "/actions");
    task.actions.reserve(actions.size());
    for (std::size_t i = 0; i < actions.size(); ++i) {
        const std::string at = "/actions/" + std::to_string(i);
        const json& a = actions[i];
        const json& name = require(a, "name", at);
        if (!name.is_string()) throw SchemaError("expected an action name string", at + "/name");

        GroundAction action;
        action.name = name.get<std::string>();
        action.pre = Bitset::from_indices(nf, id_array(require(a, "pre", at), nf, at + "/pre"));
        action.add = Bitset::from_indices(nf, id_array(require(a, "add", at), nf, at + "/add"));
        action.del = Bitset::from_indices(nf, id_array(require(a, "del", at), nf, at + "/del"));
        if (auto it = a.find("cost"); it != a.end()) {
            if (!it->is_number()) throw SchemaError("expected a numeric cost", at + "/cost");
            action.cost = it->get<double>();
            if (action.cost < 0) throw SchemaError("cost must be non-negative", at + "/cost");
        }
        task.actions.push_back(std::move(action));
    }

    task.init = Bitset::from_indices(nf, id_array(require(root, "init", ""), nf, "/init"));
    task.goal = Bitset::from_indices(nf, id_array(require(root, "goal", ""), nf, "/goal"));
    return task;
}

std::string emit_task_json(const PlanningTask& task) {
    json root;
    json fluents = json::array();
    for (const Fluent& f : task.fluents) fluents.push_back(f.name);
    root["fluents"] = std::move(fluents);

    json actions = json::array();
    for (const GroundAction& a : task.actions) {
        json entry;
        entry["name"] = a.name;
        entry["pre"] = a.pre.to_indices();
        entry["add"] = a.add.to_indices();
        entry["del"] = a.del.to_indices();
        entry["cost"] = a.cost;
        actions.push_back(std::move(entry));
    }
    root["actions"] = std::move(actions);
    root["init"] = task.init.to_indices();
    root["goal"] = task.goal.to_indices();
    return root.dump(2) + "\n";
}

}  // namespace planshield
