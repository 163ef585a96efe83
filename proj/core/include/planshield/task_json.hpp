#pragma once

#include <string>
#include <string_view>

#include "planshield/strips.hpp"

namespace planshield {

// Canonical interchange format:
//   { "fluents": [string...],
//     "actions": [{ "name": string, "pre": [int...], "add": [int...],
//                   "del": [int...], "cost": number }...],
//     "init": [int...], "goal": [int...] }
// Indices refer to positions in "fluents". Lossless, including costs.
PlanningTask parse_task_json(std::string_view text);  // throws SchemaError with a JSON pointer
std::string emit_task_json(const PlanningTask& task);

}  // namespace planshield
