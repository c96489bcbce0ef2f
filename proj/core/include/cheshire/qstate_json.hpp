#pragma once

#include <nlohmann/json.hpp>

#include "cheshire/qstate.hpp"

namespace cheshire {

// Debug serialization: {"space": [{"name":..., "labels":[...]}, ...],
//                       "amplitudes": [[re, im], ...]}
nlohmann::json to_json(const StateVector& s);
StateVector state_from_json(const nlohmann::json& j);

}  // namespace cheshire
