#pragma once

#include <string>

#include "json.hpp"

namespace holo {

// Deterministic JSON text: insertion-ordered keys, doubles printed with 17
// significant digits, non-finite doubles as null.
std::string to_json_text(const nlohmann::ordered_json& value, int indent = 2);

}  // namespace holo
