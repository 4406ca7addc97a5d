#pragma once

#include <string>

#include "json.hpp"

namespace optocool {

/// 17 significant digits, '.' decimal separator, locale independent.
std::string fmt_double(double v);

/// JSON text with every floating-point value printed by fmt_double.
/// Object keys keep nlohmann's (sorted) order so output is deterministic.
std::string dump_json(const nlohmann::json& j, int indent = 2);

}  // namespace optocool
