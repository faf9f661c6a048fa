#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace schemacheck {

/// Validates against the subset of JSON Schema used by the schemas/ directory: type, enum, const,
/// required, properties, additionalProperties (boolean), items, minItems, maxItems, minimum,
/// maximum and exclusiveMinimum. Returns one message per violation; empty means valid.
std::vector<std::string> errors(const nlohmann::json& doc, const nlohmann::json& schema);

/// Reads <dir>/<name>.schema.json.
nlohmann::json load(const std::string& dir, const std::string& name);

}  // namespace schemacheck
