#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace grace::harness {

struct SchemaResult {
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

// Structural validator for the JSON-Schema subset used by the report schemas
// shipped under schemas/: type (including union types), properties, required,
// items, enum, additionalProperties (boolean form).
SchemaResult validate_schema(const nlohmann::json& doc,
                             const nlohmann::json& schema);

}  // namespace grace::harness
