#include "grace/harness/schema.hpp"

namespace grace::harness {

namespace {

bool type_matches(const nlohmann::json& doc, const std::string& type) {
  if (type == "object") return doc.is_object();
  if (type == "array") return doc.is_array();
  if (type == "string") return doc.is_string();
  if (type == "number") return doc.is_number();
  if (type == "integer") return doc.is_number_integer();
  if (type == "boolean") return doc.is_boolean();
  if (type == "null") return doc.is_null();
  return false;
}

void validate_node(const nlohmann::json& doc, const nlohmann::json& schema,
                   const std::string& path, std::vector<std::string>& errors) {
  if (schema.contains("type")) {
    const auto& t = schema.at("type");
    bool ok = false;
    if (t.is_string()) {
      ok = type_matches(doc, t.get<std::string>());
    } else if (t.is_array()) {
      for (const auto& alt : t)
        if (type_matches(doc, alt.get<std::string>())) {
          ok = true;
          break;
        }
    }
    if (!ok) {
      errors.push_back(path + ": type mismatch, expected " + t.dump() +
                       ", got " + std::string(doc.type_name()));
      return;
    }
  }

  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& v : schema.at("enum"))
      if (v == doc) {
        found = true;
        break;
      }
    if (!found) errors.push_back(path + ": value not in enum");
  }

  if (doc.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema.at("required"))
        if (!doc.contains(key.get<std::string>()))
          errors.push_back(path + ": missing required key '" +
                           key.get<std::string>() + "'");
    const bool closed = schema.contains("additionalProperties") &&
                        schema.at("additionalProperties").is_boolean() &&
                        !schema.at("additionalProperties").get<bool>();
    if (schema.contains("properties")) {
      const auto& props = schema.at("properties");
      for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (props.contains(it.key()))
          validate_node(it.value(), props.at(it.key()), path + "/" + it.key(),
                        errors);
        else if (closed)
          errors.push_back(path + ": unexpected key '" + it.key() + "'");
      }
    }
  }

  if (doc.is_array() && schema.contains("items")) {
    const auto& items = schema.at("items");
    for (std::size_t i = 0; i < doc.size(); ++i)
      validate_node(doc[i], items, path + "/" + std::to_string(i), errors);
  }
}

}  // namespace

SchemaResult validate_schema(const nlohmann::json& doc,
                             const nlohmann::json& schema) {
  SchemaResult result;
  validate_node(doc, schema, "", result.errors);
  return result;
}

}  // namespace grace::harness
