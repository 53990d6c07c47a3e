#pragma once

#include <string>

#include "json.hpp"

namespace grace::harness {

nlohmann::json load_json_file(const std::string& path);

/// Deterministic dump (sorted keys, 2-space indent, trailing newline).
void write_json_file(const std::string& path, const nlohmann::json& doc);

void write_text_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

void ensure_directory(const std::string& path);

}  // namespace grace::harness
