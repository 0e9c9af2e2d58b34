#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace f2s::cli {

/// Invalid UTF-8 in program output is replaced rather than rejected.
std::string dump_json(const nlohmann::ordered_json& j, int indent = -1);

void write_text(const std::filesystem::path& path, std::string_view text);
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);
void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::ordered_json>& lines);

}  // namespace f2s::cli
