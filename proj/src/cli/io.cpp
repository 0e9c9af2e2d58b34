#include "io.hpp"

#include <fstream>

#include "f2s/support/error.hpp"

namespace f2s::cli {

std::string dump_json(const nlohmann::ordered_json& j, int indent) {
  return j.dump(indent, ' ', false, nlohmann::json::error_handler_t::replace);
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("cannot write " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  write_text(path, dump_json(j, 2) + "\n");
}

void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::ordered_json>& lines) {
  std::string text;
  for (const auto& j : lines) text += dump_json(j) + "\n";
  write_text(path, text);
}

}  // namespace f2s::cli
