#include "f2s/corpus/prompt_template.hpp"

#include <fstream>
#include <sstream>

#include "f2s/support/error.hpp"

namespace f2s {

PromptTemplate PromptTemplate::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read prompt template " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return PromptTemplate(ss.str());
}

std::string PromptTemplate::render(const std::map<std::string, std::string>& values) const {
  std::string out;
  out.reserve(text_.size());
  std::size_t i = 0;
  while (i < text_.size()) {
    if (text_[i] == '{') {
      auto close = text_.find('}', i + 1);
      if (close != std::string::npos) {
        auto it = values.find(text_.substr(i + 1, close - i - 1));
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += text_[i++];
  }
  return out;
}

}  // namespace f2s
