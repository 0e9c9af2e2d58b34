#pragma once

#include <vector>

#include "f2s/styledist/lexer.hpp"
#include "f2s/styledist/syntax_tree.hpp"

namespace f2s::style::detail {

SyntaxTree parse_cfamily(std::vector<Token> tokens, Language lang);
SyntaxTree parse_go(std::vector<Token> tokens);
SyntaxTree parse_python(std::vector<Token> tokens);

}  // namespace f2s::style::detail
