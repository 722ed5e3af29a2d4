#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "formspec/error.hpp"
#include "formspec/srcpos.hpp"

// Line-oriented tokens shared by knowledge files and session scripts.
namespace formspec::lexer {

int count_cps(std::string_view s);

struct Tok {
    enum Kind { Word, Str, Equals, Colon, Arrow } kind = Word;
    std::string text;
    bool colon = false;  // Word immediately followed by ':'
    SrcPos pos;          // for Str: position of the first character inside the quotes
};

struct Line {
    std::vector<Tok> toks;
    bool indented = false;
    int number = 0;
};

/// Non-empty lines of `text`; "#" and "(* *)" comments are dropped.
/// Throws SyntaxError for unterminated strings and comments.
std::vector<Line> lex_lines(std::string_view text);

}  // namespace formspec::lexer
