#include "line_lexer.hpp"

namespace formspec::lexer {

int count_cps(std::string_view s) {
    int n = 0;
    for (char c : s)
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
    return n;
}

namespace {

Line tokenize(std::string_view s, int number) {
    Line line;
    line.number = number;
    line.indented = !s.empty() && (s[0] == ' ' || s[0] == '\t');
    std::size_t i = 0;
    auto col = [&](std::size_t byte) { return count_cps(s.substr(0, byte)) + 1; };
    while (i < s.size()) {
        const char c = s[i];
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '#') break;
        if (s.substr(i).starts_with("(*")) {
            const auto close = s.find("*)", i + 2);
            if (close == std::string_view::npos) throw SyntaxError({number, col(i), 2}, "unterminated comment");
            i = close + 2;
            continue;
        }
        Tok t;
        if (c == '"') {
            std::string text;
            std::size_t j = i + 1;
            bool closed = false;
            while (j < s.size()) {
                if (s[j] == '\\' && j + 1 < s.size() && (s[j + 1] == '"' || s[j + 1] == '\\')) {
                    text += s[j + 1];
                    j += 2;
                    continue;
                }
                if (s[j] == '"') {
                    closed = true;
                    break;
                }
                text += s[j++];
            }
            if (!closed) throw SyntaxError({number, col(i), 1}, "unterminated string");
            t.kind = Tok::Str;
            t.text = std::move(text);
            t.pos = {number, col(i + 1), count_cps(t.text)};
            i = j + 1;
        } else if (c == '=') {
            t.kind = Tok::Equals;
            t.text = "=";
            t.pos = {number, col(i), 1};
            ++i;
        } else if (s.substr(i).starts_with("->")) {
            t.kind = Tok::Arrow;
            t.text = "->";
            t.pos = {number, col(i), 2};
            i += 2;
        } else if (c == ':') {
            t.kind = Tok::Colon;
            t.text = ":";
            t.pos = {number, col(i), 1};
            ++i;
        } else {
            std::size_t j = i;
            while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '"' && s[j] != '=' && s[j] != ':') ++j;
            t.kind = Tok::Word;
            t.text = std::string(s.substr(i, j - i));
            t.pos = {number, col(i), count_cps(t.text)};
            if (j < s.size() && s[j] == ':' && !(j + 1 < s.size() && s[j + 1] == ':')) {
                t.colon = true;
                ++j;
            }
            i = j;
        }
        line.toks.push_back(std::move(t));
    }
    return line;
}

}  // namespace

std::vector<Line> lex_lines(std::string_view text) {
    std::vector<Line> out;
    std::size_t start = 0;
    int number = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        const auto end = nl == std::string_view::npos ? text.size() : nl;
        ++number;
        Line line = tokenize(text.substr(start, end - start), number);
        if (!line.toks.empty()) out.push_back(std::move(line));
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return out;
}

}  // namespace formspec::lexer
