#include "formspec/rational.hpp"

#include <cctype>

namespace formspec {

std::optional<Rational> parse_decimal(std::string_view text) {
    if (text.empty()) return std::nullopt;
    Integer whole = 0;
    Integer scale = 1;
    bool seen_dot = false;
    bool seen_digit = false;
    for (char c : text) {
        if (c == '.') {
            if (seen_dot) return std::nullopt;
            seen_dot = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        seen_digit = true;
        whole = whole * 10 + (c - '0');
        if (seen_dot) scale *= 10;
    }
    if (!seen_digit) return std::nullopt;
    return Rational(whole, scale);
}

bool is_terminating(const Rational& q) {
    Integer d = denom(q);
    while (d % 2 == 0) d /= 2;
    while (d % 5 == 0) d /= 5;
    return d == 1;
}

std::string to_string(const Rational& q) {
    if (is_integer(q)) return numer(q).str();
    if (!is_terminating(q)) return numer(q).str() + " / " + denom(q).str();
    Integer n = numer(q);
    const bool neg = n < 0;
    if (neg) n = -n;
    const Integer d = denom(q);
    int digits = 0;
    Integer scale = 1;
    while (Integer(scale) % d != 0) {
        scale *= 10;
        ++digits;
    }
    Integer scaled = n * (scale / d);
    std::string s = scaled.str();
    if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<std::size_t>(digits + 1 - static_cast<int>(s.size())), '0');
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    return neg ? "-" + s : s;
}

}  // namespace formspec
