#include "formspec/terms.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <sstream>

namespace formspec {

// ---------------------------------------------------------------------------
// Types and descriptors

std::string Typ::str() const {
    auto base = [](TypKind k) -> std::string {
        switch (k) {
            case TypKind::Real: return "real";
            case TypKind::Bool: return "bool";
            case TypKind::SetOfReal: return "real set";
            case TypKind::List: return "list";
            case TypKind::Unknown: break;
        }
        return "?";
    };
    if (kind == TypKind::List) return base(elem) + " list";
    return base(kind);
}

std::optional<Typ> parse_typ(std::string_view name) {
    if (name == "real") return Typ::real();
    if (name == "bool") return Typ::boolean();
    if (name == "real list") return Typ::list_of(TypKind::Real);
    if (name == "bool list") return Typ::list_of(TypKind::Bool);
    if (name == "real set") return Typ::set_of_real();
    return std::nullopt;
}

std::string_view to_string(ArgShape s) {
    switch (s) {
        case ArgShape::ListOfEq: return "ListOfEq";
        case ArgShape::ListOfAtoms: return "ListOfAtoms";
        case ArgShape::Single: return "Single";
        case ArgShape::StringRef: return "StringRef";
    }
    return "Single";
}

std::optional<ArgShape> parse_arg_shape(std::string_view s) {
    for (auto shape : {ArgShape::ListOfEq, ArgShape::ListOfAtoms, ArgShape::Single, ArgShape::StringRef})
        if (to_string(shape) == s) return shape;
    return std::nullopt;
}

std::string_view input_template(ArgShape s) {
    switch (s) {
        case ArgShape::ListOfEq: return "[__=__, __=__]";
        case ArgShape::ListOfAtoms: return "[__, __]";
        case ArgShape::Single: return "__";
        case ArgShape::StringRef: return "\"__\"";
    }
    return "__";
}

const Descriptor* TypeContext::descriptor(std::string_view name) const {
    auto it = descriptors.find(std::string(name));
    return it == descriptors.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Term nodes

struct Term::Node {
    TermKind kind = TermKind::Num;
    Op op = Op::Add;
    Rational value;
    std::string name;
    Typ typ;
    std::vector<Term> args;
    SrcPos pos;
};

Term::Term() : n_(std::make_shared<Node>()) {}

Term Term::num(Rational value, SrcPos pos) {
    auto n = std::make_shared<Node>();
    n->kind = TermKind::Num;
    n->value = std::move(value);
    n->typ = Typ::real();
    n->pos = pos;
    return Term(std::move(n));
}

Term Term::var(std::string name, Typ typ, SrcPos pos) {
    auto n = std::make_shared<Node>();
    n->kind = TermKind::Var;
    n->name = std::move(name);
    n->typ = typ;
    n->pos = pos;
    return Term(std::move(n));
}

Term Term::app(Op op, std::vector<Term> args, SrcPos pos) {
    auto n = std::make_shared<Node>();
    n->kind = TermKind::App;
    n->op = op;
    n->args = std::move(args);
    n->pos = pos;
    return Term(std::move(n));
}

Term Term::fn(std::string name, std::vector<Term> args, SrcPos pos) {
    auto n = std::make_shared<Node>();
    n->kind = TermKind::App;
    n->op = Op::Fn;
    n->name = std::move(name);
    n->args = std::move(args);
    n->pos = pos;
    return Term(std::move(n));
}

Term Term::list(std::vector<Term> elems, SrcPos pos) {
    auto n = std::make_shared<Node>();
    n->kind = TermKind::List;
    n->args = std::move(elems);
    n->pos = pos;
    return Term(std::move(n));
}

Term Term::interval(Term lo, Term hi, SrcPos pos) {
    auto n = std::make_shared<Node>();
    n->kind = TermKind::Interval;
    n->args = {std::move(lo), std::move(hi)};
    n->typ = Typ::set_of_real();
    n->pos = pos;
    return Term(std::move(n));
}

TermKind Term::kind() const noexcept { return n_->kind; }
Op Term::op() const noexcept { return n_->op; }
const Rational& Term::value() const noexcept { return n_->value; }
const std::string& Term::name() const noexcept { return n_->name; }
const Typ& Term::typ() const noexcept { return n_->typ; }
const std::vector<Term>& Term::args() const noexcept { return n_->args; }
const SrcPos& Term::pos() const noexcept { return n_->pos; }

Term Term::with_typ(Typ t) const {
    auto n = std::make_shared<Node>(*n_);
    n->typ = t;
    return Term(std::move(n));
}

Term Term::with_args(std::vector<Term> args) const {
    auto n = std::make_shared<Node>(*n_);
    n->args = std::move(args);
    return Term(std::move(n));
}

namespace {

template <bool CompareTyp>
bool equal_terms(const Term& a, const Term& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case TermKind::Num: return a.value() == b.value();
        case TermKind::Var:
            if (a.name() != b.name()) return false;
            if constexpr (CompareTyp) return a.typ() == b.typ();
            return true;
        case TermKind::App:
            if (a.op() != b.op()) return false;
            if (a.op() == Op::Fn && a.name() != b.name()) return false;
            break;
        case TermKind::List:
        case TermKind::Interval: break;
    }
    const auto& xs = a.args();
    const auto& ys = b.args();
    if (xs.size() != ys.size()) return false;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (!equal_terms<CompareTyp>(xs[i], ys[i])) return false;
    return true;
}

}  // namespace

bool operator==(const Term& a, const Term& b) { return equal_terms<true>(a, b); }
bool same_shape(const Term& a, const Term& b) { return equal_terms<false>(a, b); }

std::string_view op_symbol(Op op) {
    switch (op) {
        case Op::Add: return "+";
        case Op::Sub: return "-";
        case Op::Mul: return "*";
        case Op::Div: return "/";
        case Op::Pow: return "^";
        case Op::Neg: return "-";
        case Op::Eq: return "=";
        case Op::Lt: return "<";
        case Op::Le: return "<=";
        case Op::Fn: return "";
    }
    return "";
}

bool is_comparison(Op op) { return op == Op::Eq || op == Op::Lt || op == Op::Le; }

// ---------------------------------------------------------------------------
// Names

namespace {

struct Greek {
    std::string_view ascii;
    std::string_view utf8;
};

constexpr std::array<Greek, 24> kGreek{{
    {"alpha", "α"}, {"beta", "β"},  {"gamma", "γ"},   {"delta", "δ"},   {"epsilon", "ε"}, {"zeta", "ζ"},
    {"eta", "η"},   {"theta", "θ"}, {"iota", "ι"},    {"kappa", "κ"},   {"lambda", "λ"},  {"mu", "μ"},
    {"nu", "ν"},    {"xi", "ξ"},    {"omicron", "ο"}, {"pi", "π"},      {"rho", "ρ"},     {"sigma", "σ"},
    {"tau", "τ"},   {"upsilon", "υ"}, {"phi", "φ"},   {"chi", "χ"},     {"psi", "ψ"},     {"omega", "ω"},
}};

struct Builtin {
    std::string_view name;
    int arity;
};

constexpr std::array<Builtin, 8> kBuiltins{{
    {"sin", 1},
    {"cos", 1},
    {"has_equality", 1},
    {"is_linear_in", 2},
    {"is_root_form_in", 2},
    {"is_polynomial_in", 2},
    {"is_rational_in", 2},
    {"solve", 2},
}};

}  // namespace

std::string canonical_name(std::string_view ident) {
    for (const auto& g : kGreek)
        if (g.ascii == ident) return std::string(g.utf8);
    return std::string(ident);
}

int builtin_arity(std::string_view name) {
    for (const auto& b : kBuiltins)
        if (b.name == name) return b.arity;
    return -1;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok : std::uint8_t {
    Ident, Number, LParen, RParen, LBrack, RBrack, LBrace, RBrace, Comma,
    Plus, Minus, Star, Slash, Caret, Eq, Lt, Le, IntervalSep, ColonColon, End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SrcPos pos;
};

std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
}

/// Decodes one UTF-8 code point; returns 0 bytes consumed on malformed input.
std::size_t decode_utf8(std::string_view s, std::size_t i, char32_t& cp) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    auto cont = [&](std::size_t k) -> int {
        if (i + k >= s.size()) return -1;
        const auto b = static_cast<unsigned char>(s[i + k]);
        return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
    };
    if (b0 < 0x80) {
        cp = b0;
        return 1;
    }
    if ((b0 & 0xE0) == 0xC0) {
        const int c1 = cont(1);
        if (c1 < 0) return 0;
        cp = (static_cast<char32_t>(b0 & 0x1F) << 6) | static_cast<char32_t>(c1);
        return cp >= 0x80 ? 2 : 0;
    }
    if ((b0 & 0xF0) == 0xE0) {
        const int c1 = cont(1), c2 = cont(2);
        if (c1 < 0 || c2 < 0) return 0;
        cp = (static_cast<char32_t>(b0 & 0x0F) << 12) | (static_cast<char32_t>(c1) << 6) | static_cast<char32_t>(c2);
        return cp >= 0x800 ? 3 : 0;
    }
    if ((b0 & 0xF8) == 0xF0) {
        const int c1 = cont(1), c2 = cont(2), c3 = cont(3);
        if (c1 < 0 || c2 < 0 || c3 < 0) return 0;
        cp = (static_cast<char32_t>(b0 & 0x07) << 18) | (static_cast<char32_t>(c1) << 12) |
             (static_cast<char32_t>(c2) << 6) | static_cast<char32_t>(c3);
        return cp >= 0x10000 && cp <= 0x10FFFF ? 4 : 0;
    }
    return 0;
}

bool is_greek(char32_t cp) { return (cp >= 0x391 && cp <= 0x3A9) || (cp >= 0x3B1 && cp <= 0x3C9); }

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            if (i_ >= src_.size()) break;
            out.push_back(next());
        }
        Token end;
        end.kind = Tok::End;
        if (out.empty()) {
            end.pos = {1, 1, 0};
        } else {
            const SrcPos& last = out.back().pos;
            end.pos = {last.line, last.col + last.len, 0};
        }
        out.push_back(end);
        return out;
    }

private:
    void skip_space() {
        while (i_ < src_.size()) {
            const char c = src_[i_];
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++i_;
            } else if (c == ' ' || c == '\t' || c == '\r') {
                ++col_;
                ++i_;
            } else {
                break;
            }
        }
    }

    [[noreturn]] void fail(const std::string& msg, int len = 1) const {
        throw SyntaxError(SrcPos{line_, col_, len}, msg);
    }

    Token make(Tok kind, std::string text, int chars) {
        Token t{kind, std::move(text), SrcPos{line_, col_, chars}};
        col_ += chars;
        return t;
    }

    Token next() {
        const char c = src_[i_];
        const auto rest = src_.substr(i_);
        auto single = [&](Tok k) {
            ++i_;
            return make(k, std::string(1, c), 1);
        };
        switch (c) {
            case '(': return single(Tok::LParen);
            case ')': return single(Tok::RParen);
            case '[': return single(Tok::LBrack);
            case ']': return single(Tok::RBrack);
            case '{': return single(Tok::LBrace);
            case '}': return single(Tok::RBrace);
            case ',': return single(Tok::Comma);
            case '+': return single(Tok::Plus);
            case '-': return single(Tok::Minus);
            case '*': return single(Tok::Star);
            case '/': return single(Tok::Slash);
            case '^': return single(Tok::Caret);
            case '=': return single(Tok::Eq);
            case ':':
                if (rest.starts_with("::")) {
                    i_ += 2;
                    return make(Tok::ColonColon, "::", 2);
                }
                fail("unexpected ':'");
            case '<':
                if (rest.starts_with("<..<")) {
                    i_ += 4;
                    return make(Tok::IntervalSep, "<..<", 4);
                }
                if (rest.starts_with("<=")) {
                    i_ += 2;
                    return make(Tok::Le, "<=", 2);
                }
                return single(Tok::Lt);
            case '\\': return escape();
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i_ + 1 < src_.size() &&
                                                            std::isdigit(static_cast<unsigned char>(src_[i_ + 1])))) {
            std::size_t j = i_;
            bool dot = false;
            while (j < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[j])) || (src_[j] == '.' && !dot))) {
                if (src_[j] == '.') {
                    // "1..2" is not a number followed by nothing; stop before a second dot
                    if (j + 1 < src_.size() && src_[j + 1] == '.') break;
                    dot = true;
                }
                ++j;
            }
            std::string text(src_.substr(i_, j - i_));
            if (text.back() == '.') fail("malformed number '" + text + "'", static_cast<int>(text.size()));
            i_ = j;
            return make(Tok::Number, text, static_cast<int>(text.size()));
        }
        if (ident_start(c)) {
            std::size_t j = i_;
            while (j < src_.size() && ident_char(src_[j])) ++j;
            std::string text(src_.substr(i_, j - i_));
            i_ = j;
            return make(Tok::Ident, text, static_cast<int>(text.size()));
        }
        char32_t cp = 0;
        const std::size_t n = decode_utf8(src_, i_, cp);
        if (n == 0) fail("invalid UTF-8 byte");
        if (is_greek(cp)) {
            std::string text(src_.substr(i_, n));
            i_ += n;
            int chars = 1;
            // Greek letter possibly followed by ASCII identifier chars (α1, α')
            while (i_ < src_.size() && ident_char(src_[i_])) {
                text += src_[i_++];
                ++chars;
            }
            return make(Tok::Ident, text, chars);
        }
        if (cp < 0x80) fail(std::string("unexpected character '") + c + "'");
        fail("unexpected character '" + std::string(src_.substr(i_, n)) + "'");
    }

    // Isabelle-style symbols: \<alpha>, \<up>
    Token escape() {
        const auto rest = src_.substr(i_);
        if (!rest.starts_with("\\<")) fail("unexpected '\\'");
        const auto close = rest.find('>');
        if (close == std::string_view::npos) fail("unterminated symbol", static_cast<int>(rest.size()));
        const auto name = rest.substr(2, close - 2);
        const int chars = static_cast<int>(close + 1);
        if (name == "up") {
            i_ += close + 1;
            return make(Tok::Caret, "^", chars);
        }
        const std::string canon = canonical_name(name);
        if (canon == name) fail("unknown symbol '\\<" + std::string(name) + ">'", chars);
        i_ += close + 1;
        return make(Tok::Ident, canon, chars);
    }

    std::string_view src_;
    std::size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    Parser(std::vector<Token> toks, const TypeContext& ctx) : toks_(std::move(toks)), ctx_(ctx) {}

    Term parse() {
        Term t = expr();
        if (peek().kind != Tok::End) unexpected();
        return t;
    }

private:
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
    const Token& advance() {
        const Token& t = toks_[i_];
        if (i_ + 1 < toks_.size()) ++i_;
        last_ = &t;
        return t;
    }
    bool accept(Tok k) {
        if (peek().kind != k) return false;
        advance();
        return true;
    }
    [[noreturn]] void unexpected() const {
        const Token& t = peek();
        throw SyntaxError(t.pos, "unexpected " + describe(t));
    }
    [[noreturn]] void expected(const std::string& what) const {
        const Token& t = peek();
        throw SyntaxError(t.pos, "expected " + what + " but found " + describe(t));
    }
    void expect(Tok k, const char* what) {
        if (!accept(k)) expected(what);
    }

    SrcPos span_from(const SrcPos& start) const {
        const SrcPos& end = last_->pos;
        if (end.line != start.line) return {start.line, start.col, 0};
        return {start.line, start.col, end.col + end.len - start.col};
    }

    bool starts_atom() const {
        switch (peek().kind) {
            case Tok::Ident:
            case Tok::Number:
            case Tok::LParen:
            case Tok::LBrack:
            case Tok::LBrace: return true;
            default: return false;
        }
    }

    Term expr() {
        const SrcPos start = peek().pos;
        Term lhs = additive();
        Op op;
        switch (peek().kind) {
            case Tok::Eq: op = Op::Eq; break;
            case Tok::Lt: op = Op::Lt; break;
            case Tok::Le: op = Op::Le; break;
            default: return lhs;
        }
        advance();
        Term rhs = additive();
        switch (peek().kind) {
            case Tok::Eq:
            case Tok::Lt:
            case Tok::Le: throw SyntaxError(peek().pos, "comparisons do not chain; add parentheses");
            default: break;
        }
        return Term::app(op, {std::move(lhs), std::move(rhs)}, span_from(start));
    }

    Term additive() {
        const SrcPos start = peek().pos;
        Term lhs = multiplicative();
        for (;;) {
            Op op;
            if (peek().kind == Tok::Plus) op = Op::Add;
            else if (peek().kind == Tok::Minus) op = Op::Sub;
            else return lhs;
            advance();
            Term rhs = multiplicative();
            lhs = Term::app(op, {std::move(lhs), std::move(rhs)}, span_from(start));
        }
    }

    Term multiplicative() {
        const SrcPos start = peek().pos;
        Term lhs = unary();
        for (;;) {
            Op op;
            if (peek().kind == Tok::Star) op = Op::Mul;
            else if (peek().kind == Tok::Slash) op = Op::Div;
            else return lhs;
            advance();
            Term rhs = unary();
            lhs = Term::app(op, {std::move(lhs), std::move(rhs)}, span_from(start));
        }
    }

    Term unary() {
        if (peek().kind == Tok::Minus) {
            const SrcPos start = peek().pos;
            advance();
            Term operand = unary();
            return Term::app(Op::Neg, {std::move(operand)}, span_from(start));
        }
        return power();
    }

    Term power() {
        const SrcPos start = peek().pos;
        Term base = application();
        if (peek().kind != Tok::Caret) return base;
        advance();
        Term exponent = unary();
        return Term::app(Op::Pow, {std::move(base), std::move(exponent)}, span_from(start));
    }

    int function_arity(const std::string& name) const {
        if (ctx_.descriptor(name)) return 1;
        return builtin_arity(name);
    }

    Term application() {
        const Token& head = peek();
        if (head.kind == Tok::Ident) {
            const int arity = function_arity(head.text);
            if (arity > 0) {
                const SrcPos start = head.pos;
                const std::string name = head.text;
                advance();
                std::vector<Term> args;
                if (arity == 1) {
                    if (!starts_atom()) expected("an argument for '" + name + "'");
                    args.push_back(application());
                } else {
                    expect(Tok::LParen, "'(' after function name");
                    args.push_back(expr());
                    while (accept(Tok::Comma)) args.push_back(expr());
                    if (static_cast<int>(args.size()) != arity && peek().kind == Tok::RParen)
                        throw SyntaxError(peek().pos, "'" + name + "' expects " + std::to_string(arity) +
                                                          " arguments, got " + std::to_string(args.size()));
                    expect(Tok::RParen, "')'");
                }
                return Term::fn(name, std::move(args), span_from(start));
            }
        }
        return primary();
    }

    Term primary() {
        const Token& t = peek();
        const SrcPos start = t.pos;
        switch (t.kind) {
            case Tok::Number: {
                auto value = parse_decimal(t.text);
                if (!value) throw SyntaxError(t.pos, "malformed number " + describe(t));
                advance();
                return Term::num(*value, start);
            }
            case Tok::Ident: {
                const std::string name = canonical_name(t.text);
                advance();
                auto it = ctx_.bindings.find(name);
                const Typ typ = it == ctx_.bindings.end() ? Typ::unknown() : it->second;
                return Term::var(name, typ, start);
            }
            case Tok::LParen: {
                advance();
                Term inner = expr();
                if (accept(Tok::ColonColon)) {
                    if (peek().kind != Tok::Ident) expected("a type name");
                    const Token& tn = advance();
                    auto typ = parse_typ(tn.text);
                    if (!typ) throw SyntaxError(tn.pos, "unknown type '" + tn.text + "'");
                    if (inner.is_var()) inner = inner.with_typ(*typ);
                }
                expect(Tok::RParen, "')'");
                return inner;
            }
            case Tok::LBrack: {
                if (list_depth_ > 0) throw SyntaxError(t.pos, "nested lists are not supported");
                advance();
                ++list_depth_;
                std::vector<Term> elems;
                if (peek().kind != Tok::RBrack) {
                    elems.push_back(expr());
                    while (accept(Tok::Comma)) elems.push_back(expr());
                }
                expect(Tok::RBrack, "']' or ','");
                --list_depth_;
                return Term::list(std::move(elems), span_from(start));
            }
            case Tok::LBrace: {
                advance();
                Term lo = additive();
                expect(Tok::IntervalSep, "'<..<'");
                Term hi = additive();
                expect(Tok::RBrace, "'}'");
                return Term::interval(std::move(lo), std::move(hi), span_from(start));
            }
            default: unexpected();
        }
    }

    std::vector<Token> toks_;
    const TypeContext& ctx_;
    std::size_t i_ = 0;
    const Token* last_ = nullptr;
    int list_depth_ = 0;
};

std::atomic<std::uint64_t> g_parse_calls{0};

}  // namespace

Term parse_term(std::string_view src, const TypeContext& ctx) {
    g_parse_calls.fetch_add(1, std::memory_order_relaxed);
    Lexer lexer(src);
    Parser parser(lexer.run(), ctx);
    return parser.parse();
}

std::uint64_t parse_count() noexcept { return g_parse_calls.load(std::memory_order_relaxed); }

// ---------------------------------------------------------------------------
// Rendering

namespace {

constexpr int kCmp = 1, kAdd = 2, kMul = 3, kNeg = 4, kPow = 5, kApp = 6, kAtom = 7;

int precedence(const Term& t) {
    switch (t.kind()) {
        case TermKind::Num:
            if (t.value() < 0) return kNeg;
            return is_terminating(t.value()) ? kAtom : kMul;
        case TermKind::Var:
        case TermKind::List:
        case TermKind::Interval: return kAtom;
        case TermKind::App: break;
    }
    switch (t.op()) {
        case Op::Eq:
        case Op::Lt:
        case Op::Le: return kCmp;
        case Op::Add:
        case Op::Sub: return kAdd;
        case Op::Mul:
        case Op::Div: return kMul;
        case Op::Neg: return kNeg;
        case Op::Pow: return kPow;
        case Op::Fn: return kApp;
    }
    return kAtom;
}

void render_to(const Term& t, std::string& out);

void render_at(const Term& t, int min_prec, std::string& out) {
    if (precedence(t) < min_prec) {
        out += '(';
        render_to(t, out);
        out += ')';
    } else {
        render_to(t, out);
    }
}

void render_to(const Term& t, std::string& out) {
    switch (t.kind()) {
        case TermKind::Num: out += to_string(t.value()); return;
        case TermKind::Var: out += t.name(); return;
        case TermKind::List:
            out += '[';
            for (std::size_t i = 0; i < t.args().size(); ++i) {
                if (i) out += ", ";
                render_at(t.args()[i], kCmp, out);
            }
            out += ']';
            return;
        case TermKind::Interval:
            out += '{';
            render_at(t.args()[0], kAdd, out);
            out += " <..< ";
            render_at(t.args()[1], kAdd, out);
            out += '}';
            return;
        case TermKind::App: break;
    }
    const auto& a = t.args();
    switch (t.op()) {
        case Op::Eq:
        case Op::Lt:
        case Op::Le:
            render_at(a[0], kAdd, out);
            out += ' ';
            out += op_symbol(t.op());
            out += ' ';
            render_at(a[1], kAdd, out);
            return;
        case Op::Add:
        case Op::Sub:
            render_at(a[0], kAdd, out);
            out += ' ';
            out += op_symbol(t.op());
            out += ' ';
            render_at(a[1], kMul, out);
            return;
        case Op::Mul:
        case Op::Div:
            render_at(a[0], kMul, out);
            out += ' ';
            out += op_symbol(t.op());
            out += ' ';
            render_at(a[1], kNeg, out);
            return;
        case Op::Neg: {
            out += '-';
            const bool minus_next = a[0].is_app(Op::Neg) || (a[0].is_num() && a[0].value() < 0);
            if (minus_next) out += ' ';
            render_at(a[0], kNeg, out);
            return;
        }
        case Op::Pow:
            render_at(a[0], kApp, out);
            out += " ^ ";
            render_at(a[1], kNeg, out);
            return;
        case Op::Fn:
            out += t.name();
            if (a.size() == 1) {
                out += ' ';
                render_at(a[0], kApp, out);
            } else {
                out += " (";
                for (std::size_t i = 0; i < a.size(); ++i) {
                    if (i) out += ", ";
                    render_at(a[i], kCmp, out);
                }
                out += ')';
            }
            return;
    }
}

}  // namespace

std::string render(const Term& t) {
    std::string out;
    render_to(t, out);
    return out;
}

// ---------------------------------------------------------------------------
// Substitution and typing

const Term* lookup(const Env& env, std::string_view name) {
    for (const auto& [k, v] : env)
        if (k == name) return &v;
    return nullptr;
}

Term substitute(const Env& env, const Term& t) {
    if (env.empty()) return t;
    if (t.is_var()) {
        const Term* bound = lookup(env, t.name());
        return bound ? *bound : t;
    }
    if (t.args().empty()) return t;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const auto& a : t.args()) args.push_back(substitute(env, a));
    return t.with_args(std::move(args));
}

Term adapt_term_to_type(const TypeContext& ctx, const Term& t) {
    if (t.is_var()) {
        if (t.typ().known()) return t;
        auto it = ctx.bindings.find(t.name());
        if (it == ctx.bindings.end() || !it->second.known()) throw TypeError(t.name(), t.pos());
        return t.with_typ(it->second);
    }
    if (t.args().empty()) return t;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const auto& a : t.args()) args.push_back(adapt_term_to_type(ctx, a));
    return t.with_args(std::move(args));
}

namespace {
void collect_vars(const Term& t, std::vector<std::string>& out) {
    if (t.is_var()) {
        if (std::find(out.begin(), out.end(), t.name()) == out.end()) out.push_back(t.name());
        return;
    }
    for (const auto& a : t.args()) collect_vars(a, out);
}
}  // namespace

std::vector<std::string> variables(const Term& t) {
    std::vector<std::string> out;
    collect_vars(t, out);
    return out;
}

bool contains_var(const Term& t, std::string_view name) {
    if (t.is_var()) return t.name() == name;
    return std::any_of(t.args().begin(), t.args().end(), [&](const Term& a) { return contains_var(a, name); });
}

void bind_defaults(const Term& t, std::map<std::string, Typ>& bindings) {
    if (t.is_var()) {
        auto [it, inserted] = bindings.try_emplace(t.name(), t.typ().known() ? t.typ() : Typ::real());
        if (!inserted && !it->second.known()) it->second = t.typ().known() ? t.typ() : Typ::real();
        return;
    }
    for (const auto& a : t.args()) bind_defaults(a, bindings);
}

}  // namespace formspec
