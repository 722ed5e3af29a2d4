#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "formspec/error.hpp"
#include "formspec/rational.hpp"
#include "formspec/srcpos.hpp"

namespace formspec {

enum class TypKind : std::uint8_t { Unknown, Real, Bool, List, SetOfReal };

/// Types of the term language. Lists nest one level: `elem` is only
/// meaningful for TypKind::List.
struct Typ {
    TypKind kind = TypKind::Unknown;
    TypKind elem = TypKind::Unknown;

    static Typ unknown() { return {}; }
    static Typ real() { return {TypKind::Real, TypKind::Unknown}; }
    static Typ boolean() { return {TypKind::Bool, TypKind::Unknown}; }
    static Typ set_of_real() { return {TypKind::SetOfReal, TypKind::Unknown}; }
    static Typ list_of(TypKind e) { return {TypKind::List, e}; }

    bool known() const { return kind != TypKind::Unknown; }
    std::string str() const;
    bool operator==(const Typ&) const = default;
};

/// Parses "real", "bool", "real list", "bool list", "real set".
std::optional<Typ> parse_typ(std::string_view name);

/// How a descriptor's argument is entered; selects the input template.
enum class ArgShape : std::uint8_t { ListOfEq, ListOfAtoms, Single, StringRef };

std::string_view to_string(ArgShape s);
std::optional<ArgShape> parse_arg_shape(std::string_view s);
/// "[__=__, __=__]", "[__, __]", "__", "\"__\"".
std::string_view input_template(ArgShape s);

/// A named tag such as Constants or Maximum, identifying what an item denotes.
struct Descriptor {
    std::string name;
    ArgShape shape = ArgShape::Single;
    Typ arg_typ = Typ::real();

    bool is_list() const { return shape == ArgShape::ListOfEq || shape == ArgShape::ListOfAtoms; }
    bool operator==(const Descriptor&) const = default;
};

using TheoryId = std::string;

/// Variable bindings and the descriptor vocabulary visible while parsing.
struct TypeContext {
    std::map<std::string, Typ> bindings;
    TheoryId theory;
    std::map<std::string, Descriptor> descriptors;

    const Descriptor* descriptor(std::string_view name) const;
};

enum class Op : std::uint8_t { Add, Sub, Mul, Div, Pow, Neg, Eq, Lt, Le, Fn };

enum class TermKind : std::uint8_t { Num, Var, App, List, Interval };

std::string_view op_symbol(Op op);
bool is_comparison(Op op);

/// Immutable, shareable term. Copies share structure.
class Term {
public:
    Term();  // the numeral 0

    static Term num(Rational value, SrcPos pos = {});
    static Term var(std::string name, Typ typ = {}, SrcPos pos = {});
    static Term app(Op op, std::vector<Term> args, SrcPos pos = {});
    /// Named application: sin, cos, builtin predicates, `solve`, descriptors.
    static Term fn(std::string name, std::vector<Term> args, SrcPos pos = {});
    static Term list(std::vector<Term> elems, SrcPos pos = {});
    static Term interval(Term lo, Term hi, SrcPos pos = {});

    static Term eq(Term a, Term b) { return app(Op::Eq, {std::move(a), std::move(b)}); }

    TermKind kind() const noexcept;
    Op op() const noexcept;
    const Rational& value() const noexcept;
    /// Variable name, or the function name for Op::Fn.
    const std::string& name() const noexcept;
    const Typ& typ() const noexcept;
    /// Operands, list elements, or {lo, hi} of an interval.
    const std::vector<Term>& args() const noexcept;
    const SrcPos& pos() const noexcept;

    bool is_num() const noexcept { return kind() == TermKind::Num; }
    bool is_var() const noexcept { return kind() == TermKind::Var; }
    bool is_list() const noexcept { return kind() == TermKind::List; }
    bool is_interval() const noexcept { return kind() == TermKind::Interval; }
    bool is_app(Op o) const noexcept { return kind() == TermKind::App && op() == o; }
    bool is_fn(std::string_view fname) const noexcept { return is_app(Op::Fn) && name() == fname; }
    bool is_equation() const noexcept { return is_app(Op::Eq); }

    Term with_typ(Typ t) const;
    Term with_args(std::vector<Term> args) const;

    /// Identical modulo source positions (types are compared).
    friend bool operator==(const Term& a, const Term& b);

private:
    struct Node;
    explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    std::shared_ptr<const Node> n_;
};

/// Structural equality: ignores both positions and type annotations.
bool same_shape(const Term& a, const Term& b);

/// Parses one term of the inner syntax. Unknown variables get Typ::unknown().
/// Throws SyntaxError pointing at the first offending token.
Term parse_term(std::string_view src, const TypeContext& ctx);

/// Number of parse_term calls made so far; lets tests assert parse-free paths.
std::uint64_t parse_count() noexcept;

/// Linear text with minimal parentheses; Greek letters as Unicode.
std::string render(const Term& t);

/// Ordered placeholder bindings, e.g. [("fixes", [r = 7]), ("maxx", A)].
using Env = std::vector<std::pair<std::string, Term>>;

const Term* lookup(const Env& env, std::string_view name);

/// Replaces every variable bound in env; unbound variables pass through.
Term substitute(const Env& env, const Term& t);

/// Resolves Unknown variable types from ctx; throws TypeError for names
/// with neither a binding nor an annotation.
Term adapt_term_to_type(const TypeContext& ctx, const Term& t);

/// Variable names in first-occurrence order.
std::vector<std::string> variables(const Term& t);

bool contains_var(const Term& t, std::string_view name);

/// Adds a Real binding for every unannotated variable of t not yet bound,
/// and records explicit annotations.
void bind_defaults(const Term& t, std::map<std::string, Typ>& bindings);

/// Maps ASCII Greek names ("alpha", "pi") to their Unicode letter; other names unchanged.
std::string canonical_name(std::string_view ident);

/// Signature of builtin named functions (sin, cos, predicates, solve).
int builtin_arity(std::string_view name);  // -1 when not builtin

}  // namespace formspec
