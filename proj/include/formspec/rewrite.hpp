#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "formspec/rational.hpp"
#include "formspec/terms.hpp"

namespace formspec {

// ---------------------------------------------------------------------------
// Polynomials over opaque atoms

/// Sorted (atom key, exponent) pairs; exponents are positive.
using Monomial = std::vector<std::pair<std::string, int>>;

/// Graded lexicographic order; atoms compare by key.
struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

int degree(const Monomial& m);

/// Multivariate polynomial with exact rational coefficients. Atoms are
/// variables or non-polynomial subterms (sin α, x ^ (1 / 2)) kept opaque.
class Poly {
public:
    Poly() = default;
    static Poly constant(const Rational& c);
    static Poly atom(const Term& t);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_value() const;  // requires is_constant()

    const std::map<Monomial, Rational, GrlexLess>& terms() const { return terms_; }
    const std::map<std::string, Term>& atoms() const { return atoms_; }

    /// Largest exponent of the atom `key` (0 when absent).
    int degree_in(const std::string& key) const;
    /// Atom keys actually used by some monomial.
    std::vector<std::string> used_atoms() const;

    /// Coefficient of the leading (grlex-greatest) monomial; requires !is_zero().
    const Rational& leading_coefficient() const;

    /// Scaled to integer coefficients with gcd 1 and positive leading coefficient.
    Poly primitive() const;
    /// As primitive(), but only by a positive factor (keeps the sign).
    Poly primitive_positive() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator-() const;
    Poly scaled(const Rational& c) const;

    Term to_term() const;

    friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

private:
    void merge_atoms(const Poly& o);
    std::map<Monomial, Rational, GrlexLess> terms_;
    std::map<std::string, Term> atoms_;
};

/// num / den with den != 0; a constant denominator is folded into num.
struct RatFn {
    Poly num;
    Poly den = Poly::constant(1);

    bool is_polynomial() const { return den.is_constant(); }
};

/// Arithmetic of a term as a rational function. Throws Unsupported for
/// lists, intervals, comparisons, predicates and descriptor applications
/// inside arithmetic, for division by zero, and for oversized powers.
RatFn to_ratfn(const Term& t);

// ---------------------------------------------------------------------------
// Rule sets

enum class Truth { False, True, Unknown };

std::string_view to_string(Truth t);

using PredicateFn = std::function<Truth(const std::vector<Term>& args)>;

struct RewriteRule {
    Term lhs;  // variables in lhs are pattern variables
    Term rhs;
};

/// Evaluators and oriented rules used for precondition evaluation. The
/// equivalence pipeline itself is fixed; rules here are applied in a
/// single bottom-up pass, which always terminates.
struct RuleSet {
    std::string id;
    std::map<std::string, PredicateFn> evaluators;
    std::vector<RewriteRule> rules;
};

/// One bottom-up pass of rs.rules over t (results are not rewritten again).
Term apply_rules(const RuleSet& rs, const Term& t);

// ---------------------------------------------------------------------------
// Normal forms

struct NormalForm {
    enum class Kind { Equation, Relation, Expression, Interval, List, Opaque };

    Kind kind = Kind::Expression;
    Op rel = Op::Eq;            // Relation: Lt or Le, read as 0 rel poly
    Poly poly;                  // Equation / Relation
    RatFn expr;                 // Expression
    std::string name;           // Opaque: function name
    std::vector<NormalForm> parts;  // Interval {lo, hi}, List, Opaque args

    Term to_term() const;

    /// Expressions compare by cross-multiplication, everything else structurally.
    friend bool operator==(const NormalForm& a, const NormalForm& b);
};

/// Canonical form. Equations: lhs - rhs cleared of denominators, expanded,
/// collected, primitive with positive leading coefficient.
NormalForm normalize(const RuleSet& rs, const Term& t);

/// normalize(a) == normalize(b); lists compare as multisets.
bool equivalent(const RuleSet& rs, const Term& a, const Term& b);

/// Ground comparisons are decided exactly; functions registered in rs are
/// dispatched by name; anything else is Unknown.
Truth eval_pred(const RuleSet& rs, const Term& p);

/// Value of a ground arithmetic term, if it has one.
std::optional<Rational> eval_ground(const Term& t);

}  // namespace formspec
