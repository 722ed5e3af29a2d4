#pragma once

// Shared fixtures for the unit tests and the acceptance runner.

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "formspec/imodel.hpp"
#include "formspec/knowledge.hpp"
#include "formspec/specify.hpp"

namespace testing {

using namespace formspec;

inline std::shared_ptr<const Store> shipped() {
    static const auto store = std::make_shared<const Store>(load_knowledge({FORMSPEC_KNOWLEDGE_DIR}));
    return store;
}

inline const TypeContext& diff_ctx() {
    static const TypeContext ctx = shipped()->context("Diff_App");
    return ctx;
}

/// Parsed and type-adapted under the Diff_App vocabulary.
inline Term T(std::string_view src) { return parse_item(src, diff_ctx()); }

inline const RuleSet& rules() { return shipped()->rule_set("eval_rls"); }

inline const char* const kCoil = "Diff_App/coil-kernel";

/// The items of the complete specification of the coil kernel, variant 1.
struct Row {
    MField field;
    const char* text;
};
inline const std::vector<Row>& coil_problem_items() {
    static const std::vector<Row> rows{
        {MField::Given, "Constants [r = 7]"},
        {MField::Find, "Maximum A"},
        {MField::Find, "AdditionalValues [u, v]"},
        {MField::Relate, "Extremum (A = 2 * u * v - u ^ 2)"},
        {MField::Relate, "SideConditions [(u / 2) ^ 2 + (v / 2) ^ 2 = r ^ 2]"},
    };
    return rows;
}

inline TacticKind add_kind(MField f) {
    return f == MField::Given ? TacticKind::Add_Given : f == MField::Find ? TacticKind::Add_Find : TacticKind::Add_Relation;
}

inline TacticInput add(MField f, std::string text) { return TacticInput{add_kind(f), std::move(text), {}, -1}; }
inline TacticInput tactic(TacticKind k, std::string text = {}) { return TacticInput{k, std::move(text), {}, -1}; }

inline SpecSession coil_session(Settings settings = {}) { return start_example(shipped(), kCoil, settings); }

// ---------------------------------------------------------------------------
// Independent arithmetic oracle: exact evaluation at a point.

using Point = std::map<std::string, Rational>;

inline std::optional<Rational> value_at(const Term& t, const Point& at) {
    switch (t.kind()) {
        case TermKind::Num: return t.value();
        case TermKind::Var: {
            auto it = at.find(t.name());
            if (it == at.end()) return std::nullopt;
            return it->second;
        }
        case TermKind::App: break;
        default: return std::nullopt;
    }
    std::vector<Rational> v;
    for (const auto& a : t.args()) {
        auto x = value_at(a, at);
        if (!x) return std::nullopt;
        v.push_back(*x);
    }
    switch (t.op()) {
        case Op::Add: return v[0] + v[1];
        case Op::Sub: return v[0] - v[1];
        case Op::Mul: return v[0] * v[1];
        case Op::Div:
            if (v[1] == 0) return std::nullopt;
            return v[0] / v[1];
        case Op::Neg: return -v[0];
        case Op::Pow: {
            if (!is_integer(v[1]) || v[1] < 0 || v[1] > 12) return std::nullopt;
            Rational r = 1;
            for (int i = 0; i < static_cast<int>(numer(v[1])); ++i) r *= v[0];
            return r;
        }
        default: return std::nullopt;
    }
}

/// lhs - rhs of an equation, evaluated at a point.
inline std::optional<Rational> residual_at(const Term& eq, const Point& at) {
    auto l = value_at(eq.args()[0], at);
    auto r = value_at(eq.args()[1], at);
    if (!l || !r) return std::nullopt;
    return *l - *r;
}

/// Two polynomial equations have the same solution set up to a constant
/// factor iff their residuals are proportional; checked at random points.
inline bool proportional_by_sampling(const Term& a, const Term& b, const std::vector<std::string>& vars,
                                     std::mt19937& rng) {
    std::uniform_int_distribution<int> pick(-997, 997);
    std::optional<Rational> k;
    bool all_zero = true;
    std::vector<std::pair<Rational, Rational>> samples;
    for (int i = 0; i < 8; ++i) {
        Point p;
        for (const auto& v : vars) p[v] = Rational(pick(rng), 1 + (pick(rng) & 7));
        auto ra = residual_at(a, p);
        auto rb = residual_at(b, p);
        if (!ra || !rb) return false;
        samples.emplace_back(*ra, *rb);
        if (*ra != 0 || *rb != 0) all_zero = false;
        if (!k && *rb != 0) k = *ra / *rb;
    }
    if (all_zero) return true;
    if (!k || *k == 0) return false;
    for (const auto& [ra, rb] : samples)
        if (ra != *k * rb) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Random terms

inline Rational small_rational(std::mt19937& rng, bool allow_zero = true) {
    std::uniform_int_distribution<int> num(allow_zero ? 0 : 1, 9), den(1, 4);
    Rational q(num(rng), den(rng));
    return q;
}

/// A random polynomial over `vars` as a sum of monomials with small
/// integer coefficients.
inline Term random_poly(std::mt19937& rng, const std::vector<std::string>& vars, int terms) {
    std::uniform_int_distribution<int> coef(1, 9), exp(0, 2), sign(0, 1), var(0, static_cast<int>(vars.size()) - 1);
    std::optional<Term> sum;
    for (int i = 0; i < terms; ++i) {
        Term m = Term::num(coef(rng));
        for (int j = 0; j < 2; ++j) {
            const int e = exp(rng);
            if (e == 0) continue;
            Term x = Term::var(vars[var(rng)]);
            m = Term::app(Op::Mul, {m, e == 1 ? x : Term::app(Op::Pow, {x, Term::num(e)})});
        }
        if (!sum)
            sum = sign(rng) ? Term::app(Op::Neg, {m}) : m;
        else
            sum = Term::app(sign(rng) ? Op::Add : Op::Sub, {*sum, m});
    }
    return *sum;
}

inline Term random_equation(std::mt19937& rng, const std::vector<std::string>& vars) {
    std::uniform_int_distribution<int> n(1, 4);
    return Term::eq(random_poly(rng, vars, n(rng)), random_poly(rng, vars, n(rng)));
}

/// An equation with the same solutions: sides swapped, terms moved across,
/// both sides scaled by a nonzero rational.
inline Term rearranged(std::mt19937& rng, const Term& eq) {
    const Term& l = eq.args()[0];
    const Term& r = eq.args()[1];
    std::uniform_int_distribution<int> how(0, 4);
    Rational c = small_rational(rng, false);
    if (std::uniform_int_distribution<int>(0, 1)(rng)) c = -c;
    const Term k = c < 0 ? Term::app(Op::Neg, {Term::num(-c)}) : Term::num(c);
    switch (how(rng)) {
        case 0: return Term::eq(r, l);
        case 1: return Term::eq(Term::app(Op::Sub, {l, r}), Term::num(0));
        case 2: return Term::eq(Term::app(Op::Mul, {k, l}), Term::app(Op::Mul, {k, r}));
        case 3: return Term::eq(Term::num(0), Term::app(Op::Mul, {k, Term::app(Op::Sub, {r, l})}));
        default: return Term::eq(Term::app(Op::Div, {l, k}), Term::app(Op::Div, {r, k}));
    }
}

/// Random well-formed term of the inner syntax, for round-trip tests.
inline Term random_term(std::mt19937& rng, int depth) {
    static const char* const names[] = {"u", "v", "r", "x", "A", "α", "ε"};
    std::uniform_int_distribution<int> pick(0, 8);
    const int k = depth <= 0 ? pick(rng) % 2 : pick(rng);
    switch (k) {
        case 0: return Term::num(Rational(std::uniform_int_distribution<int>(0, 40)(rng), 1 + 3 * (pick(rng) == 0)));
        case 1: return Term::var(names[pick(rng) % 7]);
        case 2: return Term::app(Op::Add, {random_term(rng, depth - 1), random_term(rng, depth - 1)});
        case 3: return Term::app(Op::Sub, {random_term(rng, depth - 1), random_term(rng, depth - 1)});
        case 4: return Term::app(Op::Mul, {random_term(rng, depth - 1), random_term(rng, depth - 1)});
        case 5: return Term::app(Op::Div, {random_term(rng, depth - 1), random_term(rng, depth - 1)});
        case 6: return Term::app(Op::Pow, {random_term(rng, depth - 1), random_term(rng, depth - 1)});
        case 7: return Term::app(Op::Neg, {random_term(rng, depth - 1)});
        default: return Term::fn(pick(rng) % 2 ? "sin" : "cos", {random_term(rng, depth - 1)});
    }
}

/// Top-level wrapper: comparisons, intervals and plain expressions.
inline Term random_sentence(std::mt19937& rng, int depth) {
    switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
        case 0: return Term::eq(random_term(rng, depth), random_term(rng, depth));
        case 1: return Term::app(Op::Lt, {random_term(rng, depth), random_term(rng, depth)});
        case 2: return Term::interval(random_term(rng, 1), random_term(rng, 1));
        case 3: return Term::list({random_term(rng, depth), Term::eq(random_term(rng, 1), random_term(rng, 1))});
        default: return random_term(rng, depth);
    }
}

}  // namespace testing
