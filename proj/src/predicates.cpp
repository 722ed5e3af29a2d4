#include "formspec/predicates.hpp"

#include <algorithm>

namespace formspec {

namespace {

/// How the unknown x occurs in an equation e, after moving everything to one side.
struct Occurrence {
    int degree = 0;           // in the numerator, as a plain variable
    bool in_denominator = false;
    bool in_opaque = false;   // under sin/cos or a non-integer power
    bool in_root = false;     // under a non-integer rational power
};

bool is_root_atom(const Term& atom) {
    return atom.is_app(Op::Pow) && atom.args()[1].is_num() && !is_integer(atom.args()[1].value());
}

std::optional<Occurrence> occurrence(const Term& e, const Term& x) {
    if (!e.is_equation() || !x.is_var()) return std::nullopt;
    RatFn f;
    try {
        f = to_ratfn(Term::app(Op::Sub, {e.args()[0], e.args()[1]}));
    } catch (const Unsupported&) {
        return std::nullopt;
    }
    Occurrence occ;
    const std::string& key = x.name();
    occ.degree = f.num.degree_in(key);
    occ.in_denominator = !f.den.is_constant() && f.den.degree_in(key) > 0;
    auto scan = [&](const Poly& p) {
        for (const auto& k : p.used_atoms()) {
            if (k == key) continue;
            const Term& atom = p.atoms().at(k);
            if (!contains_var(atom, key)) continue;
            occ.in_opaque = true;
            if (is_root_atom(atom)) occ.in_root = true;
            if (&p == &f.den) occ.in_denominator = true;
        }
    };
    scan(f.num);
    scan(f.den);
    return occ;
}

Truth truth(bool b) { return b ? Truth::True : Truth::False; }

template <class Decide>
PredicateFn binary(Decide decide) {
    return [decide](const std::vector<Term>& args) -> Truth {
        if (args.size() != 2) return Truth::Unknown;
        auto occ = occurrence(args[0], args[1]);
        if (!occ) return Truth::False;
        return truth(decide(*occ));
    };
}

}  // namespace

PredicateRegistry register_builtin_predicates() {
    PredicateRegistry r;
    r["has_equality"] = [](const std::vector<Term>& args) -> Truth {
        if (args.size() != 1) return Truth::Unknown;
        return truth(args[0].is_equation());
    };
    r["is_polynomial_in"] = binary([](const Occurrence& o) {
        return o.degree >= 1 && !o.in_denominator && !o.in_opaque;
    });
    r["is_linear_in"] = binary([](const Occurrence& o) {
        return o.degree == 1 && !o.in_denominator && !o.in_opaque;
    });
    r["is_root_form_in"] = binary([](const Occurrence& o) { return o.in_root; });
    r["is_rational_in"] = binary([](const Occurrence& o) { return o.in_denominator && !o.in_opaque; });
    return r;
}

RuleSet default_rule_set(std::string id) {
    RuleSet rs;
    rs.id = std::move(id);
    rs.evaluators = register_builtin_predicates();
    return rs;
}

}  // namespace formspec
