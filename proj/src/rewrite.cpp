#include "formspec/rewrite.hpp"

#include <algorithm>
#include <boost/multiprecision/integer.hpp>

namespace formspec {

namespace {

constexpr int kMaxExponent = 32;
constexpr std::size_t kMaxTerms = 4096;

Monomial mul_monomials(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.push_back(b[j++]);
        } else {
            out.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
    const int da = degree(a), db = degree(b);
    if (da != db) return da < db;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first == b[j].first) {
            if (a[i].second != b[j].second) return a[i].second < b[j].second;
            ++i;
            ++j;
        } else if (a[i].first < b[j].first) {
            return false;  // a has an earlier atom: a is greater
        } else {
            return true;
        }
    }
    return i == a.size() && j < b.size();
}

int degree(const Monomial& m) {
    int d = 0;
    for (const auto& [_, e] : m) d += e;
    return d;
}

// ---------------------------------------------------------------------------
// Poly

Poly Poly::constant(const Rational& c) {
    Poly p;
    if (c != 0) p.terms_.emplace(Monomial{}, c);
    return p;
}

Poly Poly::atom(const Term& t) {
    Poly p;
    std::string key = render(t);
    p.terms_.emplace(Monomial{{key, 1}}, Rational(1));
    p.atoms_.emplace(std::move(key), t);
    return p;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational Poly::constant_value() const { return terms_.empty() ? Rational(0) : terms_.begin()->second; }

int Poly::degree_in(const std::string& key) const {
    int d = 0;
    for (const auto& [m, _] : terms_)
        for (const auto& [k, e] : m)
            if (k == key) d = std::max(d, e);
    return d;
}

std::vector<std::string> Poly::used_atoms() const {
    std::vector<std::string> out;
    for (const auto& [m, _] : terms_)
        for (const auto& [k, e] : m)
            if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
    std::sort(out.begin(), out.end());
    return out;
}

const Rational& Poly::leading_coefficient() const { return terms_.rbegin()->second; }

Poly Poly::primitive_positive() const {
    if (is_zero()) return *this;
    Integer lcm_den = 1;
    for (const auto& [_, c] : terms_) lcm_den = boost::multiprecision::lcm(lcm_den, denom(c));
    Integer g = 0;
    for (const auto& [_, c] : terms_) {
        Integer n = numer(c) * (lcm_den / denom(c));
        g = boost::multiprecision::gcd(g, n < 0 ? Integer(-n) : n);
    }
    return scaled(Rational(lcm_den, g));
}

Poly Poly::primitive() const {
    Poly p = primitive_positive();
    if (!p.is_zero() && p.leading_coefficient() < 0) return -p;
    return p;
}

void Poly::merge_atoms(const Poly& o) {
    for (const auto& [k, t] : o.atoms_) atoms_.try_emplace(k, t);
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    r.merge_atoms(o);
    for (const auto& [m, c] : o.terms_) {
        auto [it, inserted] = r.terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) r.terms_.erase(it);
        }
    }
    return r;
}

Poly Poly::operator-() const { return scaled(Rational(-1)); }

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    Poly r;
    r.atoms_ = atoms_;
    r.merge_atoms(o);
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            auto m = mul_monomials(ma, mb);
            Rational c = ca * cb;
            auto [it, inserted] = r.terms_.try_emplace(std::move(m), c);
            if (!inserted) {
                it->second += c;
                if (it->second == 0) r.terms_.erase(it);
            }
        }
    }
    if (r.terms_.size() > kMaxTerms) throw Unsupported("expression too large to expand");
    return r;
}

Poly Poly::scaled(const Rational& c) const {
    if (c == 0) return Poly{};
    Poly r = *this;
    for (auto& [_, coeff] : r.terms_) coeff *= c;
    return r;
}

Term Poly::to_term() const {
    if (terms_.empty()) return Term::num(0);
    std::optional<Term> sum;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        const bool negative = c < 0;
        const Rational mag = negative ? Rational(-c) : c;
        std::optional<Term> product;
        if (mag != 1 || m.empty()) product = Term::num(mag);
        for (const auto& [key, e] : m) {
            Term factor = atoms_.at(key);
            if (e != 1) factor = Term::app(Op::Pow, {factor, Term::num(e)});
            product = product ? Term::app(Op::Mul, {*product, factor}) : factor;
        }
        if (!sum) {
            sum = negative ? Term::app(Op::Neg, {*product}) : *product;
        } else {
            sum = Term::app(negative ? Op::Sub : Op::Add, {*sum, *product});
        }
    }
    return *sum;
}

// ---------------------------------------------------------------------------
// Rational functions

namespace {

RatFn make(Poly num, Poly den) {
    if (den.is_zero()) throw Unsupported("division by zero");
    if (num.is_zero()) return RatFn{Poly{}, Poly::constant(1)};
    if (den.is_constant()) {
        const Rational c = den.constant_value();
        return RatFn{num.scaled(1 / c), Poly::constant(1)};
    }
    return RatFn{std::move(num), std::move(den)};
}

RatFn add(const RatFn& a, const RatFn& b, bool subtract) {
    const Poly rhs = subtract ? -b.num : b.num;
    if (a.den == b.den) return make(a.num + rhs, a.den);
    return make(a.num * b.den + rhs * a.den, a.den * b.den);
}

RatFn power(const RatFn& base, int k) {
    Poly num = Poly::constant(1), den = Poly::constant(1);
    for (int i = 0; i < std::abs(k); ++i) {
        num = num * base.num;
        den = den * base.den;
    }
    if (k < 0) std::swap(num, den);
    return make(std::move(num), std::move(den));
}

Term canonical_expr(const Term& t);

RatFn ratfn_of(const Term& t) {
    switch (t.kind()) {
        case TermKind::Num: return RatFn{Poly::constant(t.value()), Poly::constant(1)};
        case TermKind::Var: return RatFn{Poly::atom(t), Poly::constant(1)};
        case TermKind::List: throw Unsupported("list '" + render(t) + "' inside arithmetic");
        case TermKind::Interval: throw Unsupported("interval '" + render(t) + "' inside arithmetic");
        case TermKind::App: break;
    }
    const auto& a = t.args();
    switch (t.op()) {
        case Op::Add: return add(ratfn_of(a[0]), ratfn_of(a[1]), false);
        case Op::Sub: return add(ratfn_of(a[0]), ratfn_of(a[1]), true);
        case Op::Neg: {
            RatFn x = ratfn_of(a[0]);
            return make(-x.num, x.den);
        }
        case Op::Mul: {
            RatFn x = ratfn_of(a[0]), y = ratfn_of(a[1]);
            return make(x.num * y.num, x.den * y.den);
        }
        case Op::Div: {
            RatFn x = ratfn_of(a[0]), y = ratfn_of(a[1]);
            if (y.num.is_zero()) throw Unsupported("division by zero in '" + render(t) + "'");
            return make(x.num * y.den, x.den * y.num);
        }
        case Op::Pow: {
            RatFn base = ratfn_of(a[0]);
            RatFn ex = ratfn_of(a[1]);
            if (ex.num.is_constant() && ex.den.is_constant()) {
                const Rational k = ex.num.constant_value();
                if (is_integer(k)) {
                    if (k > kMaxExponent || k < -kMaxExponent) throw Unsupported("exponent too large in '" + render(t) + "'");
                    if (k < 0 && base.num.is_zero()) throw Unsupported("division by zero in '" + render(t) + "'");
                    return power(base, static_cast<int>(k));
                }
            }
            Term atom = Term::app(Op::Pow, {canonical_expr(a[0]), canonical_expr(a[1])});
            return RatFn{Poly::atom(atom), Poly::constant(1)};
        }
        case Op::Fn:
            if (t.name() == "sin" || t.name() == "cos") {
                Term atom = Term::fn(t.name(), {canonical_expr(a[0])});
                return RatFn{Poly::atom(atom), Poly::constant(1)};
            }
            throw Unsupported("'" + t.name() + "' is not an arithmetic function");
        case Op::Eq:
        case Op::Lt:
        case Op::Le: throw Unsupported("comparison '" + render(t) + "' inside arithmetic");
    }
    throw Unsupported(render(t));
}

Term ratfn_term(const RatFn& f) {
    if (f.den.is_constant()) return f.num.to_term();
    return Term::app(Op::Div, {f.num.to_term(), f.den.to_term()});
}

Term canonical_expr(const Term& t) { return ratfn_term(ratfn_of(t)); }

}  // namespace

RatFn to_ratfn(const Term& t) { return ratfn_of(t); }

// ---------------------------------------------------------------------------
// Rules

std::string_view to_string(Truth t) {
    switch (t) {
        case Truth::True: return "true";
        case Truth::False: return "false";
        case Truth::Unknown: return "unknown";
    }
    return "unknown";
}

namespace {

bool match(const Term& pattern, const Term& t, Env& bindings) {
    if (pattern.is_var()) {
        if (const Term* bound = lookup(bindings, pattern.name())) return same_shape(*bound, t);
        bindings.emplace_back(pattern.name(), t);
        return true;
    }
    if (pattern.kind() != t.kind()) return false;
    if (pattern.is_num()) return pattern.value() == t.value();
    if (pattern.kind() == TermKind::App) {
        if (pattern.op() != t.op()) return false;
        if (pattern.op() == Op::Fn && pattern.name() != t.name()) return false;
    }
    if (pattern.args().size() != t.args().size()) return false;
    for (std::size_t i = 0; i < t.args().size(); ++i)
        if (!match(pattern.args()[i], t.args()[i], bindings)) return false;
    return true;
}

}  // namespace

Term apply_rules(const RuleSet& rs, const Term& t) {
    if (rs.rules.empty()) return t;
    Term node = t;
    if (!t.args().empty()) {
        std::vector<Term> args;
        args.reserve(t.args().size());
        for (const auto& a : t.args()) args.push_back(apply_rules(rs, a));
        node = t.with_args(std::move(args));
    }
    for (const auto& rule : rs.rules) {
        Env bindings;
        if (match(rule.lhs, node, bindings)) return substitute(bindings, rule.rhs);
    }
    return node;
}

// ---------------------------------------------------------------------------
// Normal forms

Term NormalForm::to_term() const {
    switch (kind) {
        case Kind::Equation: return Term::eq(poly.to_term(), Term::num(0));
        case Kind::Relation: return Term::app(rel, {Term::num(0), poly.to_term()});
        case Kind::Expression: return ratfn_term(expr);
        case Kind::Interval: return Term::interval(parts[0].to_term(), parts[1].to_term());
        case Kind::List:
        case Kind::Opaque: {
            std::vector<Term> elems;
            elems.reserve(parts.size());
            for (const auto& p : parts) elems.push_back(p.to_term());
            return kind == Kind::List ? Term::list(std::move(elems)) : Term::fn(name, std::move(elems));
        }
    }
    return Term::num(0);
}

bool operator==(const NormalForm& a, const NormalForm& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case NormalForm::Kind::Equation: return a.poly == b.poly;
        case NormalForm::Kind::Relation: return a.rel == b.rel && a.poly == b.poly;
        case NormalForm::Kind::Expression: return a.expr.num * b.expr.den == b.expr.num * a.expr.den;
        case NormalForm::Kind::Opaque:
            if (a.name != b.name) return false;
            [[fallthrough]];
        case NormalForm::Kind::Interval:
        case NormalForm::Kind::List: return a.parts == b.parts;
    }
    return false;
}

namespace {

NormalForm normal_form(const Term& t) {
    NormalForm nf;
    if (t.is_list() || t.is_interval()) {
        nf.kind = t.is_list() ? NormalForm::Kind::List : NormalForm::Kind::Interval;
        for (const auto& e : t.args()) nf.parts.push_back(normal_form(e));
        if (nf.kind == NormalForm::Kind::Interval) {
            for (const auto& p : nf.parts)
                if (p.kind != NormalForm::Kind::Expression)
                    throw Unsupported("interval bounds must be arithmetic in '" + render(t) + "'");
        }
        return nf;
    }
    if (t.is_app(Op::Eq)) {
        nf.kind = NormalForm::Kind::Equation;
        nf.poly = ratfn_of(Term::app(Op::Sub, {t.args()[0], t.args()[1]})).num.primitive();
        return nf;
    }
    if (t.is_app(Op::Lt) || t.is_app(Op::Le)) {
        // lhs < rhs  <=>  0 < N / D  <=>  0 < N * D
        RatFn diff = ratfn_of(Term::app(Op::Sub, {t.args()[1], t.args()[0]}));
        nf.kind = NormalForm::Kind::Relation;
        nf.rel = t.op();
        nf.poly = (diff.den.is_constant() ? diff.num : diff.num * diff.den).primitive_positive();
        return nf;
    }
    if (t.is_app(Op::Fn) && t.name() != "sin" && t.name() != "cos") {
        nf.kind = NormalForm::Kind::Opaque;
        nf.name = t.name();
        for (const auto& a : t.args()) nf.parts.push_back(normal_form(a));
        return nf;
    }
    nf.kind = NormalForm::Kind::Expression;
    nf.expr = ratfn_of(t);
    return nf;
}

}  // namespace

NormalForm normalize(const RuleSet& rs, const Term& t) { return normal_form(apply_rules(rs, t)); }

bool equivalent(const RuleSet& rs, const Term& a, const Term& b) {
    if (a.is_list() != b.is_list()) return false;
    if (a.is_list()) {
        if (a.args().size() != b.args().size()) return false;
        std::vector<NormalForm> pending;
        for (const auto& e : b.args()) pending.push_back(normalize(rs, e));
        for (const auto& e : a.args()) {
            const NormalForm nf = normalize(rs, e);
            auto it = std::find(pending.begin(), pending.end(), nf);
            if (it == pending.end()) return false;
            pending.erase(it);
        }
        return true;
    }
    return normalize(rs, a) == normalize(rs, b);
}

std::optional<Rational> eval_ground(const Term& t) {
    if (!variables(t).empty()) return std::nullopt;
    try {
        RatFn f = ratfn_of(t);
        if (!f.num.is_constant() || !f.den.is_constant()) return std::nullopt;
        return f.num.constant_value();
    } catch (const Unsupported&) {
        return std::nullopt;
    }
}

Truth eval_pred(const RuleSet& rs, const Term& p) {
    const Term q = apply_rules(rs, p);
    if (q.is_app(Op::Fn)) {
        auto it = rs.evaluators.find(q.name());
        return it == rs.evaluators.end() ? Truth::Unknown : it->second(q.args());
    }
    if (q.kind() != TermKind::App || !is_comparison(q.op())) return Truth::Unknown;
    auto diff = eval_ground(Term::app(Op::Sub, {q.args()[1], q.args()[0]}));
    if (!diff) return Truth::Unknown;
    bool holds = false;
    switch (q.op()) {
        case Op::Eq: holds = *diff == 0; break;
        case Op::Lt: holds = *diff > 0; break;
        case Op::Le: holds = *diff >= 0; break;
        default: break;
    }
    return holds ? Truth::True : Truth::False;
}

}  // namespace formspec
