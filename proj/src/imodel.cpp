#include "formspec/imodel.hpp"

#include <algorithm>
#include <map>

namespace formspec {

Variants intersect(const Variants& a, const Variants& b) {
    Variants out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

std::string to_string(const Variants& v) {
    std::string out = "{";
    for (int i : v) {
        if (out.size() > 1) out += ',';
        out += std::to_string(i);
    }
    return out + "}";
}

Variants OModel::all_variants() const {
    Variants v;
    for (int i = 1; i <= variant_count; ++i) v.insert(i);
    return v;
}

Term parse_item(std::string_view raw, const TypeContext& ctx) {
    Term t = parse_term(raw, ctx);
    TypeContext local = ctx;
    bind_defaults(t, local.bindings);
    return adapt_term_to_type(local, t);
}

OModel init_o_model(const Formalisation& f, const ModelPattern& mp, const TypeContext& ctx) {
    struct Parsed {
        ItemTerm split;
        const FormalItem* source;
    };
    std::vector<Parsed> parsed;
    std::map<std::string, int> counts;
    int explicit_max = 0;
    for (const auto& item : f.model_items) {
        Term t;
        try {
            t = parse_item(item.text, ctx);
        } catch (const SyntaxError& e) {
            throw AuthoringError(f.id, relocate(e.pos(), item.pos), e.message());
        } catch (const TypeError& e) {
            throw AuthoringError(f.id, item.pos, e.what());
        }
        auto split = split_item(t, ctx);
        if (!split) throw AuthoringError(f.id, item.pos, "item \"" + item.text + "\" has no descriptor");
        ++counts[split->descriptor->name];
        for (int v : item.variants) explicit_max = std::max(explicit_max, v);
        parsed.push_back({*split, &item});
    }
    OModel om;
    om.variant_count = explicit_max;
    for (const auto& [_, n] : counts) om.variant_count = std::max(om.variant_count, n);
    om.variant_count = std::max(om.variant_count, 1);

    std::map<std::string, int> seen;
    for (const auto& p : parsed) {
        const std::string& name = p.split.descriptor->name;
        const int appearance = ++seen[name];
        Variants variants(p.source->variants.begin(), p.source->variants.end());
        if (variants.empty()) {
            if (counts[name] == 1)
                variants = om.all_variants();
            else
                variants = {appearance};
        }
        const PatternItem* pi = mp.find(name);
        if (!pi) continue;
        om.items.push_back(OModelItem{variants, pi->field, *p.split.descriptor, p.split.arg,
                                      item_values(*p.split.descriptor, p.split.arg)});
    }
    return om;
}

std::string_view to_string(FeedbackKind k) {
    switch (k) {
        case FeedbackKind::Cor: return "correct";
        case FeedbackKind::Inc: return "incomplete";
        case FeedbackKind::Sup: return "superfluous";
        case FeedbackKind::Syn: return "syntax";
    }
    return "syntax";
}

const IModelItem* IModel::correct(std::string_view descriptor) const {
    for (const auto& it : items)
        if (it.feedback.kind == FeedbackKind::Cor && it.feedback.descriptor == descriptor) return &it;
    return nullptr;
}

const IModelItem* IModel::filled(std::string_view descriptor) const {
    for (const auto& it : items)
        if ((it.feedback.kind == FeedbackKind::Cor || it.feedback.kind == FeedbackKind::Inc) &&
            it.feedback.descriptor == descriptor)
            return &it;
    return nullptr;
}

IModel empty_i_model(const OModel& om) { return IModel{{}, om.all_variants()}; }

namespace {

bool equivalent_or_false(const RuleSet& rs, const Term& a, const Term& b) {
    try {
        return equivalent(rs, a, b);
    } catch (const Error&) {
        return same_shape(a, b);
    }
}

/// Number of input values matched one-to-one with prepared values, or -1
/// when some input value has no partner.
int match_values(const RuleSet& rs, const std::vector<Term>& input, const std::vector<Term>& prepared) {
    std::vector<bool> used(prepared.size(), false);
    for (const auto& v : input) {
        bool found = false;
        for (std::size_t i = 0; i < prepared.size() && !found; ++i) {
            if (!used[i] && equivalent_or_false(rs, v, prepared[i])) {
                used[i] = true;
                found = true;
            }
        }
        if (!found) return -1;
    }
    return static_cast<int>(input.size());
}

}  // namespace

IModel check_input(const InputItem& in, const OModel& om, const ModelPattern& mp, const IModel& im,
                   const TypeContext& ctx, const RuleSet& rs) {
    for (const auto& prev : im.items)
        if (prev.feedback.kind == FeedbackKind::Cor && prev.feedback.raw == in.raw &&
            (in.adopt_field || prev.m_field == in.field))
            return im;  // verbatim repetition of an accepted item
    IModel out = im;
    IModelItem item;
    item.id = in.id;
    item.m_field = in.field;
    item.pos = in.pos;
    item.carried = in.adopt_field;
    item.feedback.raw = in.raw;
    auto push = [&](FeedbackKind kind, std::string message) {
        item.feedback.kind = kind;
        item.feedback.message = std::move(message);
        out.items.push_back(item);
        return out;
    };

    Term t;
    try {
        t = parse_item(in.raw, ctx);
    } catch (const SyntaxError& e) {
        item.pos = relocate(e.pos(), in.pos);
        return push(FeedbackKind::Syn, e.message() + " " + item.pos.str());
    } catch (const TypeError& e) {
        item.pos = relocate(e.pos(), in.pos);
        return push(FeedbackKind::Syn, e.what());
    }

    const auto split = split_item(t, ctx);
    if (!split) {
        item.feedback.values = {t};
        return push(FeedbackKind::Sup, "no descriptor: the item does not belong to the model");
    }
    const Descriptor& d = *split->descriptor;
    item.feedback.descriptor = d.name;
    item.feedback.values = item_values(d, split->arg);

    const PatternItem* pi = in.adopt_field ? mp.find(d.name) : mp.find(in.field, d.name);
    if (!pi) {
        if (const PatternItem* other = mp.find(d.name))
            return push(FeedbackKind::Sup, d.name + " belongs to " + std::string(to_string(other->field)));
        return push(FeedbackKind::Sup, d.name + " is not part of this model");
    }
    item.m_field = pi->field;

    for (const auto& prev : out.items)
        if ((prev.feedback.kind == FeedbackKind::Cor || prev.feedback.kind == FeedbackKind::Inc) &&
            prev.m_field == pi->field && prev.feedback.descriptor == d.name)
            return push(FeedbackKind::Sup, d.name + " is already given");

    bool any_prepared = false;
    bool any_live = false;
    Variants cor, inc;
    for (const auto& o : om.items) {
        if (o.descriptor.name != d.name) continue;
        any_prepared = true;
        if (intersect(o.variants, out.live).empty()) continue;
        any_live = true;
        const int n = match_values(rs, item.feedback.values, o.values);
        if (n < 0) continue;
        Variants& target = n == static_cast<int>(o.values.size()) ? cor : inc;
        target.insert(o.variants.begin(), o.variants.end());
    }
    if (!any_prepared) return push(FeedbackKind::Sup, d.name + " is not prepared for this example");
    if (!any_live) return push(FeedbackKind::Sup, d.name + " belongs to a variant not chosen");
    if (cor.empty() && inc.empty()) {
        if (!d.is_list() || item.feedback.values.size() <= 1)
            return push(FeedbackKind::Sup, "value does not match " + d.name);
        return push(FeedbackKind::Sup, "some values do not match " + d.name);
    }
    const bool complete = !cor.empty();
    item.variants = intersect(complete ? cor : inc, out.live);
    out.live = item.variants;
    return push(complete ? FeedbackKind::Cor : FeedbackKind::Inc, complete ? "correct" : "incomplete");
}

IModel classify_all(const std::vector<InputItem>& inputs, const OModel& om, const ModelPattern& mp,
                    const TypeContext& ctx, const RuleSet& rs) {
    IModel im = empty_i_model(om);
    for (const auto& in : inputs) im = check_input(in, om, mp, im, ctx, rs);
    return im;
}

Environments make_environments(const ModelPattern& mp, const IModel& im) {
    Environments env;
    for (const auto& pi : mp.items) {
        const IModelItem* it = im.filled(pi.descriptor.name);
        if (!it) {
            env.missing.push_back(pi.descriptor.name);
            continue;
        }
        const auto& values = it->feedback.values;
        Term value = pi.descriptor.is_list() ? Term::list(values) : (values.empty() ? Term::list({}) : values[0]);
        env.subst.emplace_back(pi.placeholder.name(), value);
        for (const auto& v : values) {
            if (!v.is_equation() || !v.args()[0].is_var()) continue;
            const std::string& name = v.args()[0].name();
            const bool bound = std::any_of(env.eval.begin(), env.eval.end(),
                                           [&](const auto& b) { return b.first == name; });
            if (bound) continue;
            if (auto q = eval_ground(v.args()[1])) env.eval.emplace_back(name, *q);
        }
    }
    return env;
}

namespace {

void expand(const Term& pred, const std::vector<std::pair<std::string, std::vector<Term>>>& lists, std::size_t k,
            std::vector<Term>& out) {
    if (k == lists.size()) {
        out.push_back(pred);
        return;
    }
    for (const auto& e : lists[k].second) {
        const Term lhs = e.is_equation() ? e.args()[0] : e;
        expand(substitute({{lists[k].first, lhs}}, pred), lists, k + 1, out);
    }
}

}  // namespace

PreCondsChecked check_preconds(const RuleSet& rs, const std::vector<Precondition>& where_, const ModelPattern& mp,
                               const IModel& im) {
    PreCondsChecked out;
    const Environments env = make_environments(mp, im);
    Env eval_env;
    for (const auto& [name, q] : env.eval) eval_env.emplace_back(name, Term::num(q));

    for (const auto& w : where_) {
        std::vector<std::pair<std::string, std::vector<Term>>> lists;
        Env singles;
        std::vector<std::string> missing;
        for (const auto& pi : mp.items) {
            const std::string& ph = pi.placeholder.name();
            if (!contains_var(w.term, ph)) continue;
            const Term* value = lookup(env.subst, ph);
            if (!value)
                missing.push_back(pi.descriptor.name);
            else if (pi.descriptor.shape == ArgShape::ListOfEq && value->is_list())
                lists.emplace_back(ph, value->args());
            else
                singles.emplace_back(ph, *value);
        }
        if (!missing.empty()) {
            std::string note = "not ground: missing";
            for (const auto& m : missing) note += " " + m;
            out.items.push_back(PrecondCheck{false, Truth::Unknown, w.term, w.pos, note});
            out.all_true = false;
            continue;
        }
        std::vector<Term> instances;
        expand(substitute(singles, w.term), lists, 0, instances);
        if (instances.empty()) {
            out.items.push_back(PrecondCheck{false, Truth::Unknown, w.term, w.pos, "not ground: no values"});
            out.all_true = false;
            continue;
        }
        for (const auto& inst : instances) {
            const Term pred = substitute(eval_env, inst);
            const Truth truth = eval_pred(rs, pred);
            PrecondCheck c{truth == Truth::True, truth, pred, w.pos, {}};
            if (truth == Truth::Unknown) c.note = variables(pred).empty() ? "cannot be decided" : "not ground";
            if (!c.holds) out.all_true = false;
            out.items.push_back(std::move(c));
        }
    }
    return out;
}

std::vector<const PatternItem*> lacking(const ModelPattern& mp, const IModel& im) {
    std::vector<const PatternItem*> out;
    for (const auto& pi : mp.items)
        if (!im.correct(pi.descriptor.name)) out.push_back(&pi);
    return out;
}

bool is_complete(const ModelPattern& mp, const IModel& im, const PreCondsChecked& where_checked) {
    if (!where_checked.all_true || !lacking(mp, im).empty()) return false;
    std::optional<Variants> common;
    for (const auto& pi : mp.items) {
        const Variants& v = im.correct(pi.descriptor.name)->variants;
        common = common ? intersect(*common, v) : v;
    }
    return !common || !common->empty();
}

}  // namespace formspec
