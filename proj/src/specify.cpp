#include "formspec/specify.hpp"

#include <algorithm>

namespace formspec {

std::string_view to_string(View v) { return v == View::Problem ? "problem" : "method"; }

bool apply_setting(Settings& s, std::string_view key, std::string_view value) {
    if (key == "skip_specify") {
        if (value == "true" || value == "1" || value == "yes") s.skip_specify = true;
        else if (value == "false" || value == "0" || value == "no") s.skip_specify = false;
        else return false;
        return true;
    }
    if (key == "next_step_reveals") {
        if (value == "full" || value == "Full") s.next_step_reveals = Reveal::Full;
        else if (value == "partial" || value == "Partial") s.next_step_reveals = Reveal::Partial;
        else return false;
        return true;
    }
    return false;
}

namespace {

constexpr std::pair<TacticKind, std::string_view> kTacticNames[] = {
    {TacticKind::Model_Problem, "Model_Problem"},     {TacticKind::Add_Given, "Add_Given"},
    {TacticKind::Add_Find, "Add_Find"},               {TacticKind::Add_Relation, "Add_Relation"},
    {TacticKind::Delete_Item, "Delete_Item"},         {TacticKind::Specify_Theory, "Specify_Theory"},
    {TacticKind::Specify_Problem, "Specify_Problem"}, {TacticKind::Specify_Method, "Specify_Method"},
    {TacticKind::Refine_Problem, "Refine_Problem"},   {TacticKind::Refine_Tacitly, "Refine_Tacitly"},
    {TacticKind::Toggle_View, "Toggle_View"},         {TacticKind::Complete_Spec, "Complete_Spec"},
    {TacticKind::Finish_Specify, "Finish_Specify"},
};

MField field_of(TacticKind k) {
    switch (k) {
        case TacticKind::Add_Find: return MField::Find;
        case TacticKind::Add_Relation: return MField::Relate;
        default: return MField::Given;
    }
}

TacticKind add_kind(MField f) {
    switch (f) {
        case MField::Given: return TacticKind::Add_Given;
        case MField::Find: return TacticKind::Add_Find;
        case MField::Relate: return TacticKind::Add_Relation;
    }
    return TacticKind::Add_Given;
}

View other(View v) { return v == View::Problem ? View::Method : View::Problem; }

SrcPos text_pos(const std::string& text) {
    int n = 0;
    for (char c : text)
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
    return {1, 1, n};
}

std::string render_item(const Descriptor& d, const Term& arg) { return render(Term::fn(d.name, {arg})); }

}  // namespace

std::string_view to_string(TacticKind k) {
    for (const auto& [kind, name] : kTacticNames)
        if (kind == k) return name;
    return "?";
}

std::optional<TacticKind> parse_tactic_kind(std::string_view s) {
    for (const auto& [kind, name] : kTacticNames)
        if (name == s) return kind;
    return std::nullopt;
}

bool is_internal(TacticKind k) { return k == TacticKind::Model_Problem || k == TacticKind::Refine_Tacitly; }

// ---------------------------------------------------------------------------
// Queries

bool SpecSession::has_method() const { return store_->has_method(split_id(method_.value)); }

const ProblemDef& SpecSession::problem() const { return store_->problem(split_id(problem_.value)); }

const MethodDef& SpecSession::method() const { return store_->method(split_id(method_.value)); }

const ModelPattern& SpecSession::pattern(View v) const {
    if (v == View::Problem) return problem().model;
    return has_method() ? method().guard : no_pattern_;
}

PreCondsChecked SpecSession::preconds() const {
    const ProblemDef& p = problem();
    return check_preconds(store_->rule_set(p.where_rls), p.where_, p.model, im_problem_);
}

bool SpecSession::view_complete(View v) const {
    if (v == View::Problem) return is_complete(problem().model, im_problem_, preconds());
    return has_method() && is_complete(method().guard, im_method_, PreCondsChecked{});
}

Variants SpecSession::live() const {
    Variants both = intersect(im_problem_.live, im_method_.live);
    return both.empty() ? i_model(view_).live : both;
}

std::vector<std::string> SpecSession::blockers() const {
    std::vector<std::string> out;
    for (const View v : {View::Problem, View::Method}) {
        if (v == View::Method && !has_method()) {
            out.push_back("no method chosen");
            continue;
        }
        for (const PatternItem* pi : lacking(pattern(v), i_model(v)))
            out.push_back(std::string(to_string(v)) + " model: " + std::string(to_string(pi->field)) + " " +
                          pi->descriptor.name + " is not correct yet");
    }
    for (const auto& c : preconds().items)
        if (!c.holds)
            out.push_back("precondition " + render(c.pred) + (c.note.empty() ? " does not hold" : " (" + c.note + ")"));
    std::optional<Variants> common;
    for (const View v : {View::Problem, View::Method})
        for (const auto& it : i_model(v).items)
            if (it.feedback.kind == FeedbackKind::Cor) common = common ? intersect(*common, it.variants) : it.variants;
    if (common && common->empty()) out.push_back("the items belong to different variants");
    if (!theory_.entered) out.push_back("Theory_Ref is not confirmed");
    if (!problem_.entered) out.push_back("Problem_Ref is not confirmed");
    if (!method_.entered) out.push_back("Method_Ref is not confirmed");
    return out;
}

// ---------------------------------------------------------------------------
// Transitions

class SessionOps {
public:
    static SpecSession base_example(std::shared_ptr<const Store> store, const std::string& id, const Settings& settings);
    static SpecSession base_cas(std::shared_ptr<const Store> store, const std::string& raw);
    static void apply(SpecSession& s, const TacticInput& t);
    static TacticInput propose(const SpecSession& s);

private:
    static void rebuild(SpecSession& s);
    static void refresh(SpecSession& s);
    static std::vector<InputItem> visible(const SpecSession& s, View v);
    static const RuleSet& rules(const SpecSession& s) { return s.store_->rule_set(s.problem().where_rls); }
    static int put_item(SpecSession& s, View v, MField field, const std::string& raw, SrcPos pos);
    static const OModelItem* choose(const SpecSession& s, View v, const std::string& descriptor);
    static std::string refine_to(SpecSession& s, const IdPath& start, bool tacit);
    static void complete(SpecSession& s);
    static void finish(SpecSession& s);
};

SpecSession SessionOps::base_example(std::shared_ptr<const Store> store, const std::string& id,
                                     const Settings& settings) {
    SpecSession s;
    s.store_ = std::move(store);
    s.origin_ = Origin{Origin::Kind::Example, id};
    s.settings_ = settings;
    s.form_ = s.store_->example(id);
    s.theory_ = {s.form_.refs.theory, false, {}};
    s.problem_ = {join_id(s.form_.refs.problem), false, {}};
    s.method_ = {join_id(s.form_.refs.method), false, {}};
    return s;
}

SpecSession SessionOps::base_cas(std::shared_ptr<const Store> store, const std::string& raw) {
    for (const ProblemDef* owner : store->cas_owners()) {
        const TypeContext ctx = store->context(owner->theory);
        Term t;
        try {
            t = parse_item(raw, ctx);
        } catch (const Error&) {
            continue;
        }
        const Term& pat = *owner->cas;
        if (!t.is_fn(pat.name()) || t.args().size() != pat.args().size()) continue;
        Env env;
        bool ok = true;
        for (std::size_t i = 0; i < pat.args().size() && ok; ++i) {
            if (pat.args()[i].is_var()) env.emplace_back(pat.args()[i].name(), t.args()[i]);
            else ok = same_shape(pat.args()[i], t.args()[i]);
        }
        if (!ok) continue;
        const RuleSet& rs = store->rule_set(owner->where_rls);
        const bool admitted = std::all_of(owner->where_.begin(), owner->where_.end(), [&](const Precondition& w) {
            return eval_pred(rs, substitute(env, w.term)) == Truth::True;
        });
        if (!admitted) continue;

        SpecSession s;
        s.store_ = std::move(store);
        s.origin_ = Origin{Origin::Kind::Cas, raw};
        s.form_.id = "cas: " + raw;
        s.form_.text = raw;
        for (const auto& pi : owner->model.items) {
            const Term* value = lookup(env, pi.placeholder.name());
            s.form_.model_items.push_back(
                FormalItem{render_item(pi.descriptor, value ? *value : pi.placeholder), {}, {}});
        }
        const IdPath method = owner->solve_mets.empty() ? IdPath{} : owner->solve_mets.front();
        s.form_.refs = References{owner->theory, owner->id, method};
        s.theory_ = {owner->theory, false, {}};
        s.problem_ = {owner->guh, false, {}};
        s.method_ = {join_id(method), false, {}};
        return s;
    }
    throw NoCasMatch(raw);
}

void SessionOps::rebuild(SpecSession& s) {
    s.form_ctx_ = s.store_->context(s.form_.refs.theory);
    s.ctx_ = s.store_->context(s.theory_.value);
    s.o_problem_ = init_o_model(s.form_, s.pattern(View::Problem), s.form_ctx_);
    s.o_method_ = init_o_model(s.form_, s.pattern(View::Method), s.form_ctx_);
    refresh(s);
}

std::vector<InputItem> SessionOps::visible(const SpecSession& s, View v) {
    std::vector<InputItem> out;
    const ModelPattern& mp = s.pattern(v);
    for (const auto& e : s.entries_) {
        if (e.view == v) {
            out.push_back(InputItem{e.id, e.field, e.raw, e.pos, false});
            continue;
        }
        // carried over from the other view: syntax errors are kept, items
        // whose descriptor this view uses move to this view's field
        try {
            const auto split = split_item(parse_item(e.raw, s.ctx_), s.ctx_);
            if (split && mp.find(split->descriptor->name)) out.push_back(InputItem{e.id, e.field, e.raw, e.pos, true});
        } catch (const SyntaxError&) {
            out.push_back(InputItem{e.id, e.field, e.raw, e.pos, true});
        } catch (const TypeError&) {
            out.push_back(InputItem{e.id, e.field, e.raw, e.pos, true});
        }
    }
    return out;
}

void SessionOps::refresh(SpecSession& s) {
    const RuleSet& rs = rules(s);
    s.im_problem_ = classify_all(visible(s, View::Problem), s.o_problem_, s.pattern(View::Problem), s.ctx_, rs);
    s.im_method_ = classify_all(visible(s, View::Method), s.o_method_, s.pattern(View::Method), s.ctx_, rs);
}

int SessionOps::put_item(SpecSession& s, View v, MField field, const std::string& raw, SrcPos pos) {
    std::optional<std::string> descriptor;
    try {
        if (auto split = split_item(parse_item(raw, s.ctx_), s.ctx_)) descriptor = split->descriptor->name;
    } catch (const Error&) {
    }
    for (const auto& it : s.i_model(v).items) {
        if (it.feedback.kind == FeedbackKind::Cor && it.feedback.raw == raw && it.m_field == field) return it.id;
    }
    if (descriptor) {
        // a new attempt at a slot replaces the earlier unsuccessful one
        for (const auto& it : s.i_model(v).items) {
            if (it.carried || it.feedback.descriptor != *descriptor || it.feedback.kind == FeedbackKind::Cor) continue;
            auto e = std::find_if(s.entries_.begin(), s.entries_.end(), [&](const Entry& x) { return x.id == it.id; });
            e->field = field;
            e->raw = raw;
            e->pos = pos;
            refresh(s);
            return e->id;
        }
    }
    s.entries_.push_back(Entry{s.next_id_++, v, field, raw, pos});
    refresh(s);
    return s.entries_.back().id;
}

const OModelItem* SessionOps::choose(const SpecSession& s, View v, const std::string& descriptor) {
    const Variants live = s.live();
    const OModelItem* best = nullptr;
    int best_variant = 0;
    for (const auto& o : s.o_model(v).items) {
        if (o.descriptor.name != descriptor) continue;
        const Variants common = intersect(o.variants, live);
        if (common.empty()) continue;
        if (!best || *common.begin() < best_variant) {
            best = &o;
            best_variant = *common.begin();
        }
    }
    if (best) return best;
    const Variants own = s.i_model(v).live;
    for (const auto& o : s.o_model(v).items)
        if (o.descriptor.name == descriptor && !intersect(o.variants, own).empty()) return &o;
    return nullptr;
}

std::string SessionOps::refine_to(SpecSession& s, const IdPath& start, bool tacit) {
    if (!s.store_->has_problem(start)) throw InvalidTactic("unknown problem \"" + join_id(start) + "\"");
    RefineResult r = tacit ? refine_tacitly(*s.store_, start, s.im_problem_)
                           : refine_problem(*s.store_, start, s.im_problem_);
    std::string outcome = "no match";
    if (r.matched) {
        outcome = "matched " + join_id(*r.matched);
        s.problem_ = {join_id(*r.matched), true, {}};
        const ProblemDef& p = s.problem();
        if ((!s.method_.entered || s.method_.value.empty()) && !p.solve_mets.empty())
            s.method_ = {join_id(p.solve_mets.front()), false, {}};
    }
    s.last_refine_ = std::move(r);
    rebuild(s);
    return outcome;
}

void SessionOps::complete(SpecSession& s) {
    s.theory_.entered = s.problem_.entered = s.method_.entered = true;
    for (const View v : {View::Problem, View::Method}) {
        const ModelPattern& mp = s.pattern(v);
        for (const auto& pi : mp.items) {
            if (s.i_model(v).correct(pi.descriptor.name)) continue;
            const OModelItem* o = choose(s, v, pi.descriptor.name);
            if (!o) continue;
            const std::string raw = render_item(o->descriptor, o->arg);
            put_item(s, v, pi.field, raw, text_pos(raw));
        }
    }
}

void SessionOps::finish(SpecSession& s) {
    auto blockers = s.blockers();
    if (!blockers.empty()) throw InvalidTactic("the specification is not complete", std::move(blockers));
    const MethodDef& m = s.method();
    const Environments env = make_environments(m.guard, s.im_method_);
    SolveHandoff h;
    h.method = m.id;
    h.actual_args = env.subst;
    for (const auto& pi : m.guard.items)
        h.guard_model.push_back(substitute(env.subst, Term::fn(pi.descriptor.name, {pi.placeholder})));
    s.handoff_ = std::move(h);
    s.finished_ = true;
}

void SessionOps::apply(SpecSession& s, const TacticInput& t) {
    if (s.finished_ && t.kind != TacticKind::Toggle_View)
        throw InvalidTactic("the specification is finished");
    std::string outcome;
    switch (t.kind) {
        case TacticKind::Model_Problem:
            rebuild(s);
            outcome = s.problem_.value;
            break;
        case TacticKind::Add_Given:
        case TacticKind::Add_Find:
        case TacticKind::Add_Relation: {
            const int id = put_item(s, s.view_, field_of(t.kind), t.text, t.pos == SrcPos{} ? text_pos(t.text) : t.pos);
            for (const auto& it : s.i_model(s.view_).items)
                if (it.id == id) outcome = std::string(to_string(it.feedback.kind));
            break;
        }
        case TacticKind::Delete_Item: {
            auto e = std::find_if(s.entries_.begin(), s.entries_.end(), [&](const Entry& x) { return x.id == t.index; });
            if (e == s.entries_.end()) throw InvalidTactic("no item with id " + std::to_string(t.index));
            s.entries_.erase(e);
            refresh(s);
            outcome = "deleted " + std::to_string(t.index);
            break;
        }
        case TacticKind::Specify_Theory:
            if (!s.store_->has_theory(t.text)) throw InvalidTactic("unknown theory \"" + t.text + "\"");
            s.theory_ = {t.text, true, t.pos};
            rebuild(s);
            outcome = t.text;
            break;
        case TacticKind::Specify_Problem: {
            const IdPath id = split_id(t.text);
            if (!s.store_->has_problem(id)) throw InvalidTactic("unknown problem \"" + t.text + "\"");
            s.problem_ = {join_id(id), true, t.pos};
            const ProblemDef& p = s.problem();
            if (!s.method_.entered && !p.solve_mets.empty()) s.method_ = {join_id(p.solve_mets.front()), false, {}};
            rebuild(s);
            outcome = s.problem_.value;
            break;
        }
        case TacticKind::Specify_Method: {
            const IdPath id = split_id(t.text);
            if (!s.store_->has_method(id)) throw InvalidTactic("unknown method \"" + t.text + "\"");
            s.method_ = {join_id(id), true, t.pos};
            rebuild(s);
            outcome = s.method_.value;
            break;
        }
        case TacticKind::Refine_Problem:
        case TacticKind::Refine_Tacitly: {
            IdPath start = split_id(t.text);
            if (start.empty()) {
                const ProblemDef& p = s.problem();
                start = p.start_refine.empty() ? p.id : p.start_refine;
            }
            outcome = refine_to(s, start, t.kind == TacticKind::Refine_Tacitly);
            break;
        }
        case TacticKind::Toggle_View:
            s.view_ = other(s.view_);
            outcome = std::string(to_string(s.view_));
            break;
        case TacticKind::Complete_Spec:
            complete(s);
            outcome = s.view_complete(View::Problem) ? "complete" : "incomplete";
            break;
        case TacticKind::Finish_Specify:
            finish(s);
            outcome = "finished";
            break;
    }
    s.history_.push_back(TacticApplied{t, outcome});
}

TacticInput SessionOps::propose(const SpecSession& s) {
    if (s.finished_) throw InvalidTactic("the specification is finished");
    const View v = s.view_;
    const IModel& im = s.i_model(v);
    for (const PatternItem* pi : lacking(s.pattern(v), im)) {
        const OModelItem* o = choose(s, v, pi->descriptor.name);
        if (!o) continue;
        std::string text = render_item(o->descriptor, o->arg);
        if (s.settings_.next_step_reveals == Reveal::Partial && o->descriptor.is_list() && !o->values.empty()) {
            // the values already accepted plus one more prepared element
            std::vector<Term> shown;
            if (const IModelItem* have = im.filled(pi->descriptor.name)) shown = have->feedback.values;
            const RuleSet& rs = rules(s);
            std::vector<bool> used(o->values.size(), false);
            for (const auto& v2 : shown)
                for (std::size_t i = 0; i < o->values.size(); ++i)
                    if (!used[i] && equivalent(rs, v2, o->values[i])) {
                        used[i] = true;
                        break;
                    }
            for (std::size_t i = 0; i < o->values.size(); ++i)
                if (!used[i]) {
                    shown.push_back(o->values[i]);
                    break;
                }
            text = render_item(o->descriptor, Term::list(shown));
        }
        return TacticInput{add_kind(pi->field), text, text_pos(text), -1};
    }
    if (!s.theory_.entered) return TacticInput{TacticKind::Specify_Theory, s.theory_.value, {}, -1};
    if (!s.problem_.entered) return TacticInput{TacticKind::Specify_Problem, s.problem_.value, {}, -1};
    if (!s.method_.entered && !s.method_.value.empty())
        return TacticInput{TacticKind::Specify_Method, s.method_.value, {}, -1};
    const View w = other(v);
    if (w == View::Problem || s.has_method()) {
        for (const PatternItem* pi : lacking(s.pattern(w), s.i_model(w)))
            if (choose(s, w, pi->descriptor.name)) return TacticInput{TacticKind::Toggle_View, {}, {}, -1};
    }
    return TacticInput{TacticKind::Finish_Specify, {}, {}, -1};
}

// ---------------------------------------------------------------------------
// Entry points

SpecSession start_example(std::shared_ptr<const Store> store, const std::string& example_id, Settings settings) {
    SpecSession s = SessionOps::base_example(std::move(store), example_id, settings);
    SessionOps::apply(s, TacticInput{TacticKind::Model_Problem, {}, {}, -1});
    if (settings.skip_specify) {
        SessionOps::apply(s, TacticInput{TacticKind::Complete_Spec, {}, {}, -1});
        SessionOps::apply(s, TacticInput{TacticKind::Finish_Specify, {}, {}, -1});
    }
    return s;
}

SpecSession apply_tactic(SpecSession s, const TacticInput& t) {
    if (is_internal(t.kind)) throw InvalidTactic(std::string(to_string(t.kind)) + " is internal to the engine");
    SessionOps::apply(s, t);
    return s;
}

TacticInput propose_next(const SpecSession& s) { return SessionOps::propose(s); }

SpecSession cas_command(std::shared_ptr<const Store> store, const std::string& raw) {
    SpecSession s = SessionOps::base_cas(std::move(store), raw);
    SessionOps::apply(s, TacticInput{TacticKind::Model_Problem, {}, {}, -1});
    SessionOps::apply(s, TacticInput{TacticKind::Complete_Spec, {}, {}, -1});
    SessionOps::apply(s, TacticInput{TacticKind::Refine_Tacitly, {}, {}, -1});
    SessionOps::apply(s, TacticInput{TacticKind::Complete_Spec, {}, {}, -1});
    SessionOps::apply(s, TacticInput{TacticKind::Finish_Specify, {}, {}, -1});
    return s;
}

SpecSession replay(std::shared_ptr<const Store> store, const Origin& origin, const Settings& settings,
                   const std::vector<TacticInput>& history) {
    SpecSession s = origin.kind == Origin::Kind::Example ? SessionOps::base_example(std::move(store), origin.text, settings)
                                                         : SessionOps::base_cas(std::move(store), origin.text);
    for (const auto& t : history) SessionOps::apply(s, t);
    return s;
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json to_json(const SrcPos& p) { return {{"line", p.line}, {"col", p.col}, {"len", p.len}}; }

nlohmann::json to_json(const TacticInput& t) {
    nlohmann::json j{{"kind", to_string(t.kind)}, {"text", t.text}, {"pos", to_json(t.pos)}};
    if (t.index >= 0) j["index"] = t.index;
    return j;
}

namespace {

nlohmann::json ref_json(const RefSlot& r) { return {{"value", r.value}, {"entered", r.entered}, {"pos", to_json(r.pos)}}; }

nlohmann::json checked_json(const PreCondsChecked& c) {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& it : c.items)
        items.push_back({{"holds", it.holds}, {"truth", to_string(it.truth)}, {"pred", render(it.pred)},
                         {"pos", to_json(it.pos)}, {"note", it.note}});
    return {{"all_true", c.all_true}, {"items", items}};
}

nlohmann::json i_model_json(const IModel& im) {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& it : im.items) {
        nlohmann::json values = nlohmann::json::array();
        for (const auto& v : it.feedback.values) values.push_back(render(v));
        items.push_back({{"id", it.id},
                         {"m_field", to_string(it.m_field)},
                         {"kind", to_string(it.feedback.kind)},
                         {"descriptor", it.feedback.descriptor},
                         {"values", values},
                         {"raw", it.feedback.raw},
                         {"message", it.feedback.message},
                         {"variants", it.variants},
                         {"pos", to_json(it.pos)},
                         {"carried", it.carried}});
    }
    return {{"items", items}, {"live", im.live}};
}

}  // namespace

nlohmann::json serialize(const SpecSession& s) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : s.entries())
        entries.push_back({{"id", e.id}, {"view", to_string(e.view)}, {"field", to_string(e.field)}, {"raw", e.raw},
                           {"pos", to_json(e.pos)}});
    nlohmann::json history = nlohmann::json::array();
    for (const auto& h : s.history()) history.push_back({{"input", to_json(h.input)}, {"outcome", h.outcome}});
    nlohmann::json j{
        {"origin", {{"kind", s.origin().kind == Origin::Kind::Example ? "example" : "cas"}, {"text", s.origin().text}}},
        {"settings",
         {{"skip_specify", s.settings().skip_specify},
          {"next_step_reveals", s.settings().next_step_reveals == Reveal::Full ? "full" : "partial"}}},
        {"view", to_string(s.view())},
        {"refs", {{"theory", ref_json(s.theory_ref())}, {"problem", ref_json(s.problem_ref())}, {"method", ref_json(s.method_ref())}}},
        {"entries", entries},
        {"i_model", {{"problem", i_model_json(s.i_model(View::Problem))}, {"method", i_model_json(s.i_model(View::Method))}}},
        {"preconds", checked_json(s.preconds())},
        {"finished", s.is_finished()},
        {"history", history},
    };
    if (const auto& r = s.last_refine()) {
        nlohmann::json trail = nlohmann::json::array();
        for (const auto& step : r->trail) trail.push_back({{"id", join_id(step.id)}, {"checked", checked_json(step.checked)}});
        j["refine"] = {{"matched", r->matched ? join_id(*r->matched) : ""}, {"trail", trail}};
    }
    if (const auto& h = s.handoff()) {
        nlohmann::json args = nlohmann::json::array();
        for (const auto& [k, v] : h->actual_args) args.push_back({k, render(v)});
        nlohmann::json guard = nlohmann::json::array();
        for (const auto& g : h->guard_model) guard.push_back(render(g));
        j["handoff"] = {{"method", join_id(h->method)}, {"actual_args", args}, {"guard_model", guard}};
    }
    return j;
}

}  // namespace formspec
