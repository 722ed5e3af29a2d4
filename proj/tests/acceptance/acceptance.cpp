// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 when
// any criterion fails.

#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "formspec/imodel.hpp"
#include "formspec/refine.hpp"
#include "formspec/script.hpp"
#include "../support.hpp"

using namespace formspec;
using testing::add;
using testing::coil_session;
using testing::rules;
using testing::shipped;
using testing::T;
using testing::tactic;

namespace {

struct Check {
    std::string failure;
    void expect(bool ok, const std::string& what) {
        if (!ok && failure.empty()) failure = what;
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const ProblemDef& opti() { return lookup_problem(*shipped(), {"univariate_calculus", "Optimisation"}); }

const IModelItem* item(const SpecSession& s, View v, const std::string& descriptor) {
    for (const auto& it : s.i_model(v).items)
        if (it.feedback.descriptor == descriptor) return &it;
    return nullptr;
}

void running_example(Check& c) {
    const ReplayReport r =
        replay_script(shipped(), parse_script(read_file(std::string(FORMSPEC_SCRIPTS_DIR) + "/coil_kernel.spec")));
    c.expect(r.exit_code == 0, "exit code " + std::to_string(r.exit_code));
    c.expect(!r.json["items"].empty(), "no items replayed");
    for (const auto& it : r.json["items"])
        c.expect(it["feedback_kind"] == "correct", "item " + it["text"].get<std::string>() + " is not correct");
    c.expect(r.session && r.session->preconds().all_true, "preconditions do not hold");
    c.expect(r.session && r.session->view_complete(View::Problem), "model is not complete");
}

void equivalence(Check& c) {
    c.expect(equivalent(rules(), T("u ^ 2 + v ^ 2 = 4 * r ^ 2"), T("(u / 2) ^ 2 + (v / 2) ^ 2 = r ^ 2")),
             "u² + v² = 4r² is not equivalent to the side condition");
    std::mt19937 rng(2024);
    const std::vector<std::string> vars{"u", "v", "r"};
    int distinct = 0;
    for (int i = 0; i < 200; ++i) {
        const Term a = testing::random_equation(rng, vars);
        const Term b = testing::rearranged(rng, a);
        c.expect(equivalent(rules(), a, b), "rearrangement not equivalent: " + render(a) + " vs " + render(b));
        const Term d = testing::random_equation(rng, vars);
        if (testing::proportional_by_sampling(a, d, vars, rng)) continue;
        ++distinct;
        c.expect(!equivalent(rules(), a, d), "distinct equations equivalent: " + render(a) + " vs " + render(d));
    }
    c.expect(distinct > 150, "too few distinct pairs sampled");
}

void superfluous(Check& c) {
    SpecSession s = apply_tactic(coil_session(), add(MField::Relate, "SideConditions [(u / 2) ^ 2 + (v / 2) ^ 2 = r ^ 2]"));
    const int pythagoras = s.entries().back().id;
    s = apply_tactic(s, add(MField::Relate, "SideConditions [v = sin α]"));
    c.expect(s.i_model(View::Problem).items.back().feedback.kind == FeedbackKind::Sup, "competing item is not Sup");
    s = apply_tactic(s, TacticInput{TacticKind::Delete_Item, {}, {}, pythagoras});
    s = apply_tactic(s, add(MField::Relate, "SideConditions [u / 2 = r * sin α, v / 2 = r * cos α]"));
    const IModelItem* it = item(s, View::Problem, "SideConditions");
    c.expect(it && it->feedback.kind == FeedbackKind::Cor, "both α equations are not Cor");
    c.expect(s.i_model(View::Problem).items.size() == 1, "replaced item still present");
}

void environments(Check& c) {
    const SpecSession s = apply_tactic(coil_session(), tactic(TacticKind::Complete_Spec));
    const Environments env = make_environments(opti().model, s.i_model(View::Problem));
    const std::vector<std::pair<const char*, const char*>> expected{
        {"fixes", "[r = 7]"}, {"maxx", "A"}, {"vals", "[u, v]"}, {"extr", "A = 2 * u * v - u ^ 2"}};
    for (const auto& [ph, value] : expected) {
        const Term* t = lookup(env.subst, ph);
        c.expect(t && equivalent(rules(), *t, T(value)), std::string("binding of ") + ph);
    }
    c.expect(env.eval.size() == 1 && env.eval[0].first == "r" && env.eval[0].second == 7, "env_eval is not [r ↦ 7]");

    const Store k = load_knowledge_text({{"k.know", R"(theory "K"
descriptor "Constants" : ListOfEq
problem "k" =
  Given: "Constants c"
  Method_Ref: "k/m"
method "k/m" =
  Given: "Constants c"
  Program: "K.m"
example "k/e" =
  Item: "Constants [s = 1, t = 2]"
  Refs: "K" "k" "k/m"
)"}});
    const SpecSession t = apply_tactic(start_example(std::make_shared<const Store>(k), "k/e"),
                                       add(MField::Given, "Constants [s = 1, t = 2]"));
    const Environments e2 = make_environments(lookup_problem(k, {"k"}).model, t.i_model(View::Problem));
    c.expect(e2.eval.size() == 2 && e2.eval[0] == std::pair<std::string, Rational>{"s", 1} &&
                 e2.eval[1] == std::pair<std::string, Rational>{"t", 2},
             "Constants [s = 1, t = 2] does not give s ↦ 1, t ↦ 2");
}

std::shared_ptr<const Store> pack_with_radius(const std::string& r) {
    std::string diff = read_file(std::string(FORMSPEC_KNOWLEDGE_DIR) + "/diff_app.know");
    const std::string from = "r = (7::real)";
    diff.replace(diff.find(from), from.size(), "r = (" + r + "::real)");
    return std::make_shared<const Store>(load_knowledge_text(
        {{"base.know", read_file(std::string(FORMSPEC_KNOWLEDGE_DIR) + "/base.know")}, {"diff_app.know", diff}}));
}

void precondition_gate(Check& c) {
    for (const auto& [radius, holds] : {std::pair<std::string, bool>{"7", true}, {"0", false}}) {
        SpecSession s = start_example(pack_with_radius(radius), testing::kCoil);
        for (const auto& r : testing::coil_problem_items()) {
            std::string text = r.text;
            if (text == "Constants [r = 7]") text = "Constants [r = " + radius + "]";
            s = apply_tactic(s, add(r.field, text));
        }
        for (const auto& it : s.i_model(View::Problem).items)
            c.expect(it.feedback.kind == FeedbackKind::Cor, "r = " + radius + ": " + it.feedback.raw + " is not Cor");
        const PreCondsChecked pre = check_preconds(rules(), opti().where_, s.pattern(View::Problem), s.i_model(View::Problem));
        c.expect(pre.all_true == holds, "r = " + radius + ": all_true is " + (pre.all_true ? "true" : "false"));
        c.expect(is_complete(s.pattern(View::Problem), s.i_model(View::Problem), pre) == holds,
                 "r = " + radius + ": is_complete does not follow the preconditions");
    }
}

void refinement(Check& c) {
    const SpecSession lin = cas_command(shipped(), "solve (12 - 6*x = 0, x)");
    c.expect(lin.problem_ref().value == "univariate/equation/linear", "linear equation matched " + lin.problem_ref().value);
    const SpecSession quad = cas_command(shipped(), "solve (x ^ 2 - 1 = 0, x)");
    c.expect(quad.problem_ref().value == "univariate/equation/polynomial", "quadratic matched " + quad.problem_ref().value);
    bool linear_rejected = false;
    if (quad.last_refine())
        for (const auto& step : quad.last_refine()->trail)
            if (join_id(step.id) == "univariate/equation/linear") linear_rejected = !step.checked.all_true;
    c.expect(linear_rejected, "linear is not rejected in the trail");
    bool no_match = false;
    try {
        cas_command(shipped(), "solve (x, x)");
    } catch (const NoCasMatch&) {
        no_match = true;
    }
    c.expect(no_match, "input without \"=\" is accepted");

    const auto before = parse_count();
    const RefineResult r = refine_problem(*shipped(), {"univariate", "equation"}, quad.i_model(View::Problem));
    c.expect(parse_count() == before, "the search parsed " + std::to_string(parse_count() - before) + " terms");
    c.expect(r.matched && join_id(*r.matched) == "univariate/equation/polynomial", "direct search disagrees");
}

void next_step(Check& c) {
    std::set<std::string> descriptors;
    const SpecSession fresh = coil_session();
    for (const View v : {View::Problem, View::Method})
        for (const auto& pi : fresh.pattern(v).items) descriptors.insert(pi.descriptor.name);
    const int bound = static_cast<int>(descriptors.size()) + 3 + 1 + 1;

    const std::vector<std::pair<std::string, int>> seeds{{"FunctionVariable u", 1}, {"FunctionVariable v", 2},
                                                         {"FunctionVariable α", 3}};
    for (const auto& [seed, variant] : seeds) {
        SpecSession s = apply_tactic(coil_session(), tactic(TacticKind::Toggle_View));
        s = apply_tactic(s, add(MField::Given, seed));
        s = apply_tactic(s, tactic(TacticKind::Toggle_View));
        int steps = 0;
        while (!s.is_finished() && steps <= bound) {
            s = apply_tactic(s, propose_next(s));
            ++steps;
        }
        c.expect(s.is_finished(), seed + ": not finished after " + std::to_string(steps) + " steps");
        c.expect(steps <= bound, seed + ": " + std::to_string(steps) + " steps, bound " + std::to_string(bound));
        c.expect(s.live().count(variant) == 1, seed + ": variant " + std::to_string(variant) + " not live");
        const Term* fvar = s.handoff() ? lookup(s.handoff()->actual_args, "fvar") : nullptr;
        c.expect(fvar && "FunctionVariable " + render(*fvar) == seed, seed + ": handoff has another function variable");
    }
}

void auto_complete(Check& c) {
    const SpecSession s = apply_tactic(coil_session(), tactic(TacticKind::Complete_Spec));
    c.expect(s.view_complete(View::Problem) && s.view_complete(View::Method), "model not complete");
    c.expect(s.i_model(View::Problem).items.size() == testing::coil_problem_items().size(), "item count differs");
    for (const auto& r : testing::coil_problem_items()) {
        const auto split = split_item(T(r.text), testing::diff_ctx());
        const IModelItem* it = item(s, View::Problem, split->descriptor->name);
        c.expect(it && it->m_field == r.field && it->feedback.kind == FeedbackKind::Cor &&
                     equivalent(rules(), Term::list(it->feedback.values),
                                Term::list(item_values(*split->descriptor, split->arg))),
                 std::string("item differs: ") + r.text);
    }
    const References& refs = s.formalisation().refs;
    c.expect(s.theory_ref().value == refs.theory && s.theory_ref().entered, "theory reference");
    c.expect(s.problem_ref().value == join_id(refs.problem) && s.problem_ref().entered, "problem reference");
    c.expect(s.method_ref().value == join_id(refs.method) && s.method_ref().entered, "method reference");
}

void replay_determinism(Check& c) {
    std::mt19937 rng(99);
    const std::vector<std::string> texts{
        "Constants [r = 7]", "Constants [r = 2]", "Maximum A", "AdditionalValues [u, v]", "AdditionalValues [v]",
        "Extremum (A = 2 * u * v - u ^ 2)", "SideConditions [u ^ 2 + v ^ 2 = 4 * r ^ 2]",
        "SideConditions [u / 2 = r * sin α]", "FunctionVariable α", "FunctionVariable u", "Domain {0 <..< r}",
        "ErrorBound (ε = 0)", "Constants [r =", "Domain {0 <..< π / 2}", "x + 1"};
    const std::vector<TacticKind> kinds{TacticKind::Add_Given,       TacticKind::Add_Find,        TacticKind::Add_Relation,
                                        TacticKind::Delete_Item,     TacticKind::Specify_Theory,  TacticKind::Specify_Problem,
                                        TacticKind::Specify_Method,  TacticKind::Refine_Problem,  TacticKind::Toggle_View,
                                        TacticKind::Complete_Spec,   TacticKind::Finish_Specify};
    for (int round = 0; round < 100; ++round) {
        Settings settings;
        settings.next_step_reveals = round % 2 ? Reveal::Partial : Reveal::Full;
        SpecSession s = coil_session(settings);
        const int length = 1 + static_cast<int>(rng() % 12);
        for (int k = 0; k < length; ++k) {
            TacticInput t;
            if (rng() % 3 == 0 && !s.is_finished()) {
                t = propose_next(s);
            } else {
                t.kind = kinds[rng() % kinds.size()];
                switch (t.kind) {
                    case TacticKind::Delete_Item:
                        t.index = s.entries().empty() ? 1 : s.entries()[rng() % s.entries().size()].id;
                        break;
                    case TacticKind::Specify_Theory: t.text = rng() % 2 ? "Diff_App" : "Base"; break;
                    case TacticKind::Specify_Problem: t.text = rng() % 2 ? "univariate_calculus/Optimisation" : "univariate/equation"; break;
                    case TacticKind::Specify_Method: t.text = "Optimisation/by_univariate_calculus"; break;
                    case TacticKind::Refine_Problem:
                    case TacticKind::Toggle_View:
                    case TacticKind::Complete_Spec:
                    case TacticKind::Finish_Specify: break;
                    default: t.text = texts[rng() % texts.size()];
                }
            }
            try {
                s = apply_tactic(s, t);
            } catch (const Error&) {
                // refused tactics leave the session unchanged
            }
        }
        std::vector<TacticInput> inputs;
        for (const auto& h : s.history()) inputs.push_back(h.input);
        const SpecSession r = replay(shipped(), s.origin(), s.settings(), inputs);
        c.expect(serialize(r).dump() == serialize(s).dump(), "round " + std::to_string(round) + " differs after replay");
    }
}

bool in_bounds(const SrcPos& p, const std::string& src) {
    std::vector<std::size_t> widths{0};
    for (char ch : src) {
        if (ch == '\n')
            widths.push_back(0);
        else
            ++widths.back();
    }
    return p.line >= 1 && p.col >= 1 && p.len >= 0 && p.line <= static_cast<int>(widths.size()) &&
           p.col <= static_cast<int>(widths[p.line - 1]) + 1;
}

void parser_fuzz(Check& c) {
    std::mt19937 rng(7);
    const std::vector<std::string> pieces{"x", "7", "0.5", "(", ")", "[", "]", "{", "<..<", "}", "+", "-", "*", "/",
                                          "^", "=", "<", "<=", ",", "sin", "α", "::", "real", " ", "Constants", "\n",
                                          "\\<alpha>", "\\<up>", "::real"};
    int failures = 0;
    for (int i = 0; i < 10000; ++i) {
        std::string src;
        const int n = static_cast<int>(rng() % 24);
        if (i % 2 == 0) {
            for (int k = 0; k < n; ++k) src.push_back(static_cast<char>(rng() % 256));
        } else {
            for (int k = 0; k < n; ++k) src += pieces[rng() % pieces.size()];
        }
        try {
            parse_term(src, testing::diff_ctx());
        } catch (const SyntaxError& e) {
            ++failures;
            if (!in_bounds(e.pos(), src)) c.expect(false, "position out of bounds for input #" + std::to_string(i));
        } catch (const std::exception& e) {
            c.expect(false, std::string("non-syntax failure: ") + e.what());
        }
    }
    c.expect(failures > 0, "no input was rejected");
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<void(Check&)>>> criteria{
        {"running example reproduction", running_example},
        {"equivalence check", equivalence},
        {"superfluous classification", superfluous},
        {"environment extraction", environments},
        {"precondition gate", precondition_gate},
        {"refinement", refinement},
        {"next-step completeness", next_step},
        {"auto-complete", auto_complete},
        {"replay determinism", replay_determinism},
        {"parser fuzz", parser_fuzz},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Check c;
        try {
            run(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("uncaught: ") + e.what());
        }
        if (c.failure.empty()) {
            std::printf("PASS %s\n", name);
        } else {
            std::printf("FAIL %s: %s\n", name, c.failure.c_str());
            ++failed;
        }
    }
    return failed == 0 ? 0 : 1;
}
