#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "formspec/imodel.hpp"
#include "support.hpp"

using namespace formspec;
using testing::diff_ctx;
using testing::rules;
using testing::shipped;
using testing::T;

namespace {

const ProblemDef& opti() { return lookup_problem(*shipped(), {"univariate_calculus", "Optimisation"}); }
const MethodDef& opti_method() { return lookup_method(*shipped(), {"Optimisation", "by_univariate_calculus"}); }
const Formalisation& coil() { return lookup_example(*shipped(), testing::kCoil); }

OModel problem_o() { return init_o_model(coil(), opti().model, diff_ctx()); }
OModel method_o() { return init_o_model(coil(), opti_method().guard, diff_ctx()); }

int next_id = 1;

IModel enter(const IModel& im, MField field, const std::string& raw, const OModel& om, const ModelPattern& mp) {
    return check_input(InputItem{next_id++, field, raw, {}, false}, om, mp, im, diff_ctx(), rules());
}

IModel problem_model(const std::vector<testing::Row>& rows) {
    const OModel om = problem_o();
    IModel im = empty_i_model(om);
    for (const auto& r : rows) im = enter(im, r.field, r.text, om, opti().model);
    return im;
}

const IModelItem& last(const IModel& im) { return im.items.back(); }

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// The shipped Diff_App pack with a different radius in the example.
std::shared_ptr<const Store> pack_with_radius(const std::string& r) {
    std::string diff = read_file(std::string(FORMSPEC_KNOWLEDGE_DIR) + "/diff_app.know");
    const std::string from = "r = (7::real)";
    diff.replace(diff.find(from), from.size(), "r = (" + r + "::real)");
    return std::make_shared<const Store>(
        load_knowledge_text({{"base.know", read_file(std::string(FORMSPEC_KNOWLEDGE_DIR) + "/base.know")},
                             {"diff_app.know", diff}}));
}

}  // namespace

TEST_CASE("O-model: variants of the coil kernel") {
    const OModel om = problem_o();
    CHECK(om.variant_count == 3);
    std::vector<const OModelItem*> side;
    for (const auto& o : om.items)
        if (o.descriptor.name == "SideConditions") side.push_back(&o);
    REQUIRE(side.size() == 2);
    CHECK(side[0]->variants == Variants{1, 2});
    REQUIRE(side[0]->values.size() == 1);
    CHECK(equivalent(rules(), side[0]->values[0], T("(u / 2) ^ 2 + (v / 2) ^ 2 = r ^ 2")));
    CHECK(side[1]->variants == Variants{3});
    REQUIRE(side[1]->values.size() == 2);
    CHECK(equivalent(rules(), side[1]->values[0], T("u / 2 = r * sin α")));
    CHECK(equivalent(rules(), side[1]->values[1], T("v / 2 = r * cos α")));

    std::vector<std::pair<Variants, std::string>> fvar;
    for (const auto& o : method_o().items)
        if (o.descriptor.name == "FunctionVariable") fvar.emplace_back(o.variants, render(o.arg));
    REQUIRE(fvar.size() == 3);
    CHECK(fvar[0] == std::pair<Variants, std::string>{{1}, "u"});
    CHECK(fvar[1] == std::pair<Variants, std::string>{{2}, "v"});
    CHECK(fvar[2] == std::pair<Variants, std::string>{{3}, "α"});
}

TEST_CASE("O-model: a single-variant example") {
    const Formalisation& f = lookup_example(*shipped(), "Equation/linear-demo");
    const ProblemDef& p = lookup_problem(*shipped(), f.refs.problem);
    const OModel om = init_o_model(f, p.model, shipped()->context(f.refs.theory));
    CHECK(om.variant_count == 1);
    for (const auto& o : om.items) CHECK(o.variants == Variants{1});
}

TEST_CASE("check_input: examples") {
    const OModel om = problem_o();
    const ModelPattern& mp = opti().model;
    const IModel empty = empty_i_model(om);

    IModel im = enter(empty, MField::Find, "AdditionalValues [u, v]", om, mp);
    CHECK(last(im).feedback.kind == FeedbackKind::Cor);
    CHECK(last(im).feedback.descriptor == "AdditionalValues");
    CHECK(last(im).feedback.values.size() == 2);

    im = enter(empty, MField::Find, "AdditionalValues [u]", om, mp);
    CHECK(last(im).feedback.kind == FeedbackKind::Inc);
    CHECK(last(im).feedback.values.size() == 1);

    im = enter(empty, MField::Relate, "SideConditions [u ^ 2 + v ^ 2 = 4 * r ^ 2]", om, mp);
    CHECK(last(im).feedback.kind == FeedbackKind::Cor);
    CHECK(last(im).variants == Variants{1, 2});
    CHECK(im.live == Variants{1, 2});

    im = enter(im, MField::Relate, "SideConditions [v = sin α]", om, mp);
    CHECK(last(im).feedback.kind == FeedbackKind::Sup);

    im = enter(empty, MField::Given, "Constants [r =", om, mp);
    CHECK(last(im).feedback.kind == FeedbackKind::Syn);
    CHECK(last(im).feedback.raw == "Constants [r =");

    im = enter(empty, MField::Given, "Maximum A", om, mp);
    CHECK(last(im).feedback.kind == FeedbackKind::Sup);

    im = enter(empty, MField::Given, "u + 1", om, mp);
    CHECK(last(im).feedback.kind == FeedbackKind::Sup);
    CHECK(last(im).feedback.descriptor.empty());
}

TEST_CASE("check_input: syntax positions index into the entry") {
    const OModel om = problem_o();
    const IModel im = check_input(InputItem{1, MField::Given, "Constants [r=]", {4, 20, 14}, false}, om, opti().model,
                                  empty_i_model(om), diff_ctx(), rules());
    CHECK(last(im).pos.line == 4);
    CHECK(last(im).pos.col == 20 + 13);
}

TEST_CASE("check_input: the alpha variant narrows the live set") {
    const OModel om = problem_o();
    IModel im = enter(empty_i_model(om), MField::Relate, "SideConditions [u = 2 * r * sin α, v / 2 = r * cos α]", om,
                      opti().model);
    CHECK(last(im).feedback.kind == FeedbackKind::Cor);
    CHECK(im.live == Variants{3});
    im = enter(empty_i_model(om), MField::Relate, "SideConditions [v / 2 = r * cos α]", om, opti().model);
    CHECK(last(im).feedback.kind == FeedbackKind::Inc);
    CHECK(im.live == Variants{3});
}

TEST_CASE("environments of the complete coil model") {
    const IModel im = problem_model(testing::coil_problem_items());
    const Environments env = make_environments(opti().model, im);
    CHECK(env.missing.empty());
    auto bound = [&](const char* ph) {
        const Term* t = lookup(env.subst, ph);
        REQUIRE(t);
        return *t;
    };
    CHECK(equivalent(rules(), bound("fixes"), T("[r = 7]")));
    CHECK(equivalent(rules(), bound("maxx"), T("A")));
    CHECK(equivalent(rules(), bound("vals"), T("[u, v]")));
    CHECK(equivalent(rules(), bound("extr"), T("A = 2 * u * v - u ^ 2")));
    REQUIRE(env.eval.size() == 1);
    CHECK(env.eval[0].first == "r");
    CHECK(env.eval[0].second == 7);
}

TEST_CASE("environments: several constants, in list order") {
    const Store s = load_knowledge_text({{"k.know", R"(theory "K"
descriptor "Constants" : ListOfEq
descriptor "Maximum" : Single
problem "k" =
  Given: "Constants c"
  Where: "0 < c"
  Find: "Maximum m"
  Method_Ref: "k/m"
method "k/m" =
  Given: "Constants c"
  Find: "Maximum m"
  Program: "K.m"
example "k/e" =
  Item: "Constants [s = 1, t = 2]" "Maximum A"
  Refs: "K" "k" "k/m"
)"}});
    const Formalisation& f = lookup_example(s, "k/e");
    const ProblemDef& p = lookup_problem(s, {"k"});
    const TypeContext ctx = s.context("K");
    const OModel om = init_o_model(f, p.model, ctx);
    const IModel im = check_input(InputItem{1, MField::Given, "Constants [s = 1, t = 2]", {}, false}, om, p.model,
                                  empty_i_model(om), ctx, s.rule_set("eval_rls"));
    REQUIRE(last(im).feedback.kind == FeedbackKind::Cor);
    const Environments env = make_environments(p.model, im);
    REQUIRE(env.eval.size() == 2);
    CHECK(env.eval[0] == std::pair<std::string, Rational>{"s", 1});
    CHECK(env.eval[1] == std::pair<std::string, Rational>{"t", 2});
    const PreCondsChecked pre = check_preconds(s.rule_set("eval_rls"), p.where_, p.model, im);
    CHECK(pre.all_true);
    CHECK(pre.items.size() == 2);
}

TEST_CASE("preconditions") {
    const IModel im = problem_model(testing::coil_problem_items());
    const PreCondsChecked pre = check_preconds(rules(), opti().where_, opti().model, im);
    CHECK(pre.all_true);
    REQUIRE(pre.items.size() == 1);
    CHECK(pre.items[0].holds);
    CHECK(render(pre.items[0].pred) == "0 < 7");

    const PreCondsChecked none = check_preconds(rules(), {}, opti().model, im);
    CHECK(none.all_true);
    CHECK(none.items.empty());

    const PreCondsChecked missing = check_preconds(rules(), opti().where_, opti().model, empty_i_model(problem_o()));
    CHECK_FALSE(missing.all_true);
    CHECK(missing.items.at(0).note.find("not ground") == 0);
}

TEST_CASE("precondition gate on r") {
    for (const auto& [radius, holds] : {std::pair<std::string, bool>{"7", true}, {"0", false}}) {
        const auto store = pack_with_radius(radius);
        const Formalisation& f = lookup_example(*store, testing::kCoil);
        const ProblemDef& p = lookup_problem(*store, f.refs.problem);
        const TypeContext ctx = store->context("Diff_App");
        const OModel om = init_o_model(f, p.model, ctx);
        std::vector<InputItem> inputs;
        int id = 1;
        for (auto r : testing::coil_problem_items()) {
            std::string text = r.text;
            if (text == "Constants [r = 7]") text = "Constants [r = " + radius + "]";
            inputs.push_back(InputItem{id++, r.field, text, {}, false});
        }
        const IModel im = classify_all(inputs, om, p.model, ctx, store->rule_set("eval_rls"));
        for (const auto& it : im.items) CHECK(it.feedback.kind == FeedbackKind::Cor);
        const PreCondsChecked pre = check_preconds(store->rule_set("eval_rls"), p.where_, p.model, im);
        CHECK(pre.all_true == holds);
        CHECK(is_complete(p.model, im, pre) == holds);
    }
}

TEST_CASE("is_complete") {
    const IModel full = problem_model(testing::coil_problem_items());
    CHECK(is_complete(opti().model, full, check_preconds(rules(), opti().where_, opti().model, full)));
    const IModel empty = empty_i_model(problem_o());
    CHECK_FALSE(is_complete(opti().model, empty, check_preconds(rules(), opti().where_, opti().model, empty)));
    PreCondsChecked failing;
    failing.all_true = false;
    CHECK_FALSE(is_complete(opti().model, full, failing));
}

TEST_CASE("re-entering a correct item verbatim changes nothing") {
    const OModel om = problem_o();
    for (const auto& r : testing::coil_problem_items()) {
        const IModel once = enter(empty_i_model(om), r.field, r.text, om, opti().model);
        REQUIRE(last(once).feedback.kind == FeedbackKind::Cor);
        const IModel twice = enter(once, r.field, r.text, om, opti().model);
        CHECK(twice.items.size() == once.items.size());
        CHECK(twice.live == once.live);
    }
}

namespace {

const std::vector<testing::Row>& method_pool() {
    static const std::vector<testing::Row> rows{
        {MField::Given, "Constants [r = 7]"},
        {MField::Given, "Extremum (A = 2 * u * v - u ^ 2)"},
        {MField::Given, "SideConditions [(u / 2) ^ 2 + (v / 2) ^ 2 = r ^ 2]"},
        {MField::Given, "SideConditions [u / 2 = r * sin α, v / 2 = r * cos α]"},
        {MField::Given, "SideConditions [v / 2 = r * cos α]"},
        {MField::Given, "FunctionVariable u"},
        {MField::Given, "FunctionVariable v"},
        {MField::Given, "FunctionVariable α"},
        {MField::Given, "Domain {0 <..< r}"},
        {MField::Given, "Domain {0 <..< π / 2}"},
        {MField::Given, "ErrorBound (ε = 0)"},
        {MField::Find, "Maximum A"},
        {MField::Find, "AdditionalValues [u, v]"},
        {MField::Find, "AdditionalValues [v]"},
        {MField::Find, "Maximum B"},
    };
    return rows;
}

}  // namespace

TEST_CASE("live variants shrink as items are added and recover on deletion") {
    std::mt19937 rng(31);
    const OModel om = method_o();
    const ModelPattern& mp = opti_method().guard;
    for (int round = 0; round < 60; ++round) {
        std::vector<InputItem> inputs;
        IModel im = empty_i_model(om);
        Variants before_last;
        for (int k = 0; k < 7; ++k) {
            before_last = im.live;
            const auto& r = method_pool()[rng() % method_pool().size()];
            InputItem in{k + 1, r.field, r.text, {}, false};
            const IModel next = check_input(in, om, mp, im, diff_ctx(), rules());
            for (int v : next.live) CHECK(im.live.count(v));
            im = next;
            inputs.push_back(in);
        }
        // deleting the latest item gives back the live set from before it
        std::vector<InputItem> rest(inputs.begin(), inputs.end() - 1);
        CHECK(classify_all(rest, om, mp, diff_ctx(), rules()).live == before_last);
        CHECK(classify_all(inputs, om, mp, diff_ctx(), rules()).live == im.live);

        // a complete model always has one variant shared by every correct item
        const PreCondsChecked ok{true, {}};
        if (is_complete(mp, im, ok)) {
            Variants common = om.all_variants();
            for (const auto& it : im.items)
                if (it.feedback.kind == FeedbackKind::Cor) common = intersect(common, it.variants);
            CHECK_FALSE(common.empty());
        }
    }
}

TEST_CASE("classification does not depend on the form of an equivalent input") {
    std::mt19937 rng(37);
    const OModel om = problem_o();
    const Term extremum = T("A = 2 * u * v - u ^ 2");
    const Term side = T("(u / 2) ^ 2 + (v / 2) ^ 2 = r ^ 2");
    for (int i = 0; i < 40; ++i) {
        const IModel a = enter(empty_i_model(om), MField::Relate,
                               "Extremum (" + render(testing::rearranged(rng, extremum)) + ")", om, opti().model);
        CHECK(last(a).feedback.kind == FeedbackKind::Cor);
        CHECK(last(a).feedback.descriptor == "Extremum");
        const IModel b = enter(empty_i_model(om), MField::Relate,
                               "SideConditions [" + render(testing::rearranged(rng, side)) + "]", om, opti().model);
        CHECK(last(b).feedback.kind == FeedbackKind::Cor);
        CHECK(last(b).variants == Variants{1, 2});
    }
}

TEST_CASE("every extracted constant comes from an entered equality") {
    const IModel im = problem_model(testing::coil_problem_items());
    const Environments env = make_environments(opti().model, im);
    for (const auto& [name, q] : env.eval) {
        bool found = false;
        for (const auto& it : im.items)
            for (const auto& v : it.feedback.values)
                if (v.is_equation() && v.args()[0].is_var() && v.args()[0].name() == name &&
                    eval_ground(v.args()[1]) == q)
                    found = true;
        CHECK(found);
    }
}
