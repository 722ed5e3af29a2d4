#include "formspec/script.hpp"

#include "line_lexer.hpp"

namespace formspec {

using lexer::Line;
using lexer::Tok;

Script parse_script(std::string_view text) {
    Script script;
    std::optional<TacticKind> open;  // the field whose values may continue on the next line
    View view = View::Problem;
    for (const Line& line : lexer::lex_lines(text)) {
        const Tok& head = line.toks.front();
        std::size_t k = 1;
        if (head.kind == Tok::Str) {
            if (!open) throw SyntaxError(head.pos, "value without a field");
            k = 0;
        } else if (head.kind != Tok::Word) {
            throw SyntaxError(head.pos, "unexpected '" + head.text + "'");
        } else if (head.text == "Solution") {
            script.warnings.push_back("line " + std::to_string(line.number) + ": Solution is not checked; ignored");
            break;
        } else if (head.text == "Example" || head.text == "CAS") {
            if (script.origin) throw SyntaxError(head.pos, "a script starts only once");
            if (line.toks.size() != 2 || line.toks[1].kind != Tok::Str)
                throw SyntaxError(head.pos, head.text + " expects one quoted argument");
            script.origin = Origin{head.text == "Example" ? Origin::Kind::Example : Origin::Kind::Cas, line.toks[1].text};
            script.origin_pos = line.toks[1].pos;
            open.reset();
            continue;
        } else if (head.text == "Specification" || head.text == "References") {
            open.reset();
            continue;
        } else if (head.text == "Model") {
            View target = View::Problem;
            if (line.toks.size() > 1) {
                const Tok& which = line.toks[1];
                if (which.text == "Method") target = View::Method;
                else if (which.text != "Problem") throw SyntaxError(which.pos, "expected Problem or Method");
            }
            if (target == View::Method) script.has_method_model = true;
            if (target != view) {
                script.steps.push_back(TacticInput{TacticKind::Toggle_View, {}, head.pos, -1});
                view = target;
            }
            open.reset();
            continue;
        } else if (head.text == "Given") {
            open = TacticKind::Add_Given;
        } else if (head.text == "Find") {
            open = TacticKind::Add_Find;
        } else if (head.text == "Relate") {
            open = TacticKind::Add_Relation;
        } else if (head.text == "Where") {
            open.reset();  // preconditions come from the problem
            continue;
        } else if (head.text == "Theory_Ref" || head.text == "Problem_Ref" || head.text == "Method_Ref") {
            if (line.toks.size() != 2 || line.toks[1].kind != Tok::Str)
                throw SyntaxError(head.pos, head.text + " expects one quoted id");
            const TacticKind kind = head.text == "Theory_Ref"    ? TacticKind::Specify_Theory
                                    : head.text == "Problem_Ref" ? TacticKind::Specify_Problem
                                                                 : TacticKind::Specify_Method;
            script.steps.push_back(TacticInput{kind, line.toks[1].text, line.toks[1].pos, -1});
            open.reset();
            continue;
        } else {
            throw SyntaxError(head.pos, "unknown keyword '" + head.text + "'");
        }
        if (head.kind == Tok::Word && !head.colon) throw SyntaxError(head.pos, "expected ':' after " + head.text);
        for (; k < line.toks.size(); ++k) {
            const Tok& v = line.toks[k];
            if (v.kind != Tok::Str) throw SyntaxError(v.pos, "expected a quoted item");
            script.steps.push_back(TacticInput{*open, v.text, v.pos, -1});
        }
    }
    return script;
}

namespace {

std::string at(const SrcPos& p) { return "line " + std::to_string(p.line) + ", col " + std::to_string(p.col); }

}  // namespace

ReplayReport replay_script(std::shared_ptr<const Store> store, const Script& script, const Settings& settings) {
    ReplayReport report;
    auto say = [&](std::string line) { report.transcript.push_back(std::move(line)); };
    for (const auto& w : script.warnings) say("warning: " + w);
    report.json["warnings"] = script.warnings;
    if (!script.origin) {
        say("model incomplete: the script names no example");
        report.json["complete"] = false;
        report.json["diagnostic"] = "model incomplete";
        report.json["exit_code"] = 1;
        return report;
    }

    std::optional<std::string> diagnostic;
    SpecSession s = [&] {
        try {
            return script.origin->kind == Origin::Kind::Example ? start_example(store, script.origin->text, settings)
                                                                : cas_command(store, script.origin->text);
        } catch (const Error& e) {
            throw SyntaxError(script.origin_pos, e.what());
        }
    }();

    for (const auto& step : script.steps) {
        try {
            s = apply_tactic(std::move(s), step);
        } catch (const Error& e) {
            const std::string msg = at(step.pos) + ": " + std::string(to_string(step.kind)) + " rejected: " + e.what();
            say(msg);
            if (!diagnostic) diagnostic = msg;
        }
    }

    nlohmann::json items = nlohmann::json::array();
    for (const View v : {View::Problem, View::Method}) {
        if (v == View::Method && !script.has_method_model) continue;
        for (const auto& it : s.i_model(v).items) {
            if (it.carried && it.feedback.kind != FeedbackKind::Syn) continue;
            std::string line = at(it.pos) + ": " + std::string(to_string(v)) + " " +
                               std::string(to_string(it.m_field)) + " \"" + it.feedback.raw + "\": " +
                               std::string(to_string(it.feedback.kind));
            if (it.feedback.kind != FeedbackKind::Cor) {
                line += " (" + it.feedback.message + ")";
                if (!diagnostic) diagnostic = line;
            }
            say(line);
            items.push_back({{"view", to_string(v)},
                             {"m_field", to_string(it.m_field)},
                             {"text", it.feedback.raw},
                             {"feedback_kind", to_string(it.feedback.kind)},
                             {"message", it.feedback.message},
                             {"pos", to_json(it.pos)}});
        }
    }
    const PreCondsChecked pre = s.preconds();
    for (const auto& c : pre.items)
        say("Where " + render(c.pred) + ": " + (c.holds ? "holds" : "fails" + (c.note.empty() ? "" : " (" + c.note + ")")));

    bool complete = s.view_complete(View::Problem);
    if (script.has_method_model) complete = complete && s.view_complete(View::Method);
    if (!complete && !diagnostic) {
        std::string what;
        for (const View v : {View::Problem, View::Method}) {
            if (v == View::Method && !script.has_method_model) continue;
            for (const PatternItem* pi : lacking(s.pattern(v), s.i_model(v)))
                what += (what.empty() ? "" : ", ") + std::string(to_string(pi->field)) + " " + pi->descriptor.name;
        }
        for (const auto& c : pre.items)
            if (!c.holds) what += (what.empty() ? "" : ", ") + ("precondition " + render(c.pred));
        diagnostic = "model incomplete" + (what.empty() ? std::string() : ": " + what);
    }
    report.exit_code = complete ? 0 : 1;
    say(complete ? "specification complete" : "model incomplete");
    if (!complete) say("first problem: " + *diagnostic);

    report.json["items"] = items;
    report.json["complete"] = complete;
    report.json["exit_code"] = report.exit_code;
    if (diagnostic) report.json["diagnostic"] = *diagnostic;
    report.json["session"] = serialize(s);
    report.session = std::move(s);
    return report;
}

}  // namespace formspec
