#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "formspec/imodel.hpp"
#include "formspec/knowledge.hpp"
#include "formspec/refine.hpp"

namespace formspec {

enum class View { Problem, Method };
enum class Reveal { Full, Partial };

std::string_view to_string(View v);

struct Settings {
    bool skip_specify = false;
    Reveal next_step_reveals = Reveal::Full;
    bool operator==(const Settings&) const = default;
};

/// Applies one key=value setting; returns false for an unknown key or value.
bool apply_setting(Settings& s, std::string_view key, std::string_view value);

enum class TacticKind {
    Model_Problem,   // internal
    Add_Given,
    Add_Find,
    Add_Relation,
    Delete_Item,
    Specify_Theory,
    Specify_Problem,
    Specify_Method,
    Refine_Problem,
    Refine_Tacitly,  // internal
    Toggle_View,
    Complete_Spec,
    Finish_Specify,
};

std::string_view to_string(TacticKind k);
std::optional<TacticKind> parse_tactic_kind(std::string_view s);
bool is_internal(TacticKind k);

struct TacticInput {
    TacticKind kind = TacticKind::Finish_Specify;
    std::string text;  // item, theory id or id path, depending on kind
    SrcPos pos;        // of `text` in the student's source
    int index = -1;    // Delete_Item: the entry id

    bool operator==(const TacticInput&) const = default;
};

/// A tactic as recorded in the history, with a short account of its effect.
struct TacticApplied {
    TacticInput input;
    std::string outcome;
};

struct RefSlot {
    std::string value;
    bool entered = false;
    SrcPos pos;
};

/// A raw input as the student gave it; classification is derived.
struct Entry {
    int id = 0;
    View view = View::Problem;
    MField field = MField::Given;
    std::string raw;
    SrcPos pos;
};

struct SolveHandoff {
    IdPath method;
    Env actual_args;                 // guard placeholder -> value
    std::vector<Term> guard_model;   // instantiated guard items
};

struct Origin {
    enum class Kind { Example, Cas } kind = Kind::Example;
    std::string text;  // example id or the CAS command
};

/// State of one specify-phase: both views of the model, references, the
/// view toggle and the history of applied tactics. Value type; tactics
/// return a new session.
class SpecSession {
public:
    const Store& store() const { return *store_; }
    const std::shared_ptr<const Store>& store_ptr() const { return store_; }
    const Origin& origin() const { return origin_; }
    const Settings& settings() const { return settings_; }
    const Formalisation& formalisation() const { return form_; }
    const TypeContext& context() const { return ctx_; }

    View view() const { return view_; }
    const RefSlot& theory_ref() const { return theory_; }
    const RefSlot& problem_ref() const { return problem_; }
    const RefSlot& method_ref() const { return method_; }
    bool has_method() const;
    const ProblemDef& problem() const;
    const MethodDef& method() const;  // throws NotFound when there is none

    const ModelPattern& pattern(View v) const;
    const OModel& o_model(View v) const { return v == View::Problem ? o_problem_ : o_method_; }
    const IModel& i_model(View v) const { return v == View::Problem ? im_problem_ : im_method_; }
    const std::vector<Entry>& entries() const { return entries_; }

    /// Preconditions of the problem, checked against the problem view.
    PreCondsChecked preconds() const;
    bool view_complete(View v) const;
    /// Variants consistent with both views.
    Variants live() const;
    /// Reasons Finish_Specify would be refused; empty when it succeeds.
    std::vector<std::string> blockers() const;

    bool is_finished() const { return finished_; }
    const std::optional<SolveHandoff>& handoff() const { return handoff_; }
    const std::optional<RefineResult>& last_refine() const { return last_refine_; }
    const std::vector<TacticApplied>& history() const { return history_; }

private:
    friend class SessionOps;

    std::shared_ptr<const Store> store_;
    Origin origin_;
    Settings settings_;
    Formalisation form_;
    TypeContext form_ctx_;
    TypeContext ctx_;
    RefSlot theory_, problem_, method_;
    ModelPattern no_pattern_;
    OModel o_problem_, o_method_;
    std::vector<Entry> entries_;
    int next_id_ = 1;
    IModel im_problem_, im_method_;
    View view_ = View::Problem;
    std::optional<RefineResult> last_refine_;
    bool finished_ = false;
    std::optional<SolveHandoff> handoff_;
    std::vector<TacticApplied> history_;
};

/// Opens a session on an authored example. With skip_specify the session
/// is completed and finished immediately. Throws NotFound.
SpecSession start_example(std::shared_ptr<const Store> store, const std::string& example_id, Settings settings = {});

/// Applies a tactic from the student. Throws InvalidTactic for internal
/// tactics, unknown ids, and Finish_Specify on an incomplete model.
SpecSession apply_tactic(SpecSession s, const TacticInput& t);

/// The next step: the first missing item of the current view, then
/// unconfirmed references, then the other view, then Finish_Specify.
/// Throws InvalidTactic on a finished session.
TacticInput propose_next(const SpecSession& s);

/// Minimal input such as "solve (12 - 6 * x = 0, x)": formalises, refines
/// and completes the specification tacitly. Throws NoCasMatch.
SpecSession cas_command(std::shared_ptr<const Store> store, const std::string& raw);

/// Rebuilds a session from its origin by folding the tactics.
SpecSession replay(std::shared_ptr<const Store> store, const Origin& origin, const Settings& settings,
                   const std::vector<TacticInput>& history);

/// Full state, stable across runs; two sessions are equal iff their dumps are.
nlohmann::json serialize(const SpecSession& s);

nlohmann::json to_json(const SrcPos& p);
nlohmann::json to_json(const TacticInput& t);

}  // namespace formspec
