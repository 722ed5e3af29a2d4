#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "formspec/rewrite.hpp"
#include "formspec/terms.hpp"

namespace formspec {

enum class MField : std::uint8_t { Given, Find, Relate };

std::string_view to_string(MField f);
std::optional<MField> parse_mfield(std::string_view s);

/// Slash-separated identifier split into segments: "a/b" -> ["a", "b"].
using IdPath = std::vector<std::string>;

IdPath split_id(std::string_view s);
std::string join_id(const IdPath& p);

struct PatternItem {
    MField field = MField::Given;
    Descriptor descriptor;
    Term placeholder;  // a Var
};

/// Given/Find/Relate items of a problem or of a method's guard.
/// Preconditions are kept apart (see ProblemDef::where_).
struct ModelPattern {
    std::vector<PatternItem> items;

    const PatternItem* find(MField field, std::string_view descriptor) const;
    const PatternItem* find(std::string_view descriptor) const;
};

/// A precondition as authored, with its location in the knowledge file.
struct Precondition {
    Term term;
    SrcPos pos;
};

struct ProblemDef {
    std::string guh;                    // unique id, the joined id path
    IdPath id;
    TheoryId theory;
    std::vector<std::string> mathauthors;
    IdPath start_refine;
    std::optional<Term> cas;            // CAS-command pattern, e.g. solve (e_e, v_v)
    std::vector<IdPath> solve_mets;
    std::string where_rls = "eval_rls";
    std::vector<Precondition> where_;
    ModelPattern model;
    std::optional<Term> postcondition;  // display only
    std::string file;
    SrcPos pos;
};

struct MethodDef {
    IdPath id;
    TheoryId theory;
    ModelPattern guard;
    std::string program_ref;
};

struct FormalItem {
    std::string text;
    std::vector<int> variants;  // explicit indices; empty means numbered by appearance
    SrcPos pos;
};

struct References {
    TheoryId theory;
    IdPath problem;
    IdPath method;
    bool operator==(const References&) const = default;
};

/// Authored example: problem statement, prepared items (repeated
/// descriptors are variants) and the references into the store.
struct Formalisation {
    std::string id;
    std::string text;
    std::vector<FormalItem> model_items;
    References refs;
};

struct Theory {
    TheoryId id;
    std::vector<TheoryId> imports;
    std::map<std::string, Descriptor> descriptors;
    std::map<std::string, Typ> consts;
};

template <class T>
struct TreeNode {
    std::string segment;
    std::optional<T> def;
    std::vector<TreeNode> children;  // declaration order
};

/// Authored content, immutable after loading.
class Store {
public:
    const ProblemDef& problem(const IdPath& id) const;
    const MethodDef& method(const IdPath& id) const;
    const Formalisation& example(std::string_view id) const;
    const Theory& theory(std::string_view id) const;
    const RuleSet& rule_set(std::string_view id) const;

    bool has_problem(const IdPath& id) const;
    bool has_method(const IdPath& id) const;
    bool has_theory(std::string_view id) const;

    /// Ids of defined problems directly below `id`, in declaration order.
    std::vector<IdPath> problem_children(const IdPath& id) const;

    /// Theory vocabulary with imports merged.
    TypeContext context(std::string_view theory) const;

    std::vector<IdPath> problem_ids() const;
    std::vector<std::string> example_ids() const;
    std::vector<const ProblemDef*> cas_owners() const;

    bool empty() const { return problems_.children.empty() && examples_.empty() && theories_.empty(); }

private:
    friend class KnowledgeLoader;
    TreeNode<ProblemDef> problems_;
    TreeNode<MethodDef> methods_;
    std::map<std::string, Formalisation> examples_;
    std::map<TheoryId, Theory> theories_;
    std::map<std::string, RuleSet> rule_sets_;
};

/// Loads knowledge files (directories are scanned for *.know). Every term is
/// parsed and type-adapted here, once.
Store load_knowledge(const std::vector<std::filesystem::path>& paths);

/// In-memory variant; `files` maps a display name to contents.
Store load_knowledge_text(const std::vector<std::pair<std::string, std::string>>& files);

const ProblemDef& lookup_problem(const Store& store, const IdPath& id);
const MethodDef& lookup_method(const Store& store, const IdPath& id);
const Formalisation& lookup_example(const Store& store, std::string_view id);

/// Applies adapt_term_to_type to every placeholder; throws TypeError.
ModelPattern adapt_to_type(const TypeContext& ctx, const ModelPattern& mp);

/// Splits "Constants [r = 7]" into its descriptor and argument.
struct ItemTerm {
    const Descriptor* descriptor = nullptr;
    Term arg;
};
std::optional<ItemTerm> split_item(const Term& t, const TypeContext& ctx);

/// "HOLlist_to_MLlist": list descriptors hold elements, others [t].
std::vector<Term> item_values(const Descriptor& d, const Term& arg);

}  // namespace formspec
