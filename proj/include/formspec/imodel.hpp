#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "formspec/knowledge.hpp"
#include "formspec/rewrite.hpp"

namespace formspec {

/// Indices of the formalisation variants an item is consistent with.
using Variants = std::set<int>;

Variants intersect(const Variants& a, const Variants& b);
std::string to_string(const Variants& v);  // "{1,2}"

/// One prepared item of the example, parsed once at session start.
struct OModelItem {
    Variants variants;
    MField m_field = MField::Given;
    Descriptor descriptor;
    Term arg;                  // as authored, for display and auto-completion
    std::vector<Term> values;  // list elements unwrapped, otherwise [arg]
};

struct OModel {
    std::vector<OModelItem> items;
    int variant_count = 1;

    Variants all_variants() const;
};

/// Parses every formalisation item once and numbers its variants. Items
/// whose descriptor is not in `mp` are left out; the numbering is global
/// over the whole formalisation, so indices agree between views.
OModel init_o_model(const Formalisation& f, const ModelPattern& mp, const TypeContext& ctx);

enum class FeedbackKind { Cor, Inc, Sup, Syn };

std::string_view to_string(FeedbackKind k);  // correct / incomplete / superfluous / syntax

struct Feedback {
    FeedbackKind kind = FeedbackKind::Sup;
    std::string descriptor;     // empty for Syn and for unknown descriptors
    std::vector<Term> values;
    std::string raw;            // verbatim input
    std::string message;
};

/// A student input awaiting classification.
struct InputItem {
    int id = 0;
    MField field = MField::Given;
    std::string raw;
    SrcPos pos;
    /// Take the m_field from the pattern instead of `field`; used for
    /// items carried over from the other view.
    bool adopt_field = false;
};

struct IModelItem {
    int id = 0;
    Variants variants;
    MField m_field = MField::Given;
    Feedback feedback;
    SrcPos pos;
    bool carried = false;  // entered in the other view
};

struct IModel {
    std::vector<IModelItem> items;
    Variants live;  // variants consistent with every non-Sup item so far

    const IModelItem* correct(std::string_view descriptor) const;
    /// First Cor or Inc item for the descriptor.
    const IModelItem* filled(std::string_view descriptor) const;
};

IModel empty_i_model(const OModel& om);

/// Classifies one input against the view's O-model and pattern and appends
/// it: parse failure is Syn; a descriptor outside the pattern, a value that
/// matches no prepared element, a variant outside the live set or a second
/// item for an occupied slot is Sup; all prepared values present is Cor, a
/// proper sub-multiset Inc. The live set narrows to the item's variants.
IModel check_input(const InputItem& in, const OModel& om, const ModelPattern& mp, const IModel& im,
                   const TypeContext& ctx, const RuleSet& rs);

/// Classifies `inputs` in order from an empty I-model.
IModel classify_all(const std::vector<InputItem>& inputs, const OModel& om, const ModelPattern& mp,
                    const TypeContext& ctx, const RuleSet& rs);

struct Environments {
    Env subst;                                              // placeholder -> entered value
    std::vector<std::pair<std::string, Rational>> eval;     // variable -> value, from x = ground
    std::vector<std::string> missing;                       // descriptors without a Cor/Inc item
};

Environments make_environments(const ModelPattern& mp, const IModel& im);

struct PrecondCheck {
    bool holds = false;
    Truth truth = Truth::Unknown;
    Term pred;    // instantiated
    SrcPos pos;   // of the authored precondition
    std::string note;
};

struct PreCondsChecked {
    bool all_true = true;
    std::vector<PrecondCheck> items;
};

/// Instantiates each precondition and evaluates it. A placeholder bound to
/// a list of equalities stands for each equality's left side in turn, so
/// "0 < fixes" with [r = 7] becomes 0 < 7. Unknown counts as not holding.
PreCondsChecked check_preconds(const RuleSet& rs, const std::vector<Precondition>& where_, const ModelPattern& mp,
                               const IModel& im);

/// Every pattern item has a Cor item, the Cor items share a variant, and
/// the preconditions hold.
bool is_complete(const ModelPattern& mp, const IModel& im, const PreCondsChecked& where_checked);

/// Pattern items without a Cor item, in pattern order.
std::vector<const PatternItem*> lacking(const ModelPattern& mp, const IModel& im);

/// Parses a student item under ctx, defaulting unannotated variables to real.
Term parse_item(std::string_view raw, const TypeContext& ctx);

}  // namespace formspec
