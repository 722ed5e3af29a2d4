#pragma once

#include <optional>
#include <vector>

#include "formspec/imodel.hpp"
#include "formspec/knowledge.hpp"

namespace formspec {

struct RefineStep {
    IdPath id;
    PreCondsChecked checked;
};

struct RefineResult {
    std::optional<IdPath> matched;
    std::vector<RefineStep> trail;  // visit order
};

/// Level-order search below `start` for the most specific problem whose
/// preconditions hold for `im`. Children are visited only below holding
/// nodes; the deepest holding node wins, the first in level order on ties.
/// Works on pre-parsed terms only. Throws NotFound for an unknown start.
RefineResult refine_problem(const Store& store, const IdPath& start, const IModel& im);

/// The same search, run by the engine on the student's behalf.
RefineResult refine_tacitly(const Store& store, const IdPath& start, const IModel& im);

}  // namespace formspec
