#include "formspec/refine.hpp"

#include <deque>

namespace formspec {

RefineResult refine_problem(const Store& store, const IdPath& start, const IModel& im) {
    RefineResult result;
    std::deque<std::pair<IdPath, std::size_t>> queue{{start, 0}};
    std::size_t best_depth = 0;
    while (!queue.empty()) {
        auto [id, depth] = std::move(queue.front());
        queue.pop_front();
        const ProblemDef& p = store.problem(id);
        PreCondsChecked checked = check_preconds(store.rule_set(p.where_rls), p.where_, p.model, im);
        const bool holds = checked.all_true;
        result.trail.push_back(RefineStep{id, std::move(checked)});
        if (!holds) continue;
        if (!result.matched || depth > best_depth) {
            result.matched = id;
            best_depth = depth;
        }
        for (auto& child : store.problem_children(id)) queue.emplace_back(std::move(child), depth + 1);
    }
    return result;
}

RefineResult refine_tacitly(const Store& store, const IdPath& start, const IModel& im) {
    return refine_problem(store, start, im);
}

}  // namespace formspec
