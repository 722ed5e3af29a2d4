#pragma once

#include <map>
#include <string>

#include "formspec/rewrite.hpp"

namespace formspec {

using PredicateRegistry = std::map<std::string, PredicateFn>;

/// Structural evaluators behind the equation tree's Where clauses:
/// has_equality(e), is_linear_in(e, x), is_root_form_in(e, x),
/// is_polynomial_in(e, x), is_rational_in(e, x). Each is total and exact.
PredicateRegistry register_builtin_predicates();

/// The default rule set: every builtin evaluator, no rewrite rules.
RuleSet default_rule_set(std::string id = "eval_rls");

}  // namespace formspec
