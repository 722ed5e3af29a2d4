#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "formspec/specify.hpp"

namespace formspec {

/// A session script:
///
///   Example "Diff_App/coil-kernel"
///   Specification:
///     Model:
///       Given: "Constants [r = 7]"
///       Find: "Maximum A" "AdditionalValues [u, v]"
///     References:
///       Theory_Ref: "Diff_App"
///
/// `Model: Method` switches to the method's model; `Solution:` and what
/// follows is ignored. `CAS "solve (...)"` may replace `Example`.
struct Script {
    std::optional<Origin> origin;
    SrcPos origin_pos;
    std::vector<TacticInput> steps;  // positions index into the script
    bool has_method_model = false;
    std::vector<std::string> warnings;
};

/// Throws SyntaxError with a position in the script.
Script parse_script(std::string_view text);

struct ReplayReport {
    int exit_code = 1;
    std::vector<std::string> transcript;
    nlohmann::json json;
    std::optional<SpecSession> session;
};

/// Applies every step and reports per-item feedback with script positions.
/// Exit code 0 iff the problem model is complete with its preconditions
/// holding (and the method model too, when the script has one).
ReplayReport replay_script(std::shared_ptr<const Store> store, const Script& script, const Settings& settings = {});

}  // namespace formspec
