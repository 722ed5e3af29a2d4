#include <doctest.h>

#include <fstream>
#include <sstream>

#include "formspec/script.hpp"
#include "support.hpp"

using namespace formspec;
using testing::shipped;

namespace {

std::string coil_script() {
    std::ifstream in(std::string(FORMSPEC_SCRIPTS_DIR) + "/coil_kernel.spec");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("the complete coil specification replays cleanly") {
    const ReplayReport r = replay_script(shipped(), parse_script(coil_script()));
    CHECK(r.exit_code == 0);
    CHECK(r.json["complete"] == true);
    for (const auto& it : r.json["items"]) CHECK(it["feedback_kind"] == "correct");
    REQUIRE(r.session);
    CHECK(r.session->preconds().all_true);
    CHECK(r.session->view_complete(View::Problem));
    CHECK(r.transcript.back() == "specification complete");
}

TEST_CASE("an empty script is incomplete") {
    const ReplayReport r = replay_script(shipped(), parse_script(""));
    CHECK(r.exit_code == 1);
    REQUIRE_FALSE(r.transcript.empty());
    CHECK(r.transcript.front().find("model incomplete") == 0);
}

TEST_CASE("a syntax error is reported at its script position") {
    const std::string text = "Example \"Diff_App/coil-kernel\"\nSpecification:\n  Model:\n    Given: \"Constants [r=]\"\n";
    const ReplayReport r = replay_script(shipped(), parse_script(text));
    CHECK(r.exit_code == 1);
    const std::string diag = r.json["diagnostic"];
    CHECK(diag.find("line 4, col 26") == 0);
    CHECK(diag.find("syntax") != std::string::npos);
}

TEST_CASE("script structure") {
    const Script s = parse_script("Example \"Diff_App/coil-kernel\"\nSpecification:\n  Model: Method\n"
                                  "    Given: \"FunctionVariable u\"\n           \"Domain {0 <..< r}\"\n"
                                  "  References:\n    Theory_Ref: \"Diff_App\"\nSolution:\n  anything at all\n");
    REQUIRE(s.origin);
    CHECK(s.origin->text == "Diff_App/coil-kernel");
    CHECK(s.has_method_model);
    REQUIRE(s.steps.size() == 4);
    CHECK(s.steps[0].kind == TacticKind::Toggle_View);
    CHECK(s.steps[1].text == "FunctionVariable u");
    CHECK(s.steps[2].pos.line == 5);
    CHECK(s.steps[3].kind == TacticKind::Specify_Theory);
    CHECK(s.warnings.size() == 1);

    CHECK_THROWS_AS(parse_script("Given \"x\"\n"), SyntaxError);
    CHECK_THROWS_AS(parse_script("Bogus: \"x\"\n"), SyntaxError);
    CHECK_THROWS_AS(parse_script("\"dangling\"\n"), SyntaxError);
    CHECK_THROWS_AS(parse_script("Example \"a\"\nExample \"b\"\n"), SyntaxError);
}

TEST_CASE("a CAS script") {
    const ReplayReport r = replay_script(shipped(), parse_script("CAS \"solve (12 - 6 * x = 0, x)\"\n"));
    CHECK(r.exit_code == 0);
    CHECK(r.session->problem_ref().value == "univariate/equation/linear");
}
