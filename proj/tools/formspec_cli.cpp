// Command-line front end: script replay, an interactive REPL and the
// JSON service.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "formspec/script.hpp"
#include "formspec/service.hpp"

using namespace formspec;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Settings read_settings_file(const std::string& path) {
    Settings s;
    std::istringstream in(read_file(path));
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        auto trim = [](std::string x) {
            const auto b = x.find_first_not_of(" \t\r");
            const auto e = x.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : x.substr(b, e - b + 1);
        };
        if (trim(line).empty()) continue;
        if (eq == std::string::npos || !apply_setting(s, trim(line.substr(0, eq)), trim(line.substr(eq + 1))))
            throw Error(path + ":" + std::to_string(number) + ": bad setting '" + trim(line) + "'");
    }
    return s;
}

void print_render(const json& r) {
    if (r.value("status", "") == "error") {
        std::cout << "error: " << r.value("message", "") << "\n";
        if (r.contains("blockers"))
            for (const auto& b : r["blockers"]) std::cout << "  - " << b.get<std::string>() << "\n";
        return;
    }
    if (!r.contains("model_render")) {
        std::cout << r.dump(2) << "\n";
        return;
    }
    std::cout << "Model (" << r["view"].get<std::string>() << ")\n";
    std::string field;
    for (const auto& row : r["model_render"]) {
        if (row["m_field"] != field) {
            field = row["m_field"].get<std::string>();
            std::cout << "  " << field << ":\n";
        }
        const std::string kind = row["feedback_kind"];
        std::cout << "    ";
        if (row.contains("id")) std::cout << "[" << row["id"].get<int>() << "] ";
        if (kind == "missing")
            std::cout << row["descriptor"].get<std::string>() << " " << row["template"].get<std::string>();
        else
            std::cout << row["text"].get<std::string>();
        std::cout << "  <" << kind << ">";
        if (kind != "correct" && kind != "missing" && row.contains("message"))
            std::cout << " " << row["message"].get<std::string>();
        std::cout << "\n";
    }
    for (const auto& p : r["preconds_render"]["items"])
        std::cout << "  Where: " << p["pred"].get<std::string>() << "  <" << (p["holds"].get<bool>() ? "holds" : "fails")
                  << ">\n";
    std::cout << "References\n";
    for (const auto& ref : r["refs_render"])
        std::cout << "  " << ref["ref"].get<std::string>() << ": \"" << ref["value"].get<std::string>() << "\""
                  << (ref["entered"].get<bool>() ? "" : "  <not confirmed>") << "\n";
    if (r.contains("proposals"))
        for (const auto& p : r["proposals"])
            std::cout << "next: " << p["kind"].get<std::string>() << " " << p["text"].get<std::string>() << "\n";
    if (r.contains("trail") && r["trail"].is_array())
        for (const auto& t : r["trail"])
            std::cout << "refine: " << t["id"].get<std::string>() << (t["holds"].get<bool>() ? " holds" : " rejected")
                      << "\n";
    if (r.value("finished", false)) std::cout << "specification finished\n";
}

int run_repl(Service& service, bool as_json) {
    std::string session;
    std::string line;
    const char* help =
        "commands: examples | problems | start <example> | cas <command> | given|find|relate <item> |\n"
        "          delete <id> | theory|problem|method <id> | next | step | toggle | refine [start] |\n"
        "          complete | finish | show | quit\n";
    std::cout << help;
    while (std::cout << "> " << std::flush, std::getline(std::cin, line)) {
        std::istringstream in(line);
        std::string cmd;
        in >> cmd;
        std::string arg;
        std::getline(in >> std::ws, arg);
        json req{{"session_id", session}, {"payload", json::object()}};
        if (cmd.empty()) continue;
        if (cmd == "quit" || cmd == "exit") break;
        if (cmd == "help") {
            std::cout << help;
            continue;
        }
        if (cmd == "examples") req["command"] = "list_examples";
        else if (cmd == "problems") req["command"] = "list_problems";
        else if (cmd == "start") req = {{"command", "start"}, {"payload", {{"example_id", arg}}}};
        else if (cmd == "cas") req = {{"command", "cas"}, {"payload", {{"text", arg}}}};
        else if (cmd == "given" || cmd == "find" || cmd == "relate") {
            req["command"] = "input";
            req["payload"] = {{"field", cmd}, {"text", arg}};
        } else if (cmd == "delete") {
            req["command"] = "delete";
            try {
                req["payload"] = {{"id", std::stoi(arg)}};
            } catch (const std::exception&) {
                std::cout << "error: delete expects an item id\n";
                continue;
            }
        } else if (cmd == "theory" || cmd == "problem" || cmd == "method") {
            req["command"] = "specify";
            req["payload"] = {{"ref", cmd}, {"value", arg}};
        } else if (cmd == "next") req["command"] = "next_step";
        else if (cmd == "step") {
            req["command"] = "next_step";
            req["payload"] = {{"apply", true}};
        } else if (cmd == "toggle") req["command"] = "toggle";
        else if (cmd == "refine") {
            req["command"] = "refine";
            req["payload"] = {{"start", arg}};
        } else if (cmd == "complete") req["command"] = "complete";
        else if (cmd == "finish") req["command"] = "finish";
        else if (cmd == "show") req["command"] = "status";
        else {
            std::cout << "unknown command; type help\n";
            continue;
        }
        const json reply = service.handle(req);
        if (reply.contains("session_id") && reply.value("status", "") == "ok") session = reply["session_id"];
        if (as_json) std::cout << reply.dump() << "\n";
        else print_render(reply);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interactive specification of mathematical word problems"};
    std::vector<std::string> knowledge;
    std::string replay_path, listen, settings_path;
    bool repl = false, as_json = false;
    app.add_option("--knowledge", knowledge, "knowledge file or directory (repeatable)");
    app.add_option("--replay", replay_path, "replay a session script");
    app.add_flag("--repl", repl, "interactive session");
    app.add_option("--listen", listen, "serve the JSON protocol on host:port");
    app.add_option("--settings", settings_path, "key=value file with default settings");
    app.add_flag("--json", as_json, "machine-readable output");
    CLI11_PARSE(app, argc, argv);

    try {
        if (knowledge.empty()) knowledge.push_back(FORMSPEC_KNOWLEDGE_DIR);
        std::vector<std::filesystem::path> paths(knowledge.begin(), knowledge.end());
        auto store = std::make_shared<const Store>(load_knowledge(paths));
        const Settings settings = settings_path.empty() ? Settings{} : read_settings_file(settings_path);

        if (!replay_path.empty()) {
            ReplayReport report;
            try {
                report = replay_script(store, parse_script(read_file(replay_path)), settings);
            } catch (const SyntaxError& e) {
                const std::string msg = replay_path + ":" + std::to_string(e.pos().line) + ":" +
                                        std::to_string(e.pos().col) + ": " + e.message();
                if (as_json) std::cout << json{{"exit_code", 1}, {"diagnostic", msg}}.dump() << "\n";
                else std::cerr << msg << "\n";
                return 1;
            }
            if (as_json) std::cout << report.json.dump(2) << "\n";
            else
                for (const auto& line : report.transcript) std::cout << line << "\n";
            return report.exit_code;
        }
        Service service(store, settings);
        if (!listen.empty()) {
            const auto colon = listen.rfind(':');
            if (colon == std::string::npos) throw Error("--listen expects host:port");
            const std::string host = listen.substr(0, colon);
            const int port = std::stoi(listen.substr(colon + 1));
            std::cerr << "listening on " << host << ":" << port << " (POST /rpc)\n";
            service.serve(host, port);
            return 0;
        }
        if (repl) return run_repl(service, as_json);
        std::cerr << app.help();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
