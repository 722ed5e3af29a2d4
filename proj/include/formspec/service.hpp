#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <json.hpp>

#include "formspec/specify.hpp"

namespace httplib {
class Server;
}

namespace formspec {

/// Full render of the active view: model rows (missing slots carry their
/// input template), references, preconditions.
nlohmann::json render_session(const SpecSession& s);

/// JSON protocol over sessions. A request is
///   {"session_id": "...", "command": "...", "payload": {...}}
/// and every session response carries the complete render of its view.
/// Commands: start, cas, input, delete, specify, next_step, toggle, refine,
/// complete, finish, status, list_examples, list_problems.
class Service {
public:
    explicit Service(std::shared_ptr<const Store> store, Settings defaults = {});

    /// Never throws; failures come back as {"status": "error", "message": ...}.
    nlohmann::json handle(const nlohmann::json& request);

    /// Serves POST /rpc on host:port until stopped.
    void serve(const std::string& host, int port);
    /// Makes a running serve() return.
    void stop();

private:
    struct Slot {
        std::mutex mutex;
        SpecSession session;
    };

    nlohmann::json handle_session(const std::string& id, const std::string& command, const nlohmann::json& payload);
    std::string open(SpecSession s);
    std::shared_ptr<Slot> find(const std::string& id);

    std::shared_ptr<const Store> store_;
    Settings defaults_;
    std::mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Slot>> sessions_;
    int next_id_ = 1;
    std::mutex server_mutex_;
    httplib::Server* server_ = nullptr;
};

}  // namespace formspec
