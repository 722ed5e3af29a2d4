#include "formspec/service.hpp"

#include <httplib.h>

namespace formspec {

using nlohmann::json;

namespace {

json item_row(const IModelItem& it) {
    json values = json::array();
    for (const auto& v : it.feedback.values) values.push_back(render(v));
    return {{"id", it.id},
            {"m_field", to_string(it.m_field)},
            {"descriptor", it.feedback.descriptor},
            {"text", it.feedback.raw},
            {"values", values},
            {"feedback_kind", to_string(it.feedback.kind)},
            {"message", it.feedback.message},
            {"variants", it.variants},
            {"pos", to_json(it.pos)},
            {"carried", it.carried}};
}

json ref_row(const char* name, const RefSlot& r) {
    return {{"ref", name}, {"value", r.value}, {"entered", r.entered}, {"template", input_template(ArgShape::StringRef)},
            {"pos", to_json(r.pos)}};
}

}  // namespace

json render_session(const SpecSession& s) {
    const View v = s.view();
    const ModelPattern& mp = s.pattern(v);
    const IModel& im = s.i_model(v);
    json rows = json::array();
    std::vector<bool> shown(im.items.size(), false);
    for (const MField field : {MField::Given, MField::Find, MField::Relate}) {
        for (const auto& pi : mp.items) {
            if (pi.field != field) continue;
            bool filled = false;
            for (std::size_t i = 0; i < im.items.size(); ++i) {
                const auto& it = im.items[i];
                if (it.m_field != field || it.feedback.descriptor != pi.descriptor.name) continue;
                json row = item_row(it);
                if (it.feedback.kind == FeedbackKind::Inc && it.feedback.values.empty())
                    row["template"] = input_template(pi.descriptor.shape);
                rows.push_back(std::move(row));
                shown[i] = true;
                filled = filled || it.feedback.kind == FeedbackKind::Cor || it.feedback.kind == FeedbackKind::Inc;
            }
            if (!filled)
                rows.push_back({{"m_field", to_string(field)},
                                {"descriptor", pi.descriptor.name},
                                {"text", ""},
                                {"feedback_kind", "missing"},
                                {"template", input_template(pi.descriptor.shape)}});
        }
        for (std::size_t i = 0; i < im.items.size(); ++i)
            if (!shown[i] && im.items[i].m_field == field) {
                rows.push_back(item_row(im.items[i]));
                shown[i] = true;
            }
    }

    json pre = json::array();
    const PreCondsChecked checked = s.preconds();
    for (const auto& c : checked.items)
        pre.push_back({{"pred", render(c.pred)}, {"holds", c.holds}, {"truth", to_string(c.truth)}, {"note", c.note},
                       {"pos", to_json(c.pos)}});

    json out{{"view", to_string(v)},
             {"model_render", rows},
             {"refs_render",
              json::array({ref_row("Theory_Ref", s.theory_ref()), ref_row("Problem_Ref", s.problem_ref()),
                           ref_row("Method_Ref", s.method_ref())})},
             {"preconds_render", {{"all_true", checked.all_true}, {"items", pre}}},
             {"complete", s.view_complete(v)},
             {"finished", s.is_finished()},
             {"live_variants", s.live()}};
    if (const auto& h = s.handoff()) {
        json args = json::object();
        for (const auto& [k, val] : h->actual_args) args[k] = render(val);
        json guard = json::array();
        for (const auto& g : h->guard_model) guard.push_back(render(g));
        out["handoff"] = {{"method", join_id(h->method)}, {"actual_args", args}, {"guard_model", guard}};
    }
    return out;
}

Service::Service(std::shared_ptr<const Store> store, Settings defaults)
    : store_(std::move(store)), defaults_(defaults) {}

std::string Service::open(SpecSession s) {
    std::lock_guard lock(sessions_mutex_);
    const std::string id = "s" + std::to_string(next_id_++);
    auto slot = std::make_shared<Slot>();
    slot->session = std::move(s);
    sessions_.emplace(id, std::move(slot));
    return id;
}

std::shared_ptr<Service::Slot> Service::find(const std::string& id) {
    std::lock_guard lock(sessions_mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

namespace {

Settings read_settings(Settings s, const json& j) {
    if (!j.is_object()) return s;
    for (const auto& [k, v] : j.items()) {
        const std::string value = v.is_string() ? v.get<std::string>() : v.dump();
        if (!apply_setting(s, k, value)) throw InvalidTactic("bad setting " + k + " = " + value);
    }
    return s;
}

SrcPos read_pos(const json& payload, const std::string& text) {
    if (payload.contains("pos")) {
        const json& p = payload["pos"];
        return {p.value("line", 1), p.value("col", 1), p.value("len", 0)};
    }
    int n = 0;
    for (char c : text)
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
    return {1, 1, n};
}

json error(const std::string& session_id, const std::string& message) {
    json out{{"status", "error"}, {"message", message}};
    if (!session_id.empty()) out["session_id"] = session_id;
    return out;
}

}  // namespace

json Service::handle(const json& request) {
    std::string session_id;
    try {
        if (!request.is_object()) return error("", "request must be a JSON object");
        session_id = request.value("session_id", "");
        const std::string command = request.value("command", "");
        const json payload = request.value("payload", json::object());

        if (command == "list_examples") return {{"status", "ok"}, {"examples", store_->example_ids()}};
        if (command == "list_problems") {
            json ids = json::array();
            for (const auto& id : store_->problem_ids()) ids.push_back(join_id(id));
            return {{"status", "ok"}, {"problems", ids}};
        }
        if (command == "start" || command == "cas") {
            SpecSession s = command == "start"
                                ? start_example(store_, payload.at("example_id").get<std::string>(),
                                                read_settings(defaults_, payload.value("settings", json::object())))
                                : cas_command(store_, payload.at("text").get<std::string>());
            json out = render_session(s);
            if (s.last_refine()) out["trail"] = nullptr;  // tacit refinement is not shown
            session_id = open(std::move(s));
            out["session_id"] = session_id;
            out["status"] = "ok";
            return out;
        }
        if (command.empty()) return error(session_id, "missing command");
        return handle_session(session_id, command, payload);
    } catch (const InvalidTactic& e) {
        json out = error(session_id, e.what());
        if (!e.blockers().empty()) out["blockers"] = e.blockers();
        return out;
    } catch (const std::exception& e) {
        return error(session_id, e.what());
    }
}

json Service::handle_session(const std::string& id, const std::string& command, const json& payload) {
    auto slot = find(id);
    if (!slot) return error(id, "no such session");
    std::lock_guard lock(slot->mutex);
    SpecSession& s = slot->session;
    json extra = json::object();

    auto apply = [&](TacticInput t) { s = apply_tactic(s, t); };
    if (command == "input") {
        const std::string field = payload.at("field").get<std::string>();
        const std::string text = payload.at("text").get<std::string>();
        const auto f = parse_mfield(field);
        if (!f) return error(id, "unknown field \"" + field + "\"");
        const TacticKind kind = *f == MField::Given  ? TacticKind::Add_Given
                                : *f == MField::Find ? TacticKind::Add_Find
                                                     : TacticKind::Add_Relation;
        apply(TacticInput{kind, text, read_pos(payload, text), -1});
    } else if (command == "delete") {
        apply(TacticInput{TacticKind::Delete_Item, {}, {}, payload.at("id").get<int>()});
    } else if (command == "specify") {
        const std::string ref = payload.at("ref").get<std::string>();
        const std::string value = payload.at("value").get<std::string>();
        TacticKind kind;
        if (ref == "theory" || ref == "Theory_Ref") kind = TacticKind::Specify_Theory;
        else if (ref == "problem" || ref == "Problem_Ref") kind = TacticKind::Specify_Problem;
        else if (ref == "method" || ref == "Method_Ref") kind = TacticKind::Specify_Method;
        else return error(id, "unknown reference \"" + ref + "\"");
        apply(TacticInput{kind, value, read_pos(payload, value), -1});
    } else if (command == "next_step") {
        const TacticInput t = propose_next(s);
        extra["proposals"] = json::array({to_json(t)});
        if (payload.value("apply", false)) apply(t);
    } else if (command == "toggle") {
        apply(TacticInput{TacticKind::Toggle_View, {}, {}, -1});
    } else if (command == "refine") {
        apply(TacticInput{TacticKind::Refine_Problem, payload.value("start", ""), {}, -1});
        json trail = json::array();
        for (const auto& step : s.last_refine()->trail)
            trail.push_back({{"id", join_id(step.id)}, {"holds", step.checked.all_true}});
        extra["trail"] = trail;
        extra["matched"] = s.last_refine()->matched ? json(join_id(*s.last_refine()->matched)) : json(nullptr);
    } else if (command == "complete") {
        apply(TacticInput{TacticKind::Complete_Spec, {}, {}, -1});
    } else if (command == "finish") {
        apply(TacticInput{TacticKind::Finish_Specify, {}, {}, -1});
    } else if (command == "status") {
        if (payload.value("history", false)) extra["state"] = serialize(s);
    } else {
        return error(id, "unknown command \"" + command + "\"");
    }
    json out = render_session(s);
    out.update(extra);
    out["session_id"] = id;
    out["status"] = "ok";
    return out;
}

void Service::serve(const std::string& host, int port) {
    httplib::Server server;
    server.Post("/rpc", [this](const httplib::Request& req, httplib::Response& res) {
        json reply;
        try {
            reply = handle(json::parse(req.body));
        } catch (const json::parse_error& e) {
            reply = error("", std::string("malformed JSON: ") + e.what());
        }
        res.set_content(reply.dump(), "application/json");
    });
    {
        std::lock_guard lock(server_mutex_);
        server_ = &server;
    }
    const bool ok = server.listen(host, port);
    {
        std::lock_guard lock(server_mutex_);
        server_ = nullptr;
    }
    if (!ok) throw Error("cannot listen on " + host + ":" + std::to_string(port));
}

void Service::stop() {
    std::lock_guard lock(server_mutex_);
    if (server_) server_->stop();
}

}  // namespace formspec
