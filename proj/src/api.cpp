// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#include "peal/api.hpp"

#include <cstdio>
#include <mutex>

#include <json.hpp>

#include "peal/explainer.hpp"
#include "peal/report.hpp"

namespace peal {

using nlohmann::json;

struct ApiService::Session {
    Session(std::string session_id, CaseDocument doc)
        : id(std::move(session_id)), what_if(std::move(doc)), state(what_if.solve()) {}

    std::string id;
    mutable std::shared_mutex mutex; // unique for mutations, shared for reads
    WhatIfSession what_if;
    SolveResult state; // outcome of the current stack
};

namespace {

struct HttpError {
    int status;
    json error;
};

[[noreturn]] void fail(int status, const std::string& kind, const std::string& message, json extra = json::object()) {
    extra["kind"] = kind;
    extra["message"] = message;
    throw HttpError{status, std::move(extra)};
}

json rational_json(const Rational& r) {
    return {{"num", r.get_num().get_str()}, {"den", r.get_den().get_str()}, {"display", to_display_string(r)}};
}

json parse_error_json(const ParseError& e) {
    return {{"kind", "parse"}, {"message", e.message()}, {"line", e.line()}, {"column", e.column()}};
}

json conflict_json(const SolveResult& r) {
    return {{"constraints", r.conflict}, {"assumptions", r.suspects}};
}

json beliefs_json(const BlafCase& c, const SolveResult& r) {
    json out;
    out["satisfiable"] = r.satisfiable;
    if (!r.satisfiable) {
        out["conflict"] = conflict_json(r);
        return out;
    }
    const Verdict& v = *r.verdict;
    out["innocence"] = v.innocence_belief ? rational_json(*v.innocence_belief) : json(nullptr);
    const auto display = belief_rows(c, v, NumberStyle::Display);
    const auto exact = belief_rows(c, v, NumberStyle::Exact);
    json rows = json::array();
    for (std::size_t i = 0; i < display.size(); ++i) {
        rows.push_back({{"argument", display[i].id},
                        {"role", std::string(to_string(display[i].role))},
                        {"lower", rational_json(display[i].interval.lower)},
                        {"upper", rational_json(display[i].interval.upper)},
                        {"display", display[i].cell},
                        {"exact", exact[i].cell},
                        {"directly_constrained", display[i].directly_constrained}});
    }
    out["beliefs"] = std::move(rows);
    return out;
}

json explanation_json(const Explanation& e, std::size_t depth) {
    json out{{"subject", e.subject},
             {"side", std::string(to_string(e.side))},
             {"bound", rational_json(e.bound)},
             {"status", e.status == ExplanationStatus::Trivial       ? "trivial"
                        : e.status == ExplanationStatus::Explained   ? "explained"
                        : e.status == ExplanationStatus::Unavailable ? "unavailable"
                                                                     : "unexplained"},
             {"narrative", e.narrative}};
    json reasons = json::array();
    if (depth > 0) {
        for (const auto& r : e.reasons) {
            json weights = json::array();
            for (const auto& w : r.weights) {
                weights.push_back(rational_json(w));
            }
            json bounds = json::array();
            for (const auto& b : r.bounds) {
                bounds.push_back(rational_json(b));
            }
            json details = json::array();
            if (depth > 1) {
                for (const auto& d : r.details) {
                    details.push_back(explanation_json(d, depth - 1));
                }
            }
            json reason{{"kind", std::string(to_string(r.kind))},
                        {"arguments", r.arguments},
                        {"weights", std::move(weights)},
                        {"bounds", std::move(bounds)},
                        {"induced", rational_json(r.induced)},
                        {"cycle", r.cycle},
                        {"details", std::move(details)}};
            if (r.kind == ReasonKind::Assumption) {
                reason["assumption"] = r.assumption;
                reason["assumption_text"] = r.assumption_text;
            }
            reasons.push_back(std::move(reason));
        }
    }
    out["reasons"] = std::move(reasons);
    return out;
}

json assumptions_json(const WhatIfSession& s, const SolveResult& state) {
    json list = json::array();
    for (const auto& a : s.stack()) {
        const bool flagged =
            std::find(state.suspects.begin(), state.suspects.end(), a.id) != state.suspects.end();
        list.push_back({{"id", a.id}, {"text", a.text}, {"flagged", flagged}});
    }
    return list;
}

json session_json(const std::string& id, const WhatIfSession& s, const SolveResult& state) {
    const BlafCase& c = s.current();
    const CaseDocument& doc = s.base();
    json args = json::array();
    for (const auto& a : doc.spec.arguments) {
        args.push_back({{"id", a.id}, {"role", std::string(to_string(a.role))}, {"label", a.label}});
    }
    json edges = json::array();
    for (const auto& e : c.graph().edges()) {
        edges.push_back({{"source", e.source},
                         {"target", e.target},
                         {"weight", rational_json(e.weight)},
                         {"collective", c.is_cs_edge(e.source, e.target)}});
    }
    json groups = json::array();
    for (const auto& g : c.cs_groups()) {
        json members = json::array();
        for (const auto& m : g.members) {
            members.push_back({{"id", m.id}, {"weight", rational_json(m.weight)}});
        }
        groups.push_back({{"target", g.target}, {"members", std::move(members)}});
    }
    return {{"id", id},
            {"framework", doc.spec.framework == Framework::Blaf ? "blaf" : "plain"},
            {"threshold", rational_json(doc.options.threshold)},
            {"arguments", std::move(args)},
            {"edges", std::move(edges)},
            {"cs_groups", std::move(groups)},
            {"assumptions", assumptions_json(s, state)},
            {"notes", c.notes()},
            {"satisfiable", state.satisfiable},
            {"innocence", state.satisfiable && state.verdict->innocence_belief
                              ? rational_json(*state.verdict->innocence_belief)
                              : json(nullptr)}};
}

json body_object(const ApiRequest& request) {
    json body;
    try {
        body = json::parse(request.body);
    } catch (const json::parse_error& e) {
        fail(400, "bad-request", std::string("body is not JSON: ") + e.what());
    }
    if (!body.is_object()) {
        fail(400, "bad-request", "body must be a JSON object");
    }
    return body;
}

std::string string_field(const json& body, const char* key) {
    if (!body.contains(key) || !body[key].is_string()) {
        fail(400, "bad-request", std::string("missing string field '") + key + "'");
    }
    return body[key].get<std::string>();
}

/// Parses and validates a document, mapping failures to 400/422.
std::pair<CaseDocument, BlafCase> checked_document(const std::string& text) {
    try {
        CaseDocument doc = parse_case_document(text);
        BlafCase c = to_case(doc);
        return {std::move(doc), std::move(c)};
    } catch (const ParseError& e) {
        throw HttpError{400, parse_error_json(e)};
    } catch (const CaseFileError& e) {
        throw HttpError{422, {{"kind", "validation"},
                              {"message", e.message()},
                              {"subject", e.subject()},
                              {"line", e.line()}}};
    } catch (const ValidationError& e) {
        fail(422, "validation", e.what());
    }
}

std::size_t depth_param(const ApiRequest& request, std::size_t fallback) {
    const auto it = request.query.find("depth");
    if (it == request.query.end()) {
        return fallback;
    }
    const std::string& text = it->second;
    if (text.empty() || text.size() > 4 || text.find_first_not_of("0123456789") != std::string::npos) {
        fail(400, "bad-request", "depth must be a non-negative integer below 10000");
    }
    return std::stoul(text);
}

const SolveResult& require_satisfiable(const SolveResult& state) {
    if (!state.satisfiable) {
        fail(409, "unsatisfiable", "the current assumptions admit no probability function",
             {{"conflict", conflict_json(state)}});
    }
    return state;
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos < path.size()) {
        const std::size_t slash = path.find('/', pos);
        const std::size_t end = slash == std::string::npos ? path.size() : slash;
        if (end > pos) {
            parts.push_back(path.substr(pos, end - pos));
        }
        pos = end + 1;
    }
    return parts;
}

ApiResponse respond(int status, const json& body) { return {status, body.dump()}; }

} // namespace

ApiService::ApiService(ApiConfig config) : config_(std::move(config)), ids_(std::random_device{}()) {}

ApiService::~ApiService() = default;

std::size_t ApiService::session_count() const {
    std::shared_lock lock(mutex_);
    return sessions_.size();
}

std::shared_ptr<ApiService::Session> ApiService::find(const std::string& id) const {
    std::shared_lock lock(mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) {
        fail(404, "not-found", "no session '" + id + "'");
    }
    return it->second;
}

std::string ApiService::new_id() {
    // caller holds mutex_ exclusively
    while (true) {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(ids_()));
        if (sessions_.count(buf) == 0) {
            return buf;
        }
    }
}

ApiResponse ApiService::handle(const ApiRequest& request) {
    const auto parts = split_path(request.path);
    const std::string& method = request.method;
    const auto method_not_allowed = [&]() -> ApiResponse {
        fail(405, "method-not-allowed", method + " is not supported on " + request.path);
    };

    try {
        if (parts.size() == 2 && parts[0] == "cases" && parts[1] == "validate") {
            if (method != "POST") {
                return method_not_allowed();
            }
            const auto [doc, c] = checked_document(string_field(body_object(request), "document"));
            return respond(200, {{"valid", true},
                                 {"arguments", c.graph().size()},
                                 {"edges", c.graph().edges().size()},
                                 {"cs_groups", c.cs_groups().size()},
                                 {"scheme_constraints", c.scheme().size()},
                                 {"assumptions", c.assumptions().size()},
                                 {"notes", c.notes()}});
        }
        if (parts.empty() || parts[0] != "sessions") {
            fail(404, "not-found", "no route for " + request.path);
        }

        if (parts.size() == 1) {
            if (method == "POST") {
                auto [doc, c] = checked_document(string_field(body_object(request), "document"));
                std::unique_lock lock(mutex_);
                const std::string id = new_id();
                auto session = std::make_shared<Session>(id, std::move(doc));
                sessions_.emplace(id, session);
                lock.unlock();
                std::shared_lock read(session->mutex);
                return respond(201, session_json(id, session->what_if, session->state));
            }
            if (method == "GET") {
                std::shared_lock lock(mutex_);
                json ids = json::array();
                for (const auto& [id, s] : sessions_) {
                    ids.push_back(id);
                }
                return respond(200, {{"sessions", std::move(ids)}});
            }
            return method_not_allowed();
        }

        const std::string& id = parts[1];
        if (parts.size() == 2 && method == "DELETE") {
            std::unique_lock lock(mutex_);
            if (sessions_.erase(id) == 0) {
                fail(404, "not-found", "no session '" + id + "'");
            }
            return {204, ""};
        }
        const auto session = find(id);

        if (parts.size() == 2) {
            if (method != "GET") {
                return method_not_allowed();
            }
            std::shared_lock read(session->mutex);
            return respond(200, session_json(id, session->what_if, session->state));
        }

        const std::string& resource = parts[2];
        if (resource == "assumptions") {
            if (parts.size() == 3 && method == "GET") {
                std::shared_lock read(session->mutex);
                return respond(200, {{"assumptions", assumptions_json(session->what_if, session->state)}});
            }
            if (parts.size() == 3 && method == "POST") {
                const json body = body_object(request);
                const std::string text = string_field(body, "text");
                std::optional<std::string> aid;
                if (body.contains("id")) {
                    aid = string_field(body, "id");
                }
                std::unique_lock write(session->mutex);
                std::string assigned;
                try {
                    assigned = session->what_if.assume(text, aid);
                } catch (const ParseError& e) {
                    throw HttpError{400, parse_error_json(e)};
                } catch (const UnknownArgument& e) {
                    fail(422, "unknown-argument", e.what(), {{"argument", e.id()}});
                } catch (const ValidationError& e) {
                    fail(422, "validation", e.what());
                }
                session->state = session->what_if.solve();
                const bool flagged = std::find(session->state.suspects.begin(), session->state.suspects.end(),
                                               assigned) != session->state.suspects.end();
                return respond(201, {{"assumption", {{"id", assigned}, {"text", text}, {"flagged", flagged}}},
                                     {"state", beliefs_json(session->what_if.current(), session->state)}});
            }
            if (parts.size() == 4 && method == "DELETE") {
                std::unique_lock write(session->mutex);
                try {
                    session->what_if.retract(parts[3]);
                } catch (const ValidationError& e) {
                    fail(404, "not-found", e.what());
                }
                session->state = session->what_if.solve();
                return respond(200, {{"state", beliefs_json(session->what_if.current(), session->state)}});
            }
            return method_not_allowed();
        }

        if (parts.size() != 3) {
            fail(404, "not-found", "no route for " + request.path);
        }

        if (resource == "undo") {
            if (method != "POST") {
                return method_not_allowed();
            }
            std::unique_lock write(session->mutex);
            const bool undone = session->what_if.undo();
            if (undone) {
                session->state = session->what_if.solve();
            }
            return respond(200, {{"undone", undone},
                                 {"state", beliefs_json(session->what_if.current(), session->state)}});
        }

        if (resource == "snapshot") {
            std::shared_lock read(session->mutex);
            const std::string text = print_case_document(session->what_if.snapshot());
            if (method == "GET") {
                return respond(200, {{"document", text}});
            }
            if (method != "POST") {
                return method_not_allowed();
            }
            if (!config_.snapshot_dir) {
                fail(501, "not-configured", "snapshot persistence is not enabled");
            }
            const auto path = *config_.snapshot_dir / (id + ".case");
            try {
                save_case_document(session->what_if.snapshot(), path);
            } catch (const std::runtime_error& e) {
                fail(500, "io", e.what());
            }
            return respond(200, {{"path", path.string()}, {"document", text}});
        }

        if (method != "GET") {
            return method_not_allowed();
        }
        std::shared_lock read(session->mutex);
        const WhatIfSession& s = session->what_if;
        const BlafCase& c = s.current();

        if (resource == "beliefs") {
            const SolveResult& state = require_satisfiable(session->state);
            return respond(200, beliefs_json(c, state));
        }
        if (resource == "log") {
            json entries = json::array();
            for (const auto& e : s.log().entries()) {
                entries.push_back(json::parse(to_json_line(e)));
            }
            return respond(200, {{"entries", std::move(entries)}});
        }
        if (resource == "verdict") {
            if (c.framework() != Framework::Blaf) {
                fail(422, "validation", "a verdict needs a legal case");
            }
            Rational threshold = s.base().options.threshold;
            if (const auto it = request.query.find("threshold"); it != request.query.end()) {
                const auto t = parse_rational(it->second);
                if (!t) {
                    fail(400, "bad-request", "threshold is not a rational number");
                }
                threshold = *t;
            }
            const std::size_t depth = depth_param(request, 8);
            const SolveResult& state = require_satisfiable(session->state);
            VerdictReport report;
            try {
                report = explain_verdict(c, *state.verdict, threshold, depth);
            } catch (const ValidationError& e) {
                fail(422, "validation", e.what());
            }
            return respond(200, {{"verdict", std::string(to_string(report.verdict))},
                                 {"threshold", rational_json(report.threshold)},
                                 {"innocence", rational_json(report.innocence)},
                                 {"inculpatory_lower", rational_json(report.inculpatory_lower)},
                                 {"exculpatory_lower", rational_json(report.exculpatory_lower)},
                                 {"narrative", render_verdict(report, depth)},
                                 {"basis", report.basis ? explanation_json(*report.basis, depth) : json(nullptr)}});
        }
        if (resource == "explanation") {
            const auto arg = request.query.find("argument");
            if (arg == request.query.end() || arg->second.empty()) {
                fail(400, "bad-request", "missing query parameter 'argument'");
            }
            BoundSide side = BoundSide::Lower;
            if (const auto b = request.query.find("bound"); b != request.query.end()) {
                if (b->second == "upper") {
                    side = BoundSide::Upper;
                } else if (b->second != "lower") {
                    fail(400, "bad-request", "bound must be 'lower' or 'upper'");
                }
            }
            const std::size_t depth = depth_param(request, 1);
            const SolveResult& state = require_satisfiable(session->state);
            if (!c.graph().contains(arg->second)) {
                fail(422, "unknown-argument", "unknown argument '" + arg->second + "'",
                     {{"argument", arg->second}});
            }
            const Explanation e = side == BoundSide::Lower
                                      ? explain_lower(c, state.verdict->bounds, arg->second, depth)
                                      : explain_upper(c, state.verdict->bounds, arg->second, depth);
            json out = explanation_json(e, depth);
            out["text"] = render(e, depth);
            return respond(200, out);
        }
        fail(404, "not-found", "no route for " + request.path);
    } catch (const HttpError& e) {
        return respond(e.status, {{"error", e.error}});
    } catch (const std::exception& e) {
        return respond(500, {{"error", {{"kind", "internal"}, {"message", e.what()}}}});
    }
}

} // namespace peal
