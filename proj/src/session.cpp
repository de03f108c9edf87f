// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#include "peal/session.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace peal {

using nlohmann::json;

std::string_view to_string(SessionAction action) {
    switch (action) {
    case SessionAction::Assume:
        return "assume";
    case SessionAction::Retract:
        return "retract";
    case SessionAction::Solve:
        return "solve";
    }
    return "?";
}

bool LogEntry::same_action(const LogEntry& other) const {
    return action == other.action && id == other.id && text == other.text && position == other.position &&
           satisfiable == other.satisfiable && innocence == other.innocence && conflict == other.conflict;
}

std::string to_json_line(const LogEntry& entry) {
    json j;
    j["ts"] = entry.timestamp;
    j["action"] = std::string(to_string(entry.action));
    switch (entry.action) {
    case SessionAction::Assume:
        j["id"] = entry.id;
        j["text"] = entry.text;
        if (entry.position) {
            j["position"] = *entry.position;
        }
        break;
    case SessionAction::Retract:
        j["id"] = entry.id;
        break;
    case SessionAction::Solve:
        j["satisfiable"] = entry.satisfiable;
        j["innocence"] = entry.innocence ? json(to_exact_string(*entry.innocence)) : json(nullptr);
        if (!entry.satisfiable) {
            j["conflict"] = entry.conflict;
        }
        break;
    }
    return j.dump();
}

LogEntry parse_log_line(std::string_view line, std::size_t line_number) {
    const auto fail = [&](const std::string& message) -> LogEntry { throw ParseError(message, line_number, 1); };
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), line_number, e.byte == 0 ? 1 : e.byte);
    }
    if (!j.is_object()) {
        return fail("log entry must be an object");
    }
    const auto str = [&](const char* key) -> std::string {
        if (!j.contains(key) || !j[key].is_string()) {
            fail(std::string("missing string field '") + key + "'");
        }
        return j[key].get<std::string>();
    };

    LogEntry e;
    e.timestamp = j.contains("ts") && j["ts"].is_string() ? j["ts"].get<std::string>() : "";
    const std::string action = str("action");
    if (action == "assume") {
        e.action = SessionAction::Assume;
        e.id = str("id");
        e.text = str("text");
        if (j.contains("position")) {
            if (!j["position"].is_number_unsigned()) {
                return fail("position must be a non-negative integer");
            }
            e.position = j["position"].get<std::size_t>();
        }
    } else if (action == "retract") {
        e.action = SessionAction::Retract;
        e.id = str("id");
    } else if (action == "solve") {
        e.action = SessionAction::Solve;
        if (!j.contains("satisfiable") || !j["satisfiable"].is_boolean()) {
            return fail("missing boolean field 'satisfiable'");
        }
        e.satisfiable = j["satisfiable"].get<bool>();
        if (j.contains("innocence") && !j["innocence"].is_null()) {
            const auto r = j["innocence"].is_string() ? parse_rational(j["innocence"].get<std::string>())
                                                      : std::nullopt;
            if (!r) {
                return fail("innocence must be a rational string");
            }
            e.innocence = *r;
        }
        if (j.contains("conflict")) {
            if (!j["conflict"].is_array()) {
                return fail("conflict must be a list");
            }
            for (const auto& c : j["conflict"]) {
                if (!c.is_string()) {
                    return fail("conflict must be a list of strings");
                }
                e.conflict.push_back(c.get<std::string>());
            }
        }
    } else {
        return fail("unknown action '" + action + "'");
    }
    return e;
}

SessionLog SessionLog::parse(std::string_view jsonl) {
    SessionLog log;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos < jsonl.size()) {
        const std::size_t eol = std::min(jsonl.find('\n', pos), jsonl.size());
        const std::string_view line = jsonl.substr(pos, eol - pos);
        pos = eol + 1;
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
            continue;
        }
        log.append(parse_log_line(line, number));
    }
    return log;
}

std::string SessionLog::to_jsonl() const {
    std::string out;
    for (const auto& e : entries_) {
        out += to_json_line(e);
        out += '\n';
    }
    return out;
}

SessionLog SessionLog::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

void SessionLog::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << to_jsonl())) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

SolveResult solve_case(const BlafCase& legal_case) {
    SolveResult r;
    try {
        r.verdict = beliefs(legal_case);
        r.satisfiable = true;
    } catch (const UnsatisfiableError& e) {
        r.conflict = e.conflict();
        const std::string prefix = "assumption ";
        for (const auto& label : r.conflict) {
            if (label.rfind(prefix, 0) == 0) {
                r.suspects.push_back(label.substr(prefix.size()));
            }
        }
    }
    return r;
}

namespace {

CaseDocument structure_only(CaseDocument doc) {
    doc.assumptions.clear();
    return doc;
}

} // namespace

WhatIfSession::WhatIfSession(CaseDocument base, Clock clock)
    : base_(std::move(base)), clock_(std::move(clock)), structure_(to_case(structure_only(base_))) {
    current_ = to_case(base_);
    stack_ = base_.assumptions;
}

std::string WhatIfSession::fresh_id() {
    while (true) {
        std::string id = "a" + std::to_string(next_id_++);
        if (current_.find_assumption(id) == nullptr) {
            return id;
        }
    }
}

void WhatIfSession::rebuild() {
    BlafCase c = structure_;
    for (const auto& a : stack_) {
        c = c.assume(a.id, a.text);
    }
    current_ = std::move(c);
}

void WhatIfSession::insert(AssumptionDecl decl, std::size_t position) {
    // Validates before touching the stack.
    BlafCase next = current_.assume(decl.id, decl.text);
    position = std::min(position, stack_.size());
    stack_.insert(stack_.begin() + static_cast<std::ptrdiff_t>(position), std::move(decl));
    if (position + 1 == stack_.size()) {
        current_ = std::move(next);
    } else {
        rebuild();
    }
    cached_.reset();
}

void WhatIfSession::remove(std::size_t position) {
    current_ = current_.retract(stack_[position].id);
    stack_.erase(stack_.begin() + static_cast<std::ptrdiff_t>(position));
    cached_.reset();
}

std::string WhatIfSession::assume(std::string_view text, std::optional<std::string> id) {
    AssumptionDecl decl{id ? std::move(*id) : fresh_id(), std::string(text)};
    const std::size_t position = stack_.size();
    insert(decl, position);
    history_.push_back({SessionAction::Assume, decl, position});
    LogEntry e;
    e.timestamp = clock_();
    e.action = SessionAction::Assume;
    e.id = decl.id;
    e.text = decl.text;
    e.position = position;
    log_.append(std::move(e));
    return decl.id;
}

void WhatIfSession::retract(std::string_view id) {
    const auto it = std::find_if(stack_.begin(), stack_.end(), [&](const auto& a) { return a.id == id; });
    if (it == stack_.end()) {
        throw ValidationError("no assumption '" + std::string(id) + "'");
    }
    const auto position = static_cast<std::size_t>(it - stack_.begin());
    const AssumptionDecl decl = *it;
    remove(position);
    history_.push_back({SessionAction::Retract, decl, position});
    LogEntry e;
    e.timestamp = clock_();
    e.action = SessionAction::Retract;
    e.id = decl.id;
    log_.append(std::move(e));
}

bool WhatIfSession::undo() {
    if (history_.empty()) {
        return false;
    }
    const Step step = history_.back();
    history_.pop_back();
    LogEntry e;
    e.timestamp = clock_();
    e.id = step.decl.id;
    if (step.action == SessionAction::Assume) {
        remove(step.position);
        e.action = SessionAction::Retract;
    } else {
        insert(step.decl, step.position);
        e.action = SessionAction::Assume;
        e.text = step.decl.text;
        e.position = step.position;
    }
    log_.append(std::move(e));
    return true;
}

const SolveResult& WhatIfSession::peek() {
    if (!cached_) {
        cached_ = solve_case(current_);
    }
    return *cached_;
}

const SolveResult& WhatIfSession::solve() {
    const SolveResult& r = peek();
    LogEntry e;
    e.timestamp = clock_();
    e.action = SessionAction::Solve;
    e.satisfiable = r.satisfiable;
    if (r.satisfiable) {
        e.innocence = r.verdict->innocence_belief;
    } else {
        e.conflict = r.conflict;
    }
    log_.append(std::move(e));
    return r;
}

CaseDocument WhatIfSession::snapshot() const {
    CaseDocument doc = base_;
    doc.assumptions = stack_;
    return doc;
}

WhatIfSession WhatIfSession::replay(CaseDocument base, const SessionLog& log, Clock clock) {
    WhatIfSession s(std::move(base), std::move(clock));
    const auto& entries = log.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const LogEntry& e = entries[i];
        switch (e.action) {
        case SessionAction::Assume: {
            const std::size_t position = e.position.value_or(s.stack_.size());
            if (position > s.stack_.size()) {
                throw ReplayError("log entry " + std::to_string(i + 1) + ": position out of range", i);
            }
            AssumptionDecl decl{e.id, e.text};
            s.insert(decl, position);
            s.history_.push_back({SessionAction::Assume, decl, position});
            LogEntry copy = e;
            copy.timestamp = s.clock_();
            copy.position = position;
            s.log_.append(std::move(copy));
            break;
        }
        case SessionAction::Retract:
            s.retract(e.id);
            break;
        case SessionAction::Solve: {
            const SolveResult& r = s.solve();
            const LogEntry& now = s.log_.entries().back();
            if (!now.same_action(e)) {
                std::string what = "log entry " + std::to_string(i + 1) + ": recorded ";
                what += e.satisfiable ? "satisfiable" : "unsatisfiable";
                if (e.innocence) {
                    what += " with Innocence " + to_exact_string(*e.innocence);
                }
                what += ", replay gives ";
                what += r.satisfiable ? "satisfiable" : "unsatisfiable";
                if (now.innocence) {
                    what += " with Innocence " + to_exact_string(*now.innocence);
                }
                throw ReplayError(what, i);
            }
            break;
        }
        }
    }
    return s;
}

} // namespace peal
