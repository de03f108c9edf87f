// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

#include "peal/session.hpp"

namespace peal {

struct ApiRequest {
    std::string method; // "GET", "POST", "DELETE"
    std::string path;   // without query string
    std::map<std::string, std::string> query;
    std::string body;
};

struct ApiResponse {
    int status = 200;
    std::string body; // JSON, empty for 204
};

struct ApiConfig {
    /// Where POST /sessions/{id}/snapshot writes <id>.case. Disabled when empty.
    std::optional<std::filesystem::path> snapshot_dir;
};

/// Session-oriented JSON service, independent of the transport.
///
///   POST   /sessions                          {"document": "<case text>"}
///   GET    /sessions
///   GET    /sessions/{id}
///   DELETE /sessions/{id}
///   GET    /sessions/{id}/assumptions
///   POST   /sessions/{id}/assumptions         {"text": "<dsl>", "id": optional}
///   DELETE /sessions/{id}/assumptions/{aid}
///   POST   /sessions/{id}/undo
///   GET    /sessions/{id}/beliefs
///   GET    /sessions/{id}/verdict?threshold=&depth=
///   GET    /sessions/{id}/explanation?argument=&bound=lower|upper&depth=
///   GET    /sessions/{id}/log
///   GET    /sessions/{id}/snapshot
///   POST   /sessions/{id}/snapshot
///   POST   /cases/validate                    {"document": "<case text>"}
///
/// Rationals travel as {"num": "<int>", "den": "<int>", "display": "0.33"}
/// with decimal-string integers. Errors are {"error": {"kind", "message",
/// ...}} with 400 (malformed request or text), 404, 405, 409
/// (unsatisfiable state) or 422 (invalid case, argument or threshold).
///
/// Requests on different sessions run concurrently; mutations of one
/// session are serialized and reads of it may overlap.
class ApiService {
  public:
    explicit ApiService(ApiConfig config = {});
    ~ApiService();
    ApiService(const ApiService&) = delete;
    ApiService& operator=(const ApiService&) = delete;

    ApiResponse handle(const ApiRequest& request);

    [[nodiscard]] std::size_t session_count() const;

  private:
    struct Session;

    std::shared_ptr<Session> find(const std::string& id) const;
    std::string new_id();

    ApiConfig config_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::mt19937_64 ids_;
};

} // namespace peal
