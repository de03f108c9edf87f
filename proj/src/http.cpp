// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#include "peal/http.hpp"

#include <httplib.h>

#include "peal/api.hpp"

namespace peal {

namespace {

void cors(httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
}

} // namespace

void mount(httplib::Server& server, ApiService& service) {
    const auto forward = [&service](const httplib::Request& req, httplib::Response& res) {
        ApiRequest request;
        request.method = req.method;
        request.path = req.path;
        request.body = req.body;
        for (const auto& [key, value] : req.params) {
            request.query.emplace(key, value);
        }
        const ApiResponse response = service.handle(request);
        res.status = response.status;
        if (!response.body.empty()) {
            res.set_content(response.body, "application/json");
        }
        cors(res);
    };
    server.Get(".*", forward);
    server.Post(".*", forward);
    server.Delete(".*", forward);
    server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
        res.status = 204;
        cors(res);
    });
}

} // namespace peal
