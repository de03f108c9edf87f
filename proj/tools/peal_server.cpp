// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>

#include "peal/api.hpp"
#include "peal/http.hpp"

int main(int argc, char** argv) {
    CLI::App app{"HTTP service for case sessions", "peal_server"};
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string snapshot_dir;
    app.add_option("--host", host, "address to bind");
    app.add_option("--port", port, "port to listen on")->check(CLI::Range(0, 65535));
    app.add_option("--snapshot-dir", snapshot_dir, "directory for session snapshots")->check(CLI::ExistingDirectory);
    CLI11_PARSE(app, argc, argv);

    peal::ApiConfig config;
    if (!snapshot_dir.empty()) {
        config.snapshot_dir = snapshot_dir;
    }
    peal::ApiService service(config);
    httplib::Server server;
    peal::mount(server, service);
    std::cerr << "listening on " << host << ":" << port << "\n";
    if (!server.listen(host, port)) {
        std::cerr << "cannot listen on " << host << ":" << port << "\n";
        return 1;
    }
    return 0;
}
