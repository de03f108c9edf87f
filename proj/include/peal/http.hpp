// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace httplib {
class Server;
}

namespace peal {

class ApiService;

/// Routes every request on `server` to `service`, with permissive CORS
/// headers so a browser client on another origin can call it.
void mount(httplib::Server& server, ApiService& service);

} // namespace peal
