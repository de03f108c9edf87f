// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <atomic>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "peal/api.hpp"
#include "peal/cli.hpp"
#include "peal/http.hpp"
#include "support/fixtures.hpp"
#include "support/temp_dir.hpp"

using namespace peal;
using nlohmann::json;
using peal::testing::case_file;

namespace {

struct Reply {
    int status;
    json body;
};

Reply call(ApiService& api, const std::string& method, const std::string& path, const json& body = nullptr,
           std::map<std::string, std::string> query = {}) {
    ApiRequest req{method, path, std::move(query), body.is_null() ? "" : body.dump()};
    const ApiResponse res = api.handle(req);
    return {res.status, res.body.empty() ? json(nullptr) : json::parse(res.body)};
}

std::string document(const char* name) { return testing::read_file(case_file(name)); }

std::string create(ApiService& api, const char* name) {
    const auto r = call(api, "POST", "/sessions", {{"document", document(name)}});
    REQUIRE(r.status == 201);
    return r.body["id"].get<std::string>();
}

std::vector<std::string> display_cells(const json& beliefs) {
    std::vector<std::string> cells;
    for (const auto& row : beliefs["beliefs"]) {
        cells.push_back(row["display"].get<std::string>());
    }
    return cells;
}

json rat(const char* num, const char* den, const char* display) {
    return {{"num", num}, {"den", den}, {"display", display}};
}

} // namespace

TEST_CASE("a fresh hit-and-run session shows the first column") {
    ApiService api;
    const auto id = create(api, "example1.case");
    const auto r = call(api, "GET", "/sessions/" + id + "/beliefs");
    REQUIRE(r.status == 200);
    CHECK(r.body["satisfiable"] == true);
    CHECK(r.body["innocence"] == rat("1", "1", "1"));
    CHECK(display_cells(r.body) == testing::hit_and_run_cells()[0]);
    const auto& t1 = r.body["beliefs"][3];
    CHECK(t1["argument"] == "T1");
    CHECK(t1["role"] == "evidence");
    CHECK(t1["lower"] == rat("0", "1", "0"));
    CHECK(t1["upper"] == rat("1", "1", "1"));
    CHECK(t1["directly_constrained"] == false);
}

TEST_CASE("a fresh robbery session matches the basic column") {
    ApiService api;
    const auto id = create(api, "example2.case");
    const auto r = call(api, "GET", "/sessions/" + id + "/beliefs");
    REQUIRE(r.status == 200);
    CHECK(r.body["innocence"] == rat("1", "1", "1"));
    REQUIRE(r.body["beliefs"].size() == 15);
    const auto& expected = testing::robbery_cells()[0];
    for (std::size_t i = 1; i < 15; ++i) {
        CHECK(r.body["beliefs"][i]["display"] == expected[i]);
    }
    // the published cell for Innocence is the full interval; its belief is the upper end
    CHECK(r.body["beliefs"][0]["lower"] == rat("0", "1", "0"));
    CHECK(r.body["beliefs"][0]["upper"] == rat("1", "1", "1"));
}

TEST_CASE("session description") {
    ApiService api;
    const auto id = create(api, "camera.case");
    const auto r = call(api, "GET", "/sessions/" + id);
    REQUIRE(r.status == 200);
    CHECK(r.body["id"] == id);
    CHECK(r.body["framework"] == "blaf");
    CHECK(r.body["threshold"] == rat("3", "4", "0.75"));
    CHECK(r.body["arguments"].size() == 6);
    CHECK(r.body["arguments"][3] ==
          json{{"id", "Camera"}, {"role", "meta"}, {"label", "defendant at the scene per camera evidence"}});
    CHECK(r.body["cs_groups"][0]["target"] == "Camera");
    CHECK(r.body["cs_groups"][0]["members"][1] == json{{"id", "Camera2"}, {"weight", rat("1", "2", "0.5")}});
    CHECK(r.body["edges"].back()["collective"] == true);
    CHECK(r.body["assumptions"] == json::array());
    CHECK(r.body["satisfiable"] == true);
    CHECK(call(api, "GET", "/sessions").body["sessions"] == json{id});
}

TEST_CASE("invalid documents are rejected with diagnostics") {
    ApiService api;
    auto r = call(api, "POST", "/sessions", {{"document", "peal-case 1\nargument X evidence\nargument X sub\nend\n"}});
    CHECK(r.status == 422);
    CHECK(r.body["error"]["kind"] == "validation");
    CHECK(r.body["error"]["line"] == 3);
    CHECK(r.body["error"]["subject"] == "argument:X");

    r = call(api, "POST", "/sessions", {{"document", "peal-case 1\nedge A -> B x\nend\n"}});
    CHECK(r.status == 400);
    CHECK(r.body["error"]["kind"] == "parse");
    CHECK(r.body["error"]["line"] == 2);
    CHECK(r.body["error"]["column"] == 13);

    ApiRequest raw{"POST", "/sessions", {}, "not json"};
    CHECK(api.handle(raw).status == 400);
    CHECK(call(api, "POST", "/sessions", {{"doc", "x"}}).status == 400);
    CHECK(api.session_count() == 0);
}

TEST_CASE("adding the camera evidence gives Innocence 1/10") {
    ApiService api;
    const auto id = create(api, "example1.case");
    const auto r = call(api, "POST", "/sessions/" + id + "/assumptions", {{"text", "p(E1) >= 0.9"}});
    REQUIRE(r.status == 201);
    CHECK(r.body["assumption"] == json{{"id", "a1"}, {"text", "p(E1) >= 0.9"}, {"flagged", false}});
    CHECK(r.body["state"]["innocence"] == rat("1", "10", "0.1"));
    CHECK(display_cells(r.body["state"]) == testing::hit_and_run_cells()[2]);
    CHECK(call(api, "GET", "/sessions/" + id + "/beliefs").body == r.body["state"]);
}

TEST_CASE("a conflicting pair is kept, flagged and retractable") {
    ApiService api;
    const auto id = create(api, "example1.case");
    const auto base = "/sessions/" + id;
    const auto first = call(api, "POST", base + "/assumptions", {{"text", "p(T3) >= 0.7"}});
    const json before = first.body["state"];
    const auto r = call(api, "POST", base + "/assumptions", {{"text", "p(E1) = 1"}, {"id", "cam"}});
    REQUIRE(r.status == 201);
    CHECK(r.body["assumption"]["flagged"] == true);
    CHECK(r.body["state"]["satisfiable"] == false);
    CHECK(r.body["state"]["conflict"]["assumptions"] == json{"a1", "cam"});
    CHECK(r.body["state"].contains("beliefs") == false);

    const auto beliefs = call(api, "GET", base + "/beliefs");
    CHECK(beliefs.status == 409);
    CHECK(beliefs.body["error"]["kind"] == "unsatisfiable");
    CHECK(beliefs.body["error"]["conflict"]["assumptions"] == json{"a1", "cam"});
    CHECK(call(api, "GET", base + "/verdict").status == 409);
    CHECK(call(api, "GET", base + "/explanation", nullptr, {{"argument", "T1"}}).status == 409);

    const auto list = call(api, "GET", base + "/assumptions");
    CHECK(list.body["assumptions"] == json::array({{{"id", "a1"}, {"text", "p(T3) >= 0.7"}, {"flagged", true}},
                                                   {{"id", "cam"}, {"text", "p(E1) = 1"}, {"flagged", true}}}));
    CHECK(call(api, "GET", base).body["satisfiable"] == false);

    const auto deleted = call(api, "DELETE", base + "/assumptions/cam");
    CHECK(deleted.status == 200);
    CHECK(deleted.body["state"] == before);
    CHECK(call(api, "GET", base + "/beliefs").body == before);
    CHECK(call(api, "DELETE", base + "/assumptions/cam").status == 404);
}

TEST_CASE("assumption errors") {
    ApiService api;
    const auto id = create(api, "example1.case");
    const auto base = "/sessions/" + id + "/assumptions";
    auto r = call(api, "POST", base, {{"text", "p(T3) >> 1"}});
    CHECK(r.status == 400);
    CHECK(r.body["error"]["kind"] == "parse");
    CHECK(r.body["error"]["column"] == 7);
    r = call(api, "POST", base, {{"text", "p(Ghost) >= 1"}});
    CHECK(r.status == 422);
    CHECK(r.body["error"]["argument"] == "Ghost");
    call(api, "POST", base, {{"text", "p(T1) >= 0"}, {"id", "x"}});
    CHECK(call(api, "POST", base, {{"text", "p(T1) >= 0"}, {"id", "x"}}).status == 422);
    CHECK(call(api, "POST", base, {{"id", "y"}}).status == 400);
    CHECK(call(api, "GET", base).body["assumptions"].size() == 1);
    CHECK(call(api, "POST", "/sessions/nope/assumptions", {{"text", "p(T1) >= 0"}}).status == 404);
}

TEST_CASE("explanations over the API") {
    ApiService api;
    const auto id = create(api, "example1.case");
    call(api, "POST", "/sessions/" + id + "/assumptions", {{"text", "p(T3) >= 0.7"}});
    const auto path = "/sessions/" + id + "/explanation";
    auto r = call(api, "GET", path, nullptr, {{"argument", "Eex"}, {"bound", "lower"}, {"depth", "2"}});
    REQUIRE(r.status == 200);
    CHECK(r.body["subject"] == "Eex");
    CHECK(r.body["side"] == "lower");
    CHECK(r.body["status"] == "explained");
    CHECK(r.body["bound"] == rat("7", "10", "0.7"));
    CHECK(r.body["text"] == "Eex ≥ 0.7 via T2 (≥ 0.7) via T3 (≥ 0.7)");
    const auto& t2 = r.body["reasons"][0];
    CHECK(t2["kind"] == "supporter");
    CHECK(t2["arguments"] == json{"T2"});
    CHECK(t2["weights"] == json::array({rat("1", "1", "1")}));
    CHECK(t2["induced"] == rat("7", "10", "0.7"));
    const auto& t3 = t2["details"][0]["reasons"][0];
    CHECK(t3["arguments"] == json{"T3"});
    CHECK(t3["details"] == json::array());

    r = call(api, "GET", path, nullptr, {{"argument", "Eex"}, {"depth", "0"}});
    CHECK(r.body["reasons"] == json::array());
    CHECK(r.body["text"] == "Eex ≥ 0.7");

    r = call(api, "GET", path, nullptr, {{"argument", "Einc"}, {"bound", "upper"}});
    CHECK(r.body["reasons"][0]["kind"] == "meta-chain");
    CHECK(r.body["bound"] == rat("3", "10", "0.3"));

    CHECK(call(api, "GET", path).status == 400);
    CHECK(call(api, "GET", path, nullptr, {{"argument", "Ghost"}}).status == 422);
    CHECK(call(api, "GET", path, nullptr, {{"argument", "T1"}, {"bound", "middle"}}).status == 400);
    CHECK(call(api, "GET", path, nullptr, {{"argument", "T1"}, {"depth", "-1"}}).status == 400);
}

TEST_CASE("verdict endpoint") {
    ApiService api;
    const auto id = create(api, "example1.case");
    const auto path = "/sessions/" + id + "/verdict";
    auto r = call(api, "GET", path);
    REQUIRE(r.status == 200);
    CHECK(r.body["verdict"] == "lack-of-evidence");
    CHECK(r.body["basis"].is_null());
    CHECK(r.body["narrative"] == "innocent: lack of evidence (Einc ≥ 0, Eex ≥ 0, threshold 0.75)");

    call(api, "POST", "/sessions/" + id + "/assumptions", {{"text", "p(E1) >= 0.9"}});
    r = call(api, "GET", path, nullptr, {{"depth", "2"}});
    CHECK(r.body["verdict"] == "guilty-by-inculpatory");
    CHECK(r.body["innocence"] == rat("1", "10", "0.1"));
    CHECK(r.body["inculpatory_lower"] == rat("9", "10", "0.9"));
    CHECK(r.body["narrative"] ==
          "guilty: inculpatory evidence (Einc ≥ 0.9) via E1 (≥ 0.9) by assumption a1 (p(E1) >= 0.9)");
    CHECK(r.body["basis"]["subject"] == "Einc");

    r = call(api, "GET", path, nullptr, {{"threshold", "19/20"}});
    CHECK(r.body["verdict"] == "lack-of-evidence");
    CHECK(r.body["threshold"] == rat("19", "20", "0.95"));
    CHECK(call(api, "GET", path, nullptr, {{"threshold", "0.4"}}).status == 422);
    CHECK(call(api, "GET", path, nullptr, {{"threshold", "most"}}).status == 400);

    const auto plain = create(api, "chain.case");
    CHECK(call(api, "GET", "/sessions/" + plain + "/verdict").status == 422);
}

TEST_CASE("log, undo and snapshot") {
    testing::TempDir dir;
    ApiService api(ApiConfig{dir.path()});
    const auto id = create(api, "example1.case");
    const auto base = "/sessions/" + id;
    call(api, "POST", base + "/assumptions", {{"text", "p(T3) >= 0.7"}});
    call(api, "POST", base + "/assumptions", {{"text", "p(T1) >= 0.2"}});
    auto r = call(api, "POST", base + "/undo");
    CHECK(r.body["undone"] == true);
    CHECK(display_cells(r.body["state"]) == testing::hit_and_run_cells()[1]);

    const auto log = call(api, "GET", base + "/log").body["entries"];
    // initial solve, then assume+solve twice, then the undo's retract+solve
    REQUIRE(log.size() == 7);
    CHECK(log[0]["action"] == "solve");
    CHECK(log[1] == json({{"action", "assume"}, {"id", "a1"}, {"position", 0}, {"text", "p(T3) >= 0.7"},
                          {"ts", log[1]["ts"]}}));
    CHECK(log[5]["action"] == "retract");
    CHECK(log[5]["id"] == "a2");

    r = call(api, "GET", base + "/snapshot");
    const auto doc = parse_case_document(r.body["document"].get<std::string>());
    CHECK(doc.assumptions == std::vector<AssumptionDecl>{{"a1", "p(T3) >= 0.7"}});
    r = call(api, "POST", base + "/snapshot");
    REQUIRE(r.status == 200);
    CHECK(load_case_document(r.body["path"].get<std::string>()) == doc);

    ApiService no_dir;
    const auto other = create(no_dir, "example1.case");
    CHECK(call(no_dir, "POST", "/sessions/" + other + "/snapshot").status == 501);
}

TEST_CASE("case validation endpoint") {
    ApiService api;
    auto r = call(api, "POST", "/cases/validate", {{"document", document("example2.case")}});
    CHECK(r.status == 200);
    CHECK(r.body["valid"] == true);
    CHECK(r.body["arguments"] == 15);
    CHECK(r.body["scheme_constraints"] == 14);
    auto text = document("example1.case");
    text.replace(text.find("edge Eex -> Innocence 1"), 23, "edge Eex -> Innocence 0.5");
    r = call(api, "POST", "/cases/validate", {{"document", text}});
    CHECK(r.status == 422);
    CHECK(r.body["error"]["line"] == 18);
    CHECK(call(api, "GET", "/cases/validate").status == 405);
    CHECK(api.session_count() == 0);
}

TEST_CASE("routing errors and deletion") {
    ApiService api;
    const auto id = create(api, "camera.case");
    CHECK(call(api, "GET", "/nowhere").status == 404);
    CHECK(call(api, "GET", "/sessions/" + id + "/nowhere").status == 404);
    CHECK(call(api, "PUT", "/sessions/" + id).status == 405);
    CHECK(call(api, "POST", "/sessions/" + id + "/beliefs").status == 405);
    CHECK(call(api, "GET", "/sessions").body["sessions"] == json{id});
    CHECK(call(api, "DELETE", "/sessions/" + id).status == 204);
    CHECK(call(api, "GET", "/sessions/" + id).status == 404);
    CHECK(call(api, "DELETE", "/sessions/" + id).status == 404);
    CHECK(api.session_count() == 0);
}

TEST_CASE("sessions are isolated and reads are repeatable") {
    ApiService api;
    const auto a = create(api, "example1.case");
    const auto b = create(api, "example1.case");
    CHECK(a != b);
    const auto fresh = call(api, "GET", "/sessions/" + b + "/beliefs").body;
    call(api, "POST", "/sessions/" + a + "/assumptions", {{"text", "p(E1) >= 0.9"}});
    CHECK(call(api, "GET", "/sessions/" + b + "/beliefs").body == fresh);
    CHECK(call(api, "GET", "/sessions/" + b + "/beliefs").body == fresh);
    CHECK(call(api, "GET", "/sessions/" + a + "/beliefs").body["innocence"] == rat("1", "10", "0.1"));
}

TEST_CASE("the CLI and the API agree on exact values") {
    const std::vector<std::vector<std::string>> sequences = {
        {"p(T3) >= 0.7"}, {"p(E1) >= 0.9"}, {"p(T1) >= 1/3", "p(T3) >= 0.2"}, {}};
    for (const auto& seq : sequences) {
        testing::TempDir dir;
        auto doc = load_case_document(case_file("example1.case"));
        ApiService api;
        const auto id = create(api, "example1.case");
        for (std::size_t i = 0; i < seq.size(); ++i) {
            doc.assumptions.push_back({"a" + std::to_string(i + 1), seq[i]});
            call(api, "POST", "/sessions/" + id + "/assumptions", {{"text", seq[i]}});
        }
        const auto path = dir.path() / "case.case";
        save_case_document(doc, path);
        std::istringstream in;
        std::ostringstream out;
        std::ostringstream err;
        REQUIRE(run_cli({"peal", "solve", "--exact", path.string()}, in, out, err) == kExitOk);
        const auto api_beliefs = call(api, "GET", "/sessions/" + id + "/beliefs").body;
        std::istringstream table(out.str());
        std::string line;
        std::getline(table, line);
        for (const auto& row : api_beliefs["beliefs"]) {
            REQUIRE(std::getline(table, line));
            CHECK(line.substr(0, line.find(' ')) == row["argument"]);
            const auto cell_begin = line.find_first_not_of(' ', line.find(' '));
            const auto cell_end = line.find("  ", cell_begin);
            CHECK(line.substr(cell_begin, cell_end - cell_begin) == row["exact"]);
        }
    }
}

TEST_CASE("concurrent clients") {
    ApiService api;
    const auto shared = create(api, "example2.case");
    std::vector<std::string> own;
    for (int i = 0; i < 4; ++i) {
        own.push_back(create(api, "example1.case"));
    }
    std::vector<std::thread> threads;
    std::atomic<int> failures{0};
    for (int t = 0; t < 4; ++t) {
        threads.emplace_back([&, t] {
            for (int k = 0; k < 5; ++k) {
                const auto id = "t" + std::to_string(t) + "_" + std::to_string(k);
                if (call(api, "POST", "/sessions/" + shared + "/assumptions",
                         {{"text", "p(V1) >= 0." + std::to_string(k)}, {"id", id}})
                        .status != 201) {
                    ++failures;
                }
                if (call(api, "GET", "/sessions/" + shared + "/beliefs").status != 200) {
                    ++failures;
                }
                call(api, "POST", "/sessions/" + own[t] + "/assumptions", {{"text", "p(E1) >= 0.9"}});
                const auto mine = call(api, "GET", "/sessions/" + own[t] + "/beliefs");
                if (mine.body["innocence"] != rat("1", "10", "0.1")) {
                    ++failures;
                }
            }
        });
    }
    for (auto& th : threads) {
        th.join();
    }
    CHECK(failures == 0);
    CHECK(call(api, "GET", "/sessions/" + shared + "/assumptions").body["assumptions"].size() == 20);
    const auto beliefs = call(api, "GET", "/sessions/" + shared + "/beliefs").body;
    CHECK(beliefs["beliefs"][9]["argument"] == "V1");
    CHECK(beliefs["beliefs"][9]["lower"] == rat("2", "5", "0.4"));
}

TEST_CASE("HTTP round trip") {
    ApiService api;
    httplib::Server server;
    mount(server, api);
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto res = client.Post("/sessions", json{{"document", document("example1.case")}}.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 201);
    CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
    const auto id = json::parse(res->body)["id"].get<std::string>();

    res = client.Post("/sessions/" + id + "/assumptions", json{{"text", "p(T3) >= 0.7"}}.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 201);
    res = client.Get("/sessions/" + id + "/explanation?argument=Eex&bound=lower&depth=2");
    REQUIRE(res);
    CHECK(json::parse(res->body)["text"] == "Eex ≥ 0.7 via T2 (≥ 0.7) via T3 (≥ 0.7)");
    res = client.Get("/sessions/" + id + "/verdict?threshold=3%2F4");
    REQUIRE(res);
    CHECK(json::parse(res->body)["verdict"] == "innocent-by-exculpatory");
    res = client.Delete("/sessions/" + id);
    REQUIRE(res);
    CHECK(res->status == 204);
    res = client.Options("/sessions");
    REQUIRE(res);
    CHECK(res->status == 204);

    server.stop();
    worker.join();
}
