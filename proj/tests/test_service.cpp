#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "api.hpp"
#include "seedseg/cli.hpp"
#include "seedseg/formats.hpp"

using namespace seedseg;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string sceneBytes(int size) {
    const auto bytes = encodePgm(synthTwoRectanglesImage(SceneParams{}, size, size));
    return {bytes.begin(), bytes.end()};
}

struct Running {
    service::Service svc;
    int port;
    httplib::Client http;

    explicit Running(service::ServiceConfig cfg = make())
        : svc(std::move(cfg)), port(svc.start()), http("127.0.0.1", port) {
        http.set_read_timeout(30, 0);
    }

    static service::ServiceConfig make() {
        service::ServiceConfig c;
        c.host = "127.0.0.1";
        c.port = 0;
        return c;
    }

    std::string createSession(int size = 32) {
        const auto res = http.Post("/sessions", sceneBytes(size), "application/octet-stream");
        REQUIRE(res);
        REQUIRE(res->status == 201);
        return json::parse(res->body)["id"].get<std::string>();
    }

    json waitFinished(const std::string& id) {
        const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(120);
        for (;;) {
            const auto res = http.Get("/sessions/" + id + "/state");
            REQUIRE(res);
            const auto j = json::parse(res->body);
            if (j["status"] == "done" || j["status"] == "failed") return j;
            REQUIRE(std::chrono::steady_clock::now() < deadline);
            std::this_thread::sleep_for(std::chrono::milliseconds(20));
        }
    }
};

const json kBarStroke = {
    {"strokes", {{{"label", "outside"}, {"polyline", {{16, 6}, {16, 26}}}, {"radius", 0.6}}}}};

}  // namespace

TEST_SUITE("service") {
    TEST_CASE("health and CORS") {
        Running r;
        const auto res = r.http.Get("/health");
        REQUIRE(res);
        CHECK(res->status == 200);
        CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
        const auto pre = r.http.Options("/sessions");
        REQUIRE(pre);
        CHECK(pre->status == 204);
    }

    TEST_CASE("session creation") {
        Running r;
        const auto ok = r.http.Post("/sessions", sceneBytes(24), "image/x-portable-graymap");
        REQUIRE(ok);
        CHECK(ok->status == 201);
        const auto j = json::parse(ok->body);
        CHECK(j["width"] == 24);
        CHECK(j["id"].get<std::string>().size() == 16u);

        const auto empty = r.http.Post("/sessions", "", "application/octet-stream");
        REQUIRE(empty);
        CHECK(empty->status == 400);
        const auto junk = r.http.Post("/sessions", "P5 garbage", "application/octet-stream");
        REQUIRE(junk);
        CHECK(junk->status == 400);
        CHECK(json::parse(junk->body).contains("error"));
    }

    TEST_CASE("oversized bodies are refused") {
        auto cfg = Running::make();
        cfg.maxBodyBytes = 1024;
        Running r(cfg);
        const auto res = r.http.Post("/sessions", sceneBytes(64), "application/octet-stream");
        REQUIRE(res);
        CHECK(res->status == 413);
    }

    TEST_CASE("unknown sessions are 404") {
        Running r;
        for (const auto& res : {r.http.Get("/sessions/0123456789abcdef/state"),
                                r.http.Post("/sessions/0123456789abcdef/run", "{}", "application/json"),
                                r.http.Delete("/sessions/0123456789abcdef")}) {
            REQUIRE(res);
            CHECK(res->status == 404);
        }
    }

    TEST_CASE("seeds: strokes, PNG, conflicts") {
        Running r;
        const auto id = r.createSession();
        auto res = r.http.Put("/sessions/" + id + "/seeds", kBarStroke.dump(), "application/json");
        REQUIRE(res);
        CHECK(res->status == 204);

        auto state = json::parse(r.http.Get("/sessions/" + id + "/state")->body);
        CHECK(state["status"] == "idle");
        CHECK(state["diagnostics"]["seeds"]["outside"].get<int>() > 0);

        // the mask comes back as a PNG that re-uploads to the same mask
        const auto png = r.http.Get("/sessions/" + id + "/seeds");
        REQUIRE(png);
        CHECK(png->get_header_value("Content-Type") == "image/png");
        res = r.http.Put("/sessions/" + id + "/seeds", png->body, "image/png");
        REQUIRE(res);
        CHECK(res->status == 204);
        const auto again = json::parse(r.http.Get("/sessions/" + id + "/state")->body);
        CHECK(again["diagnostics"]["seeds"] == state["diagnostics"]["seeds"]);

        const json conflict = {{"strokes",
                                {{{"label", "inside"}, {"polyline", {{10, 10}, {20, 10}}}, {"radius", 1.0}},
                                 {{"label", "outside"}, {"polyline", {{15, 10}}}, {"radius", 1.0}}}}};
        res = r.http.Put("/sessions/" + id + "/seeds", conflict.dump(), "application/json");
        REQUIRE(res);
        CHECK(res->status == 422);

        res = r.http.Put("/sessions/" + id + "/seeds", "{\"strokes\": [", "application/json");
        REQUIRE(res);
        CHECK(res->status == 400);

        const json badRadius = {{"strokes", {{{"label", "inside"}, {"polyline", {{1, 1}}}, {"radius", -1}}}}};
        res = r.http.Put("/sessions/" + id + "/seeds", badRadius.dump(), "application/json");
        REQUIRE(res);
        CHECK(res->status == 422);
    }

    TEST_CASE("run lifecycle") {
        Running r;
        const auto id = r.createSession();
        auto res = r.http.Post("/sessions/" + id + "/run", json{{"epsilon", 0}}.dump(), "application/json");
        REQUIRE(res);
        CHECK(res->status == 422);
        res = r.http.Post("/sessions/" + id + "/run", "{not json", "application/json");
        REQUIRE(res);
        CHECK(res->status == 400);
        res = r.http.Post("/sessions/" + id + "/run", json{{"bogus", 1}}.dump(), "application/json");
        REQUIRE(res);
        CHECK(res->status == 422);

        res = r.http.Post("/sessions/" + id + "/run", json{{"steps", 400}}.dump(), "application/json");
        REQUIRE(res);
        CHECK(res->status == 202);
        CHECK(json::parse(res->body)["runId"] == 1);
        // a second run or new seeds while the first is going
        const auto busy = r.http.Post("/sessions/" + id + "/run", "{}", "application/json");
        const auto seeds = r.http.Put("/sessions/" + id + "/seeds", kBarStroke.dump(), "application/json");
        const auto mid = json::parse(r.http.Get("/sessions/" + id + "/state")->body);
        if (mid["status"] == "running") {
            CHECK(busy->status == 409);
            CHECK(seeds->status == 409);
        }
        const auto done = r.waitFinished(id);
        CHECK(done["status"] == "done");
        CHECK(done["runId"] == 1);
        CHECK(done["step"] == 400);
        CHECK(done["contour"].is_array());
        CHECK(done["diagnostics"]["g0"]["min"].get<double>() < 1.0);

        const auto hist = json::parse(r.http.Get("/sessions/" + id + "/history")->body);
        REQUIRE(hist.is_array());
        CHECK(hist.size() <= 32u);
        CHECK(hist.back()["status"] == "done");

        res = r.http.Delete("/sessions/" + id);
        REQUIRE(res);
        CHECK(res->status == 204);
        CHECK(r.http.Get("/sessions/" + id + "/state")->status == 404);
    }

    TEST_CASE("service and CLI agree on the contour") {
        Running r;
        const auto id = r.createSession(32);
        REQUIRE(r.http.Put("/sessions/" + id + "/seeds", kBarStroke.dump(), "application/json")->status == 204);
        const json params = {{"steps", 6}, {"tau", 5.0 / (32 * 32)}};
        REQUIRE(r.http.Post("/sessions/" + id + "/run", params.dump(), "application/json")->status == 202);
        const auto done = r.waitFinished(id);
        REQUIRE(done["status"] == "done");

        const fs::path dir = fs::temp_directory_path() / "seedseg_service_parity";
        fs::remove_all(dir);
        fs::create_directories(dir);
        {
            std::ofstream(dir / "scene.pgm", std::ios::binary) << sceneBytes(32);
            const auto png = r.http.Get("/sessions/" + id + "/seeds");
            std::ofstream(dir / "seeds.png", std::ios::binary) << png->body;
        }
        cli::SegmentConfig cfg;
        cfg.image = dir / "scene.pgm";
        cfg.mask = dir / "seeds.png";
        cfg.flags.steps = 6;
        cfg.flags.tau = 5.0 / (32 * 32);
        cfg.out = dir / "out";
        cfg.quiet = true;
        std::ostringstream log;
        // convergence is not the point here, only that both paths compute the same thing
        REQUIRE(cli::cmdSegment(cfg, log) != cli::kExitError);
        std::ifstream in(cfg.out / "contour.json");
        CHECK(json::parse(in) == done["contour"]);
        fs::remove_all(dir);
    }

    TEST_CASE("store expiry spares running sessions") {
        service::SessionStore store({4, std::chrono::seconds(1)});
        const auto idle = store.create(synthTwoRectanglesImage(SceneParams{}, 24, 24));
        const auto busy = store.create(synthTwoRectanglesImage(SceneParams{}, 24, 24));
        SegmentationParams p;
        p.steps = 100000;
        busy->startRun(p);
        const auto later = std::chrono::steady_clock::now() + std::chrono::seconds(5);
        CHECK(store.evictExpired(later) == 1u);
        CHECK(store.size() == 1u);
        CHECK(store.find(busy->id()) != nullptr);
        CHECK(store.find(idle->id()) == nullptr);
        busy->cancelAndJoin();
        CHECK(busy->state()->status == service::RunState::Failed);
        CHECK(busy->history().size() <= 4u);
    }
}
