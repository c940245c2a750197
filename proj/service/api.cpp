#include "api.hpp"

#include <stdexcept>

#include "seedseg/errors.hpp"
#include "seedseg/params_json.hpp"

namespace seedseg::service {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

void sendError(httplib::Response& res, int status, const std::string& message) {
    res.status = status;
    res.set_content(json{{"error", message}}.dump(), kJson);
}

std::span<const std::uint8_t> bytesOf(const std::string& body) {
    return {reinterpret_cast<const std::uint8_t*>(body.data()), body.size()};
}

bool isPng(const std::string& body) { return body.size() >= 8 && body.compare(0, 4, "\x89PNG") == 0; }

std::vector<SeedStroke> parseStrokes(const json& j) {
    const json& list = j.is_object() ? j.at("strokes") : j;
    if (!list.is_array()) throw std::invalid_argument("strokes must be an array");
    std::vector<SeedStroke> out;
    for (const json& s : list) {
        SeedStroke st;
        std::string label = s.at("label").get<std::string>();
        if (label == "erase") label = "free";
        st.label = parseSeedLabel(label);
        for (const json& p : s.at("polyline")) {
            if (!p.is_array() || p.size() != 2) throw std::invalid_argument("polyline points are [x, y] pairs");
            st.polyline.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        st.radius = s.value("radius", 1.0);
        out.push_back(std::move(st));
    }
    return out;
}

json stateJson(const Session& s) {
    const auto v = s.state();
    const EdgeStats g = s.edgeStats();
    const SeedMask mask = s.mask();
    json d;
    d["sweeps"] = v->report.sweeps;
    d["sweepDifference"] = v->report.sweepDifference;
    d["linearResidual"] = v->report.linearResidual;
    d["complementarityResidual"] = v->report.complementarityResidual;
    d["converged"] = v->report.converged;
    d["allConverged"] = v->allConverged;
    d["g0"] = {{"min", g.min}, {"max", g.max}, {"mean", g.mean}};
    d["seeds"] = {{"inside", mask.count(SeedLabel::Inside)}, {"outside", mask.count(SeedLabel::Outside)}};
    if (!v->error.empty()) d["error"] = v->error;
    return {{"status", toString(v->status)},
            {"runId", v->runId},
            {"step", v->step},
            {"time", v->time},
            {"contour", json::parse(v->contourJson)},
            {"componentCount", v->componentCount},
            {"componentAreas", v->componentAreas},
            {"diagnostics", d}};
}

}  // namespace

Service::Service(ServiceConfig config) : config_(std::move(config)), store_(config_.store) { routes(); }

Service::~Service() { stop(); }

void Service::routes() {
    http_.set_payload_max_length(config_.maxBodyBytes);
    http_.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    http_.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
    http_.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            sendError(res, 500, e.what());
        } catch (...) {
            sendError(res, 500, "unknown error");
        }
    });

    http_.Get("/health", [](const httplib::Request&, httplib::Response& res) { res.set_content("{\"ok\":true}", kJson); });

    http_.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
        if (req.body.empty()) return sendError(res, 400, "empty body; send a PGM or PNG image");
        Image img;
        try {
            img = decodeImage(bytesOf(req.body));
        } catch (const std::exception& e) {
            return sendError(res, 400, e.what());
        }
        std::shared_ptr<Session> s;
        try {
            s = store_.create(std::move(img));
        } catch (const std::exception& e) {
            return sendError(res, 400, e.what());
        }
        res.status = 201;
        res.set_content(json{{"id", s->id()}, {"width", s->image().width}, {"height", s->image().height}}.dump(), kJson);
    });

    http_.Put(R"(/sessions/([0-9a-f]+)/seeds)", [this](const httplib::Request& req, httplib::Response& res) {
        const auto s = store_.find(req.matches[1]);
        if (!s) return sendError(res, 404, "unknown session");
        if (s->running()) return sendError(res, 409, "a run is active");
        SeedMask mask(s->spec());
        try {
            if (isPng(req.body)) {
                mask = seedMaskFromRgb(decodeRgbPng(bytesOf(req.body)), s->spec());
            } else {
                const json j = json::parse(req.body);
                mask = rasterizeStrokes(parseStrokes(j), s->image().width, s->image().height, s->spec());
            }
        } catch (const MaskConflictError& e) {
            return sendError(res, 422, e.what());
        } catch (const json::exception& e) {
            return sendError(res, 400, std::string("malformed stroke JSON: ") + e.what());
        } catch (const std::invalid_argument& e) {
            return sendError(res, 422, e.what());
        } catch (const std::exception& e) {
            return sendError(res, 400, e.what());
        }
        try {
            s->setMask(std::move(mask));
        } catch (const BusyError& e) {
            return sendError(res, 409, e.what());
        }
        res.status = 204;
    });

    http_.Get(R"(/sessions/([0-9a-f]+)/seeds)", [this](const httplib::Request& req, httplib::Response& res) {
        const auto s = store_.find(req.matches[1]);
        if (!s) return sendError(res, 404, "unknown session");
        const auto png = encodeRgbPng(renderSeedMask(s->mask(), s->image().width, s->image().height));
        res.set_content(std::string(png.begin(), png.end()), "image/png");
    });

    http_.Post(R"(/sessions/([0-9a-f]+)/run)", [this](const httplib::Request& req, httplib::Response& res) {
        const auto s = store_.find(req.matches[1]);
        if (!s) return sendError(res, 404, "unknown session");
        SegmentationParams p;
        try {
            if (!req.body.empty()) p = paramsFromJson(json::parse(req.body));
        } catch (const json::exception& e) {
            return sendError(res, 400, std::string("malformed parameter JSON: ") + e.what());
        } catch (const ParameterError& e) {
            return sendError(res, 422, e.what());
        }
        try {
            const auto runId = s->startRun(p);
            res.status = 202;
            res.set_content(json{{"runId", runId}}.dump(), kJson);
        } catch (const BusyError& e) {
            sendError(res, 409, e.what());
        } catch (const ParameterError& e) {
            sendError(res, 422, e.what());
        }
    });

    http_.Get(R"(/sessions/([0-9a-f]+)/state)", [this](const httplib::Request& req, httplib::Response& res) {
        const auto s = store_.find(req.matches[1]);
        if (!s) return sendError(res, 404, "unknown session");
        res.set_content(stateJson(*s).dump(), kJson);
    });

    http_.Get(R"(/sessions/([0-9a-f]+)/history)", [this](const httplib::Request& req, httplib::Response& res) {
        const auto s = store_.find(req.matches[1]);
        if (!s) return sendError(res, 404, "unknown session");
        json list = json::array();
        for (const auto& v : s->history())
            list.push_back({{"status", toString(v->status)},
                            {"runId", v->runId},
                            {"step", v->step},
                            {"time", v->time},
                            {"componentCount", v->componentCount}});
        res.set_content(list.dump(), kJson);
    });

    http_.Delete(R"(/sessions/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
        if (!store_.erase(req.matches[1])) return sendError(res, 404, "unknown session");
        res.status = 204;
    });
}

void Service::janitor() {
    std::unique_lock lock(janitorMu_);
    while (!janitorCv_.wait_for(lock, config_.sweepInterval, [this] { return stopping_; })) {
        lock.unlock();
        store_.evictExpired();
        lock.lock();
    }
}

int Service::start() {
    const int port = config_.port == 0 ? http_.bind_to_any_port(config_.host)
                                       : (http_.bind_to_port(config_.host, config_.port) ? config_.port : -1);
    if (port < 0) throw std::runtime_error("cannot bind " + config_.host + ":" + std::to_string(config_.port));
    serveThread_ = std::thread([this] { http_.listen_after_bind(); });
    janitorThread_ = std::thread([this] { janitor(); });
    http_.wait_until_ready();
    return port;
}

bool Service::listen() {
    janitorThread_ = std::thread([this] { janitor(); });
    return http_.listen(config_.host, config_.port);
}

void Service::stop() {
    {
        std::lock_guard lock(janitorMu_);
        if (stopping_) return;
        stopping_ = true;
    }
    janitorCv_.notify_all();
    http_.stop();
    if (serveThread_.joinable()) serveThread_.join();
    if (janitorThread_.joinable()) janitorThread_.join();
}

}  // namespace seedseg::service
