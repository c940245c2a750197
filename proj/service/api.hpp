#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include <httplib.h>

#include "session.hpp"

namespace seedseg::service {

struct ServiceConfig {
    std::string host = "0.0.0.0";
    int port = 8080;
    std::size_t maxBodyBytes = 16u << 20;
    StoreConfig store;
    std::chrono::seconds sweepInterval{60};
};

/// HTTP front end over a SessionStore:
///   POST   /sessions               image bytes (PGM or PNG) -> 201 {id, width, height}
///   PUT    /sessions/{id}/seeds    stroke JSON or mask PNG   -> 204
///   GET    /sessions/{id}/seeds    mask as PNG
///   POST   /sessions/{id}/run      params JSON               -> 202 {runId}
///   GET    /sessions/{id}/state    latest snapshot
///   GET    /sessions/{id}/history  recent snapshots, no contours
///   DELETE /sessions/{id}
class Service {
public:
    explicit Service(ServiceConfig config = {});
    ~Service();

    /// Binds to config.port (0 picks a free port) and serves on a background
    /// thread. Returns the bound port; throws std::runtime_error when binding fails.
    int start();
    /// Blocks serving on the calling thread.
    bool listen();
    void stop();

    SessionStore& store() noexcept { return store_; }

private:
    void routes();
    void janitor();

    ServiceConfig config_;
    SessionStore store_;
    httplib::Server http_;
    std::thread serveThread_;
    std::thread janitorThread_;
    std::mutex janitorMu_;
    std::condition_variable janitorCv_;
    bool stopping_ = false;
};

}  // namespace seedseg::service
