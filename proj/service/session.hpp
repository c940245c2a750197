#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include <json.hpp>

#include "seedseg/engine.hpp"
#include "seedseg/ingest.hpp"

namespace seedseg::service {

enum class RunState { Idle, Running, Done, Failed };
const char* toString(RunState s) noexcept;

/// One published view of a session. Immutable once built, so readers can hold
/// it while the run replaces it.
struct StateView {
    RunState status = RunState::Idle;
    std::uint64_t runId = 0;
    int step = 0;
    double time = 0.0;
    std::string contourJson = "[]";
    int componentCount = 0;
    std::vector<double> componentAreas;
    SolveReport report;
    bool allConverged = true;
    std::string error;
};

struct EdgeStats {
    double min = 0.0, max = 0.0, mean = 0.0;
};

class BusyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Session {
public:
    Session(std::string id, Image image, std::size_t ringSize);
    ~Session();
    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    const std::string& id() const noexcept { return id_; }
    const Image& image() const noexcept { return image_; }
    const GridSpec& spec() const noexcept { return spec_; }
    EdgeStats edgeStats() const noexcept { return g0_; }

    /// Throws BusyError while a run is active.
    void setMask(SeedMask mask);
    SeedMask mask() const;

    /// Starts a background run and returns its id. Throws BusyError while one
    /// is active and ParameterError for invalid parameters.
    std::uint64_t startRun(const SegmentationParams& p);
    bool running() const;

    std::shared_ptr<const StateView> state() const;
    /// Most recent published views, oldest first (bounded ring).
    std::vector<std::shared_ptr<const StateView>> history() const;

    void touch();
    std::chrono::steady_clock::time_point lastAccess() const;

    /// Asks the active run to stop and waits for it.
    void cancelAndJoin();

private:
    void publish(std::shared_ptr<const StateView> view);
    std::shared_ptr<StateView> initialView(const SeedMask& mask) const;

    const std::string id_;
    const Image image_;
    const GridSpec spec_;
    const GridField field_;
    EdgeStats g0_;
    const std::size_t ringSize_;

    mutable std::mutex mu_;
    SeedMask mask_;
    std::shared_ptr<const StateView> current_;
    std::deque<std::shared_ptr<const StateView>> ring_;
    std::uint64_t nextRunId_ = 1;
    bool running_ = false;
    std::chrono::steady_clock::time_point lastAccess_;
    std::jthread worker_;
};

struct StoreConfig {
    std::size_t ringSize = 32;
    std::chrono::seconds ttl{3600};
};

class SessionStore {
public:
    explicit SessionStore(StoreConfig config = {});
    ~SessionStore();

    std::shared_ptr<Session> create(Image image);
    /// nullptr when unknown; refreshes the access time otherwise.
    std::shared_ptr<Session> find(const std::string& id);
    bool erase(const std::string& id);
    /// Drops idle sessions not accessed within the TTL; returns how many.
    std::size_t evictExpired(std::chrono::steady_clock::time_point now = std::chrono::steady_clock::now());
    std::size_t size() const;

private:
    std::string freshId();

    StoreConfig config_;
    mutable std::mutex mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::uint64_t counter_ = 0;
    std::uint64_t salt_;
};

}  // namespace seedseg::service
