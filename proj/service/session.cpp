#include "session.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

#include "seedseg/errors.hpp"
#include "seedseg/formats.hpp"

namespace seedseg::service {

const char* toString(RunState s) noexcept {
    switch (s) {
        case RunState::Idle: return "idle";
        case RunState::Running: return "running";
        case RunState::Done: return "done";
        default: return "failed";
    }
}

namespace {

std::shared_ptr<StateView> viewOf(const std::vector<Polyline>& contour, const ComponentSummary& cs) {
    auto v = std::make_shared<StateView>();
    v->contourJson = contourToJson(contour);
    v->componentCount = cs.count;
    v->componentAreas = cs.areas;
    return v;
}

EdgeStats statsOf(const GridField& g) {
    EdgeStats s{1.0, 0.0, 0.0};
    for (double x : g.values()) {
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
        s.mean += x;
    }
    s.mean /= static_cast<double>(g.size());
    return s;
}

}  // namespace

Session::Session(std::string id, Image image, std::size_t ringSize)
    : id_(std::move(id)),
      image_(std::move(image)),
      spec_(gridForImage(image_.width, image_.height)),
      field_(imageToField(image_, spec_)),
      ringSize_(std::max<std::size_t>(1, ringSize)),
      mask_(spec_),
      lastAccess_(std::chrono::steady_clock::now()) {
    const SegmentationParams defaults;
    g0_ = statsOf(buildEdgeMap(field_, {defaults.sigmaFor(spec_), defaults.truncationRadius}, defaults.edgeStop).g0);
    publish(initialView(mask_));
}

Session::~Session() { cancelAndJoin(); }

std::shared_ptr<StateView> Session::initialView(const SeedMask& mask) const {
    const GridField u = initialLevelSet(mask, SegmentationParams{});
    return viewOf(extractContour(u), interiorComponents(u));
}

void Session::setMask(SeedMask mask) {
    if (!(mask.spec() == spec_)) throw ShapeError("seed mask does not match the session grid");
    std::shared_ptr<StateView> fresh = initialView(mask);
    std::lock_guard lock(mu_);
    if (running_) throw BusyError("a run is active");
    mask_ = std::move(mask);
    // after a run the last result stays visible until the next one starts
    if (current_->status != RunState::Idle) return;
    current_ = fresh;
    ring_.push_back(std::move(fresh));
    while (ring_.size() > ringSize_) ring_.pop_front();
}

SeedMask Session::mask() const {
    std::lock_guard lock(mu_);
    return mask_;
}

bool Session::running() const {
    std::lock_guard lock(mu_);
    return running_;
}

std::uint64_t Session::startRun(const SegmentationParams& p) {
    p.validate(spec_);
    std::lock_guard lock(mu_);
    if (running_) throw BusyError("a run is active");
    // The previous worker has already cleared running_, its last action.
    if (worker_.joinable()) worker_.join();
    running_ = true;
    const std::uint64_t runId = nextRunId_++;
    const SeedMask mask = mask_;

    auto start = std::make_shared<StateView>(*current_);
    start->status = RunState::Running;
    start->runId = runId;
    start->step = 0;
    start->time = 0.0;
    start->error.clear();
    current_ = start;
    ring_.push_back(start);
    while (ring_.size() > ringSize_) ring_.pop_front();

    worker_ = std::jthread([this, p, mask, runId](std::stop_token stop) {
        RunOptions opts;
        opts.cancelled = [&stop] { return stop.stop_requested(); };
        const auto observer = [&](const Snapshot& s) {
            auto v = viewOf(s.contour, s.components);
            v->status = RunState::Running;
            v->runId = runId;
            v->step = s.step;
            v->time = s.time;
            v->report = s.report;
            publish(std::move(v));
        };
        std::shared_ptr<StateView> last;
        try {
            const RunResult r = run(field_, mask, p, observer, opts);
            last = viewOf(r.final.contour, r.final.components);
            last->status = r.status == RunStatus::Failed ? RunState::Failed : RunState::Done;
            last->step = r.final.step;
            last->time = r.final.time;
            last->report = r.final.report;
            last->allConverged = r.allConverged;
            last->error = r.error;
        } catch (const std::exception& e) {
            last = std::make_shared<StateView>();
            last->status = RunState::Failed;
            last->error = e.what();
        }
        last->runId = runId;
        std::lock_guard lock(mu_);
        current_ = last;
        ring_.push_back(last);
        while (ring_.size() > ringSize_) ring_.pop_front();
        running_ = false;
    });
    return runId;
}

void Session::publish(std::shared_ptr<const StateView> view) {
    std::lock_guard lock(mu_);
    current_ = view;
    ring_.push_back(std::move(view));
    while (ring_.size() > ringSize_) ring_.pop_front();
}

std::shared_ptr<const StateView> Session::state() const {
    std::lock_guard lock(mu_);
    return current_;
}

std::vector<std::shared_ptr<const StateView>> Session::history() const {
    std::lock_guard lock(mu_);
    return {ring_.begin(), ring_.end()};
}

void Session::touch() {
    std::lock_guard lock(mu_);
    lastAccess_ = std::chrono::steady_clock::now();
}

std::chrono::steady_clock::time_point Session::lastAccess() const {
    std::lock_guard lock(mu_);
    return lastAccess_;
}

void Session::cancelAndJoin() {
    std::jthread w;
    {
        std::lock_guard lock(mu_);
        w = std::move(worker_);
    }
    // jthread's destructor requests stop and joins
}

// --- store -----------------------------------------------------------------------------

SessionStore::SessionStore(StoreConfig config) : config_(config), salt_(std::random_device{}()) {
    salt_ = (salt_ << 32) ^ std::random_device{}();
}

SessionStore::~SessionStore() {
    std::map<std::string, std::shared_ptr<Session>> doomed;
    {
        std::lock_guard lock(mu_);
        doomed.swap(sessions_);
    }
}

std::string SessionStore::freshId() {
    // splitmix64 over a salted counter: unique per store, not guessable across restarts
    std::uint64_t z = salt_ + 0x9e3779b97f4a7c15ULL * ++counter_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(z));
    return buf;
}

std::shared_ptr<Session> SessionStore::create(Image image) {
    std::string id;
    {
        std::lock_guard lock(mu_);
        id = freshId();
    }
    auto s = std::make_shared<Session>(id, std::move(image), config_.ringSize);
    std::lock_guard lock(mu_);
    sessions_.emplace(id, s);
    return s;
}

std::shared_ptr<Session> SessionStore::find(const std::string& id) {
    std::shared_ptr<Session> s;
    {
        std::lock_guard lock(mu_);
        const auto it = sessions_.find(id);
        if (it == sessions_.end()) return nullptr;
        s = it->second;
    }
    s->touch();
    return s;
}

bool SessionStore::erase(const std::string& id) {
    std::shared_ptr<Session> doomed;
    std::lock_guard lock(mu_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) return false;
    doomed = std::move(it->second);
    sessions_.erase(it);
    return true;
}

std::size_t SessionStore::evictExpired(std::chrono::steady_clock::time_point now) {
    std::vector<std::shared_ptr<Session>> doomed;
    {
        std::lock_guard lock(mu_);
        for (auto it = sessions_.begin(); it != sessions_.end();) {
            const auto& s = it->second;
            if (!s->running() && now - s->lastAccess() > config_.ttl) {
                doomed.push_back(std::move(it->second));
                it = sessions_.erase(it);
            } else {
                ++it;
            }
        }
    }
    return doomed.size();
}

std::size_t SessionStore::size() const {
    std::lock_guard lock(mu_);
    return sessions_.size();
}

}  // namespace seedseg::service
