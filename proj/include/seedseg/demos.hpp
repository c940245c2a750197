#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seedseg/engine.hpp"
#include "seedseg/ingest.hpp"

namespace seedseg {

/// The artificial two-rectangles experiments.
enum class Demo {
    NoObstacleEps1,  // epsilon = 1, outlines only
    NoObstacleEps4,  // epsilon = 1e-4, convex hull of both rectangles
    OneObstacle,     // Outside bar between the rectangles
    TwoObstacles,    // Outside bar plus an Inside bar in the left rectangle
};

const char* toString(Demo d) noexcept;
std::optional<Demo> parseDemo(std::string_view name);
std::vector<Demo> allDemos();

struct DemoSetup {
    Demo demo;
    Image image;
    GridField field;
    SeedMask mask;
    SegmentationParams params;
};

inline constexpr double kDemoTauFactor = 10.0;
inline constexpr double kDemoHorizonHull = 0.145;
inline constexpr double kDemoHorizonBar = 0.067;
inline constexpr double kDemoHorizonEps1 = 0.05;
inline constexpr int kDemoMaxSweeps = 20000;

/// The Outside separator bar (0.04 x 0.6, centred) and the Inside bar of the
/// two-obstacle variant (0.02 x 0.2 at the left rectangle's centre).
SeedMask demoSeparatorBar(const GridSpec& spec);
SeedMask demoInsideBar(const GridSpec& spec);

struct DemoCheck {
    std::string name;
    bool pass = false;
};

struct DemoVerdict {
    /// Unset for the epsilon = 1 run, which has no topology claim.
    std::optional<int> expectedComponents;
    int components = 0;
    std::vector<DemoCheck> checks;
    bool pass() const noexcept;
};

/// Nodes strictly inside the inner boundary of rectangle k (0 = left, 1 = right).
std::vector<std::size_t> rectangleInteriorNodes(const SceneParams& scene, int k, const GridSpec& spec);

/// Topology checks for a finished demo run on its final level set.
DemoVerdict checkDemo(const DemoSetup& setup, const GridField& u);

/// Scene image of `pixels` x `pixels`, grid (0,1)^2 with `pixels` cells a side.
DemoSetup makeDemo(Demo d, int pixels = 128);

}  // namespace seedseg
