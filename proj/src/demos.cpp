#include "seedseg/demos.hpp"

#include <algorithm>
#include <cmath>

#include "seedseg/contour.hpp"

namespace seedseg {

const char* toString(Demo d) noexcept {
    switch (d) {
        case Demo::NoObstacleEps1: return "no-obstacle-eps1";
        case Demo::NoObstacleEps4: return "no-obstacle-eps4";
        case Demo::OneObstacle: return "one-obstacle";
        default: return "two-obstacles";
    }
}

std::vector<Demo> allDemos() {
    return {Demo::NoObstacleEps1, Demo::NoObstacleEps4, Demo::OneObstacle, Demo::TwoObstacles};
}

std::optional<Demo> parseDemo(std::string_view name) {
    for (Demo d : allDemos())
        if (name == toString(d)) return d;
    return std::nullopt;
}

SeedMask demoSeparatorBar(const GridSpec& spec) {
    return synthBarSeed({0.5, 0.5}, 0.04, 0.6, SeedLabel::Outside, spec);
}

SeedMask demoInsideBar(const GridSpec& spec) {
    return synthBarSeed({0.4, 0.5}, 0.02, 0.2, SeedLabel::Inside, spec);
}

DemoSetup makeDemo(Demo d, int pixels) {
    const SceneParams scene;
    Image img = synthTwoRectanglesImage(scene, pixels, pixels);
    const GridSpec spec = gridForImage(pixels, pixels);
    GridField field = imageToField(img, spec);

    SegmentationParams p;
    p.tau = kDemoTauFactor * spec.h1() * spec.h2();
    p.solver.maxSweeps = kDemoMaxSweeps;
    p.initCircle = Circle{{0.5, 0.5}, std::sqrt(0.08)};

    SeedMask mask(spec);
    switch (d) {
        case Demo::NoObstacleEps1:
            p.finalTime = kDemoHorizonEps1;
            break;
        case Demo::NoObstacleEps4:
            p.finalTime = kDemoHorizonHull;
            break;
        case Demo::OneObstacle:
            mask = demoSeparatorBar(spec);
            p.finalTime = kDemoHorizonBar;
            break;
        case Demo::TwoObstacles:
            mask = unite(demoSeparatorBar(spec), demoInsideBar(spec));
            p.finalTime = kDemoHorizonBar;
            break;
    }
    p.epsilon = d == Demo::NoObstacleEps1 ? 1.0 : 1e-4;
    return {d, std::move(img), std::move(field), std::move(mask), p};
}

bool DemoVerdict::pass() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const DemoCheck& c) { return c.pass; });
}

std::vector<std::size_t> rectangleInteriorNodes(const SceneParams& scene, int k, const GridSpec& spec) {
    const Point2 c = k == 0 ? scene.leftCenter : scene.rightCenter;
    const double a = scene.width / 2 - scene.edgeThickness;
    const double b = scene.height / 2 - scene.edgeThickness;
    std::vector<std::size_t> out;
    for (int j = 0; j <= spec.N2(); ++j)
        for (int i = 0; i <= spec.N1(); ++i)
            if (std::abs(i * spec.h1() - c.x1) < a && std::abs(j * spec.h2() - c.x2) < b) out.push_back(spec.at(i, j));
    return out;
}

namespace {

// Component id shared by all nodes, or -1 when some node is outside or they straddle components.
int commonComponent(const ComponentSummary& cs, const std::vector<std::size_t>& nodes) {
    if (nodes.empty()) return -1;
    const int id = cs.labels[nodes.front()];
    for (std::size_t I : nodes)
        if (cs.labels[I] != id) return -1;
    return id;
}

bool allOf(const SeedMask& mask, SeedLabel label, const GridField& u, bool negative) {
    bool any = false;
    for (std::size_t I = 0; I < u.size(); ++I) {
        if (mask[I] != label) continue;
        any = true;
        if (negative ? !(u[I] < 0.0) : !(u[I] > 0.0)) return false;
    }
    return any;
}

}  // namespace

DemoVerdict checkDemo(const DemoSetup& setup, const GridField& u) {
    const GridSpec& spec = u.spec();
    const ComponentSummary cs = interiorComponents(u);
    DemoVerdict v;
    v.components = cs.count;
    if (setup.demo == Demo::NoObstacleEps1) return v;

    const SceneParams scene;
    const int left = commonComponent(cs, rectangleInteriorNodes(scene, 0, spec));
    const int right = commonComponent(cs, rectangleInteriorNodes(scene, 1, spec));
    if (setup.demo == Demo::NoObstacleEps4) {
        v.expectedComponents = 1;
        v.checks.push_back({"one interior component", cs.count == 1});
        v.checks.push_back({"component holds both rectangle interiors", left >= 0 && left == right});
        return v;
    }
    v.expectedComponents = 2;
    v.checks.push_back({"two interior components", cs.count == 2});
    v.checks.push_back({"one component per rectangle", left >= 0 && right >= 0 && left != right});
    v.checks.push_back({"u > 0 on the Outside bar", allOf(setup.mask, SeedLabel::Outside, u, false)});
    if (setup.demo == Demo::TwoObstacles)
        v.checks.push_back({"u < 0 on the Inside bar", allOf(setup.mask, SeedLabel::Inside, u, true)});
    return v;
}

}  // namespace seedseg
