#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "seedseg/demos.hpp"
#include "seedseg/engine.hpp"
#include "seedseg/ingest.hpp"

namespace seedseg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

/// Numeric flags; unset members keep whatever the base parameters say.
struct ParamFlags {
    std::optional<double> epsilon, lambda, sigma, tau, omega, tol, finalTime, steadyTol, delta, bigM, residualFactor;
    std::optional<std::string> gForm;
    std::optional<int> maxSweeps, steps;
    std::vector<double> initCircle;  // empty or {cx, cy, r}

    SegmentationParams apply(SegmentationParams base) const;
};

struct BarFlag {
    SeedLabel label = SeedLabel::Outside;
    Point2 center;
    double width = 0.0;
    double height = 0.0;
};

struct SynthConfig {
    SceneParams scene;
    int width = 128;
    int height = 128;
    std::vector<BarFlag> bars;
    std::filesystem::path out = ".";
};

struct SegmentConfig {
    std::filesystem::path image;
    std::optional<std::filesystem::path> mask;
    ParamFlags flags;
    std::filesystem::path out = ".";
    bool quiet = false;
};

struct DemoConfig {
    std::vector<Demo> demos;
    int pixels = 128;
    ParamFlags flags;
    std::filesystem::path out = ".";
    bool quiet = false;
};

/// Writes scene.pgm and, when bars are given, seeds.png into config.out.
int cmdSynth(const SynthConfig& config, std::ostream& log);
/// Writes contour.json, levelset.bin, overlay.png and report.json into config.out.
/// Returns kExitNotConverged when some step's solver did not converge.
int cmdSegment(const SegmentConfig& config, std::ostream& log);
/// One subdirectory per demo with the segment outputs plus summary.json;
/// also a top-level summary.json listing every demo's verdict.
int cmdDemo(const DemoConfig& config, std::ostream& log);

/// Greyscale image (stretched to 0..255) with the contour drawn in green.
RgbImage renderOverlay(const Image& image, const std::vector<Polyline>& contour, const GridSpec& spec);

nlohmann::json runReport(const RunResult& result, const SegmentationParams& params);

/// Outputs shared by segment and demo; returns the exit code for the run.
int writeRunOutputs(const RunResult& result, const Image& image, const SegmentationParams& params,
                    const std::filesystem::path& dir);

}  // namespace seedseg::cli
