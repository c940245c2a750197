#include "seedseg/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "seedseg/errors.hpp"
#include "seedseg/formats.hpp"
#include "seedseg/params_json.hpp"

namespace seedseg::cli {

using nlohmann::json;
namespace fs = std::filesystem;

SegmentationParams ParamFlags::apply(SegmentationParams p) const {
    if (epsilon) p.epsilon = *epsilon;
    if (lambda) p.edgeStop.lambda = *lambda;
    if (gForm) {
        try {
            p.edgeStop.form = parseEdgeStopForm(*gForm);
        } catch (const std::invalid_argument& e) {
            throw ParameterError(e.what());
        }
    }
    if (sigma) p.sigma = sigma;
    if (tau) p.tau = tau;
    if (omega) p.solver.omega = *omega;
    if (tol) p.solver.tol = *tol;
    if (maxSweeps) p.solver.maxSweeps = *maxSweeps;
    if (residualFactor) p.residualFactor = *residualFactor;
    if (finalTime) p.finalTime = finalTime;
    if (steps) p.steps = steps;
    if (steadyTol) p.steadyTol = *steadyTol;
    if (delta) p.delta = delta;
    if (bigM) p.bigM = *bigM;
    if (!initCircle.empty()) {
        if (initCircle.size() != 3) throw ParameterError("--init-circle takes cx cy r");
        p.initCircle = Circle{{initCircle[0], initCircle[1]}, initCircle[2]};
    }
    return p;
}

namespace {

void writeText(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

void ensureDir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
}

void drawLine(RgbImage& img, double x0, double y0, double x1, double y1) {
    const int n = std::max(1, static_cast<int>(std::ceil(std::max(std::abs(x1 - x0), std::abs(y1 - y0)))));
    for (int k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) / n;
        const int x = std::clamp(static_cast<int>(std::lround(x0 + t * (x1 - x0))), 0, img.width - 1);
        const int y = std::clamp(static_cast<int>(std::lround(y0 + t * (y1 - y0))), 0, img.height - 1);
        std::uint8_t* px = img.pixel(x, y);
        px[0] = 0;
        px[1] = 255;
        px[2] = 0;
    }
}

RunObserver progress(std::ostream& log, bool quiet) {
    if (quiet) return {};
    return [&log](const Snapshot& s) {
        if (s.step % 25 != 0) return;
        log << "step " << s.step << "  t=" << s.time << "  components=" << s.components.count
            << "  sweeps=" << s.report.sweeps << "\n";
    };
}

}  // namespace

RgbImage renderOverlay(const Image& image, const std::vector<Polyline>& contour, const GridSpec& spec) {
    RgbImage out(image.width, image.height);
    const auto [lo, hi] = std::minmax_element(image.intensities.begin(), image.intensities.end());
    const double range = (lo != image.intensities.end() && *hi > *lo) ? *hi - *lo : 1.0;
    const double base = lo != image.intensities.end() ? *lo : 0.0;
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x) {
            const auto v = static_cast<std::uint8_t>(std::lround(255.0 * (image.at(x, y) - base) / range));
            std::uint8_t* px = out.pixel(x, y);
            px[0] = px[1] = px[2] = v;
        }
    const double sx = image.width / spec.L1();
    const double sy = image.height / spec.L2();
    for (const Polyline& pl : contour) {
        const std::size_t n = pl.points.size();
        for (std::size_t k = 0; k + 1 < n + (pl.closed ? 1 : 0); ++k) {
            const Point2 a = pl.points[k];
            const Point2 b = pl.points[(k + 1) % n];
            drawLine(out, a.x1 * sx, a.x2 * sy, b.x1 * sx, b.x2 * sy);
        }
    }
    return out;
}

json runReport(const RunResult& r, const SegmentationParams& params) {
    int totalSweeps = 0, maxSweeps = 0;
    double maxComp = 0.0, maxLin = 0.0;
    for (const StepRecord& s : r.history) {
        totalSweeps += s.report.sweeps;
        maxSweeps = std::max(maxSweeps, s.report.sweeps);
        maxComp = std::max(maxComp, s.report.complementarityResidual);
        maxLin = std::max(maxLin, s.report.linearResidual);
    }
    const auto g = r.edgeMap.g0.values();
    double gmin = 1.0, gmax = 0.0, gsum = 0.0;
    for (double v : g) {
        gmin = std::min(gmin, v);
        gmax = std::max(gmax, v);
        gsum += v;
    }
    json j;
    j["status"] = toString(r.status);
    if (!r.error.empty()) j["error"] = r.error;
    j["steps"] = r.final.step;
    j["time"] = r.final.time;
    j["allConverged"] = r.allConverged;
    j["componentCount"] = r.final.components.count;
    j["componentAreas"] = r.final.components.areas;
    j["totalSweeps"] = totalSweeps;
    j["maxSweeps"] = maxSweeps;
    j["maxComplementarityResidual"] = maxComp;
    j["maxLinearResidual"] = maxLin;
    j["lastStep"] = reportToJson(r.final.report);
    j["g0"] = {{"min", gmin}, {"max", gmax}, {"mean", g.empty() ? 0.0 : gsum / static_cast<double>(g.size())},
               {"degenerateKernel", r.edgeMap.degenerateKernel}};
    j["params"] = paramsToJson(params);
    return j;
}

int writeRunOutputs(const RunResult& r, const Image& image, const SegmentationParams& params, const fs::path& dir) {
    ensureDir(dir);
    writeText(dir / "contour.json", contourToJson(r.final.contour));
    writeLevelSet(dir / "levelset.bin", r.final.u, r.final.time);
    saveRgbPng(dir / "overlay.png", renderOverlay(image, r.final.contour, r.final.u.spec()));
    writeText(dir / "report.json", runReport(r, params).dump(2) + "\n");
    if (r.status == RunStatus::Failed) return kExitError;
    return r.allConverged ? kExitOk : kExitNotConverged;
}

int cmdSynth(const SynthConfig& c, std::ostream& log) {
    ensureDir(c.out);
    const Image img = synthTwoRectanglesImage(c.scene, c.width, c.height);
    savePgm(c.out / "scene.pgm", img);
    log << "wrote " << (c.out / "scene.pgm").string() << "\n";
    if (c.bars.empty()) return kExitOk;
    const GridSpec spec = gridForImage(c.width, c.height);
    SeedMask mask(spec);
    for (const BarFlag& b : c.bars) mask = unite(mask, synthBarSeed(b.center, b.width, b.height, b.label, spec));
    saveRgbPng(c.out / "seeds.png", renderSeedMask(mask, c.width, c.height));
    log << "wrote " << (c.out / "seeds.png").string() << "\n";
    return kExitOk;
}

int cmdSegment(const SegmentConfig& c, std::ostream& log) {
    const Image img = loadImage(c.image);
    const GridSpec spec = gridForImage(img.width, img.height);
    const GridField field = imageToField(img, spec);
    const SeedMask mask = c.mask ? loadSeedMask(*c.mask, spec) : SeedMask(spec);
    const SegmentationParams params = c.flags.apply({});
    params.validate(spec);
    const RunResult r = run(field, mask, params, progress(log, c.quiet));
    const int code = writeRunOutputs(r, img, params, c.out);
    log << toString(r.status) << ": t=" << r.final.time << " steps=" << r.final.step
        << " components=" << r.final.components.count << (r.allConverged ? "" : " (solver did not converge)") << "\n";
    if (!r.error.empty()) log << "error: " << r.error << "\n";
    return code;
}

int cmdDemo(const DemoConfig& c, std::ostream& log) {
    ensureDir(c.out);
    json all = json::array();
    int code = kExitOk;
    for (Demo d : c.demos) {
        DemoSetup setup = makeDemo(d, c.pixels);
        setup.params = c.flags.apply(setup.params);
        setup.params.validate(setup.field.spec());
        const fs::path dir = c.out / toString(d);
        ensureDir(dir);
        savePgm(dir / "scene.pgm", setup.image);
        if (setup.mask.count(SeedLabel::Free) != setup.mask.spec().nodeCount())
            saveRgbPng(dir / "seeds.png", renderSeedMask(setup.mask, setup.image.width, setup.image.height));
        if (!c.quiet) log << "== " << toString(d) << "\n";
        const RunResult r = run(setup.field, setup.mask, setup.params, progress(log, c.quiet));
        int runCode = writeRunOutputs(r, setup.image, setup.params, dir);

        const DemoVerdict v = checkDemo(setup, r.final.u);
        json s;
        s["demo"] = toString(d);
        s["status"] = toString(r.status);
        s["time"] = r.final.time;
        s["steps"] = r.final.step;
        s["allConverged"] = r.allConverged;
        s["componentCount"] = v.components;
        s["expectedComponents"] = v.expectedComponents ? json(*v.expectedComponents) : json(nullptr);
        json checks = json::array();
        for (const DemoCheck& k : v.checks) checks.push_back({{"name", k.name}, {"pass", k.pass}});
        s["checks"] = checks;
        s["pass"] = v.pass();
        writeText(dir / "summary.json", s.dump(2) + "\n");
        all.push_back(s);

        log << toString(d) << ": components=" << v.components << " " << (v.pass() ? "PASS" : "FAIL") << "\n";
        if (!v.pass()) runCode = kExitError;
        // an error outranks a non-converged solve
        if (code != kExitError && runCode != kExitOk) code = runCode;
    }
    writeText(c.out / "summary.json", all.dump(2) + "\n");
    return code;
}

}  // namespace seedseg::cli
