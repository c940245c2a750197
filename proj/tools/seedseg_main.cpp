// seedseg: scene synthesis, batch segmentation and the canned demos.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seedseg/cli.hpp"
#include "seedseg/errors.hpp"
#include "seedseg/parallel.hpp"

using namespace seedseg;

namespace {

void addParamFlags(CLI::App* app, cli::ParamFlags& f) {
    app->add_option("--epsilon", f.epsilon, "Regularisation of |grad u|");
    app->add_option("--lambda", f.lambda, "Edge-stop contrast weight");
    app->add_option("--g-form", f.gForm, "Edge-stop form: inverse-sqrt | rational");
    app->add_option("--sigma", f.sigma, "Mollifier width (default h1)");
    app->add_option("--tau", f.tau, "Time step (default h1*h2)");
    app->add_option("--omega", f.omega, "Relaxation parameter in (0,2)");
    app->add_option("--tol", f.tol, "Sweep-difference tolerance");
    app->add_option("--max-sweeps", f.maxSweeps, "Sweep cap per time step");
    app->add_option("--residual-factor", f.residualFactor,
                    "Steps also need complementarity residual <= factor*tol (0 disables)");
    app->add_option("--final-time", f.finalTime, "Run horizon");
    app->add_option("--steps", f.steps, "Step count");
    app->add_option("--steady-tol", f.steadyTol, "Stop once max|u_k - u_k-1| falls below this");
    app->add_option("--delta", f.delta, "Obstacle magnitude on seed nodes");
    app->add_option("--big-m", f.bigM, "Obstacle magnitude on free nodes");
    app->add_option("--init-circle", f.initCircle, "Initial circle: cx cy r")->expected(3);
}

cli::BarFlag parseBar(const std::vector<std::string>& t) {
    cli::BarFlag b;
    try {
        b.label = parseSeedLabel(t.at(0));
        b.center = {std::stod(t.at(1)), std::stod(t.at(2))};
        b.width = std::stod(t.at(3));
        b.height = std::stod(t.at(4));
    } catch (const std::exception& e) {
        throw ParameterError("--bar expects LABEL CX CY W H (" + std::string(e.what()) + ")");
    }
    return b;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Seeded level-set segmentation with obstacle constraints"};
    app.require_subcommand(1);

    cli::SynthConfig synth;
    std::vector<std::vector<std::string>> bars;
    auto* synthCmd = app.add_subcommand("synth", "Write the two-rectangles scene (and optional seed mask)");
    synthCmd->add_option("--width", synth.width, "Image width in pixels");
    synthCmd->add_option("--height", synth.height, "Image height in pixels");
    synthCmd->add_option("--hole-height", synth.scene.holeHeight, "Gap in the inner rectangle edges (0: none)");
    synthCmd->add_option("--edge-thickness", synth.scene.edgeThickness, "Outline thickness");
    synthCmd->add_option("--bar", bars, "Seed bar: LABEL CX CY W H (repeatable)")->expected(5);
    synthCmd->add_option("--out", synth.out, "Output directory");

    cli::SegmentConfig seg;
    std::string maskPath;
    auto* segCmd = app.add_subcommand("segment", "Segment an image (PGM or PNG)");
    segCmd->add_option("image", seg.image, "Input image")->required();
    segCmd->add_option("--mask", maskPath, "Seed mask PNG (blue Inside, red Outside)");
    segCmd->add_option("--out", seg.out, "Output directory");
    segCmd->add_flag("--quiet", seg.quiet, "No progress lines");
    addParamFlags(segCmd, seg.flags);

    cli::DemoConfig demo;
    std::string which = "all";
    auto* demoCmd = app.add_subcommand("demo", "Run a canned two-rectangles experiment");
    demoCmd->add_option("which", which, "no-obstacle-eps1 | no-obstacle-eps4 | one-obstacle | two-obstacles | all");
    demoCmd->add_option("--pixels", demo.pixels, "Scene size");
    demoCmd->add_option("--out", demo.out, "Output directory");
    demoCmd->add_flag("--quiet", demo.quiet, "No progress lines");
    addParamFlags(demoCmd, demo.flags);

    CLI11_PARSE(app, argc, argv);
    applyThreadEnv();

    try {
        if (*synthCmd) {
            for (const auto& t : bars) synth.bars.push_back(parseBar(t));
            return cli::cmdSynth(synth, std::cout);
        }
        if (*segCmd) {
            if (!maskPath.empty()) seg.mask = maskPath;
            return cli::cmdSegment(seg, std::cerr);
        }
        if (which == "all") {
            demo.demos = allDemos();
        } else if (auto d = parseDemo(which)) {
            demo.demos = {*d};
        } else {
            std::cerr << "unknown demo '" << which << "'\n";
            return cli::kExitError;
        }
        return cli::cmdDemo(demo, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kExitError;
    }
}
