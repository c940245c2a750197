#include "seedseg/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "seedseg/errors.hpp"

namespace seedseg {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ParameterError(what);
}

}  // namespace

void SegmentationParams::validate(const GridSpec& spec) const {
    require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon must be positive");
    require(edgeStop.lambda > 0.0 && std::isfinite(edgeStop.lambda), "lambda must be positive");
    require(sigmaFor(spec) > 0.0, "sigma must be positive");
    require(truncationRadius >= 2.0, "truncation radius must be at least 2");
    require(tauFor(spec) > 0.0 && std::isfinite(tauFor(spec)), "tau must be positive");
    solver.validate();
    require(residualFactor >= 0.0 && std::isfinite(residualFactor), "residual factor must be non-negative");
    require(!finalTime || (*finalTime > 0.0 && std::isfinite(*finalTime)), "final time must be positive");
    require(!steps || *steps > 0, "step count must be positive");
    require(steadyTol >= 0.0, "steady tolerance must be non-negative");
    require(deltaFor(spec) > 0.0, "delta must be positive");
    require(bigM > deltaFor(spec), "bigM must exceed delta");
    require(bigM < kUnbounded, "bigM must stay below the unbounded sentinel");
    require(!initCircle || initCircle->radius > 0.0, "initial circle radius must be positive");
}

SolverParams SegmentationParams::stepSolver() const {
    SolverParams sp = solver;
    if (sp.residualTol == 0.0) sp.residualTol = residualFactor * sp.tol;
    return sp;
}

GridField initialCircle(Point2 center, double radius, const GridSpec& spec) {
    if (!(radius > 0.0)) throw ParameterError("initial circle radius must be positive");
    GridField u(spec);
    for (int j = 0; j <= spec.N2(); ++j)
        for (int i = 0; i <= spec.N1(); ++i)
            u(i, j) = std::hypot(i * spec.h1() - center.x1, j * spec.h2() - center.x2) - radius;
    return u;
}

GridField signedDistanceToSeeds(const SeedMask& mask) {
    const GridSpec& s = mask.spec();
    const auto inside = [&](int i, int j) { return mask(i, j) == SeedLabel::Inside; };
    std::vector<Point2> inFront, outFront;
    for (int j = 0; j <= s.N2(); ++j)
        for (int i = 0; i <= s.N1(); ++i) {
            const bool here = inside(i, j);
            bool border = false;
            for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}})
                if (s.contains(i + di, j + dj) && inside(i + di, j + dj) != here) border = true;
            if (border) (here ? inFront : outFront).push_back({i * s.h1(), j * s.h2()});
        }
    if (mask.count(SeedLabel::Inside) == 0) throw std::invalid_argument("signedDistanceToSeeds: mask has no Inside node");

    // Nodes on either side of the interface sit half a step off the zero level.
    const double half = 0.5 * std::min(s.h1(), s.h2());
    GridField u(s);
    for (int j = 0; j <= s.N2(); ++j)
        for (int i = 0; i <= s.N1(); ++i) {
            const bool here = inside(i, j);
            const auto& front = here ? outFront : inFront;
            double best = std::numeric_limits<double>::infinity();
            for (const Point2& q : front) best = std::min(best, std::hypot(i * s.h1() - q.x1, j * s.h2() - q.x2));
            if (front.empty()) best = s.L1() + s.L2();  // every node is Inside
            u(i, j) = here ? -(best - half) : best - half;
        }
    return u;
}

GridField initialLevelSet(const SeedMask& mask, const SegmentationParams& p) {
    const GridSpec& s = mask.spec();
    if (p.initCircle) return initialCircle(p.initCircle->center, p.initCircle->radius, s);
    if (mask.count(SeedLabel::Inside) > 0) return signedDistanceToSeeds(mask);
    return initialCircle({0.5 * s.L1(), 0.5 * s.L2()}, std::sqrt(0.08) * std::min(s.L1(), s.L2()), s);
}

ConstraintFields buildConstraints(const SeedMask& mask, double delta, double bigM) {
    if (!(delta > 0.0)) throw ParameterError("constraint delta must be positive");
    if (!(bigM > delta)) throw ParameterError("constraint bigM must exceed delta");
    const GridSpec& s = mask.spec();
    ConstraintFields cf{GridField(s, -bigM), GridField(s, bigM)};
    for (std::size_t I = 0; I < s.nodeCount(); ++I) {
        const SeedLabel l = mask[I];
        if (l == SeedLabel::Inside) cf.v[I] = -delta;
        if (l == SeedLabel::Outside) cf.w[I] = delta;
        if (!(cf.w[I] < cf.v[I])) {
            const auto [i, j] = s.unflatten(I);
            throw ConstraintConflictError("node (" + std::to_string(i) + "," + std::to_string(j) +
                                          ") is constrained both inside and outside");
        }
    }
    return cf;
}

Bounds toBounds(const ConstraintFields& cf) {
    const auto w = cf.w.values();
    const auto v = cf.v.values();
    return {std::vector<double>(w.begin(), w.end()), std::vector<double>(v.begin(), v.end())};
}

GridField clampToConstraints(const GridField& u, const ConstraintFields& cf) {
    if (!(u.spec() == cf.w.spec())) throw ShapeError("level set and constraints live on different grids");
    GridField out = u;
    for (std::size_t I = 0; I < out.size(); ++I) out[I] = std::min(std::max(out[I], cf.w[I]), cf.v[I]);
    return out;
}

StepResult timeStep(const GridField& uPrev, const EdgeMap& em, const ConstraintFields& cf, const SegmentationParams& p) {
    return timeStep(uPrev, em, cf, p, p.tauFor(uPrev.spec()));
}

StepResult timeStep(const GridField& uPrev, const EdgeMap& em, const ConstraintFields& cf, const SegmentationParams& p,
                    double tau, StepSolver solver) {
    if (solver == StepSolver::Sor) {
        const PentaSystem sys = assemble(uPrev, em, tau, p.epsilon);
        auto r = sorSolve(sys, uPrev, p.stepSolver());
        return {std::move(r.u), r.report};
    }
    const GridField start = clampToConstraints(uPrev, cf);
    const PentaSystem sys = assemble(start, em, tau, p.epsilon);
    auto r = psorSolve(sys, toBounds(cf), start, p.stepSolver());
    return {std::move(r.u), r.report};
}

Snapshot makeSnapshot(int step, double time, GridField u, const SolveReport& report) {
    auto contour = extractContour(u);
    auto components = interiorComponents(u);
    return Snapshot{step, time, std::move(u), std::move(contour), std::move(components), report};
}

const char* toString(RunStatus s) noexcept {
    switch (s) {
        case RunStatus::HorizonReached: return "horizon";
        case RunStatus::Steady: return "steady";
        default: return "failed";
    }
}

RunResult run(const GridField& I0, const SeedMask& mask, const SegmentationParams& p, const RunObserver& observer,
              const RunOptions& options) {
    const GridSpec& spec = I0.spec();
    if (!(mask.spec() == spec)) throw ShapeError("run: seed mask and image field live on different grids");
    p.validate(spec);

    EdgeMap em = buildEdgeMap(I0, {p.sigmaFor(spec), p.truncationRadius}, p.edgeStop);
    const ConstraintFields cf = buildConstraints(mask, p.deltaFor(spec), p.bigM);
    GridField u = clampToConstraints(initialLevelSet(mask, p), cf);

    const double tau = p.tauFor(spec);
    int planned = p.steps.value_or(SegmentationParams::kDefaultSteps);
    if (p.finalTime) {
        planned = std::max(1, static_cast<int>(std::ceil(*p.finalTime / tau - 1e-9)));
        if (p.steps) planned = std::min(planned, *p.steps);
    }

    RunResult result{makeSnapshot(0, 0.0, u, SolveReport{}), {}, RunStatus::HorizonReached, {}, true, std::move(em)};
    result.history.reserve(static_cast<std::size_t>(std::min(planned, 100000)));
    double time = 0.0;
    SolveReport last{};
    int step = 0;
    for (int k = 1; k <= planned; ++k) {
        if (options.cancelled && options.cancelled()) {
            result.status = RunStatus::Failed;
            result.error = "run cancelled";
            break;
        }
        const bool finalShort = p.finalTime && k == planned && !p.steps.has_value();
        const double dt = finalShort ? *p.finalTime - (k - 1) * tau : tau;
        StepResult r{GridField(spec), {}};
        try {
            r = timeStep(u, result.edgeMap, cf, p, dt, options.solver);
        } catch (const std::exception& e) {
            result.status = RunStatus::Failed;
            result.error = "step " + std::to_string(k) + ": " + e.what();
            break;
        }
        const double change = maxAbsDiff(r.u, u);
        time = finalShort ? *p.finalTime : k * tau;
        step = k;
        last = r.report;
        result.allConverged = result.allConverged && r.report.converged;
        result.history.push_back({k, time, change, r.report});
        u = std::move(r.u);
        if (observer) observer(makeSnapshot(k, time, u, last));
        if (change < p.steadyTol) {
            result.status = RunStatus::Steady;
            break;
        }
    }
    result.final = makeSnapshot(step, time, std::move(u), last);
    return result;
}

}  // namespace seedseg
