#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "seedseg/assembler.hpp"
#include "seedseg/contour.hpp"
#include "seedseg/edgemap.hpp"
#include "seedseg/grid.hpp"
#include "seedseg/ingest.hpp"
#include "seedseg/solver.hpp"

namespace seedseg {

struct Circle {
    Point2 center;
    double radius = 0.0;
};

/// Obstacles for the level-set function: w <= u <= v.
struct ConstraintFields {
    GridField w;
    GridField v;
};

struct SegmentationParams {
    double epsilon = 1e-4;
    EdgeStopParams edgeStop{};
    /// Mollifier width; h1 when unset.
    std::optional<double> sigma;
    double truncationRadius = 4.0;
    /// Time step; h1*h2 when unset.
    std::optional<double> tau;
    SolverParams solver{};
    /// Unless solver.residualTol is set, steps must also reach a complementarity
    /// residual of residualFactor * solver.tol to count as converged. 0 disables.
    double residualFactor = 100.0;
    /// Stop at this time (the last step is shortened to land on it exactly).
    std::optional<double> finalTime;
    /// Stop after this many steps. With neither finalTime nor steps, kDefaultSteps.
    std::optional<int> steps;
    double steadyTol = 1e-6;
    /// Obstacle magnitude on seed nodes; 0.05*min(L1,L2) when unset.
    std::optional<double> delta;
    double bigM = 1e6;
    /// Initial curve; when unset the signed distance to the Inside seeds is used,
    /// or, without Inside seeds, a centred circle of radius sqrt(0.08)*min(L1,L2).
    std::optional<Circle> initCircle;

    static constexpr int kDefaultSteps = 100;

    /// Throws ParameterError naming the first invalid field.
    void validate(const GridSpec& spec) const;
    double tauFor(const GridSpec& spec) const { return tau.value_or(spec.h1() * spec.h2()); }
    double sigmaFor(const GridSpec& spec) const { return sigma.value_or(spec.h1()); }
    SolverParams stepSolver() const;
    double deltaFor(const GridSpec& spec) const { return delta.value_or(0.05 * std::min(spec.L1(), spec.L2())); }
};

/// u = |x - center| - radius at every node.
GridField initialCircle(Point2 center, double radius, const GridSpec& spec);
/// Signed Euclidean distance to the boundary of the Inside-seed node set
/// (negative on Inside nodes). Throws std::invalid_argument without Inside nodes.
GridField signedDistanceToSeeds(const SeedMask& mask);
GridField initialLevelSet(const SeedMask& mask, const SegmentationParams& p);

/// v = -delta on Inside nodes (+bigM elsewhere), w = +delta on Outside nodes (-bigM elsewhere).
ConstraintFields buildConstraints(const SeedMask& mask, double delta, double bigM);
Bounds toBounds(const ConstraintFields& cf);
GridField clampToConstraints(const GridField& u, const ConstraintFields& cf);

enum class StepSolver { Psor, Sor };

struct StepResult {
    GridField u;
    SolveReport report;
};

/// One semi-implicit step: clamp u_prev into the obstacles, assemble, solve.
StepResult timeStep(const GridField& uPrev, const EdgeMap& em, const ConstraintFields& cf, const SegmentationParams& p);
StepResult timeStep(const GridField& uPrev, const EdgeMap& em, const ConstraintFields& cf, const SegmentationParams& p,
                    double tau, StepSolver solver = StepSolver::Psor);

struct Snapshot {
    int step = 0;
    double time = 0.0;
    GridField u;
    std::vector<Polyline> contour;
    ComponentSummary components;
    SolveReport report;
};

Snapshot makeSnapshot(int step, double time, GridField u, const SolveReport& report);

struct StepRecord {
    int step = 0;
    double time = 0.0;
    /// max |u_k - u_{k-1}|
    double change = 0.0;
    SolveReport report;
};

enum class RunStatus {
    HorizonReached,  // finalTime or step count exhausted
    Steady,          // change per step fell below steadyTol
    Failed,          // a step threw; history holds the completed steps
};

const char* toString(RunStatus s) noexcept;

struct RunResult {
    Snapshot final;
    std::vector<StepRecord> history;
    RunStatus status = RunStatus::HorizonReached;
    std::string error;
    /// Every step's solver reported convergence.
    bool allConverged = true;
    EdgeMap edgeMap;
};

/// Receives a snapshot after every step. Must not retain references past the call.
using RunObserver = std::function<void(const Snapshot&)>;

struct RunOptions {
    /// Unconstrained variant for comparison: plain SOR, no obstacles.
    StepSolver solver = StepSolver::Psor;
    /// Polled before every step; returning true aborts the run as Failed.
    std::function<bool()> cancelled;
};

/// Full segmentation: edge map once, obstacles from the mask, u_ini clamped
/// into them, then steps until the horizon or a steady state.
RunResult run(const GridField& I0, const SeedMask& mask, const SegmentationParams& p, const RunObserver& observer = {},
              const RunOptions& options = {});

}  // namespace seedseg
