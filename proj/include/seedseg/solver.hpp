#pragma once

#include <functional>
#include <span>
#include <vector>

#include "seedseg/assembler.hpp"
#include "seedseg/grid.hpp"

namespace seedseg {

/// Bounds of magnitude >= kUnbounded are treated as absent.
inline constexpr double kUnbounded = 1e9;

/// Range bounds w <= u <= v per flat index.
struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    static Bounds unbounded(std::size_t n) { return {std::vector<double>(n, -kUnbounded), std::vector<double>(n, kUnbounded)}; }
    std::size_t size() const noexcept { return lower.size(); }
    /// Throws ShapeError on size mismatch, ParameterError where lower > upper.
    void validate(std::size_t n) const;
};

struct SolverParams {
    double omega = 1.2;
    double tol = 1e-9;
    int maxSweeps = 2000;
    /// When positive, a solve only counts as converged once the complementarity
    /// residual is also at or below this value. Zero disables the check.
    double residualTol = 0.0;

    void validate() const;
};

struct SolveReport {
    int sweeps = 0;
    /// Infinity norm of the change made by the last sweep.
    double sweepDifference = 0.0;
    /// ||Au - b||_inf over strictly interior rows (all rows for dense systems).
    double linearResidual = 0.0;
    double complementarityResidual = 0.0;
    bool converged = false;
};

struct SolveResult {
    GridField u;
    SolveReport report;
};

/// Called after every sweep with the current iterate.
using SweepObserver = std::function<void(int sweep, std::span<const double> u)>;

/// Lexicographic SOR sweeps (flat index order) until the sweep difference
/// drops below tol or maxSweeps is reached. Non-convergence is reported, not
/// thrown. Throws SolverContractError on a non-positive diagonal.
SolveResult sorSolve(const PentaSystem& sys, const GridField& u0, const SolverParams& p,
                     const SweepObserver& observer = {});

/// Projected SOR: each SOR update is clamped into [lower, upper]. u0 is
/// clamped into the bounds before the first sweep.
SolveResult psorSolve(const PentaSystem& sys, const Bounds& bounds, const GridField& u0, const SolverParams& p,
                      const SweepObserver& observer = {});

/// Max over rows of the violated sign condition of the range-bound LCP:
/// |r| for free indices, max(0,-r) at the lower bound, max(0,r) at the upper
/// bound (r = Au - b), +inf if u leaves [lower, upper]. Bound equality uses
/// the tolerance 1e-12 * (1 + |w| + |v|).
double complementarityResidual(const PentaSystem& sys, const Bounds& bounds, std::span<const double> u);
/// ||Au - b||_inf over interior rows.
double linearResidual(const PentaSystem& sys, std::span<const double> u);

// --- dense small systems (oracles and random LCP instances) -----------------------------

class DenseMatrix {
public:
    explicit DenseMatrix(std::size_t n = 0) : n_(n), a_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t r, std::size_t c) noexcept { return a_[r * n_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return a_[r * n_ + c]; }
    std::vector<double> apply(std::span<const double> u) const;

private:
    std::size_t n_;
    std::vector<double> a_;
};

DenseMatrix toDense(const PentaSystem& sys);

/// Gaussian elimination with partial pivoting. Throws std::runtime_error when singular.
std::vector<double> denseSolve(DenseMatrix A, std::vector<double> b);

struct DenseSolveResult {
    std::vector<double> u;
    SolveReport report;
};

DenseSolveResult sorSolveDense(const DenseMatrix& A, std::span<const double> b, std::span<const double> u0,
                               const SolverParams& p);
DenseSolveResult psorSolveDense(const DenseMatrix& A, std::span<const double> b, const Bounds& bounds,
                                std::span<const double> u0, const SolverParams& p);

double complementarityResidual(const DenseMatrix& A, std::span<const double> b, const Bounds& bounds,
                               std::span<const double> u);

/// Brute-force range-bound LCP: tries every assignment of each index to
/// {at lower, free, at upper}, solves the reduced system for the free set and
/// returns the first assignment satisfying every bound and sign condition.
/// n <= 20. Throws OracleFailure when nothing is consistent.
std::vector<double> denseLcpOracle(const DenseMatrix& A, std::span<const double> b, std::span<const double> lower,
                                   std::span<const double> upper);

}  // namespace seedseg
