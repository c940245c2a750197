#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "seedseg/errors.hpp"
#include "seedseg/solver.hpp"

namespace seedseg::detail {

struct NoProjection {
    double operator()(std::size_t, double x) const noexcept { return x; }
};

struct BoxProjection {
    std::span<const double> lower, upper;
    double operator()(std::size_t I, double x) const noexcept { return std::min(std::max(x, lower[I]), upper[I]); }
};

/// Shared sweep loop. `row(I, u)` returns the pair (a_II, b_I - sum_{J != I} a_IJ u_J)
/// using the current contents of u, so entries J < I already hold the new sweep.
/// `residual(u)` is only evaluated when p.residualTol > 0 and the sweep difference is below tol.
template <class RowFn, class Project, class ResidualFn>
SolveReport relaxationSweeps(std::size_t n, RowFn&& row, Project&& project, ResidualFn&& residual, std::span<double> u,
                             const SolverParams& p, const SweepObserver& observer) {
    SolveReport rep;
    const double omega = p.omega;
    for (int sweep = 1; sweep <= p.maxSweeps; ++sweep) {
        double diff = 0.0;
        for (std::size_t I = 0; I < n; ++I) {
            const auto [diag, partial] = row(I, u);
            const double old = u[I];
            const double relaxed = (1.0 - omega) * old + omega / diag * partial;
            const double next = project(I, relaxed);
            if (!std::isfinite(next)) throw SolverContractError("relaxation produced a non-finite iterate");
            diff = std::max(diff, std::abs(next - old));
            u[I] = next;
        }
        rep.sweeps = sweep;
        rep.sweepDifference = diff;
        if (observer) observer(sweep, u);
        if (diff < p.tol && (p.residualTol <= 0.0 || residual(std::span<const double>(u)) <= p.residualTol)) {
            rep.converged = true;
            break;
        }
    }
    return rep;
}

}  // namespace seedseg::detail
