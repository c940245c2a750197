#include "seedseg/assembler.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>

#include "seedseg/errors.hpp"

namespace seedseg {

PentaSystem::PentaSystem(const GridSpec& spec)
    : center(spec.nodeCount(), 0.0),
      east(spec.nodeCount(), 0.0),
      west(spec.nodeCount(), 0.0),
      north(spec.nodeCount(), 0.0),
      south(spec.nodeCount(), 0.0),
      rhs(spec.nodeCount(), 0.0),
      spec_(spec) {}

double PentaSystem::applyRow(std::span<const double> u, std::size_t I) const noexcept {
    const std::size_t stride = static_cast<std::size_t>(spec_.nodesX());
    double acc = center[I] * u[I];
    if (east[I] != 0.0) acc += east[I] * u[I + 1];
    if (west[I] != 0.0) acc += west[I] * u[I - 1];
    if (north[I] != 0.0) acc += north[I] * u[I + stride];
    if (south[I] != 0.0) acc += south[I] * u[I - stride];
    return acc;
}

std::vector<double> PentaSystem::apply(std::span<const double> u) const {
    if (u.size() != size()) throw ShapeError("PentaSystem::apply: vector length does not match system");
    std::vector<double> out(size());
    for (std::size_t I = 0; I < size(); ++I) out[I] = applyRow(u, I);
    return out;
}

void PentaSystem::dump(std::ostream& os) const {
    char line[256];
    for (std::size_t I = 0; I < size(); ++I) {
        std::snprintf(line, sizeof line, "%zu %.17g %.17g %.17g %.17g %.17g %.17g\n", I, center[I], east[I], west[I],
                      north[I], south[I], rhs[I]);
        os << line;
    }
}

double cornerValue(const GridField& u, int i, int j, int p, int q) {
    const GridSpec& s = u.spec();
    if (std::abs(p - i) != 1 || std::abs(q - j) != 1)
        throw IndexError("cornerValue: (p,q) must be a diagonal neighbour of (i,j)");
    if (!s.contains(i, j) || !s.contains(p, q))
        throw IndexError("cornerValue: corner of (" + std::to_string(i) + "," + std::to_string(j) +
                         ") leaves the closed grid");
    return 0.25 * (u(i, j) + u(p, j) + u(i, q) + u(p, q));
}

namespace {

// Unchecked kernels shared by the public wrappers and the assembly loops.
inline double corner(const GridField& u, int i, int j, int p, int q) noexcept {
    return 0.25 * (u(i, j) + u(p, j) + u(i, q) + u(p, q));
}

// Cartesian components at the edge midpoint (the sign of the normal part is
// irrelevant for Q, but the Cartesian form is exact on linear fields).
inline EdgeGradient gradientOnEdge(const GridField& u, int i, int j, Direction dir) noexcept {
    const double h1 = u.spec().h1();
    const double h2 = u.spec().h2();
    switch (dir) {
        case Direction::East:
            return {(u(i + 1, j) - u(i, j)) / h1, (corner(u, i, j, i + 1, j + 1) - corner(u, i, j, i + 1, j - 1)) / h2};
        case Direction::West:
            return {(u(i, j) - u(i - 1, j)) / h1, (corner(u, i, j, i - 1, j + 1) - corner(u, i, j, i - 1, j - 1)) / h2};
        case Direction::North:
            return {(corner(u, i, j, i + 1, j + 1) - corner(u, i, j, i - 1, j + 1)) / h1, (u(i, j + 1) - u(i, j)) / h2};
        default:
            return {(corner(u, i, j, i + 1, j - 1) - corner(u, i, j, i - 1, j - 1)) / h1, (u(i, j) - u(i, j - 1)) / h2};
    }
}

inline double regularisedNorm(const EdgeGradient& g, double eps2) noexcept {
    return std::sqrt(eps2 + g.dx1 * g.dx1 + g.dx2 * g.dx2);
}

void requirePositive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(std::string(name) + " must be positive and finite");
}

template <bool Parallel>
PentaSystem assembleImpl(const GridField& uPrev, const EdgeMap& em, double tau, double epsilon) {
    requirePositive(tau, "time step tau");
    requirePositive(epsilon, "regularisation epsilon");
    const GridSpec& spec = uPrev.spec();
    if (!(em.spec() == spec)) throw ShapeError("assemble: edge map and level-set field live on different grids");

    PentaSystem sys(spec);
    const int N1 = spec.N1();
    const int N2 = spec.N2();
    const double eps2 = epsilon * epsilon;
    const double cx = tau / (spec.h1() * spec.h1());
    const double cy = tau / (spec.h2() * spec.h2());

#pragma omp parallel for schedule(static) if (Parallel)
    for (int j = 0; j <= N2; ++j) {
        for (int i = 0; i <= N1; ++i) {
            const std::size_t I = spec.at(i, j);
            if (!spec.isInterior(i, j)) {
                // Neumann rows; corner nodes take the horizontal condition.
                sys.center[I] = 1.0;
                if (i == 0)
                    sys.east[I] = -1.0;
                else if (i == N1)
                    sys.west[I] = -1.0;
                else if (j == 0)
                    sys.north[I] = -1.0;
                else
                    sys.south[I] = -1.0;
                continue;
            }
            const double qE = regularisedNorm(gradientOnEdge(uPrev, i, j, Direction::East), eps2);
            const double qW = regularisedNorm(gradientOnEdge(uPrev, i, j, Direction::West), eps2);
            const double qN = regularisedNorm(gradientOnEdge(uPrev, i, j, Direction::North), eps2);
            const double qS = regularisedNorm(gradientOnEdge(uPrev, i, j, Direction::South), eps2);
            const double qC = 0.25 * (qE + qN + qW + qS);

            const double aE = -cx * qC * em.edgeH(i, j) / qE;
            const double aW = -cx * qC * em.edgeH(i - 1, j) / qW;
            const double aN = -cy * qC * em.edgeV(i, j) / qN;
            const double aS = -cy * qC * em.edgeV(i, j - 1) / qS;
            sys.east[I] = aE;
            sys.west[I] = aW;
            sys.north[I] = aN;
            sys.south[I] = aS;
            sys.center[I] = 1.0 - (aE + aN + aW + aS);
            sys.rhs[I] = uPrev[I];
        }
    }
    return sys;
}

}  // namespace

EdgeGradient edgeGradient(const GridField& u, int i, int j, Direction dir) {
    if (!u.spec().isInterior(i, j))
        throw IndexError("edgeGradient: (" + std::to_string(i) + "," + std::to_string(j) + ") is not an interior node");
    return gradientOnEdge(u, i, j, dir);
}

QField buildQ(const GridField& uPrev, double epsilon) {
    requirePositive(epsilon, "regularisation epsilon");
    const GridSpec& spec = uPrev.spec();
    const std::size_t n = spec.nodeCount();
    QField q{spec, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
             std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    const double eps2 = epsilon * epsilon;
    for (int j = 1; j < spec.N2(); ++j)
        for (int i = 1; i < spec.N1(); ++i) {
            const std::size_t I = spec.at(i, j);
            q.east[I] = regularisedNorm(gradientOnEdge(uPrev, i, j, Direction::East), eps2);
            q.west[I] = regularisedNorm(gradientOnEdge(uPrev, i, j, Direction::West), eps2);
            q.north[I] = regularisedNorm(gradientOnEdge(uPrev, i, j, Direction::North), eps2);
            q.south[I] = regularisedNorm(gradientOnEdge(uPrev, i, j, Direction::South), eps2);
            q.cell[I] = 0.25 * (q.east[I] + q.north[I] + q.west[I] + q.south[I]);
        }
    return q;
}

PentaSystem assemble(const GridField& uPrev, const EdgeMap& em, double tau, double epsilon) {
    return assembleImpl<true>(uPrev, em, tau, epsilon);
}

PentaSystem assembleSerial(const GridField& uPrev, const EdgeMap& em, double tau, double epsilon) {
    return assembleImpl<false>(uPrev, em, tau, epsilon);
}

}  // namespace seedseg
