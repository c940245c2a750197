#include "seedseg/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "seedseg/errors.hpp"
#include "sor_kernel.hpp"

namespace seedseg {

void Bounds::validate(std::size_t n) const {
    if (lower.size() != n || upper.size() != n)
        throw ShapeError("bounds have " + std::to_string(lower.size()) + "/" + std::to_string(upper.size()) +
                         " entries, system has " + std::to_string(n));
    for (std::size_t I = 0; I < n; ++I)
        if (!(lower[I] <= upper[I]))
            throw ParameterError("lower bound exceeds upper bound at index " + std::to_string(I));
}

void SolverParams::validate() const {
    if (!(omega > 0.0 && omega < 2.0)) throw ParameterError("relaxation omega must lie in (0, 2)");
    if (!(tol > 0.0)) throw ParameterError("solver tolerance must be positive");
    if (maxSweeps < 1) throw ParameterError("maxSweeps must be positive");
    if (!(residualTol >= 0.0)) throw ParameterError("residual tolerance must be non-negative");
}

namespace {

struct PentaRows {
    const PentaSystem& sys;
    int N1, N2;
    std::size_t stride;

    explicit PentaRows(const PentaSystem& s)
        : sys(s), N1(s.spec().N1()), N2(s.spec().N2()), stride(static_cast<std::size_t>(s.spec().nodesX())) {}

    double offDiagonal(std::size_t I, std::span<const double> u) const noexcept {
        const int i = static_cast<int>(I % stride);
        const int j = static_cast<int>(I / stride);
        double acc = 0.0;
        if (i < N1) acc += sys.east[I] * u[I + 1];
        if (i > 0) acc += sys.west[I] * u[I - 1];
        if (j < N2) acc += sys.north[I] * u[I + stride];
        if (j > 0) acc += sys.south[I] * u[I - stride];
        return acc;
    }

    std::pair<double, double> operator()(std::size_t I, std::span<const double> u) const noexcept {
        return {sys.center[I], sys.rhs[I] - offDiagonal(I, u)};
    }

    double residual(std::size_t I, std::span<const double> u) const noexcept {
        return sys.center[I] * u[I] + offDiagonal(I, u) - sys.rhs[I];
    }
};

void checkPenta(const PentaSystem& sys) {
    const GridSpec& s = sys.spec();
    for (int j = 0; j <= s.N2(); ++j)
        for (int i = 0; i <= s.N1(); ++i) {
            const std::size_t I = s.at(i, j);
            if (!(sys.center[I] > 0.0))
                throw SolverContractError("non-positive diagonal at row " + std::to_string(I));
            if ((i == s.N1() && sys.east[I] != 0.0) || (i == 0 && sys.west[I] != 0.0) ||
                (j == s.N2() && sys.north[I] != 0.0) || (j == 0 && sys.south[I] != 0.0))
                throw SolverContractError("row " + std::to_string(I) + " couples to a node outside the grid");
        }
}

struct DenseRows {
    const DenseMatrix& A;
    std::span<const double> b;

    double offDiagonal(std::size_t I, std::span<const double> u) const noexcept {
        double acc = 0.0;
        for (std::size_t J = 0; J < A.size(); ++J)
            if (J != I) acc += A(I, J) * u[J];
        return acc;
    }
    std::pair<double, double> operator()(std::size_t I, std::span<const double> u) const noexcept {
        return {A(I, I), b[I] - offDiagonal(I, u)};
    }
    double residual(std::size_t I, std::span<const double> u) const noexcept {
        return A(I, I) * u[I] + offDiagonal(I, u) - b[I];
    }
};

double boundTolerance(double w, double v) noexcept { return 1e-12 * (1.0 + std::abs(w) + std::abs(v)); }

double lcpViolation(double r, double u, double w, double v) noexcept {
    const double t = boundTolerance(w, v);
    if (u < w - t || u > v + t) return std::numeric_limits<double>::infinity();
    const bool atLower = std::abs(u - w) <= t;
    const bool atUpper = std::abs(u - v) <= t;
    if (atLower && atUpper) return 0.0;  // degenerate w == v: any sign is admissible
    if (atLower) return std::max(0.0, -r);
    if (atUpper) return std::max(0.0, r);
    return std::abs(r);
}

template <class Rows>
double complementarityImpl(const Rows& rows, std::size_t n, const Bounds& bounds, std::span<const double> u) {
    double worst = 0.0;
    for (std::size_t I = 0; I < n; ++I)
        worst = std::max(worst, lcpViolation(rows.residual(I, u), u[I], bounds.lower[I], bounds.upper[I]));
    return worst;
}

void checkLength(std::size_t got, std::size_t want, const char* what) {
    if (got != want)
        throw ShapeError(std::string(what) + " has length " + std::to_string(got) + ", expected " + std::to_string(want));
}

}  // namespace

double linearResidual(const PentaSystem& sys, std::span<const double> u) {
    checkLength(u.size(), sys.size(), "solution");
    const PentaRows rows(sys);
    const GridSpec& s = sys.spec();
    double worst = 0.0;
    for (int j = 1; j < s.N2(); ++j)
        for (int i = 1; i < s.N1(); ++i) worst = std::max(worst, std::abs(rows.residual(s.at(i, j), u)));
    return worst;
}

double complementarityResidual(const PentaSystem& sys, const Bounds& bounds, std::span<const double> u) {
    checkLength(u.size(), sys.size(), "solution");
    bounds.validate(sys.size());
    return complementarityImpl(PentaRows(sys), sys.size(), bounds, u);
}

SolveResult sorSolve(const PentaSystem& sys, const GridField& u0, const SolverParams& p, const SweepObserver& observer) {
    p.validate();
    if (!(u0.spec() == sys.spec())) throw ShapeError("sorSolve: initial guess and system live on different grids");
    checkPenta(sys);
    GridField u = u0;
    const PentaRows rows(sys);
    const Bounds free = Bounds::unbounded(sys.size());
    const auto lcp = [&](std::span<const double> v) { return complementarityImpl(rows, sys.size(), free, v); };
    SolveReport rep = detail::relaxationSweeps(sys.size(), rows, detail::NoProjection{}, lcp, u.values(), p, observer);
    rep.linearResidual = linearResidual(sys, u.values());
    rep.complementarityResidual = lcp(u.values());
    return {std::move(u), rep};
}

SolveResult psorSolve(const PentaSystem& sys, const Bounds& bounds, const GridField& u0, const SolverParams& p,
                      const SweepObserver& observer) {
    p.validate();
    if (!(u0.spec() == sys.spec())) throw ShapeError("psorSolve: initial guess and system live on different grids");
    bounds.validate(sys.size());
    checkPenta(sys);
    GridField u = u0;
    const detail::BoxProjection project{bounds.lower, bounds.upper};
    for (std::size_t I = 0; I < u.size(); ++I) u[I] = project(I, u[I]);
    const PentaRows rows(sys);
    const auto lcp = [&](std::span<const double> v) { return complementarityImpl(rows, sys.size(), bounds, v); };
    SolveReport rep = detail::relaxationSweeps(sys.size(), rows, project, lcp, u.values(), p, observer);
    rep.linearResidual = linearResidual(sys, u.values());
    rep.complementarityResidual = lcp(u.values());
    return {std::move(u), rep};
}

// --- dense ----------------------------------------------------------------------------

std::vector<double> DenseMatrix::apply(std::span<const double> u) const {
    checkLength(u.size(), n_, "vector");
    std::vector<double> out(n_, 0.0);
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c) out[r] += (*this)(r, c) * u[c];
    return out;
}

DenseMatrix toDense(const PentaSystem& sys) {
    const GridSpec& s = sys.spec();
    DenseMatrix A(sys.size());
    const std::size_t stride = static_cast<std::size_t>(s.nodesX());
    for (int j = 0; j <= s.N2(); ++j)
        for (int i = 0; i <= s.N1(); ++i) {
            const std::size_t I = s.at(i, j);
            A(I, I) = sys.center[I];
            if (i < s.N1()) A(I, I + 1) = sys.east[I];
            if (i > 0) A(I, I - 1) = sys.west[I];
            if (j < s.N2()) A(I, I + stride) = sys.north[I];
            if (j > 0) A(I, I - stride) = sys.south[I];
        }
    return A;
}

std::vector<double> denseSolve(DenseMatrix A, std::vector<double> b) {
    const std::size_t n = A.size();
    checkLength(b.size(), n, "right-hand side");
    std::vector<std::size_t> perm(n);
    for (std::size_t k = 0; k < n; ++k) perm[k] = k;
    double scale = 0.0;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) scale = std::max(scale, std::abs(A(r, c)));
    const double tiny = std::max(scale, 1.0) * 1e-14;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::abs(A(r, k)) > std::abs(A(piv, k))) piv = r;
        if (std::abs(A(piv, k)) <= tiny) throw std::runtime_error("denseSolve: matrix is singular");
        if (piv != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(A(k, c), A(piv, c));
            std::swap(b[k], b[piv]);
        }
        for (std::size_t r = k + 1; r < n; ++r) {
            const double f = A(r, k) / A(k, k);
            if (f == 0.0) continue;
            for (std::size_t c = k; c < n; ++c) A(r, c) -= f * A(k, c);
            b[r] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double acc = b[k];
        for (std::size_t c = k + 1; c < n; ++c) acc -= A(k, c) * x[c];
        x[k] = acc / A(k, k);
    }
    return x;
}

namespace {

void checkDenseDiagonal(const DenseMatrix& A) {
    for (std::size_t I = 0; I < A.size(); ++I)
        if (!(A(I, I) > 0.0)) throw SolverContractError("non-positive diagonal at row " + std::to_string(I));
}

}  // namespace

DenseSolveResult sorSolveDense(const DenseMatrix& A, std::span<const double> b, std::span<const double> u0,
                               const SolverParams& p) {
    p.validate();
    checkLength(b.size(), A.size(), "right-hand side");
    checkLength(u0.size(), A.size(), "initial guess");
    checkDenseDiagonal(A);
    std::vector<double> u(u0.begin(), u0.end());
    const DenseRows rows{A, b};
    const Bounds free = Bounds::unbounded(A.size());
    const auto lcp = [&](std::span<const double> v) { return complementarityImpl(rows, A.size(), free, v); };
    SolveReport rep = detail::relaxationSweeps(A.size(), rows, detail::NoProjection{}, lcp, std::span<double>(u), p, {});
    rep.complementarityResidual = lcp(u);
    rep.linearResidual = rep.complementarityResidual;
    return {std::move(u), rep};
}

DenseSolveResult psorSolveDense(const DenseMatrix& A, std::span<const double> b, const Bounds& bounds,
                                std::span<const double> u0, const SolverParams& p) {
    p.validate();
    checkLength(b.size(), A.size(), "right-hand side");
    checkLength(u0.size(), A.size(), "initial guess");
    bounds.validate(A.size());
    checkDenseDiagonal(A);
    const detail::BoxProjection project{bounds.lower, bounds.upper};
    std::vector<double> u(u0.begin(), u0.end());
    for (std::size_t I = 0; I < u.size(); ++I) u[I] = project(I, u[I]);
    const DenseRows rows{A, b};
    const auto lcp = [&](std::span<const double> v) { return complementarityImpl(rows, A.size(), bounds, v); };
    SolveReport rep = detail::relaxationSweeps(A.size(), rows, project, lcp, std::span<double>(u), p, {});
    double lin = 0.0;
    for (std::size_t I = 0; I < A.size(); ++I) lin = std::max(lin, std::abs(rows.residual(I, u)));
    rep.linearResidual = lin;
    rep.complementarityResidual = lcp(u);
    return {std::move(u), rep};
}

double complementarityResidual(const DenseMatrix& A, std::span<const double> b, const Bounds& bounds,
                               std::span<const double> u) {
    checkLength(b.size(), A.size(), "right-hand side");
    checkLength(u.size(), A.size(), "solution");
    bounds.validate(A.size());
    return complementarityImpl(DenseRows{A, b}, A.size(), bounds, u);
}

std::vector<double> denseLcpOracle(const DenseMatrix& A, std::span<const double> b, std::span<const double> lower,
                                   std::span<const double> upper) {
    const std::size_t n = A.size();
    if (n > 20) throw std::invalid_argument("denseLcpOracle: dimension above 20");
    checkLength(b.size(), n, "right-hand side");
    checkLength(lower.size(), n, "lower bound");
    checkLength(upper.size(), n, "upper bound");

    enum State : int { AtLower = 0, Free = 1, AtUpper = 2 };
    std::vector<int> state(n, AtLower);
    std::vector<double> u(n);
    double scale = 1.0;
    for (std::size_t r = 0; r < n; ++r) {
        scale = std::max(scale, std::abs(b[r]));
        for (std::size_t c = 0; c < n; ++c) scale = std::max(scale, std::abs(A(r, c)));
    }
    const double tol = 1e-10 * scale;

    const auto allowed = [&](std::size_t I, int s) {
        if (s == AtLower) return lower[I] > -kUnbounded;
        if (s == AtUpper) return upper[I] < kUnbounded;
        return true;
    };

    // Odometer over {lower, free, upper}^n; the free-everywhere assignment is tried first.
    std::fill(state.begin(), state.end(), Free);
    std::vector<int> order{Free, AtLower, AtUpper};
    std::vector<int> digit(n, 0);
    for (;;) {
        bool skip = false;
        for (std::size_t I = 0; I < n && !skip; ++I) {
            state[I] = order[digit[I]];
            skip = !allowed(I, state[I]);
        }
        if (!skip) {
            std::vector<std::size_t> freeIdx;
            for (std::size_t I = 0; I < n; ++I) {
                if (state[I] == AtLower) u[I] = lower[I];
                else if (state[I] == AtUpper) u[I] = upper[I];
                else freeIdx.push_back(I);
            }
            bool ok = true;
            if (!freeIdx.empty()) {
                DenseMatrix Aff(freeIdx.size());
                std::vector<double> rhs(freeIdx.size());
                for (std::size_t r = 0; r < freeIdx.size(); ++r) {
                    double acc = b[freeIdx[r]];
                    for (std::size_t J = 0; J < n; ++J)
                        if (state[J] != Free) acc -= A(freeIdx[r], J) * u[J];
                    rhs[r] = acc;
                    for (std::size_t c = 0; c < freeIdx.size(); ++c) Aff(r, c) = A(freeIdx[r], freeIdx[c]);
                }
                try {
                    const auto x = denseSolve(Aff, rhs);
                    for (std::size_t r = 0; r < freeIdx.size(); ++r) u[freeIdx[r]] = x[r];
                } catch (const std::runtime_error&) {
                    ok = false;
                }
            }
            for (std::size_t I = 0; I < n && ok; ++I) {
                double r = -b[I];
                for (std::size_t J = 0; J < n; ++J) r += A(I, J) * u[J];
                if (state[I] == Free) ok = u[I] >= lower[I] - tol && u[I] <= upper[I] + tol;
                else if (state[I] == AtLower) ok = r >= -tol;
                else ok = r <= tol;
            }
            if (ok) return u;
        }
        std::size_t k = 0;
        while (k < n && ++digit[k] == 3) digit[k++] = 0;
        if (k == n) break;
    }
    throw OracleFailure("denseLcpOracle: no consistent active set");
}

}  // namespace seedseg
