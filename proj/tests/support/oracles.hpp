#pragma once

// Reference computations written independently of the library code they check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "seedseg/grid.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

/// Doolittle LU with partial pivoting.
inline std::vector<double> luSolve(Matrix a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::abs(a[r][k]) > std::abs(a[p][k])) p = r;
        if (a[p][k] == 0.0) throw std::runtime_error("oracle::luSolve: singular");
        std::swap(a[p], a[k]);
        std::swap(b[p], b[k]);
        for (std::size_t r = k + 1; r < n; ++r) {
            const double f = a[r][k] / a[k][k];
            a[r][k] = 0.0;
            for (std::size_t c = k + 1; c < n; ++c) a[r][c] -= f * a[k][c];
            b[r] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t c = k + 1; c < n; ++c) s -= a[k][c] * x[c];
        x[k] = s / a[k][k];
    }
    return x;
}

inline std::vector<double> multiply(const Matrix& a, std::span<const double> x) {
    std::vector<double> y(a.size(), 0.0);
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t c = 0; c < x.size(); ++c) y[r] += a[r][c] * x[c];
    return y;
}

/// Semi-implicit finite-volume step written from the scheme directly:
/// for interior (i,j)
///   u_ij - tau * Qbar_ij * sum_edges g_e (u_nb - u_ij) / (h^2 Q_e) = u_prev_ij,
/// Q_e = sqrt(eps^2 + |grad u_prev|^2) at each edge midpoint (tangential part
/// from the mean of the two adjacent central differences), Qbar the mean of the
/// four Q_e. Boundary rows: u_b - u_inward = 0, corners pair horizontally.
/// `gNode` holds g0 at nodes; edge values are two-node means.
struct Step {
    Matrix a;
    std::vector<double> b;
};

inline Step semiImplicitStep(const seedseg::GridField& u, const seedseg::GridField& gNode, double tau, double eps) {
    const auto& s = u.spec();
    const int N1 = s.N1(), N2 = s.N2();
    const double h1 = s.h1(), h2 = s.h2();
    const std::size_t n = s.nodeCount();
    Step st{Matrix(n, std::vector<double>(n, 0.0)), std::vector<double>(n, 0.0)};
    auto idx = [&](int i, int j) { return static_cast<std::size_t>(j) * (N1 + 1) + i; };
    auto U = [&](int i, int j) { return u(i, j); };
    auto G = [&](int i, int j) { return gNode(i, j); };

    for (int j = 0; j <= N2; ++j)
        for (int i = 0; i <= N1; ++i) {
            const std::size_t I = idx(i, j);
            if (i == 0 || i == N1 || j == 0 || j == N2) {
                st.a[I][I] = 1.0;
                const int ii = i == 0 ? 1 : (i == N1 ? N1 - 1 : i);
                const int jj = (i == 0 || i == N1) ? j : (j == 0 ? 1 : N2 - 1);
                st.a[I][idx(ii, jj)] = -1.0;
                continue;
            }
            // east, west, north, south neighbours
            const int di[4] = {1, -1, 0, 0};
            const int dj[4] = {0, 0, 1, -1};
            double q[4];
            for (int e = 0; e < 4; ++e) {
                const int p = i + di[e], r = j + dj[e];
                double gx, gy;
                if (dj[e] == 0) {
                    gx = (U(p, r) - U(i, j)) * di[e] / h1;
                    gy = ((U(i, j + 1) - U(i, j - 1)) + (U(p, j + 1) - U(p, j - 1))) / (4 * h2);
                } else {
                    gy = (U(p, r) - U(i, j)) * dj[e] / h2;
                    gx = ((U(i + 1, j) - U(i - 1, j)) + (U(i + 1, r) - U(i - 1, r))) / (4 * h1);
                }
                q[e] = std::sqrt(eps * eps + gx * gx + gy * gy);
            }
            const double qbar = (q[0] + q[1] + q[2] + q[3]) / 4;
            double diag = 1.0;
            for (int e = 0; e < 4; ++e) {
                const int p = i + di[e], r = j + dj[e];
                const double h = dj[e] == 0 ? h1 : h2;
                const double ge = 0.5 * (G(i, j) + G(p, r));
                const double c = tau * qbar * ge / (h * h * q[e]);
                st.a[I][idx(p, r)] = -c;
                diag += c;
            }
            st.a[I][I] = diag;
            st.b[I] = U(i, j);
        }
    return st;
}

/// Sign conditions of the box LCP  w <= u <= v,  r = Au - b:
/// r = 0 where w < u < v, r >= 0 where u = w, r <= 0 where u = v.
/// Returns the largest violation (inf if u leaves the box).
inline double kktViolation(const Matrix& a, std::span<const double> b, std::span<const double> w,
                           std::span<const double> v, std::span<const double> u, double boundTol = 1e-12) {
    const auto au = multiply(a, u);
    double worst = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double r = au[k] - b[k];
        if (u[k] < w[k] - boundTol || u[k] > v[k] + boundTol) return std::numeric_limits<double>::infinity();
        const bool lo = u[k] - w[k] <= boundTol;
        const bool hi = v[k] - u[k] <= boundTol;
        double viol = std::abs(r);
        if (lo && hi) viol = 0.0;
        else if (lo) viol = std::max(0.0, -r);
        else if (hi) viol = std::max(0.0, r);
        worst = std::max(worst, viol);
    }
    return worst;
}

/// Strictly diagonally dominant rows with non-positive off-diagonals (an M-matrix).
inline Matrix randomMMatrix(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> off(0.0, 1.0), slack(0.1, 1.0);
    Matrix a(n, std::vector<double>(n, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < n; ++c)
            if (c != r) {
                a[r][c] = -off(rng);
                sum += -a[r][c];
            }
        a[r][r] = sum + slack(rng);
    }
    return a;
}

}  // namespace oracle
