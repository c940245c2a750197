#include "seedseg/edgemap.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

#include "seedseg/errors.hpp"

namespace seedseg {

const char* toString(EdgeStopForm form) noexcept {
    return form == EdgeStopForm::Rational ? "rational" : "inverse-sqrt";
}

EdgeStopForm parseEdgeStopForm(const std::string& s) {
    if (s == "rational") return EdgeStopForm::Rational;
    if (s == "inverse-sqrt" || s == "inversesqrt" || s == "sqrt") return EdgeStopForm::InverseSqrt;
    throw ParameterError("unknown edge-stop form '" + s + "' (expected rational|inverse-sqrt)");
}

GaussianKernels makeGaussianKernels(double sigma, double h, double truncationRadius) {
    if (!(sigma > 0.0)) throw ParameterError("mollifier sigma must be positive");
    if (!(truncationRadius >= 2.0)) throw ParameterError("mollifier truncation radius must be >= 2");
    GaussianKernels k;
    k.halfWidth = std::max(1, static_cast<int>(std::ceil(truncationRadius * sigma / h)));
    const int R = k.halfWidth;
    k.smooth.resize(2 * R + 1);
    k.deriv.resize(2 * R + 1);

    double sum = 0.0;
    double moment = 0.0;
    for (int m = -R; m <= R; ++m) {
        const double x = m * h;
        const double g = std::exp(-x * x / (2.0 * sigma * sigma));
        k.smooth[m + R] = g;
        k.deriv[m + R] = -m * g;
        sum += g;
        moment += static_cast<double>(m) * m * g;
    }
    // Collapsed Gaussian (sigma << h): fall back to the central difference.
    if (moment == 0.0) {
        std::fill(k.deriv.begin(), k.deriv.end(), 0.0);
        k.deriv[R - 1] = 1.0;
        k.deriv[R + 1] = -1.0;
        moment = 2.0;
    }
    for (double& v : k.smooth) v /= sum;
    // (f * d)(x_i) = sum_m d[m] f(x_i - m h); a ramp f = x gives -h * sum_m m d[m].
    for (double& v : k.deriv) v /= h * moment;
    return k;
}

namespace {

inline int reflect(int k, int n) {
    const int period = 2 * (n - 1);
    k %= period;
    if (k < 0) k += period;
    return k < n ? k : period - k;
}

// One line of a separable pass: dst[t] = sum_m kern[m] * src[reflect(t - m)],
// accumulated in +/-m pairs so antisymmetric kernels cancel exactly on constants.
inline void convolveLine(const double* src, double* dst, int n, std::ptrdiff_t stride, const std::vector<double>& kern,
                         int R) {
    for (int t = 0; t < n; ++t) {
        double acc = kern[R] * src[t * stride];
        for (int m = 1; m <= R; ++m)
            acc += kern[R + m] * src[reflect(t - m, n) * stride] + kern[R - m] * src[reflect(t + m, n) * stride];
        dst[t * stride] = acc;
    }
}

struct Passes {
    GaussianKernels kx, ky;
    bool degenerate = false;
};

Passes makePasses(const GridSpec& spec, const MollifierParams& m) {
    Passes p{makeGaussianKernels(m.sigma, spec.h1(), m.truncationRadius),
             makeGaussianKernels(m.sigma, spec.h2(), m.truncationRadius), false};
    p.degenerate = m.sigma < 0.1 * std::min(spec.h1(), spec.h2());
    if (p.degenerate)
        std::clog << "seedseg: warning: mollifier sigma " << m.sigma
                  << " is below a tenth of the mesh step; smoothing is effectively off\n";
    return p;
}

template <bool Parallel>
SmoothedGradient gradientImpl(const GridField& I0, const MollifierParams& m) {
    const GridSpec& spec = I0.spec();
    const Passes p = makePasses(spec, m);
    const int nx = spec.nodesX();
    const int ny = spec.nodesY();
    const double* in = I0.values().data();

    GridField tx(spec), ty(spec), gx(spec), gy(spec);
    double* txp = tx.values().data();
    double* typ = ty.values().data();
    double* gxp = gx.values().data();
    double* gyp = gy.values().data();

    // Pass 1: derivative along x on rows, derivative along y on columns.
#pragma omp parallel for schedule(static) if (Parallel)
    for (int j = 0; j < ny; ++j)
        convolveLine(in + static_cast<std::ptrdiff_t>(j) * nx, txp + static_cast<std::ptrdiff_t>(j) * nx, nx, 1,
                     p.kx.deriv, p.kx.halfWidth);
#pragma omp parallel for schedule(static) if (Parallel)
    for (int i = 0; i < nx; ++i) convolveLine(in + i, typ + i, ny, nx, p.ky.deriv, p.ky.halfWidth);

    // Pass 2: smoothing across.
#pragma omp parallel for schedule(static) if (Parallel)
    for (int i = 0; i < nx; ++i) convolveLine(txp + i, gxp + i, ny, nx, p.ky.smooth, p.ky.halfWidth);
#pragma omp parallel for schedule(static) if (Parallel)
    for (int j = 0; j < ny; ++j)
        convolveLine(typ + static_cast<std::ptrdiff_t>(j) * nx, gyp + static_cast<std::ptrdiff_t>(j) * nx, nx, 1,
                     p.kx.smooth, p.kx.halfWidth);

    return {std::move(gx), std::move(gy), p.degenerate};
}

}  // namespace

SmoothedGradient smoothedGradient(const GridField& I0, const MollifierParams& m) { return gradientImpl<true>(I0, m); }

SmoothedGradient smoothedGradientSerial(const GridField& I0, const MollifierParams& m) {
    return gradientImpl<false>(I0, m);
}

double edgeStop(double s, const EdgeStopParams& p) {
    const double q = 1.0 + p.lambda * s * s;
    return p.form == EdgeStopForm::Rational ? 1.0 / q : 1.0 / std::sqrt(q);
}

EdgeMap edgeMapFromNodes(GridField g0) {
    const GridSpec spec = g0.spec();
    EdgeMap em{std::move(g0), {}, {}, false};
    em.g0EdgeH.resize(static_cast<std::size_t>(spec.N1()) * spec.nodesY());
    em.g0EdgeV.resize(static_cast<std::size_t>(spec.nodesX()) * spec.N2());
    for (int j = 0; j <= spec.N2(); ++j)
        for (int i = 0; i < spec.N1(); ++i)
            em.g0EdgeH[static_cast<std::size_t>(j) * spec.N1() + i] = 0.5 * (em.g0(i, j) + em.g0(i + 1, j));
    for (int j = 0; j < spec.N2(); ++j)
        for (int i = 0; i <= spec.N1(); ++i)
            em.g0EdgeV[static_cast<std::size_t>(j) * spec.nodesX() + i] = 0.5 * (em.g0(i, j) + em.g0(i, j + 1));
    return em;
}

EdgeMap buildEdgeMap(const GridField& I0, const MollifierParams& m, const EdgeStopParams& p) {
    if (!(p.lambda > 0.0)) throw ParameterError("edge-stop lambda must be positive");
    const SmoothedGradient grad = smoothedGradient(I0, m);
    GridField g0(I0.spec());
    for (std::size_t I = 0; I < g0.size(); ++I) g0[I] = edgeStop(std::hypot(grad.gx[I], grad.gy[I]), p);
    EdgeMap em = edgeMapFromNodes(std::move(g0));
    em.degenerateKernel = grad.degenerateKernel;
    return em;
}

EdgeMap uniformEdgeMap(const GridSpec& spec) { return edgeMapFromNodes(GridField(spec, 1.0)); }

}  // namespace seedseg
