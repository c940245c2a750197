#pragma once

#include <string>
#include <vector>

#include "seedseg/grid.hpp"

namespace seedseg {

/// Gaussian mollifier. sigma is in domain units; the kernel is cut off at
/// truncationRadius * sigma.
struct MollifierParams {
    double sigma = 0.0;
    double truncationRadius = 4.0;
};

enum class EdgeStopForm {
    Rational,     // 1 / (1 + lambda s^2)
    InverseSqrt,  // 1 / sqrt(1 + lambda s^2)
};

struct EdgeStopParams {
    double lambda = 100.0;
    EdgeStopForm form = EdgeStopForm::InverseSqrt;
};

const char* toString(EdgeStopForm form) noexcept;
EdgeStopForm parseEdgeStopForm(const std::string& s);

struct SmoothedGradient {
    GridField gx;
    GridField gy;
    /// sigma below a tenth of the mesh step: the kernel collapses to a central difference.
    bool degenerateKernel = false;
};

/// Sampled 1-D kernels on a mesh with step h. `smooth` sums to 1; `deriv` is
/// antisymmetric and scaled so that it differentiates a linear ramp exactly.
/// Both have 2*halfWidth+1 taps, index halfWidth is the centre.
struct GaussianKernels {
    int halfWidth = 0;
    std::vector<double> smooth;
    std::vector<double> deriv;
};

GaussianKernels makeGaussianKernels(double sigma, double h, double truncationRadius);

/// grad(G_sigma) * I0 by separable convolution with mirror reflection at the
/// boundary nodes. OpenMP-parallel over rows/columns.
SmoothedGradient smoothedGradient(const GridField& I0, const MollifierParams& m);
/// Single-threaded reference; bit-identical to smoothedGradient.
SmoothedGradient smoothedGradientSerial(const GridField& I0, const MollifierParams& m);

double edgeStop(double s, const EdgeStopParams& p);

/// g0 at nodes plus the two-node averages on finite-volume edges.
struct EdgeMap {
    GridField g0;
    /// Edge between (i,j) and (i+1,j), stored at j*N1 + i.
    std::vector<double> g0EdgeH;
    /// Edge between (i,j) and (i,j+1), stored at j*(N1+1) + i.
    std::vector<double> g0EdgeV;
    bool degenerateKernel = false;

    const GridSpec& spec() const noexcept { return g0.spec(); }
    double edgeH(int i, int j) const noexcept { return g0EdgeH[static_cast<std::size_t>(j) * spec().N1() + i]; }
    double edgeV(int i, int j) const noexcept { return g0EdgeV[static_cast<std::size_t>(j) * spec().nodesX() + i]; }
};

/// Edge map from precomputed node values of g0.
EdgeMap edgeMapFromNodes(GridField g0);
EdgeMap buildEdgeMap(const GridField& I0, const MollifierParams& m, const EdgeStopParams& p);
/// g0 == 1 everywhere (no image term).
EdgeMap uniformEdgeMap(const GridSpec& spec);

}  // namespace seedseg
