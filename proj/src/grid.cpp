#include "seedseg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seedseg/errors.hpp"

namespace seedseg {

GridSpec::GridSpec(double L1, double L2, int N1, int N2)
    : L1_(L1), L2_(L2), N1_(N1), N2_(N2), h1_(0.0), h2_(0.0) {
    if (N1 < 2 || N2 < 2)
        throw ParameterError("grid needs at least 2 cells per axis, got " + std::to_string(N1) + "x" +
                             std::to_string(N2));
    if (!(L1 > 0.0) || !(L2 > 0.0) || !std::isfinite(L1) || !std::isfinite(L2))
        throw ParameterError("grid edge lengths must be positive and finite");
    h1_ = L1 / N1;
    h2_ = L2 / N2;
}

std::size_t GridSpec::flatten(int i, int j) const {
    if (!contains(i, j))
        throw IndexError("node (" + std::to_string(i) + "," + std::to_string(j) + ") outside grid " +
                         std::to_string(N1_) + "x" + std::to_string(N2_));
    return at(i, j);
}

std::pair<int, int> GridSpec::unflatten(std::size_t I) const {
    if (I >= nodeCount()) throw IndexError("flat index " + std::to_string(I) + " outside grid");
    const auto stride = static_cast<std::size_t>(N1_ + 1);
    return {static_cast<int>(I % stride), static_cast<int>(I / stride)};
}

std::pair<double, double> GridSpec::nodePosition(int i, int j) const {
    if (!contains(i, j))
        throw IndexError("node (" + std::to_string(i) + "," + std::to_string(j) + ") outside grid");
    return {i * h1_, j * h2_};
}

GridField::GridField(const GridSpec& spec, double fill) : spec_(spec), values_(spec.nodeCount(), fill) {
    if (!std::isfinite(fill)) throw std::invalid_argument("grid field fill value must be finite");
}

GridField::GridField(const GridSpec& spec, std::vector<double> values) : spec_(spec), values_(std::move(values)) {
    if (values_.size() != spec_.nodeCount())
        throw ShapeError("field has " + std::to_string(values_.size()) + " values, grid has " +
                         std::to_string(spec_.nodeCount()) + " nodes");
    if (!allFinite()) throw std::invalid_argument("grid field contains non-finite values");
}

bool GridField::allFinite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double maxAbsDiff(const GridField& a, const GridField& b) {
    if (!(a.spec() == b.spec())) throw ShapeError("maxAbsDiff: fields live on different grids");
    double m = 0.0;
    const auto va = a.values();
    const auto vb = b.values();
    for (std::size_t I = 0; I < va.size(); ++I) m = std::max(m, std::abs(va[I] - vb[I]));
    return m;
}

}  // namespace seedseg
