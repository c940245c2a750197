#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace seedseg {

/// Node lattice over [0,L1] x [0,L2] with N1 x N2 cells, i.e. (N1+1) x (N2+1)
/// nodes including the boundary.
class GridSpec {
public:
    GridSpec(double L1, double L2, int N1, int N2);

    /// Unit square with N x N cells.
    static GridSpec unitSquare(int N) { return GridSpec(1.0, 1.0, N, N); }

    double L1() const noexcept { return L1_; }
    double L2() const noexcept { return L2_; }
    int N1() const noexcept { return N1_; }
    int N2() const noexcept { return N2_; }
    double h1() const noexcept { return h1_; }
    double h2() const noexcept { return h2_; }
    double cellVolume() const noexcept { return h1_ * h2_; }

    int nodesX() const noexcept { return N1_ + 1; }
    int nodesY() const noexcept { return N2_ + 1; }
    std::size_t nodeCount() const noexcept {
        return static_cast<std::size_t>(N1_ + 1) * static_cast<std::size_t>(N2_ + 1);
    }

    bool contains(int i, int j) const noexcept { return i >= 0 && i <= N1_ && j >= 0 && j <= N2_; }
    bool isInterior(int i, int j) const noexcept { return i > 0 && i < N1_ && j > 0 && j < N2_; }

    /// Row-major flat index with i fastest: I = j*(N1+1) + i. Throws IndexError.
    std::size_t flatten(int i, int j) const;
    /// Unchecked variant for hot loops.
    std::size_t at(int i, int j) const noexcept {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(N1_ + 1) + static_cast<std::size_t>(i);
    }
    std::pair<int, int> unflatten(std::size_t I) const;

    /// (i*h1, j*h2). Throws IndexError.
    std::pair<double, double> nodePosition(int i, int j) const;

    friend bool operator==(const GridSpec& a, const GridSpec& b) noexcept {
        return a.L1_ == b.L1_ && a.L2_ == b.L2_ && a.N1_ == b.N1_ && a.N2_ == b.N2_;
    }

private:
    double L1_, L2_;
    int N1_, N2_;
    double h1_, h2_;
};

/// Scalar value per node of a GridSpec, flattened with GridSpec::at.
class GridField {
public:
    explicit GridField(const GridSpec& spec, double fill = 0.0);
    /// Throws ShapeError when values.size() != spec.nodeCount() and
    /// std::invalid_argument on non-finite values.
    GridField(const GridSpec& spec, std::vector<double> values);

    const GridSpec& spec() const noexcept { return spec_; }
    std::size_t size() const noexcept { return values_.size(); }

    double operator()(int i, int j) const noexcept { return values_[spec_.at(i, j)]; }
    double& operator()(int i, int j) noexcept { return values_[spec_.at(i, j)]; }
    double operator[](std::size_t I) const noexcept { return values_[I]; }
    double& operator[](std::size_t I) noexcept { return values_[I]; }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    bool allFinite() const noexcept;

private:
    GridSpec spec_;
    std::vector<double> values_;
};

/// Infinity norm of a - b. Throws ShapeError on mismatched specs.
double maxAbsDiff(const GridField& a, const GridField& b);

}  // namespace seedseg
