#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "seedseg/edgemap.hpp"
#include "seedseg/grid.hpp"

namespace seedseg {

enum class Direction { East, West, North, South };  // i+1, i-1, j+1, j-1

inline constexpr std::array<Direction, 4> kDirections{Direction::East, Direction::West, Direction::North,
                                                      Direction::South};

/// Five-point system over the closed grid. Every row is stored as five
/// coefficients; boundary rows carry {1 on the diagonal, -1 towards the
/// inward neighbour, rhs 0} and leave the remaining slots zero.
class PentaSystem {
public:
    explicit PentaSystem(const GridSpec& spec);

    const GridSpec& spec() const noexcept { return spec_; }
    std::size_t size() const noexcept { return spec_.nodeCount(); }

    std::vector<double> center, east, west, north, south, rhs;

    bool isBoundaryRow(std::size_t I) const noexcept {
        const auto [i, j] = spec_.unflatten(I);
        return !spec_.isInterior(i, j);
    }

    /// (A u)_I for the row I.
    double applyRow(std::span<const double> u, std::size_t I) const noexcept;
    std::vector<double> apply(std::span<const double> u) const;

    /// One line per row: I center east west north south rhs (%.17g).
    void dump(std::ostream& os) const;

private:
    GridSpec spec_;
};

/// Tichonov-regularised gradient norms on the four edges of every interior
/// finite volume, plus their mean. Boundary nodes hold zeros.
struct QField {
    GridSpec spec;
    std::vector<double> east, west, north, south, cell;

    double edge(std::size_t I, Direction d) const noexcept {
        switch (d) {
            case Direction::East: return east[I];
            case Direction::West: return west[I];
            case Direction::North: return north[I];
            default: return south[I];
        }
    }
};

/// Average of u over the four nodes (i,j), (p,j), (i,q), (p,q): the value at
/// the corner of volume (i,j) shared with the diagonal neighbour (p,q).
/// Requires |p-i| = |q-j| = 1 and all four nodes inside the closed grid.
double cornerValue(const GridField& u, int i, int j, int p, int q);

struct EdgeGradient {
    double dx1 = 0.0;
    double dx2 = 0.0;
};

/// Gradient at the midpoint of the edge between interior node (i,j) and its
/// neighbour in `dir`: normal part by a two-node difference, tangential part
/// by differencing corner values.
EdgeGradient edgeGradient(const GridField& u, int i, int j, Direction dir);

QField buildQ(const GridField& uPrev, double epsilon);

/// Semi-implicit system for one time step from u_prev. OpenMP-parallel over rows.
PentaSystem assemble(const GridField& uPrev, const EdgeMap& em, double tau, double epsilon);
/// Single-threaded reference; bit-identical to assemble.
PentaSystem assembleSerial(const GridField& uPrev, const EdgeMap& em, double tau, double epsilon);

}  // namespace seedseg
