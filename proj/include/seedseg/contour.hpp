#pragma once

#include <vector>

#include "seedseg/grid.hpp"
#include "seedseg/ingest.hpp"

namespace seedseg {

struct Polyline {
    std::vector<Point2> points;
    bool closed = false;

    double length() const noexcept;
};

/// Marching squares on the node lattice. A node counts as inside when
/// u < level; crossings are linearly interpolated on cell edges; saddle cells
/// are resolved by the sign of the cell-centre average. Segments are chained
/// into polylines; open chains end on the domain boundary.
std::vector<Polyline> extractContour(const GridField& u, double level = 0.0);

/// 4-connected components of {u < 0}.
struct ComponentSummary {
    int count = 0;
    /// node count * h1 * h2, in discovery order (lexicographic first node).
    std::vector<double> areas;
    /// Component id per node, -1 where u >= 0.
    std::vector<int> labels;
};

ComponentSummary interiorComponents(const GridField& u);

}  // namespace seedseg
