#include "seedseg/contour.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <map>

namespace seedseg {

double Polyline::length() const noexcept {
    double len = 0.0;
    for (std::size_t k = 1; k < points.size(); ++k)
        len += std::hypot(points[k].x1 - points[k - 1].x1, points[k].x2 - points[k - 1].x2);
    if (closed && points.size() > 2)
        len += std::hypot(points.front().x1 - points.back().x1, points.front().x2 - points.back().x2);
    return len;
}

namespace {

// Global ids for lattice edges: horizontal (i,j)-(i+1,j) first, then vertical (i,j)-(i,j+1).
struct EdgeIds {
    const GridSpec& s;
    std::size_t horizontal(int i, int j) const { return static_cast<std::size_t>(j) * s.N1() + i; }
    std::size_t vertical(int i, int j) const {
        return static_cast<std::size_t>(s.N1()) * s.nodesY() + static_cast<std::size_t>(j) * s.nodesX() + i;
    }
};

}  // namespace

std::vector<Polyline> extractContour(const GridField& u, double level) {
    const GridSpec& s = u.spec();
    const EdgeIds ids{s};
    std::map<std::size_t, Point2> vertex;
    std::map<std::size_t, std::vector<std::size_t>> adjacent;

    const auto crossing = [&](int ia, int ja, int ib, int jb) {
        const double va = u(ia, ja), vb = u(ib, jb);
        const double t = (level - va) / (vb - va);
        return Point2{(ia + t * (ib - ia)) * s.h1(), (ja + t * (jb - ja)) * s.h2()};
    };
    const auto link = [&](std::size_t a, std::size_t b) {
        adjacent[a].push_back(b);
        adjacent[b].push_back(a);
    };

    for (int j = 0; j < s.N2(); ++j) {
        for (int i = 0; i < s.N1(); ++i) {
            // corners: 0 (i,j), 1 (i+1,j), 2 (i+1,j+1), 3 (i,j+1)
            const std::array<double, 4> v{u(i, j), u(i + 1, j), u(i + 1, j + 1), u(i, j + 1)};
            std::array<bool, 4> in{};
            int nIn = 0;
            for (int k = 0; k < 4; ++k) nIn += (in[k] = v[k] < level);
            if (nIn == 0 || nIn == 4) continue;

            // cell edges: 0 bottom (0-1), 1 right (1-2), 2 top (3-2), 3 left (0-3)
            const std::array<std::size_t, 4> eid{ids.horizontal(i, j), ids.vertical(i + 1, j), ids.horizontal(i, j + 1),
                                                 ids.vertical(i, j)};
            const std::array<bool, 4> cut{in[0] != in[1], in[1] != in[2], in[3] != in[2], in[0] != in[3]};
            if (cut[0] && !vertex.count(eid[0])) vertex[eid[0]] = crossing(i, j, i + 1, j);
            if (cut[1] && !vertex.count(eid[1])) vertex[eid[1]] = crossing(i + 1, j, i + 1, j + 1);
            if (cut[2] && !vertex.count(eid[2])) vertex[eid[2]] = crossing(i, j + 1, i + 1, j + 1);
            if (cut[3] && !vertex.count(eid[3])) vertex[eid[3]] = crossing(i, j, i, j + 1);

            if (cut[0] && cut[1] && cut[2] && cut[3]) {
                const bool centreIn = 0.25 * (v[0] + v[1] + v[2] + v[3]) < level;
                // Isolate the corners whose side differs from the centre.
                const bool isolateEven = in[0] != centreIn;  // corners 0 and 2
                if (isolateEven) {
                    link(eid[0], eid[3]);  // around corner 0
                    link(eid[1], eid[2]);  // around corner 2
                } else {
                    link(eid[0], eid[1]);  // around corner 1
                    link(eid[2], eid[3]);  // around corner 3
                }
                continue;
            }
            std::array<std::size_t, 2> ends{};
            int n = 0;
            for (int k = 0; k < 4; ++k)
                if (cut[k]) ends[n++] = eid[k];
            link(ends[0], ends[1]);
        }
    }

    std::vector<Polyline> out;
    std::map<std::size_t, bool> visited;
    const auto walk = [&](std::size_t start) {
        Polyline pl;
        std::size_t prev = static_cast<std::size_t>(-1);
        std::size_t cur = start;
        for (;;) {
            visited[cur] = true;
            pl.points.push_back(vertex.at(cur));
            const auto& nb = adjacent[cur];
            std::size_t next = static_cast<std::size_t>(-1);
            for (std::size_t cand : nb)
                if (cand != prev && !visited[cand]) {
                    next = cand;
                    break;
                }
            if (next == static_cast<std::size_t>(-1)) {
                pl.closed = nb.size() == 2 && std::find(nb.begin(), nb.end(), start) != nb.end() && pl.points.size() > 2;
                break;
            }
            prev = cur;
            cur = next;
        }
        out.push_back(std::move(pl));
    };

    for (const auto& [id, nb] : adjacent)
        if (nb.size() == 1 && !visited[id]) walk(id);
    for (const auto& [id, nb] : adjacent)
        if (!visited[id]) walk(id);
    return out;
}

ComponentSummary interiorComponents(const GridField& u) {
    const GridSpec& s = u.spec();
    ComponentSummary sum;
    sum.labels.assign(s.nodeCount(), -1);
    std::deque<std::pair<int, int>> queue;
    for (int j = 0; j <= s.N2(); ++j)
        for (int i = 0; i <= s.N1(); ++i) {
            if (!(u(i, j) < 0.0) || sum.labels[s.at(i, j)] >= 0) continue;
            const int id = sum.count++;
            std::size_t nodes = 0;
            sum.labels[s.at(i, j)] = id;
            queue.emplace_back(i, j);
            while (!queue.empty()) {
                const auto [ci, cj] = queue.front();
                queue.pop_front();
                ++nodes;
                constexpr std::array<std::array<int, 2>, 4> steps{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
                for (const auto& d : steps) {
                    const int ni = ci + d[0], nj = cj + d[1];
                    if (!s.contains(ni, nj)) continue;
                    const std::size_t N = s.at(ni, nj);
                    if (u[N] < 0.0 && sum.labels[N] < 0) {
                        sum.labels[N] = id;
                        queue.emplace_back(ni, nj);
                    }
                }
            }
            sum.areas.push_back(static_cast<double>(nodes) * s.cellVolume());
        }
    return sum;
}

}  // namespace seedseg
