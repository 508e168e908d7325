#pragma once

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "gridembed/core.hpp"
#include "gridembed/grid.hpp"

namespace gridembed {

/// A grid whose points are the Cartesian product of per-dimension lists of
/// global host coordinates. Consecutive points along a dimension may be more
/// than one host step apart; the connecting host path (the subdivision
/// segment) realizes the abstract edge.
///
/// Both plain subgrids (contiguous axes) and channels (sparse axes in the
/// first two dimensions) are AxisGrids, so the routing algorithms run on
/// either without special cases.
struct AxisGrid {
    GridSpec root;
    std::vector<std::vector<int>> axes; // sorted global coordinate values

    AxisGrid() = default;
    AxisGrid(GridSpec root_, std::vector<std::vector<int>> axes_)
        : root(std::move(root_)), axes(std::move(axes_)) {
        require(axes.size() == static_cast<size_t>(root.dim()), "AxisGrid: axis count mismatch");
    }

    static AxisGrid of_box(const SubGrid& m) {
        std::vector<std::vector<int>> axes(m.dim());
        for (int i = 0; i < m.dim(); ++i)
            for (int x = m.lo(i); x <= m.hi(i); ++x) axes[i].push_back(x);
        return AxisGrid(m.root, std::move(axes));
    }

    int dim() const { return static_cast<int>(axes.size()); }
    int extent(int i) const { return static_cast<int>(axes[i].size()); } // 0-based dim

    std::int64_t point_count() const {
        std::int64_t n = 1;
        for (int i = 0; i < dim(); ++i) n *= extent(i);
        return n;
    }

    bool empty() const {
        for (int i = 0; i < dim(); ++i)
            if (axes[i].empty()) return true;
        return false;
    }

    /// Abstract coordinates are 1-based indices into the axes.
    Coord concrete(const Coord& a) const {
        Coord v(dim());
        for (int i = 0; i < dim(); ++i) v[i] = axes[i][a[i] - 1];
        return v;
    }

    /// Inverse of concrete(); fails if some coordinate is not an axis value.
    Coord abstract_of(const Coord& v) const {
        Coord a(dim());
        for (int i = 0; i < dim(); ++i) {
            auto it = std::lower_bound(axes[i].begin(), axes[i].end(), v[i]);
            require(it != axes[i].end() && *it == v[i], "AxisGrid: coordinate off the axis lattice");
            a[i] = static_cast<int>(it - axes[i].begin()) + 1;
        }
        return a;
    }

    NodeId concrete_id(const Coord& a) const { return root.index_of(concrete(a)); }

    /// Expands the abstract walk a0,a1,... (consecutive entries differ by one
    /// step along one dimension) into the concrete host node path.
    std::vector<NodeId> expand_walk(const std::vector<Coord>& walk) const {
        std::vector<NodeId> path;
        if (walk.empty()) return path;
        Coord cur = concrete(walk.front());
        path.push_back(root.index_of(cur));
        for (size_t t = 1; t < walk.size(); ++t) {
            const Coord& a = walk[t - 1];
            const Coord& b = walk[t];
            int d = -1;
            for (int i = 0; i < dim(); ++i) {
                if (a[i] != b[i]) {
                    require(d == -1 && std::abs(a[i] - b[i]) == 1,
                            "AxisGrid: walk entries must be adjacent");
                    d = i;
                }
            }
            require(d >= 0, "AxisGrid: repeated walk entry");
            Coord nxt = concrete(b);
            int step = nxt[d] > cur[d] ? 1 : -1;
            while (cur[d] != nxt[d]) {
                cur[d] += step;
                path.push_back(root.index_of(cur));
            }
        }
        return path;
    }

    /// Sum over dimensions of the concrete spans; 2x this bounds the length
    /// of any single routed path on this grid.
    std::int64_t span_sum() const {
        std::int64_t s = 0;
        for (int i = 0; i < dim(); ++i) {
            if (axes[i].empty()) continue;
            s += axes[i].back() - axes[i].front() + 1;
        }
        return s;
    }

    /// All concrete edges used by subdivision segments of this grid: for each
    /// pair of consecutive axis values along dimension i, the host edges
    /// between them at every combination of the other axes.
    std::vector<EdgeKey> segment_edges() const {
        std::vector<EdgeKey> out;
        if (empty()) return out;
        for (int i = 0; i < dim(); ++i) {
            if (extent(i) < 2) continue;
            // enumerate combinations of the other axes
            Coord a(dim(), 1);
            while (true) {
                for (int t = 0; t + 1 < extent(i); ++t) {
                    Coord v = concrete(a);
                    for (int x = axes[i][t]; x < axes[i][t + 1]; ++x) {
                        Coord u = v, w = v;
                        u[i] = x;
                        w[i] = x + 1;
                        out.push_back(edge_key(root.index_of(u), root.index_of(w)));
                    }
                }
                int j = 0;
                for (; j < dim(); ++j) {
                    if (j == i) continue;
                    if (a[j] < extent(j)) { ++a[j]; break; }
                    a[j] = 1;
                }
                if (j == dim()) break;
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
};

} // namespace gridembed
