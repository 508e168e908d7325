#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "gridembed/axis_grid.hpp"
#include "gridembed/core.hpp"
#include "gridembed/grid.hpp"

namespace gridembed {

/// Level-w lattice membership for one global coordinate: x = 2^{w-1} (mod 2^w).
/// Level 0 admits every coordinate.
inline bool level_coord(int x, int w) {
    if (w == 0) return true;
    return x % (1 << w) == (1 << (w - 1));
}

/// Grid points of the level-w channel of a subgrid: interior nodes whose
/// first two coordinates lie on the level-w lattice. Returned as an AxisGrid
/// (sparse axes along dimensions 1 and 2, interior ranges elsewhere).
inline AxisGrid channel_points(const SubGrid& m, int w) {
    require(m.dim() >= 2, "channel_points: need dimension >= 2");
    std::vector<std::vector<int>> axes(m.dim());
    for (int i = 0; i < m.dim(); ++i) {
        for (int x = m.lo(i) + 1; x <= m.hi(i) - 1; ++x)
            if (i >= 2 || level_coord(x, w)) axes[i].push_back(x);
    }
    return AxisGrid(m.root, std::move(axes));
}

/// Grid points of the combined channel for levels (w_lo, w_hi): interior
/// nodes whose first two coordinates lie on either lattice.
inline AxisGrid combined_channel_points(const SubGrid& m, int w_lo, int w_hi) {
    require(m.dim() >= 2, "combined_channel_points: need dimension >= 2");
    std::vector<std::vector<int>> axes(m.dim());
    for (int i = 0; i < m.dim(); ++i) {
        for (int x = m.lo(i) + 1; x <= m.hi(i) - 1; ++x)
            if (i >= 2 || level_coord(x, w_lo) || level_coord(x, w_hi)) axes[i].push_back(x);
    }
    return AxisGrid(m.root, std::move(axes));
}

/// Section size across dimension i (1-based): the number of fibers obtained
/// by dropping coordinate i, i.e. the product of the other extents.
inline std::int64_t section_size(const AxisGrid& points, int i) {
    std::int64_t s = 1;
    for (int j = 0; j < points.dim(); ++j)
        if (j != i - 1) s *= points.extent(j);
    return s;
}

/// The direction of a channel: the dimension (1-based) minimizing the section
/// size, equivalently a dimension of maximum extent. Ties break low.
inline int channel_direction(const AxisGrid& points) {
    int best = 1;
    for (int i = 2; i <= points.dim(); ++i)
        if (points.extent(i - 1) > points.extent(best - 1)) best = i;
    return best;
}

namespace detail {

inline Coord unflatten_except(std::int64_t key, const AxisGrid& g, int skip1, int skip2) {
    Coord a(g.dim(), 1);
    for (int i = g.dim() - 1; i >= 0; --i) {
        if (i == skip1 || i == skip2) continue;
        a[i] = static_cast<int>(key % g.extent(i)) + 1;
        key /= g.extent(i);
    }
    return a;
}

} // namespace detail

/// Assigns `count` items to channel points so that the per-fiber load equals
/// the ceiling average across every requested dimension (one or two, 1-based).
///
/// With two dimensions the items sweep the remaining axes fastest and both
/// requested axes in lockstep, the discrete version of filling a diagonal
/// hyperplane between the two dimensions.
inline std::vector<Coord> uniform_assign(std::int64_t count, const AxisGrid& points, int dim_a,
                                         int dim_b = -1) {
    if (count == 0) return {};
    require(!points.empty(), "uniform_assign: empty channel point set");
    const int i = dim_a - 1;
    const int j = dim_b < 0 ? -1 : dim_b - 1;
    std::vector<Coord> out;
    out.reserve(count);
    if (j < 0 || j == i) {
        std::int64_t fibers = section_size(points, dim_a);
        for (std::int64_t t = 0; t < count; ++t) {
            Coord a = detail::unflatten_except(t % fibers, points, i, -1);
            a[i] = static_cast<int>((t / fibers) % points.extent(i)) + 1;
            out.push_back(std::move(a));
        }
    } else {
        std::int64_t rest = 1;
        for (int d = 0; d < points.dim(); ++d)
            if (d != i && d != j) rest *= points.extent(d);
        for (std::int64_t t = 0; t < count; ++t) {
            Coord a = detail::unflatten_except(t % rest, points, i, j);
            std::int64_t u = t / rest;
            a[i] = static_cast<int>(u % points.extent(i)) + 1;
            a[j] = static_cast<int>(u % points.extent(j)) + 1;
            out.push_back(std::move(a));
        }
    }
    return out;
}

/// Max fiber load of an assignment across dimension i (1-based).
inline std::int64_t fiber_load(const std::vector<Coord>& assigned, const AxisGrid& points, int i) {
    std::map<std::int64_t, std::int64_t> loads;
    std::int64_t best = 0;
    for (const Coord& a : assigned) {
        std::int64_t key = 0;
        for (int d = 0; d < points.dim(); ++d)
            if (d != i - 1) key = key * points.extent(d) + (a[d] - 1);
        best = std::max(best, ++loads[key]);
    }
    return best;
}

} // namespace gridembed
