#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "gridembed/core.hpp"

namespace gridembed {

/// Coordinates are 1-based: node x of a grid with sides (l1,...,ld) has
/// x[i] in [1, l_i]. Dimension arguments in the public API are 1-based too.
using Coord = std::vector<int>;

/// Side lengths of a d-dimensional grid.
struct GridSpec {
    std::vector<int> dims;

    GridSpec() = default;
    explicit GridSpec(std::vector<int> d) : dims(std::move(d)) {
        for (int l : dims) require(l >= 1, "GridSpec: side lengths must be >= 1");
    }

    int dim() const { return static_cast<int>(dims.size()); }

    std::int64_t node_count() const {
        std::int64_t n = 1;
        for (int l : dims) n *= l;
        return n;
    }

    double aspect_ratio() const {
        int lo = *std::min_element(dims.begin(), dims.end());
        int hi = *std::max_element(dims.begin(), dims.end());
        return static_cast<double>(hi) / lo;
    }

    bool contains(const Coord& v) const {
        if (static_cast<int>(v.size()) != dim()) return false;
        for (int i = 0; i < dim(); ++i)
            if (v[i] < 1 || v[i] > dims[i]) return false;
        return true;
    }

    /// Mixed-radix packing of a coordinate into a NodeId.
    NodeId index_of(const Coord& v) const {
        NodeId id = 0;
        for (int i = dim() - 1; i >= 0; --i) id = id * dims[i] + (v[i] - 1);
        return id;
    }

    Coord coord_of(NodeId id) const {
        Coord v(dim());
        for (int i = 0; i < dim(); ++i) {
            v[i] = static_cast<int>(id % dims[i]) + 1;
            id /= dims[i];
        }
        return v;
    }
};

/// Parses "l1xl2x...xld", e.g. "8x8x4".
inline GridSpec parse_grid_spec(const std::string& text) {
    std::vector<int> dims;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, 'x')) {
        require(!token.empty(), "grid spec: empty component in '" + text + "'");
        for (char c : token) require(c >= '0' && c <= '9', "grid spec: bad character in '" + text + "'");
        dims.push_back(std::stoi(token));
    }
    require(!dims.empty(), "grid spec: no dimensions in '" + text + "'");
    return GridSpec(dims);
}

inline std::string format_grid_spec(const GridSpec& g) {
    std::string s;
    for (int i = 0; i < g.dim(); ++i) {
        if (i) s += 'x';
        s += std::to_string(g.dims[i]);
    }
    return s;
}

/// project(v, j) = (pi_j(v), the coordinate with position j dropped).
inline std::pair<int, Coord> project(const Coord& v, int j) {
    require(j >= 1 && j <= static_cast<int>(v.size()), "project: dimension out of range");
    Coord rest;
    rest.reserve(v.size() - 1);
    for (int i = 0; i < static_cast<int>(v.size()); ++i)
        if (i != j - 1) rest.push_back(v[i]);
    return {v[j - 1], rest};
}

/// An axis-aligned box inside a root host grid. Nodes carry global (root)
/// coordinates; local coordinate i ranges over [origin[i]+1, origin[i]+dims[i]].
struct SubGrid {
    GridSpec root;
    std::vector<int> origin; // 0-based offset per dimension
    GridSpec dims;

    SubGrid() = default;
    SubGrid(GridSpec root_, std::vector<int> origin_, GridSpec dims_)
        : root(std::move(root_)), origin(std::move(origin_)), dims(std::move(dims_)) {
        require(origin.size() == static_cast<size_t>(root.dim()) && dims.dim() == root.dim(),
                "SubGrid: dimension mismatch");
        for (int i = 0; i < root.dim(); ++i)
            require(origin[i] >= 0 && origin[i] + dims.dims[i] <= root.dims[i],
                    "SubGrid: box exceeds root grid");
    }

    static SubGrid whole(const GridSpec& g) {
        return SubGrid(g, std::vector<int>(g.dim(), 0), g);
    }

    int dim() const { return root.dim(); }
    std::int64_t node_count() const { return dims.node_count(); }
    int lo(int i) const { return origin[i] + 1; }          // 0-based dim index
    int hi(int i) const { return origin[i] + dims.dims[i]; }

    bool contains_global(const Coord& v) const {
        for (int i = 0; i < dim(); ++i)
            if (v[i] < lo(i) || v[i] > hi(i)) return false;
        return true;
    }

    /// Full degree 2d inside the box, i.e. strictly inside along every dimension.
    bool is_interior(const Coord& v) const {
        for (int i = 0; i < dim(); ++i)
            if (v[i] <= lo(i) || v[i] >= hi(i)) return false;
        return true;
    }

    std::int64_t interior_count() const {
        std::int64_t n = 1;
        for (int i = 0; i < dim(); ++i) n *= std::max(0, dims.dims[i] - 2);
        return n;
    }

    int degree(const Coord& v) const {
        int deg = 0;
        for (int i = 0; i < dim(); ++i) {
            if (v[i] > lo(i)) ++deg;
            if (v[i] < hi(i)) ++deg;
        }
        return deg;
    }

    /// Visits every node of the box in lexicographic order of global coords.
    void for_each_node(const std::function<void(const Coord&)>& fn) const {
        Coord v(dim());
        for (int i = 0; i < dim(); ++i) v[i] = lo(i);
        while (true) {
            fn(v);
            int i = 0;
            for (; i < dim(); ++i) {
                if (v[i] < hi(i)) { ++v[i]; break; }
                v[i] = lo(i);
            }
            if (i == dim()) return;
        }
    }

    /// Yields each undirected grid edge of the box exactly once with its
    /// 1-based dimension label.
    void for_each_edge(const std::function<void(const Coord&, const Coord&, int)>& fn) const {
        for_each_node([&](const Coord& v) {
            for (int i = 0; i < dim(); ++i) {
                if (v[i] < hi(i)) {
                    Coord u = v;
                    ++u[i];
                    fn(v, u, i + 1);
                }
            }
        });
    }

    std::int64_t edge_count() const {
        std::int64_t total = 0;
        for (int i = 0; i < dim(); ++i) {
            std::int64_t e = std::max(0, dims.dims[i] - 1);
            for (int j = 0; j < dim(); ++j)
                if (j != i) e *= dims.dims[j];
            total += e;
        }
        return total;
    }
};

} // namespace gridembed
