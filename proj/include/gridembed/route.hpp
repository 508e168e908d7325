#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "gridembed/axis_grid.hpp"
#include "gridembed/coloring.hpp"
#include "gridembed/core.hpp"
#include "gridembed/embedding.hpp"
#include "gridembed/euler.hpp"
#include "gridembed/graph.hpp"
#include "gridembed/routing.hpp"

namespace gridembed {

/// A request in abstract coordinates of an AxisGrid.
struct AbstractRequest {
    std::int64_t id;
    Coord s;
    Coord t;
};

struct RouteStats {
    int p = 0; ///< max out-multiplicity of the top-level projected routing graph
    int q = 0; ///< max in-multiplicity of the same projection
};

namespace detail {

/// Loop-erasure: keeps the first occurrence of every node, cutting cycles.
/// The result is a simple abstract path with the walk's endpoints.
inline std::vector<Coord> erase_loops(const std::vector<Coord>& walk) {
    std::vector<Coord> out;
    std::map<Coord, size_t> at;
    for (const Coord& v : walk) {
        auto it = at.find(v);
        if (it != at.end()) {
            while (out.size() > it->second + 1) {
                at.erase(out.back());
                out.pop_back();
            }
        } else {
            at[v] = out.size();
            out.push_back(v);
        }
    }
    return out;
}

inline std::int64_t flatten_except(const Coord& a, const AxisGrid& g, int skip1, int skip2) {
    std::int64_t key = 0;
    for (int i = 0; i < g.dim(); ++i) {
        if (i == skip1 || i == skip2) continue;
        key = key * g.extent(i) + (a[i] - 1);
    }
    return key;
}

/// Recursive slice router shared by the permutation and p-q algorithms.
///
/// `order` lists the dimensions still to be consumed; requests differ from
/// their targets only in those dimensions. Each level splits the requests
/// into groups, sends group g to the slice at abstract position g+1 of the
/// leading dimension, recurses inside the slice, and finally attaches the
/// leading-dimension runs from the endpoints to the slice (source run first).
///
/// `vlen` gives per-dimension virtual side lengths: the number of slices and
/// grouping arity come from vlen, which may be smaller than the grid extent.
/// For plain grids vlen equals the extents.
///
/// `permutation_mode` selects the splitting rule: proper coloring of
/// the projection (permutation routing, one color class per slice) versus
/// color/round-robin grouping into vlen[order[0]] groups (general routing).
inline void route_slices(std::vector<AbstractRequest>& reqs, const AxisGrid& grid,
                         const std::vector<int>& order, const std::vector<int>& vlen,
                         size_t level, bool permutation_mode,
                         std::map<std::int64_t, std::vector<Coord>>& walks) {
    if (reqs.empty()) return;
    const int prim = order[level];

    if (level + 1 == order.size()) {
        // One dimension left: route on the line.
        for (auto& r : reqs) {
            std::vector<Coord> walk;
            Coord cur = r.s;
            walk.push_back(cur);
            int step = r.t[prim] > r.s[prim] ? 1 : -1;
            while (cur[prim] != r.t[prim]) {
                cur[prim] += step;
                walk.push_back(cur);
            }
            walks[r.id] = std::move(walk);
        }
        return;
    }

    const int slices = vlen[prim];
    std::vector<std::vector<AbstractRequest>> groups(slices);

    if (permutation_mode) {
        // Color so that within a class no two requests share a projected
        // source or target; the class count is at most the fiber size.
        // Processing requests by leading coordinate keeps classes coherent,
        // which shortens the runs attached below.
        std::map<std::int64_t, int> lkey, rkey;
        BipartiteMultigraph b;
        for (const auto& r : reqs) {
            auto ks = flatten_except(r.s, grid, prim, -1);
            auto kt = flatten_except(r.t, grid, prim, -1);
            if (!lkey.count(ks)) lkey[ks] = b.n_left++;
            if (!rkey.count(kt)) rkey[kt] = b.n_right++;
            b.edges.emplace_back(lkey[ks], rkey[kt]);
        }
        std::vector<int> by_position(reqs.size());
        std::iota(by_position.begin(), by_position.end(), 0);
        std::stable_sort(by_position.begin(), by_position.end(), [&](int x, int y) {
            return reqs[x].s[prim] + reqs[x].t[prim] < reqs[y].s[prim] + reqs[y].t[prim];
        });
        int num_colors = 0;
        std::vector<int> color = bipartite_edge_color(b, &num_colors, by_position);
        require(num_colors <= slices, "route_slices: coloring exceeded the slice count");

        // Map color classes to slices in order of mean leading coordinate;
        // any bijection is valid, this one keeps runs short.
        std::vector<double> mean(num_colors, 0.0);
        std::vector<int> cnt(num_colors, 0);
        for (size_t i = 0; i < reqs.size(); ++i) {
            mean[color[i]] += reqs[i].s[prim] + reqs[i].t[prim];
            cnt[color[i]] += 2;
        }
        std::vector<int> classes(num_colors);
        std::iota(classes.begin(), classes.end(), 0);
        std::stable_sort(classes.begin(), classes.end(), [&](int a, int c) {
            return mean[a] / std::max(1, cnt[a]) < mean[c] / std::max(1, cnt[c]);
        });
        std::vector<int> slice_of(num_colors);
        for (int i = 0; i < num_colors; ++i) slice_of[classes[i]] = i;
        for (size_t i = 0; i < reqs.size(); ++i) groups[slice_of[color[i]]].push_back(reqs[i]);
    } else if (order.size() - level == 2) {
        // Two dimensions left: an arbitrary split into `slices` groups works.
        for (size_t i = 0; i < reqs.size(); ++i) groups[i % slices].push_back(reqs[i]);
    } else {
        // Three or more: color against the double projection, then assign the
        // color classes to groups round-robin.
        const int second = order[level + 1];
        std::map<std::int64_t, int> lkey, rkey;
        BipartiteMultigraph b;
        for (const auto& r : reqs) {
            auto ks = flatten_except(r.s, grid, prim, second);
            auto kt = flatten_except(r.t, grid, prim, second);
            if (!lkey.count(ks)) lkey[ks] = b.n_left++;
            if (!rkey.count(kt)) rkey[kt] = b.n_right++;
            b.edges.emplace_back(lkey[ks], rkey[kt]);
        }
        std::vector<int> color = bipartite_edge_color(b);
        for (size_t i = 0; i < reqs.size(); ++i) groups[color[i] % slices].push_back(reqs[i]);
    }

    for (int g = 0; g < slices; ++g) {
        if (groups[g].empty()) continue;
        const int pos = g + 1;
        std::vector<AbstractRequest> inner;
        inner.reserve(groups[g].size());
        for (const auto& r : groups[g]) {
            AbstractRequest ir = r;
            ir.s[prim] = pos;
            ir.t[prim] = pos;
            inner.push_back(std::move(ir));
        }
        std::map<std::int64_t, std::vector<Coord>> inner_walks;
        route_slices(inner, grid, order, vlen, level + 1, permutation_mode, inner_walks);
        for (const auto& r : groups[g]) {
            std::vector<Coord> walk;
            Coord cur = r.s;
            walk.push_back(cur);
            while (cur[prim] != pos) { // source run
                cur[prim] += pos > cur[prim] ? 1 : -1;
                walk.push_back(cur);
            }
            const auto& iw = inner_walks.at(r.id);
            for (size_t i = 1; i < iw.size(); ++i) walk.push_back(iw[i]);
            cur = walk.back();
            while (cur[prim] != r.t[prim]) { // target run
                cur[prim] += r.t[prim] > cur[prim] ? 1 : -1;
                walk.push_back(cur);
            }
            walks[r.id] = std::move(walk);
        }
    }
}

} // namespace detail

/// Routes abstract requests on an AxisGrid along the given dimension order.
/// Images are loop-erased and expanded to concrete host paths.
inline Routing route_on_grid(std::vector<AbstractRequest> reqs, const AxisGrid& grid,
                             const std::vector<int>& order, std::vector<int> vlen,
                             bool permutation_mode, RouteStats* stats = nullptr) {
    require(!order.empty() && order.size() == static_cast<size_t>(grid.dim()),
            "route_on_grid: order must list every dimension once");
    if (vlen.empty()) {
        vlen.resize(grid.dim());
        for (int i = 0; i < grid.dim(); ++i) vlen[i] = grid.extent(i);
    }
    for (int i = 0; i < grid.dim(); ++i)
        require(vlen[i] >= 1 && vlen[i] <= grid.extent(i), "route_on_grid: bad virtual length");

    if (stats) {
        std::map<std::int64_t, int> out, in;
        for (const auto& r : reqs) {
            if (r.s == r.t) continue;
            stats->p = std::max(stats->p, ++out[detail::flatten_except(r.s, grid, order[0], -1)]);
            stats->q = std::max(stats->q, ++in[detail::flatten_except(r.t, grid, order[0], -1)]);
        }
    }

    Routing result;
    std::vector<AbstractRequest> live;
    for (auto& r : reqs) {
        if (r.s == r.t)
            result.images[r.id] = {}; // loops route on the empty edge set
        else
            live.push_back(std::move(r));
    }
    std::map<std::int64_t, std::vector<Coord>> walks;
    detail::route_slices(live, grid, order, vlen, 0, permutation_mode, walks);
    for (auto& [id, walk] : walks) {
        auto simple = detail::erase_loops(walk);
        result.images[id] = grid.expand_walk(simple);
    }
    return result;
}

namespace detail {

inline std::vector<int> order_by_extent_desc(const AxisGrid& grid, int first_dim = -1) {
    std::vector<int> order;
    for (int i = 0; i < grid.dim(); ++i)
        if (i != first_dim) order.push_back(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return grid.extent(a) > grid.extent(b); });
    if (first_dim >= 0) order.insert(order.begin(), first_dim);
    return order;
}

inline std::vector<AbstractRequest> to_abstract(const RoutingGraph& r, const AxisGrid& grid) {
    std::vector<AbstractRequest> out;
    out.reserve(r.requests.size());
    for (const auto& q : r.requests)
        out.push_back({q.id, grid.abstract_of(q.src), grid.abstract_of(q.dst)});
    return out;
}

} // namespace detail

/// Permutation routing on a box grid: color against the first-dimension
/// projection, split into color classes, recurse slice by slice, attach
/// dimension runs at both ends.
inline Routing route_permutation(const RoutingGraph& r, const SubGrid& m, RouteStats* stats = nullptr) {
    auto [p, q] = r.node_degrees();
    require(p <= 1 && q <= 1, "route_permutation: routing graph is not 1-1");
    AxisGrid grid = AxisGrid::of_box(m);
    std::vector<int> order(grid.dim());
    std::iota(order.begin(), order.end(), 0);
    return route_on_grid(detail::to_abstract(r, grid), grid, order, {}, true, stats);
}

/// General p-q routing. The default recursion order sorts side lengths
/// non-increasingly and requires h to be a longest dimension; an explicit
/// dim_order (1-based dimensions) overrides that precondition.
inline Routing route_general(const RoutingGraph& r, const SubGrid& m, int h,
                             const std::vector<int>& dim_order = {}, RouteStats* stats = nullptr) {
    require(h >= 1 && h <= m.dim(), "route_general: dimension out of range");
    AxisGrid grid = AxisGrid::of_box(m);
    std::vector<int> order;
    if (dim_order.empty()) {
        int lmax = *std::max_element(m.dims.dims.begin(), m.dims.dims.end());
        require(m.dims.dims[h - 1] == lmax,
                "route_general: h must be a longest dimension when no dim_order is given");
        order = detail::order_by_extent_desc(grid, h - 1);
    } else {
        for (int d1 : dim_order) order.push_back(d1 - 1);
    }
    return route_on_grid(detail::to_abstract(r, grid), grid, order, {}, false, stats);
}

/// Aspect-ratio variant: h may be any dimension; the remaining dimensions are
/// consumed in non-increasing order of side length.
inline Routing route_general_aspect(const RoutingGraph& r, const SubGrid& m, int h,
                                    RouteStats* stats = nullptr) {
    require(h >= 1 && h <= m.dim(), "route_general_aspect: dimension out of range");
    AxisGrid grid = AxisGrid::of_box(m);
    return route_on_grid(detail::to_abstract(r, grid), grid,
                         detail::order_by_extent_desc(grid, h - 1), {}, false, stats);
}

/// Boustrophedon enumeration of a box: consecutive positions are adjacent.
inline std::vector<Coord> snake_order(const SubGrid& m) {
    std::vector<Coord> out;
    out.reserve(m.node_count());
    Coord idx(m.dim(), 0); // 0-based per-dim index
    std::vector<int> dir(m.dim(), 1);
    while (true) {
        Coord v(m.dim());
        for (int i = 0; i < m.dim(); ++i) v[i] = m.lo(i) + idx[i];
        out.push_back(v);
        int i = 0;
        for (; i < m.dim(); ++i) {
            int next = idx[i] + dir[i];
            if (next >= 0 && next < m.dims.dims[i]) {
                idx[i] = next;
                break;
            }
            dir[i] = -dir[i]; // turn around, carry to the next dimension
        }
        if (i == m.dim()) break;
    }
    return out;
}

/// Embedding through permutation routing: orient the guest, split the
/// oriented edges into at most ceil(max_degree/2) permutation instances by
/// bipartite coloring, route each instance, and take the union.
inline Embedding embed_by_permutation(const GuestGraph& g, const SubGrid& m,
                                      std::optional<std::vector<Coord>> phi = std::nullopt) {
    require(m.node_count() >= g.n, "embed_by_permutation: guest larger than host");
    Embedding emb;
    if (phi) {
        emb.phi = std::move(*phi);
        require(static_cast<int>(emb.phi.size()) == g.n, "embed_by_permutation: phi size mismatch");
    } else {
        auto host_order = snake_order(m);
        emb.phi.assign(g.n, {});
        auto guest_order = dfs_order(g);
        for (int i = 0; i < g.n; ++i) emb.phi[guest_order[i]] = host_order[i];
    }
    {
        std::vector<NodeId> ids;
        ids.reserve(g.n);
        for (const auto& v : emb.phi) {
            require(m.contains_global(v), "embed_by_permutation: phi image outside host");
            ids.push_back(m.root.index_of(v));
        }
        std::sort(ids.begin(), ids.end());
        require(std::adjacent_find(ids.begin(), ids.end()) == ids.end(),
                "embed_by_permutation: phi is not injective");
    }
    if (g.edges.empty()) return emb;

    auto oriented = euler_orient(g);

    // One permutation instance per color of the source/target bipartite graph.
    std::map<NodeId, int> lkey, rkey;
    BipartiteMultigraph b;
    for (auto [u, v] : oriented) {
        NodeId su = m.root.index_of(emb.phi[u]);
        NodeId tv = m.root.index_of(emb.phi[v]);
        if (!lkey.count(su)) lkey[su] = b.n_left++;
        if (!rkey.count(tv)) rkey[tv] = b.n_right++;
        b.edges.emplace_back(lkey[su], rkey[tv]);
    }
    int num_colors = 0;
    std::vector<int> color = bipartite_edge_color(b, &num_colors);
    require(num_colors <= (g.max_degree() + 1) / 2,
            "embed_by_permutation: instance count exceeded ceil(max_degree/2)");

    for (int c = 0; c < num_colors; ++c) {
        RoutingGraph inst;
        for (size_t e = 0; e < oriented.size(); ++e) {
            if (color[e] != c) continue;
            auto [u, v] = oriented[e];
            inst.requests.push_back({static_cast<std::int64_t>(e), emb.phi[u], emb.phi[v]});
        }
        emb.rho.merge(route_permutation(inst, m));
    }
    return emb;
}

} // namespace gridembed
