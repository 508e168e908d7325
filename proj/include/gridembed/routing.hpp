#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "gridembed/core.hpp"
#include "gridembed/grid.hpp"

namespace gridembed {

/// One routing request: carry a globally unique id so a multiset of requests
/// survives projection without merging parallel edges.
struct Request {
    std::int64_t id;
    Coord src;
    Coord dst;
};

/// Directed multigraph of requests on grid coordinates.
struct RoutingGraph {
    std::vector<Request> requests;

    /// Maximum out-multiplicity p and in-multiplicity q, grouped by the given
    /// key projection (identity for node-level, or a pi-bar projection).
    template <typename KeyFn>
    std::pair<int, int> degrees_by(KeyFn key) const {
        std::map<decltype(key(Coord{})), int> out, in;
        int p = 0, q = 0;
        for (const auto& r : requests) {
            p = std::max(p, ++out[key(r.src)]);
            q = std::max(q, ++in[key(r.dst)]);
        }
        return {p, q};
    }

    std::pair<int, int> node_degrees() const {
        return degrees_by([](const Coord& v) { return v; });
    }

    /// pi-bar_j applied to every request, ids preserved. j is 1-based.
    RoutingGraph project(int j) const {
        RoutingGraph r;
        r.requests.reserve(requests.size());
        for (const auto& q : requests)
            r.requests.push_back({q.id, gridembed::project(q.src, j).second,
                                  gridembed::project(q.dst, j).second});
        return r;
    }

    std::pair<int, int> projected_degrees(int j) const {
        return project(j).node_degrees();
    }
};

/// Image of one request: the host path as an ordered node sequence from the
/// request's source to its target (empty when source == target). The induced
/// edge set is what congestion counts; the order is kept for emission.
struct Routing {
    std::map<std::int64_t, std::vector<NodeId>> images; // request id -> node path

    bool has(std::int64_t id) const { return images.count(id) != 0; }

    static std::vector<EdgeKey> path_edges(const std::vector<NodeId>& path) {
        std::vector<EdgeKey> e;
        if (path.size() >= 2) {
            e.reserve(path.size() - 1);
            for (size_t i = 0; i + 1 < path.size(); ++i) e.push_back(edge_key(path[i], path[i + 1]));
        }
        return e;
    }

    void merge(Routing&& other) {
        for (auto& [id, p] : other.images) {
            require(images.emplace(id, std::move(p)).second, "Routing: duplicate request id on merge");
        }
    }
};

struct Measure {
    int dilation = 0;
    int congestion = 0;
    std::unordered_map<EdgeKey, int> per_edge;
    /// Histogram: congestion value -> number of host edges carrying it.
    std::map<int, std::int64_t> histogram() const {
        std::map<int, std::int64_t> h;
        for (const auto& [e, c] : per_edge) h[c]++;
        return h;
    }
};

inline Measure measure(const Routing& r) {
    Measure m;
    for (const auto& [id, path] : r.images) {
        if (path.size() >= 2) m.dilation = std::max<int>(m.dilation, static_cast<int>(path.size()) - 1);
        for (size_t i = 0; i + 1 < path.size(); ++i)
            m.congestion = std::max(m.congestion, ++m.per_edge[edge_key(path[i], path[i + 1])]);
    }
    return m;
}

/// Checks one image: consecutive nodes host-adjacent, no repeated node, ends
/// equal to the request endpoints. Returns an empty string when valid.
inline std::string check_path(const GridSpec& root, const std::vector<NodeId>& path,
                              NodeId src, NodeId dst) {
    if (path.empty()) {
        if (src != dst) return "empty image for distinct endpoints";
        return "";
    }
    if (path.front() != src || path.back() != dst) return "path ends differ from request endpoints";
    std::vector<NodeId> seen(path);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return "path revisits a node";
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        Coord a = root.coord_of(path[i]);
        Coord b = root.coord_of(path[i + 1]);
        int diff = 0;
        for (size_t k = 0; k < a.size(); ++k) diff += std::abs(a[k] - b[k]);
        if (diff != 1) return "consecutive path nodes are not grid-adjacent";
    }
    return "";
}

/// Shortest-path lower bound: any image is at least the L1 distance long.
inline int l1_distance(const Coord& a, const Coord& b) {
    int d = 0;
    for (size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
    return d;
}

} // namespace gridembed
