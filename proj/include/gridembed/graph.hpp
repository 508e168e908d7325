#pragma once

#include <algorithm>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gridembed/core.hpp"

namespace gridembed {

/// Undirected simple graph with 0-based integer node ids.
struct GuestGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges; // normalized u < v
    std::vector<std::vector<int>> adj;      // neighbor node ids
    std::vector<std::vector<int>> inc;      // incident edge ids

    GuestGraph() = default;
    GuestGraph(int n_, std::vector<std::pair<int, int>> edges_) : n(n_) {
        adj.assign(n, {});
        inc.assign(n, {});
        edges.reserve(edges_.size());
        for (auto [u, v] : edges_) add_edge(u, v);
    }

    int add_edge(int u, int v) {
        require(u != v, "GuestGraph: self-loop");
        require(u >= 0 && u < n && v >= 0 && v < n, "GuestGraph: node id out of range");
        if (u > v) std::swap(u, v);
        for (int w : adj[u])
            require(w != v, "GuestGraph: duplicate edge " + std::to_string(u) + "-" +
                                std::to_string(v));
        int id = static_cast<int>(edges.size());
        edges.emplace_back(u, v);
        adj[u].push_back(v);
        adj[v].push_back(u);
        inc[u].push_back(id);
        inc[v].push_back(id);
        return id;
    }

    int degree(int v) const { return static_cast<int>(adj[v].size()); }

    int max_degree() const {
        int d = 0;
        for (int v = 0; v < n; ++v) d = std::max(d, degree(v));
        return d;
    }

    int other_end(int edge, int v) const {
        auto [a, b] = edges[edge];
        return a == v ? b : a;
    }
};

/// Guest graph file format: first line "N M", then M lines "u v" (0-based).
inline GuestGraph read_guest_graph(std::istream& in) {
    int n = 0;
    long long m = 0;
    require(static_cast<bool>(in >> n >> m), "guest graph: missing header");
    require(n >= 1 && m >= 0, "guest graph: bad header");
    GuestGraph g(n, {});
    for (long long i = 0; i < m; ++i) {
        int u = 0, v = 0;
        require(static_cast<bool>(in >> u >> v), "guest graph: truncated edge list");
        g.add_edge(u, v);
    }
    return g;
}

inline void write_guest_graph(std::ostream& out, const GuestGraph& g) {
    out << g.n << ' ' << g.edges.size() << '\n';
    for (auto [u, v] : g.edges) out << u << ' ' << v << '\n';
}

inline GuestGraph parse_guest_graph(const std::string& text) {
    std::istringstream in(text);
    return read_guest_graph(in);
}

/// DFS preorder over all components, started from the smallest unvisited id,
/// neighbors ascending. Consecutive order positions are usually adjacent in
/// the guest, which keeps default placements local.
inline std::vector<int> dfs_order(const GuestGraph& g) {
    std::vector<int> order;
    order.reserve(g.n);
    std::vector<char> seen(g.n, 0);
    std::vector<int> stack;
    for (int s = 0; s < g.n; ++s) {
        if (seen[s]) continue;
        stack.push_back(s);
        seen[s] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            order.push_back(v);
            auto nbrs = g.adj[v];
            std::sort(nbrs.begin(), nbrs.end(), std::greater<int>());
            for (int w : nbrs)
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
    }
    return order;
}

/// BFS order over all components, started from the smallest unvisited id.
inline std::vector<int> bfs_order(const GuestGraph& g) {
    std::vector<int> order;
    order.reserve(g.n);
    std::vector<char> seen(g.n, 0);
    for (int s = 0; s < g.n; ++s) {
        if (seen[s]) continue;
        seen[s] = 1;
        size_t head = order.size();
        order.push_back(s);
        while (head < order.size()) {
            int v = order[head++];
            auto nbrs = g.adj[v];
            std::sort(nbrs.begin(), nbrs.end());
            for (int w : nbrs) {
                if (!seen[w]) {
                    seen[w] = 1;
                    order.push_back(w);
                }
            }
        }
    }
    return order;
}

} // namespace gridembed
