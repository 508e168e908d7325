#pragma once

#include <algorithm>
#include <vector>

#include "gridembed/core.hpp"
#include "gridembed/graph.hpp"

namespace gridembed {

/// Orients every edge of G so that each node ends with in-degree and
/// out-degree at most ceil(deg/2). Odd-degree nodes are paired in increasing
/// id order with helper edges to close Euler circuits; the helpers are
/// discarded from the result.
///
/// Returns for each edge id of G the pair (tail, head).
inline std::vector<std::pair<int, int>> euler_orient(const GuestGraph& g) {
    struct Arc {
        int to;
        int edge; // id in the working multigraph
    };
    int m = static_cast<int>(g.edges.size());
    std::vector<std::vector<Arc>> adj(g.n);
    std::vector<std::pair<int, int>> work(g.edges.begin(), g.edges.end());

    std::vector<int> odd;
    for (int v = 0; v < g.n; ++v)
        if (g.degree(v) % 2 == 1) odd.push_back(v);
    for (size_t i = 0; i + 1 < odd.size(); i += 2) work.emplace_back(odd[i], odd[i + 1]);

    for (int e = 0; e < static_cast<int>(work.size()); ++e) {
        auto [u, v] = work[e];
        adj[u].push_back({v, e});
        adj[v].push_back({u, e});
    }

    std::vector<std::pair<int, int>> oriented(m, {-1, -1});
    std::vector<char> used(work.size(), 0);
    std::vector<size_t> cursor(g.n, 0);

    for (int start = 0; start < g.n; ++start) {
        if (cursor[start] >= adj[start].size()) continue;
        // Hierholzer: walk until stuck, splicing sub-circuits via the stack.
        std::vector<int> stack{start};
        while (!stack.empty()) {
            int v = stack.back();
            bool advanced = false;
            while (cursor[v] < adj[v].size()) {
                Arc arc = adj[v][cursor[v]++];
                if (used[arc.edge]) continue;
                used[arc.edge] = 1;
                if (arc.edge < m) oriented[arc.edge] = {v, arc.to};
                stack.push_back(arc.to);
                advanced = true;
                break;
            }
            if (!advanced) stack.pop_back();
        }
    }

    for (int e = 0; e < m; ++e)
        require(oriented[e].first >= 0, "euler_orient: edge left unoriented (internal)");
    return oriented;
}

/// In/out degree profile of an orientation; index by node id.
inline std::pair<std::vector<int>, std::vector<int>> orientation_degrees(
    int n, const std::vector<std::pair<int, int>>& oriented) {
    std::vector<int> out(n, 0), in(n, 0);
    for (auto [u, v] : oriented) {
        ++out[u];
        ++in[v];
    }
    return {out, in};
}

} // namespace gridembed
