#pragma once

#include <algorithm>
#include <vector>

#include "gridembed/core.hpp"

namespace gridembed {

/// A bipartite multigraph given as edges (left id, right id); parallel edges
/// are allowed. Ids are dense 0-based indices per side.
struct BipartiteMultigraph {
    int n_left = 0;
    int n_right = 0;
    std::vector<std::pair<int, int>> edges;
};

/// Proper edge coloring of a bipartite multigraph with exactly max-degree
/// colors, via alternating-path recoloring. Returns the color of each edge;
/// num_colors receives the max degree (0 for an edgeless graph).
///
/// Edges are processed in the given order (identity when empty), each taking
/// the smallest color free at both ends when one exists. Callers that sort
/// edges by locality therefore get locality-coherent color classes, which the
/// routing layer exploits when mapping classes to slices.
inline std::vector<int> bipartite_edge_color(const BipartiteMultigraph& b, int* num_colors = nullptr,
                                             const std::vector<int>& order = {}) {
    int maxdeg = 0;
    {
        std::vector<int> dl(b.n_left, 0), dr(b.n_right, 0);
        for (auto [u, v] : b.edges) {
            maxdeg = std::max(maxdeg, ++dl[u]);
            maxdeg = std::max(maxdeg, ++dr[v]);
        }
    }
    if (num_colors) *num_colors = maxdeg;

    const int none = -1;
    // slot[side][node][color] = edge currently colored `color` at `node`
    std::vector<std::vector<int>> left(b.n_left, std::vector<int>(maxdeg, none));
    std::vector<std::vector<int>> right(b.n_right, std::vector<int>(maxdeg, none));
    std::vector<int> color(b.edges.size(), none);

    auto first_free = [&](const std::vector<int>& slots) {
        for (int c = 0; c < static_cast<int>(slots.size()); ++c)
            if (slots[c] == none) return c;
        require(false, "bipartite_edge_color: no free color (internal)");
        return -1;
    };

    for (int step = 0; step < static_cast<int>(b.edges.size()); ++step) {
        int e = order.empty() ? step : order[step];
        auto [u, v] = b.edges[e];
        int both = none;
        for (int c = 0; c < maxdeg; ++c)
            if (left[u][c] == none && right[v][c] == none) {
                both = c;
                break;
            }
        if (both != none) {
            color[e] = both;
            left[u][both] = e;
            right[v][both] = e;
            continue;
        }
        int a = first_free(left[u]);
        int c = first_free(right[v]);
        if (a != c) {
            // Free color a at v by flipping the a/c alternating chain that
            // starts at v. Collect the chain first, then swap in one pass.
            std::vector<int> chain;
            int node = v;
            bool on_right = true;
            int want = a;
            while (true) {
                int edge2 = (on_right ? right[node] : left[node])[want];
                if (edge2 == none) break;
                chain.push_back(edge2);
                auto [lu, rv] = b.edges[edge2];
                node = on_right ? lu : rv;
                on_right = !on_right;
                want = want == a ? c : a;
            }
            for (int edge2 : chain) {
                auto [lu, rv] = b.edges[edge2];
                left[lu][color[edge2]] = none;
                right[rv][color[edge2]] = none;
            }
            for (int edge2 : chain) {
                auto [lu, rv] = b.edges[edge2];
                int swapped = color[edge2] == a ? c : a;
                color[edge2] = swapped;
                left[lu][swapped] = edge2;
                right[rv][swapped] = edge2;
            }
        }
        color[e] = a;
        left[u][a] = e;
        right[v][a] = e;
    }
    return color;
}

/// Scan check that no two edges sharing a left or right endpoint share a color.
inline bool is_proper_edge_coloring(const BipartiteMultigraph& b, const std::vector<int>& color) {
    int maxc = 0;
    for (int c : color) maxc = std::max(maxc, c + 1);
    std::vector<std::vector<char>> seen_l(b.n_left, std::vector<char>(maxc, 0));
    std::vector<std::vector<char>> seen_r(b.n_right, std::vector<char>(maxc, 0));
    for (size_t e = 0; e < b.edges.size(); ++e) {
        auto [u, v] = b.edges[e];
        int c = color[e];
        if (c < 0) return false;
        if (seen_l[u][c] || seen_r[v][c]) return false;
        seen_l[u][c] = seen_r[v][c] = 1;
    }
    return true;
}

} // namespace gridembed
