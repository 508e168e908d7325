#pragma once

#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gridembed/core.hpp"
#include "gridembed/embedding.hpp"
#include "gridembed/graph.hpp"
#include "gridembed/grid.hpp"

namespace gridembed {

/// Complete binary tree in heap order: node i has children 2i+1 and 2i+2.
inline GuestGraph gen_complete_binary_tree(int depth) {
    require(depth >= 0 && depth < 30, "cbt: bad depth");
    int n = (1 << (depth + 1)) - 1;
    GuestGraph g(n, {});
    for (int v = 0; 2 * v + 2 < n; ++v) {
        g.add_edge(v, 2 * v + 1);
        g.add_edge(v, 2 * v + 2);
    }
    return g;
}

/// rows x cols grid graph; node (r, c) has id r * cols + c.
inline GuestGraph gen_grid2d(int rows, int cols) {
    require(rows >= 1 && cols >= 1, "grid2d: bad shape");
    GuestGraph g(rows * cols, {});
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) g.add_edge(r * cols + c, r * cols + c + 1);
            if (r + 1 < rows) g.add_edge(r * cols + c, (r + 1) * cols + c);
        }
    return g;
}

/// Random simple graph with max degree at most maxdeg; deterministic in the
/// seed (raw generator draws, no distribution adapters).
inline GuestGraph gen_random_bounded_degree(int n, int maxdeg, std::uint64_t seed) {
    require(n >= 1 && maxdeg >= 1, "random guest: bad parameters");
    GuestGraph g(n, {});
    std::mt19937_64 rng(seed);
    std::set<std::pair<int, int>> have;
    std::int64_t target = static_cast<std::int64_t>(n) * maxdeg / 2;
    std::int64_t attempts = 24 * target + 64;
    while (attempts-- > 0 && static_cast<std::int64_t>(g.edges.size()) < target) {
        int u = static_cast<int>(rng() % n);
        int v = static_cast<int>(rng() % n);
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        if (g.degree(u) >= maxdeg || g.degree(v) >= maxdeg) continue;
        if (!have.insert({u, v}).second) continue;
        g.add_edge(u, v);
    }
    return g;
}

struct FamilySpec {
    std::string kind; // cbt | grid2d | random
    std::int64_t n = 0;
    int depth = -1;
    int rows = 0, cols = 0;
    int maxdeg = 4;
    std::uint64_t seed = 1;
};

inline GuestGraph gen_family(const FamilySpec& f) {
    if (f.kind == "cbt") {
        int depth = f.depth;
        if (depth < 0) {
            std::int64_t m = f.n + 1;
            depth = -1;
            while (m > 1) {
                require(m % 2 == 0, "cbt: n must be 2^k - 1");
                m /= 2;
                ++depth;
            }
        }
        return gen_complete_binary_tree(depth);
    }
    if (f.kind == "grid2d") {
        int rows = f.rows, cols = f.cols;
        if (rows == 0 || cols == 0) {
            rows = static_cast<int>(std::floor(std::sqrt(static_cast<double>(f.n))));
            while (rows > 1 && f.n % rows != 0) --rows;
            cols = static_cast<int>(f.n / rows);
        }
        return gen_grid2d(rows, cols);
    }
    if (f.kind == "random")
        return gen_random_bounded_degree(static_cast<int>(f.n), f.maxdeg, f.seed);
    require(false, "gen_family: unknown kind '" + f.kind + "'");
    return GuestGraph();
}

namespace detail {

inline bool removed_row_edge(int i, int j, int ell) {
    // ((i,j),(i,j+1)) removed on odd rows 3..ell-2 for j in [3, ell-3]
    return i >= 3 && i <= ell - 2 && i % 2 == 1 && j >= 3 && j <= ell - 3;
}

inline bool removed_col3_edge(int i, int ell) {
    // ((i,3),(i+1,3)) removed for i in [5, ell-3], i mod 4 in {1,2}
    return i >= 5 && i <= ell - 3 && (i % 4 == 1 || i % 4 == 2);
}

inline bool removed_colr_edge(int i, int ell) {
    // ((i,ell-2),(i+1,ell-2)) removed for i in [3, ell-5], i mod 4 in {3,0}
    return i >= 3 && i <= ell - 5 && (i % 4 == 3 || i % 4 == 0);
}

} // namespace detail

/// Hard instance for dilation-with-congestion-1: the ell x ell grid minus a
/// snake of edges, plus one long edge joining (3,3) and (ell-2, ell-2) whose
/// only congestion-1 route is the removed snake.
inline GuestGraph gen_lower_bound_graph(int ell) {
    require(ell >= 9 && ell % 4 == 1, "lower bound graph: need ell >= 9 with ell mod 4 = 1");
    auto id = [ell](int i, int j) { return (i - 1) * ell + (j - 1); };
    GuestGraph g(ell * ell, {});
    for (int i = 1; i <= ell; ++i)
        for (int j = 1; j <= ell; ++j) {
            if (j + 1 <= ell && !detail::removed_row_edge(i, j, ell)) g.add_edge(id(i, j), id(i, j + 1));
            if (i + 1 <= ell) {
                bool removed = (j == 3 && detail::removed_col3_edge(i, ell)) ||
                               (j == ell - 2 && detail::removed_colr_edge(i, ell));
                if (!removed) g.add_edge(id(i, j), id(i + 1, j));
            }
        }
    g.add_edge(id(3, 3), id(ell - 2, ell - 2));
    return g;
}

/// The removed edges form one path from (3,3) to (ell-2, ell-2); this walks
/// it: odd rows traversed boustrophedon, joined by two vertical steps at the
/// alternating turn columns.
inline std::vector<Coord> lower_bound_snake(int ell) {
    std::vector<Coord> walk;
    for (int i = 3; i <= ell - 2; i += 2) {
        bool rightward = i % 4 == 3;
        int from = rightward ? 3 : ell - 2;
        int to = rightward ? ell - 2 : 3;
        int step = rightward ? 1 : -1;
        if (walk.empty()) walk.push_back({i, from});
        for (int j = from + step;; j += step) {
            walk.push_back({i, j});
            if (j == to) break;
        }
        if (i + 2 <= ell - 2) {
            walk.push_back({i + 1, to});
            walk.push_back({i + 2, to});
        }
    }
    return walk;
}

/// Identity embedding of the lower-bound graph into its own grid: every kept
/// grid edge routes on itself, the long edge routes along the removed snake.
inline Embedding canonical_lower_bound_embedding(int ell, const GuestGraph& g) {
    GridSpec host({ell, ell});
    Embedding emb;
    emb.phi.resize(g.n);
    for (int v = 0; v < g.n; ++v) emb.phi[v] = {v / ell + 1, v % ell + 1};
    for (size_t e = 0; e + 1 < g.edges.size(); ++e) {
        auto [u, v] = g.edges[e];
        emb.rho.images[static_cast<std::int64_t>(e)] = {host.index_of(emb.phi[u]),
                                                        host.index_of(emb.phi[v])};
    }
    std::vector<NodeId> snake;
    for (const Coord& c : lower_bound_snake(ell)) snake.push_back(host.index_of(c));
    emb.rho.images[static_cast<std::int64_t>(g.edges.size() - 1)] = std::move(snake);
    return emb;
}

} // namespace gridembed
