#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gridembed/core.hpp"
#include "gridembed/graph.hpp"

namespace gridembed {

/// Exact rational, used for balance parameters so the size checks need no
/// floating point.
struct Frac {
    long long num = 0;
    long long den = 1;
    double value() const { return static_cast<double>(num) / den; }
};

inline Frac parse_frac(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) {
        double v = std::stod(s);
        return {static_cast<long long>(std::llround(v * 1000000)), 1000000};
    }
    Frac f{std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1))};
    require(f.den > 0 && f.num >= 0, "fraction: bad value '" + s + "'");
    return f;
}

/// Result of one separator query: S plus the two sides it leaves behind.
struct SeparatorSplit {
    std::vector<int> separator;
    std::vector<int> part1;
    std::vector<int> part2;
};

/// A recursive node-separator supplier. `split` receives the whole guest and
/// the node set of the induced subgraph to separate; it must return S and two
/// parts that partition the set, with no guest edge between the parts and
/// each part of at most beta * |set| nodes. Splitters must be reentrant.
struct NodeSeparatorOracle {
    std::string name;
    double C = 1.0;
    double alpha = 0.0;
    Frac beta{2, 3};
    bool certified_size = true; ///< |S| <= C n^alpha is enforced, not just measured
    std::function<SeparatorSplit(const GuestGraph&, const std::vector<int>&)> split;
};

namespace detail {

/// Groups components into two sides, heaviest first onto the lighter side.
/// With every piece at most half the total this stays within 2/3.
inline std::pair<std::vector<int>, std::vector<int>> balance_pieces(
    std::vector<std::vector<int>> pieces) {
    std::stable_sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        std::vector<int> as(a), bs(b);
        std::sort(as.begin(), as.end());
        std::sort(bs.begin(), bs.end());
        return as < bs;
    });
    std::vector<int> s1, s2;
    for (auto& p : pieces) {
        auto& side = s1.size() <= s2.size() ? s1 : s2;
        side.insert(side.end(), p.begin(), p.end());
    }
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());
    return {s1, s2};
}

inline std::vector<std::vector<int>> induced_components(const GuestGraph& g,
                                                        const std::vector<int>& nodes) {
    std::map<int, char> in;
    for (int v : nodes) in[v] = 1;
    std::vector<std::vector<int>> comps;
    std::map<int, char> seen;
    for (int s : nodes) {
        if (seen.count(s)) continue;
        std::vector<int> comp{s};
        seen[s] = 1;
        for (size_t head = 0; head < comp.size(); ++head) {
            int v = comp[head];
            for (int w : g.adj[v])
                if (in.count(w) && !seen.count(w)) {
                    seen[w] = 1;
                    comp.push_back(w);
                }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

} // namespace detail

/// Single-node separator for forests: the centroid of the largest component.
/// Parts are the remaining pieces balanced onto two sides. C=1, alpha=0,
/// beta=2/3.
inline NodeSeparatorOracle centroid_oracle(const GuestGraph& guest) {
    // Forests only: every component has |E| = |V| - 1 and no cycle.
    {
        std::vector<int> all(guest.n);
        for (int i = 0; i < guest.n; ++i) all[i] = i;
        auto comps = detail::induced_components(guest, all);
        size_t edge_budget = 0;
        for (auto& c : comps) edge_budget += c.size() - 1;
        require(edge_budget == guest.edges.size(), "centroid_oracle: guest is not a forest");
    }
    NodeSeparatorOracle o;
    o.name = "tree";
    o.C = 1.0;
    o.alpha = 0.0;
    o.beta = {2, 3};
    o.split = [](const GuestGraph& g, const std::vector<int>& nodes) {
        auto comps = detail::induced_components(g, nodes);
        auto largest = std::max_element(comps.begin(), comps.end(),
                                        [](const auto& a, const auto& b) {
                                            if (a.size() != b.size()) return a.size() < b.size();
                                            return a > b; // tie: keep the one with smaller ids
                                        });
        std::vector<int> comp = *largest;
        std::map<int, char> in_comp;
        for (int v : comp) in_comp[v] = 1;

        // Centroid: minimizes the largest piece left after removal.
        std::map<int, int> size_below, parent;
        std::vector<int> order;
        {
            int root = comp.front();
            order.push_back(root);
            parent[root] = -1;
            for (size_t head = 0; head < order.size(); ++head) {
                int v = order[head];
                for (int w : g.adj[v])
                    if (in_comp.count(w) && !parent.count(w) && w != root) {
                        parent[w] = v;
                        order.push_back(w);
                    }
            }
            for (auto it = order.rbegin(); it != order.rend(); ++it) {
                size_below[*it] += 1;
                if (parent[*it] >= 0) size_below[parent[*it]] += size_below[*it];
            }
        }
        int centroid = -1;
        std::int64_t best = -1;
        for (int v : comp) {
            std::int64_t worst = static_cast<std::int64_t>(comp.size()) - size_below[v];
            for (int w : g.adj[v])
                if (in_comp.count(w) && parent.count(w) && parent[w] == v)
                    worst = std::max<std::int64_t>(worst, size_below[w]);
            if (best < 0 || worst < best || (worst == best && v < centroid)) {
                best = worst;
                centroid = v;
            }
        }

        std::vector<int> rest;
        for (int v : nodes)
            if (v != centroid) rest.push_back(v);
        auto pieces = detail::induced_components(g, rest);
        SeparatorSplit out;
        out.separator = {centroid};
        std::tie(out.part1, out.part2) = detail::balance_pieces(std::move(pieces));
        return out;
    };
    return o;
}

/// Median row/column separator for 2-D grid guests. Node v sits at
/// (v / cols, v % cols). Splits across the wider bounding-box side, so the
/// separator is a line of at most sqrt(n) nodes. C=1, alpha=1/2, beta=1/2.
inline NodeSeparatorOracle hyperplane_oracle(int rows, int cols) {
    require(rows >= 1 && cols >= 1, "hyperplane_oracle: bad shape");
    NodeSeparatorOracle o;
    o.name = "grid";
    o.C = 1.0;
    o.alpha = 0.5;
    o.beta = {1, 2};
    o.split = [rows, cols](const GuestGraph& g, const std::vector<int>& nodes) {
        require(g.n == rows * cols, "hyperplane_oracle: guest shape mismatch");
        int rlo = rows, rhi = -1, clo = cols, chi = -1;
        for (int v : nodes) {
            int r = v / cols, c = v % cols;
            rlo = std::min(rlo, r);
            rhi = std::max(rhi, r);
            clo = std::min(clo, c);
            chi = std::max(chi, c);
        }
        bool by_col = (chi - clo) >= (rhi - rlo); // tie: cut a column
        int lo = by_col ? clo : rlo, hi = by_col ? chi : rhi;
        std::map<int, std::int64_t> at;
        for (int v : nodes) ++at[by_col ? v % cols : v / cols];
        std::int64_t n = static_cast<std::int64_t>(nodes.size());
        int best_x = lo;
        std::int64_t best_worst = -1, below = 0;
        for (int x = lo; x <= hi; ++x) {
            std::int64_t left = below;
            below += at.count(x) ? at[x] : 0;
            std::int64_t right = n - below;
            std::int64_t worst = std::max(left, right);
            if (best_worst < 0 || worst < best_worst) {
                best_worst = worst;
                best_x = x;
            }
        }
        SeparatorSplit out;
        for (int v : nodes) {
            int coord = by_col ? v % cols : v / cols;
            if (coord < best_x)
                out.part1.push_back(v);
            else if (coord > best_x)
                out.part2.push_back(v);
            else
                out.separator.push_back(v);
        }
        if (out.part1.size() < out.part2.size()) std::swap(out.part1, out.part2);
        return out;
    };
    return o;
}

/// Heuristic separator for arbitrary guests: BFS prefix of ceil(n/2) nodes;
/// the separator is the prefix boundary. Balance holds (parts at most
/// ceil(n/2) <= 2n/3), the size bound is not certified.
inline NodeSeparatorOracle greedy_bisection_oracle() {
    NodeSeparatorOracle o;
    o.name = "greedy";
    o.C = 1.0;
    o.alpha = 0.5;
    o.beta = {2, 3};
    o.certified_size = false;
    o.split = [](const GuestGraph& g, const std::vector<int>& nodes) {
        std::map<int, char> in, seen;
        for (int v : nodes) in[v] = 1;
        std::vector<int> order;
        for (int s : nodes) {
            if (seen.count(s)) continue;
            seen[s] = 1;
            order.push_back(s);
            for (size_t head = order.size() - 1; head < order.size(); ++head) {
                int v = order[head];
                for (int w : g.adj[v])
                    if (in.count(w) && !seen.count(w)) {
                        seen[w] = 1;
                        order.push_back(w);
                    }
            }
        }
        size_t take = (nodes.size() + 1) / 2;
        std::map<int, char> prefix;
        for (size_t i = 0; i < take; ++i) prefix[order[i]] = 1;
        SeparatorSplit out;
        for (size_t i = take; i < order.size(); ++i) out.part2.push_back(order[i]);
        for (size_t i = 0; i < take; ++i) {
            int v = order[i];
            bool boundary = false;
            for (int w : g.adj[v])
                if (in.count(w) && !prefix.count(w)) {
                    boundary = true;
                    break;
                }
            (boundary ? out.separator : out.part1).push_back(v);
        }
        std::sort(out.part1.begin(), out.part1.end());
        std::sort(out.part2.begin(), out.part2.end());
        std::sort(out.separator.begin(), out.separator.end());
        if (out.part1.size() < out.part2.size()) std::swap(out.part1, out.part2);
        return out;
    };
    return o;
}

} // namespace gridembed
