#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "gridembed/core.hpp"
#include "gridembed/graph.hpp"
#include "gridembed/oracles.hpp"

namespace gridembed {

/// One external-edge slot: a guest edge with its endpoint inside the current
/// subgraph. A node appears once per incident external edge.
struct Slot {
    int edge;
    int node;
};

struct DTreeNode {
    std::vector<int> nodes;      // sorted guest node ids
    std::vector<Slot> externals; // one slot per external edge, sorted by edge id
    std::vector<int> cut_edges;  // guest edge ids severed at this node
    std::vector<int> separator;  // nodes removed by the oracle here (whole set when dissolved)
    std::vector<int> inherited;  // nodes of this subgraph contained in ancestor separators
    bool dissolved = false;      // separator query skipped, whole remainder treated as separator
    long long bal_num = 1;       // recorded balance split as an exact fraction
    long long bal_den = 2;
    int parent = -1;
    int left = -1;
    int right = -1;
    int depth = 0;
};

struct DecompositionTree {
    std::vector<DTreeNode> nodes;
    int root = -1;

    const DTreeNode& at(int i) const { return nodes[i]; }
    bool is_leaf(int i) const { return nodes[i].left < 0; }
};

namespace detail {

inline std::vector<int> induced_edges(const GuestGraph& g, const std::vector<int>& candidate_edges,
                                      const std::set<int>& members) {
    std::vector<int> out;
    for (int e : candidate_edges) {
        auto [u, v] = g.edges[e];
        if (members.count(u) && members.count(v)) out.push_back(e);
    }
    return out;
}

} // namespace detail

/// Builds a decomposition tree from a node-separator oracle.
///
/// Each step removes the inherited separator nodes, queries the oracle on the
/// remainder (unless the advertised separator size already exceeds
/// epsilon * |remainder|, in which case the whole remainder dissolves into
/// the separator pool), and splits the pool between the children so the child
/// sizes are exactly ceil(b' * n) and floor((1-b') * n) for the recorded
/// balance b' in [1/2, beta/(1-epsilon)].
inline DecompositionTree build_decomposition_tree(const GuestGraph& g,
                                                  const NodeSeparatorOracle& oracle, Frac epsilon) {
    require(g.n >= 1, "build_decomposition_tree: empty guest");
    require(epsilon.num > 0 && epsilon.value() < 1.0 - oracle.beta.value(),
            "build_decomposition_tree: epsilon must lie in (0, 1-beta)");

    DecompositionTree t;

    // frame context for error messages
    auto frame_tag = [](int depth, size_t n) {
        return "depth " + std::to_string(depth) + ", |V(H)|=" + std::to_string(n);
    };

    std::function<int(std::vector<int>, std::vector<int>, std::vector<int>, std::vector<Slot>, int, int)>
        build = [&](std::vector<int> nodes, std::vector<int> edges, std::vector<int> inherited,
                    std::vector<Slot> externals, int depth, int parent) -> int {
        int idx = static_cast<int>(t.nodes.size());
        t.nodes.emplace_back();
        {
            DTreeNode& nd = t.nodes[idx];
            nd.nodes = nodes;
            nd.inherited = inherited;
            nd.externals = externals;
            nd.depth = depth;
            nd.parent = parent;
        }
        if (nodes.size() == 1) return idx;

        std::set<int> members(nodes.begin(), nodes.end());
        std::set<int> inherited_set(inherited.begin(), inherited.end());
        std::vector<int> remainder;
        for (int v : nodes)
            if (!inherited_set.count(v)) remainder.push_back(v);

        std::vector<int> separator, part1, part2;
        long long bal_num, bal_den;
        bool dissolved = false;
        double sep_budget = oracle.C * std::pow(static_cast<double>(remainder.size()), oracle.alpha);
        bool can_separate =
            !remainder.empty() &&
            sep_budget * epsilon.den <= static_cast<double>(epsilon.num) * remainder.size() + 1e-9;

        if (can_separate) {
            SeparatorSplit s = oracle.split(g, remainder);
            // contract validation
            {
                std::vector<int> all;
                all.insert(all.end(), s.separator.begin(), s.separator.end());
                all.insert(all.end(), s.part1.begin(), s.part1.end());
                all.insert(all.end(), s.part2.begin(), s.part2.end());
                std::sort(all.begin(), all.end());
                std::vector<int> rem_sorted(remainder);
                std::sort(rem_sorted.begin(), rem_sorted.end());
                require(all == rem_sorted, "separator oracle violated the partition contract at " +
                                               frame_tag(depth, nodes.size()));
                std::set<int> p1(s.part1.begin(), s.part1.end());
                std::set<int> p2(s.part2.begin(), s.part2.end());
                for (int v : s.part1)
                    for (int w : g.adj[v])
                        require(!p2.count(w), "separator oracle left a crossing edge at " +
                                                  frame_tag(depth, nodes.size()));
                long long cap_n = static_cast<long long>(remainder.size());
                require(static_cast<long long>(s.part1.size()) * oracle.beta.den <=
                                oracle.beta.num * cap_n &&
                            static_cast<long long>(s.part2.size()) * oracle.beta.den <=
                                oracle.beta.num * cap_n,
                        "separator oracle returned an unbalanced split at " +
                            frame_tag(depth, nodes.size()));
                if (oracle.certified_size)
                    require(static_cast<double>(s.separator.size()) <= sep_budget + 1e-9,
                            "separator oracle exceeded its advertised size at " +
                                frame_tag(depth, nodes.size()));
            }
            if (s.part1.size() < s.part2.size()) std::swap(s.part1, s.part2);
            if (s.part1.size() == s.part2.size() && !s.part1.empty() && !s.part2.empty()) {
                if (*std::min_element(s.part2.begin(), s.part2.end()) <
                    *std::min_element(s.part1.begin(), s.part1.end()))
                    std::swap(s.part1, s.part2);
            }
            separator = s.separator;
            part1 = s.part1;
            part2 = s.part2;
            bal_num = static_cast<long long>(part1.size());
            bal_den = static_cast<long long>(part1.size() + part2.size());
            require(bal_den > 0, "separator oracle removed everything at " +
                                     frame_tag(depth, nodes.size()));
        } else {
            dissolved = true;
            separator = remainder;
            bal_num = 1;
            bal_den = 2;
        }

        // Split the inherited pool + separator into the two sides with the
        // exact cardinalities, each node going to the side holding more of
        // its neighbors (ties toward side 1).
        std::vector<int> pool(inherited);
        pool.insert(pool.end(), separator.begin(), separator.end());
        std::sort(pool.begin(), pool.end());
        long long pool_sz = static_cast<long long>(pool.size());
        long long y1_target = (bal_num * pool_sz + bal_den - 1) / bal_den;
        std::set<int> side1(part1.begin(), part1.end());
        std::set<int> side2(part2.begin(), part2.end());
        std::vector<int> y1, y2;
        for (int v : pool) {
            int pref1 = 0, pref2 = 0;
            for (int w : g.adj[v]) {
                if (side1.count(w)) ++pref1;
                if (side2.count(w)) ++pref2;
            }
            bool to1 = pref1 >= pref2;
            if (static_cast<long long>(y1.size()) >= y1_target) to1 = false;
            if (static_cast<long long>(y2.size()) >= pool_sz - y1_target) to1 = true;
            if (to1) {
                y1.push_back(v);
                side1.insert(v);
            } else {
                y2.push_back(v);
                side2.insert(v);
            }
        }

        std::vector<int> child1(part1), child2(part2);
        child1.insert(child1.end(), y1.begin(), y1.end());
        child2.insert(child2.end(), y2.begin(), y2.end());
        std::sort(child1.begin(), child1.end());
        std::sort(child2.begin(), child2.end());

        // exact size equations
        long long n_here = static_cast<long long>(nodes.size());
        require(static_cast<long long>(child1.size()) ==
                    (bal_num * n_here + bal_den - 1) / bal_den,
                "child size equation violated (internal)");
        require(static_cast<long long>(child2.size()) ==
                    ((bal_den - bal_num) * n_here) / bal_den,
                "child size equation violated (internal)");
        require(!child1.empty() && !child2.empty(),
                "empty child produced at " + frame_tag(depth, nodes.size()));

        // cut edges and child externals
        std::set<int> c1(child1.begin(), child1.end());
        std::vector<int> cuts;
        std::vector<Slot> ext1, ext2;
        for (const Slot& s : externals) (c1.count(s.node) ? ext1 : ext2).push_back(s);
        for (int e : edges) {
            auto [u, v] = g.edges[e];
            bool u1 = c1.count(u) != 0, v1 = c1.count(v) != 0;
            if (u1 != v1) {
                cuts.push_back(e);
                ext1.push_back({e, u1 ? u : v});
                ext2.push_back({e, u1 ? v : u});
            }
        }
        auto by_edge = [](const Slot& a, const Slot& b) { return a.edge < b.edge; };
        std::sort(ext1.begin(), ext1.end(), by_edge);
        std::sort(ext2.begin(), ext2.end(), by_edge);

        std::set<int> c2(child2.begin(), child2.end());
        std::vector<int> edges1 = detail::induced_edges(g, edges, c1);
        std::vector<int> edges2 = detail::induced_edges(g, edges, c2);

        {
            DTreeNode& nd = t.nodes[idx];
            nd.separator = separator;
            nd.dissolved = dissolved;
            nd.cut_edges = cuts;
            nd.bal_num = bal_num;
            nd.bal_den = bal_den;
        }
        std::sort(y1.begin(), y1.end());
        std::sort(y2.begin(), y2.end());
        int l = build(std::move(child1), std::move(edges1), std::move(y1), std::move(ext1),
                      depth + 1, idx);
        int r = build(std::move(child2), std::move(edges2), std::move(y2), std::move(ext2),
                      depth + 1, idx);
        t.nodes[idx].left = l;
        t.nodes[idx].right = r;
        return idx;
    };

    std::vector<int> all_nodes(g.n), all_edges(g.edges.size());
    for (int i = 0; i < g.n; ++i) all_nodes[i] = i;
    for (size_t i = 0; i < g.edges.size(); ++i) all_edges[i] = static_cast<int>(i);
    t.root = build(std::move(all_nodes), std::move(all_edges), {}, {}, 0, -1);
    return t;
}

struct ExpansionAudit {
    double max_ratio = 0.0;       ///< max over nodes of |ext| / n^alpha
    std::int64_t max_externals = 0;
    std::map<int, std::int64_t> per_depth_max; ///< depth -> max external count
};

inline ExpansionAudit audit_expansion(const DecompositionTree& t, double alpha) {
    ExpansionAudit a;
    for (const auto& nd : t.nodes) {
        auto ext = static_cast<std::int64_t>(nd.externals.size());
        double ratio = ext / std::pow(static_cast<double>(nd.nodes.size()), alpha);
        a.max_ratio = std::max(a.max_ratio, ratio);
        a.max_externals = std::max(a.max_externals, ext);
        auto& slot = a.per_depth_max[nd.depth];
        slot = std::max(slot, ext);
    }
    return a;
}

struct TreeCheckReport {
    bool ok = true;
    std::vector<std::string> problems;
    void fail(const std::string& p) {
        ok = false;
        if (problems.size() < 32) problems.push_back(p);
    }
};

/// Structural re-validation of a decomposition tree against its guest:
/// root covers V(G), children partition parents, leaves are singletons,
/// externals are exact, child sizes satisfy the ceiling/floor equations with
/// the recorded balance inside [1/2, beta/(1-epsilon)], and every external
/// edge touches the separator nodes removed at the node's ancestors.
inline TreeCheckReport check_decomposition_tree(const GuestGraph& g, const DecompositionTree& t,
                                                Frac beta, Frac epsilon) {
    TreeCheckReport rep;
    if (t.root < 0 || t.nodes.empty()) {
        rep.fail("empty tree");
        return rep;
    }
    {
        std::vector<int> all(g.n);
        for (int i = 0; i < g.n; ++i) all[i] = i;
        if (t.at(t.root).nodes != all) rep.fail("root subset is not V(G)");
    }
    std::int64_t leaves = 0;
    // beta/(1-epsilon) as an exact fraction
    long long hi_num = beta.num * epsilon.den;
    long long hi_den = beta.den * (epsilon.den - epsilon.num);

    std::function<void(int, std::vector<int>&)> rec = [&](int i, std::vector<int>& anc_seps) {
        const auto& nd = t.at(i);
        std::set<int> members(nd.nodes.begin(), nd.nodes.end());

        // externals recomputed from scratch
        std::vector<std::pair<int, int>> expect; // (edge, inside node)
        for (size_t e = 0; e < g.edges.size(); ++e) {
            auto [u, v] = g.edges[e];
            bool iu = members.count(u), iv = members.count(v);
            if (iu != iv) expect.emplace_back(static_cast<int>(e), iu ? u : v);
        }
        std::vector<std::pair<int, int>> got;
        for (const Slot& s : nd.externals) got.emplace_back(s.edge, s.node);
        std::sort(got.begin(), got.end());
        if (expect != got) rep.fail("externals mismatch at depth " + std::to_string(nd.depth));

        // every external edge is incident to some ancestor-separator node
        std::set<int> sep(anc_seps.begin(), anc_seps.end());
        for (const Slot& s : nd.externals) {
            auto [u, v] = g.edges[s.edge];
            if (!sep.count(u) && !sep.count(v))
                rep.fail("external edge " + std::to_string(s.edge) +
                         " not incident to ancestor separators at depth " +
                         std::to_string(nd.depth));
        }

        if (t.is_leaf(i)) {
            ++leaves;
            if (nd.nodes.size() != 1) rep.fail("non-singleton leaf");
            return;
        }
        const auto& l = t.at(nd.left);
        const auto& r = t.at(nd.right);
        {
            // externals(child) within externals(parent) plus cut(parent)
            std::set<int> pool(nd.cut_edges.begin(), nd.cut_edges.end());
            for (const Slot& s : nd.externals) pool.insert(s.edge);
            for (const auto* child : {&l, &r})
                for (const Slot& s : child->externals)
                    if (!pool.count(s.edge))
                        rep.fail("child external outside parent externals+cuts at depth " +
                                 std::to_string(nd.depth));
        }
        {
            std::vector<int> merged(l.nodes);
            merged.insert(merged.end(), r.nodes.begin(), r.nodes.end());
            std::sort(merged.begin(), merged.end());
            if (merged != nd.nodes) rep.fail("children do not partition the parent");
        }
        long long n_here = static_cast<long long>(nd.nodes.size());
        if (static_cast<long long>(l.nodes.size()) !=
            (nd.bal_num * n_here + nd.bal_den - 1) / nd.bal_den)
            rep.fail("left child size equation fails at depth " + std::to_string(nd.depth));
        if (static_cast<long long>(r.nodes.size()) !=
            ((nd.bal_den - nd.bal_num) * n_here) / nd.bal_den)
            rep.fail("right child size equation fails at depth " + std::to_string(nd.depth));
        // 1/2 <= bal <= beta/(1-epsilon), exactly
        if (2 * nd.bal_num < nd.bal_den) rep.fail("balance below 1/2");
        if (nd.bal_num * hi_den > hi_num * nd.bal_den)
            rep.fail("balance above beta/(1-epsilon) at depth " + std::to_string(nd.depth));

        size_t before = anc_seps.size();
        anc_seps.insert(anc_seps.end(), nd.separator.begin(), nd.separator.end());
        rec(nd.left, anc_seps);
        rec(nd.right, anc_seps);
        anc_seps.resize(before);
    };
    std::vector<int> seps;
    rec(t.root, seps);
    if (leaves != g.n) rep.fail("leaf count differs from |V(G)|");
    return rep;
}

/// Preorder text dump: one line per node "depth |V| |ext| [separator ids]".
inline void dump_tree(std::ostream& out, const DecompositionTree& t) {
    std::function<void(int)> rec = [&](int i) {
        const auto& nd = t.at(i);
        out << nd.depth << ' ' << nd.nodes.size() << ' ' << nd.externals.size() << " [";
        for (size_t k = 0; k < nd.separator.size(); ++k) {
            if (k) out << ' ';
            out << nd.separator[k];
        }
        out << "]\n";
        if (nd.left >= 0) {
            rec(nd.left);
            rec(nd.right);
        }
    };
    rec(t.root);
}

} // namespace gridembed
