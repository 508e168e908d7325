#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "gridembed/core.hpp"
#include "gridembed/embedding.hpp"
#include "gridembed/graph.hpp"
#include "gridembed/grid.hpp"

namespace gridembed {

struct VerifyReport {
    bool valid = true;
    int congestion = 0;
    int dilation = 0;
    std::vector<std::string> problems;

    void fail(const std::string& p) {
        valid = false;
        if (problems.size() < 64) problems.push_back(p);
    }

    std::string summary() const {
        return "valid=" + std::string(valid ? "true" : "false") +
               " congestion=" + std::to_string(congestion) +
               " dilation=" + std::to_string(dilation);
    }
};

/// Independent validation: works from the raw node map and the per-edge edge
/// sets only. The path order is re-derived from each edge set rather than
/// trusted, so producer bookkeeping bugs cannot leak through.
inline VerifyReport verify_embedding(const GuestGraph& g, const GridSpec& host,
                                     const Embedding& emb) {
    VerifyReport rep;

    if (static_cast<int>(emb.phi.size()) != g.n) {
        rep.fail("node map covers " + std::to_string(emb.phi.size()) + " of " +
                 std::to_string(g.n) + " nodes");
        return rep;
    }
    std::vector<NodeId> image;
    for (int v = 0; v < g.n; ++v) {
        if (!host.contains(emb.phi[v])) {
            rep.fail("node " + std::to_string(v) + " mapped outside the host");
            return rep;
        }
        image.push_back(host.index_of(emb.phi[v]));
    }
    {
        std::vector<NodeId> sorted(image);
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            rep.fail("node map is not injective");
    }

    std::unordered_map<EdgeKey, int> loads;
    for (size_t e = 0; e < g.edges.size(); ++e) {
        auto [gu, gv] = g.edges[e];
        NodeId src = image[gu], dst = image[gv];
        auto it = emb.rho.images.find(static_cast<std::int64_t>(e));
        if (it == emb.rho.images.end()) {
            rep.fail("edge " + std::to_string(e) + " has no image");
            continue;
        }

        // reduce the stored image to its edge set
        std::set<EdgeKey> edge_set;
        bool coords_ok = true;
        for (size_t i = 0; i + 1 < it->second.size(); ++i) {
            Coord a = host.coord_of(it->second[i]);
            Coord b = host.coord_of(it->second[i + 1]);
            int dist = 0;
            for (size_t k = 0; k < a.size(); ++k) dist += std::abs(a[k] - b[k]);
            if (dist != 1) {
                rep.fail("edge " + std::to_string(e) + " image uses a non-grid step");
                coords_ok = false;
                break;
            }
            edge_set.insert(edge_key(it->second[i], it->second[i + 1]));
        }
        if (!coords_ok) continue;

        if (edge_set.empty()) {
            if (src != dst) rep.fail("edge " + std::to_string(e) + " image is empty");
            continue;
        }

        // reconstruct the path from the edge set
        std::map<NodeId, std::vector<NodeId>> adj;
        for (EdgeKey k : edge_set) {
            auto [a, b] = edge_key_split(k);
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        bool shape_ok = true;
        for (auto& [node, nbrs] : adj) {
            size_t want = (node == src || node == dst) ? 1 : 2;
            if (nbrs.size() != want) {
                rep.fail("edge " + std::to_string(e) + " image is not a simple " +
                         "path (degree anomaly)");
                shape_ok = false;
                break;
            }
        }
        if (shape_ok && (!adj.count(src) || !adj.count(dst))) {
            rep.fail("edge " + std::to_string(e) + " image misses an endpoint");
            shape_ok = false;
        }
        if (shape_ok) {
            // walk from src; a simple path consumes every edge exactly once
            NodeId prev = -1, cur = src;
            size_t steps = 0;
            while (cur != dst) {
                auto& nbrs = adj[cur];
                NodeId nxt = (nbrs.size() == 1 || nbrs[0] != prev) ? nbrs[0] : nbrs[1];
                prev = cur;
                cur = nxt;
                if (++steps > edge_set.size()) break;
            }
            if (cur != dst || steps != edge_set.size()) {
                rep.fail("edge " + std::to_string(e) + " image is disconnected");
                shape_ok = false;
            }
        }
        if (!shape_ok) continue;

        rep.dilation = std::max(rep.dilation, static_cast<int>(edge_set.size()));
        for (EdgeKey k : edge_set) rep.congestion = std::max(rep.congestion, ++loads[k]);
    }
    return rep;
}

/// Exact and shape-level reference bounds for a parameter set.
struct ReferenceBounds {
    std::int64_t permutation_embedding = 0; ///< 2 ceil(delta/2) max side
    std::string separator_regime;           ///< congestion shape in terms of delta
    std::string core_regime;                ///< congestion shape in terms of C and delta
    std::string dilation_shape;             ///< O(d N^{1/d})

    std::vector<std::pair<std::string, std::string>> rows() const {
        return {{"permutation_embedding", std::to_string(permutation_embedding)},
                {"separator_regime", separator_regime},
                {"core_regime", core_regime},
                {"dilation_shape", dilation_shape}};
    }
};

inline ReferenceBounds reference_bounds(std::int64_t n, int delta, double C, double alpha, int d,
                                        const GridSpec& dims) {
    (void)n;
    ReferenceBounds rb;
    std::int64_t lmax = *std::max_element(dims.dims.begin(), dims.dims.end());
    rb.permutation_embedding = 2LL * ((delta + 1) / 2) * lmax;

    const double crit = d * (1.0 - alpha); // compare d against 1/(1-alpha)
    if (crit > 1.0 + 1e-12)
        rb.separator_regime = "d > 1/(1-alpha): O(Delta)";
    else if (crit > 1.0 - 1e-12)
        rb.separator_regime = "d = 1/(1-alpha): O(Delta log N)";
    else
        rb.separator_regime = "d < 1/(1-alpha): O(Delta N^{alpha-1+1/d})";

    char buf[160];
    if (crit > 2.0 + 1e-12) {
        std::snprintf(buf, sizeof buf, "d > 2/(1-alpha): O(d C + d^2 Delta), C=%.3f", C);
    } else if (crit > 1.0 + 1e-12) {
        std::snprintf(buf, sizeof buf,
                      "1/(1-alpha) < d <= 2/(1-alpha): O(C/(1-alpha-1/d) + d^2 Delta), C=%.3f", C);
    } else {
        std::snprintf(buf, sizeof buf,
                      "d <= 1/(1-alpha): O(C (N^{alpha-1+1/d} + log N) + d^2 Delta), C=%.3f", C);
    }
    rb.core_regime = buf;
    rb.dilation_shape = "O(d N^{1/d})";
    return rb;
}

} // namespace gridembed
