#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "gridembed/axis_grid.hpp"
#include "gridembed/channel.hpp"
#include "gridembed/core.hpp"
#include "gridembed/decompose.hpp"
#include "gridembed/embedding.hpp"
#include "gridembed/graph.hpp"
#include "gridembed/grid.hpp"
#include "gridembed/route.hpp"
#include "gridembed/routing.hpp"

namespace gridembed {

/// Shape and decomposition parameters of one separator-based embedding run.
/// C and alpha certify the decomposition tree expansion: every tree node with
/// n nodes has at most C * n^alpha external edges.
struct SbeConfig {
    int d = 2;
    double alpha = 0.0;
    double C = 1.0;
    double beta = 0.5; ///< balance of the decomposition tree, in [1/2, 1)
    double mu = 0.0;   ///< max of the host aspect ratio and mu_floor(beta)

    double alpha_tilde() const { return std::max(1.0 - 2.0 / d, alpha); }
    double base_threshold() const { return 2.0 * mu * d; }

    static double mu_floor(double beta) {
        double e = std::exp(1.0);
        return (1.0 / (1.0 - beta)) * (1.0 / (7.0 * beta) + e * beta) + 1.25;
    }

    static SbeConfig make(int d, double alpha, double C, double beta, double host_aspect) {
        require(d >= 2, "SbeConfig: host dimension must be at least 2");
        require(alpha >= 0.0 && alpha < 1.0, "SbeConfig: alpha must lie in [0,1)");
        require(beta >= 0.5 && beta < 1.0, "SbeConfig: beta must lie in [1/2,1)");
        require(C > 0.0, "SbeConfig: C must be positive");
        SbeConfig c;
        c.d = d;
        c.alpha = alpha;
        c.C = C;
        c.beta = beta;
        c.mu = std::max(host_aspect, mu_floor(beta));
        require(c.mu > 4.0, "SbeConfig: mu must exceed 4");
        return c;
    }
};

/// Channel level for an n-node guest:
/// max{ floor(((1 - alpha~ - 1/d) log2 n - log2(mu / (1 - beta))) / 2), 0 }.
inline int channel_level_for(std::int64_t n, const SbeConfig& cfg) {
    if (n <= 1) return 0;
    double v = 0.5 * ((1.0 - cfg.alpha_tilde() - 1.0 / cfg.d) * std::log2(static_cast<double>(n)) -
                      std::log2(cfg.mu / (1.0 - cfg.beta)));
    if (!(v > 0.0)) return 0;
    return static_cast<int>(std::floor(v));
}

/// D^w(n) evaluated on a concrete channel point set: the worst per-section
/// ceiling of the external-edge budget C n^alpha.
inline std::int64_t load_ceiling(const AxisGrid& channel_grid, const SbeConfig& cfg,
                                 std::int64_t n) {
    require(!channel_grid.empty(), "load_ceiling: empty channel");
    double budget = cfg.C * std::pow(static_cast<double>(n), cfg.alpha);
    std::int64_t best = 0;
    for (int i = 1; i <= channel_grid.dim(); ++i) {
        double v = budget / static_cast<double>(section_size(channel_grid, i));
        best = std::max(best, static_cast<std::int64_t>(std::ceil(v - 1e-9)));
    }
    return best;
}

struct AuditCheck {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool pass = true;
};

struct SbeFrame {
    int id = 0;
    int tree_node = -1;
    std::int64_t n = 0;
    std::vector<int> box_origin;
    std::vector<int> box_dims;
    int w = 0;
    int k = 1;
    std::int64_t slot_count = 0;
    std::int64_t load_cap = 0;
    bool base = false;
    std::vector<AuditCheck> checks;
};

struct SbeAudit {
    std::vector<SbeFrame> frames;
    std::int64_t base_frames = 0;
    bool all_pass = true;
    bool attribution_consistent = true;
    std::map<std::string, int> level_peak; ///< attribution category -> max per-edge load
    int total_congestion = 0;
    int total_dilation = 0;

    const AuditCheck* first_failure() const {
        for (const auto& f : frames)
            for (const auto& c : f.checks)
                if (!c.pass) return &c;
        return nullptr;
    }
};

struct SbeResult {
    Embedding embedding;
    SbeAudit audit;
};

/// Splits a host box along dimension h (1-based) into two boxes sharing one
/// hyperplane, together with a split of the designated set U into sets of the
/// requested sizes that still cover the respective interiors.
struct HostPartition {
    SubGrid m1, m2;
    std::vector<NodeId> u1, u2;
};

inline HostPartition partition_host(const SubGrid& m, const std::vector<NodeId>& u,
                                    std::int64_t n1, std::int64_t n2, int h) {
    require(h >= 1 && h <= m.dim(), "partition_host: bad dimension");
    require(n1 >= 1 && n2 >= 1 && n1 + n2 == static_cast<std::int64_t>(u.size()),
            "partition_host: sizes must partition |U|");
    const int hd = h - 1;

    std::map<int, std::vector<NodeId>> by_plane;
    for (NodeId id : u) by_plane[m.root.coord_of(id)[hd]].push_back(id);

    int plane = -1;
    std::int64_t below = 0;
    {
        std::int64_t cum = 0;
        for (int x = m.lo(hd); x <= m.hi(hd); ++x) {
            auto it = by_plane.find(x);
            std::int64_t here = it == by_plane.end() ? 0 : static_cast<std::int64_t>(it->second.size());
            if (cum + here >= n1) {
                plane = x;
                below = cum;
                break;
            }
            cum += here;
        }
    }
    require(plane >= 0, "partition_host: cannot satisfy the requested split");

    HostPartition out;
    {
        std::vector<int> d1 = m.dims.dims, d2 = m.dims.dims;
        std::vector<int> o1 = m.origin, o2 = m.origin;
        d1[hd] = plane - m.lo(hd) + 1;
        d2[hd] = m.hi(hd) - plane + 1;
        o2[hd] = plane - 1;
        out.m1 = SubGrid(m.root, o1, GridSpec(d1));
        out.m2 = SubGrid(m.root, o2, GridSpec(d2));
    }
    std::int64_t need_from_plane = n1 - below;
    for (int x = m.lo(hd); x <= m.hi(hd); ++x) {
        auto it = by_plane.find(x);
        if (it == by_plane.end()) continue;
        auto& ids = it->second;
        std::sort(ids.begin(), ids.end());
        if (x < plane)
            out.u1.insert(out.u1.end(), ids.begin(), ids.end());
        else if (x > plane)
            out.u2.insert(out.u2.end(), ids.begin(), ids.end());
        else {
            require(need_from_plane <= static_cast<std::int64_t>(ids.size()),
                    "partition_host: infeasible plane fill (internal)");
            out.u1.insert(out.u1.end(), ids.begin(), ids.begin() + need_from_plane);
            out.u2.insert(out.u2.end(), ids.begin() + need_from_plane, ids.end());
        }
    }
    std::sort(out.u1.begin(), out.u1.end());
    std::sort(out.u2.begin(), out.u2.end());
    require(static_cast<std::int64_t>(out.u1.size()) == n1 &&
                static_cast<std::int64_t>(out.u2.size()) == n2,
            "partition_host: split sizes off (internal)");
    return out;
}

inline std::vector<NodeId> interior_ids(const SubGrid& m) {
    std::vector<NodeId> out;
    m.for_each_node([&](const Coord& v) {
        if (m.is_interior(v)) out.push_back(m.root.index_of(v));
    });
    std::sort(out.begin(), out.end());
    return out;
}

/// Initial designated set: the interior plus the lexicographically smallest
/// boundary nodes needed to reach n.
inline std::vector<NodeId> default_designated_set(const SubGrid& m, std::int64_t n) {
    require(n <= m.node_count(), "designated set: host too small");
    std::vector<NodeId> u = interior_ids(m);
    require(static_cast<std::int64_t>(u.size()) <= n,
            "designated set: interior exceeds n; host is not minimal");
    std::set<NodeId> have(u.begin(), u.end());
    m.for_each_node([&](const Coord& v) {
        if (static_cast<std::int64_t>(u.size()) >= n) return;
        NodeId id = m.root.index_of(v);
        if (!have.count(id)) u.push_back(id);
    });
    std::sort(u.begin(), u.end());
    require(static_cast<std::int64_t>(u.size()) == n, "designated set: fill failed (internal)");
    return u;
}

/// Minimal admissible host for n nodes: no proper subgrid keeps >= n nodes.
inline bool host_is_minimal(const GridSpec& g, std::int64_t n) {
    if (g.node_count() < n) return false;
    for (int i = 0; i < g.dim(); ++i) {
        if (g.dims[i] == 1) continue;
        if (g.node_count() / g.dims[i] * (g.dims[i] - 1) >= n) return false;
    }
    return true;
}

inline GridSpec shrink_to_minimal_host(GridSpec g, std::int64_t n) {
    require(g.node_count() >= n, "host grid has fewer nodes than the guest");
    while (!host_is_minimal(g, n)) {
        // shrink a longest dimension that can still afford it
        int pick = -1;
        for (int i = 0; i < g.dim(); ++i) {
            if (g.dims[i] == 1) continue;
            if (g.node_count() / g.dims[i] * (g.dims[i] - 1) < n) continue;
            if (pick < 0 || g.dims[i] > g.dims[pick]) pick = i;
        }
        --g.dims[pick];
    }
    return g;
}

struct SpreadStats {
    std::int64_t max_fiber_load = 0; ///< worst sum of slot counts over one fiber of U
    std::int64_t fibers = 0;         ///< |pi-bar_k(U)|
};

/// Base-case node placement: a bijection of the guest onto U. Nodes carrying
/// external slots are spread so that the per-fiber slot load across
/// dimension k stays within e|X|/fibers + max_load; everything else fills the
/// remaining designated nodes in a locality-friendly order.
///
/// Slot nodes are placed heaviest first into the least-loaded fiber with a
/// free designated node; the fiber free lists follow the box's boustrophedon
/// order.
inline std::vector<Coord> base_node_map(const GuestGraph& h, const std::vector<Slot>& slots,
                                        const SubGrid& m, const std::vector<NodeId>& u, int k,
                                        SpreadStats* stats = nullptr) {
    require(static_cast<int>(u.size()) == h.n, "base_node_map: |U| != |V(H)|");
    std::vector<Coord> phi(h.n);

    auto snake = snake_order(m);
    std::map<NodeId, int> snake_rank;
    for (size_t i = 0; i < snake.size(); ++i)
        snake_rank[m.root.index_of(snake[i])] = static_cast<int>(i);
    std::vector<NodeId> u_by_snake(u);
    std::sort(u_by_snake.begin(), u_by_snake.end(),
              [&](NodeId a, NodeId b) { return snake_rank.at(a) < snake_rank.at(b); });

    if (slots.empty()) {
        auto order = dfs_order(h);
        for (int i = 0; i < h.n; ++i) phi[order[i]] = m.root.coord_of(u_by_snake[i]);
        if (stats) *stats = {};
        return phi;
    }

    std::map<int, std::int64_t> slot_load;
    for (const Slot& s : slots) ++slot_load[s.node];

    struct Fiber {
        std::vector<NodeId> free;
        std::int64_t load = 0;
    };
    std::map<std::int64_t, Fiber> fibers;
    auto fiber_key = [&](NodeId id) {
        Coord v = m.root.coord_of(id);
        std::int64_t key = 0;
        for (int i = 0; i < m.dim(); ++i)
            if (i != k - 1) key = key * (m.root.dims[i] + 1) + v[i];
        return key;
    };
    for (NodeId id : u_by_snake) fibers[fiber_key(id)].free.push_back(id);

    std::vector<std::pair<std::int64_t, int>> heavy_first;
    for (auto& [node, load] : slot_load) heavy_first.emplace_back(-load, node);
    std::sort(heavy_first.begin(), heavy_first.end());

    std::set<NodeId> used;
    for (auto& [neg_load, node] : heavy_first) {
        Fiber* pick = nullptr;
        for (auto& [key, f] : fibers)
            if (!f.free.empty() && (!pick || f.load < pick->load)) pick = &f;
        require(pick != nullptr, "base_node_map: no free fiber (internal)");
        NodeId spot = pick->free.front();
        pick->free.erase(pick->free.begin());
        pick->load += -neg_load;
        used.insert(spot);
        phi[node] = m.root.coord_of(spot);
    }

    std::vector<NodeId> left;
    for (NodeId id : u_by_snake)
        if (!used.count(id)) left.push_back(id);
    size_t next = 0;
    for (int v : dfs_order(h)) {
        if (slot_load.count(v)) continue;
        phi[v] = m.root.coord_of(left[next++]);
    }

    if (stats) {
        stats->fibers = static_cast<std::int64_t>(fibers.size());
        stats->max_fiber_load = 0;
        for (auto& [key, f] : fibers)
            stats->max_fiber_load = std::max(stats->max_fiber_load, f.load);
    }
    return phi;
}

namespace detail {

struct LocalGraph {
    GuestGraph graph;
    std::vector<int> global_node;  // local -> global
    std::map<int, int> local_of;   // global -> local
    std::vector<int> global_edge;  // local edge -> global edge id
};

inline LocalGraph induced_subgraph(const GuestGraph& g0, const std::vector<int>& nodes) {
    LocalGraph lg;
    lg.graph.n = static_cast<int>(nodes.size());
    lg.graph.adj.assign(lg.graph.n, {});
    lg.graph.inc.assign(lg.graph.n, {});
    lg.global_node = nodes;
    for (size_t i = 0; i < nodes.size(); ++i) lg.local_of[nodes[i]] = static_cast<int>(i);
    for (size_t e = 0; e < g0.edges.size(); ++e) {
        auto [u, v] = g0.edges[e];
        auto iu = lg.local_of.find(u), iv = lg.local_of.find(v);
        if (iu != lg.local_of.end() && iv != lg.local_of.end()) {
            lg.graph.add_edge(iu->second, iv->second);
            lg.global_edge.push_back(static_cast<int>(e));
        }
    }
    return lg;
}

/// Concatenates routed legs into one walk from src to dst (legs are oriented
/// as needed) and erases revisit cycles so the image is a simple path. No
/// other shortening happens; the surviving edges are a subset of the legs,
/// so every per-step congestion bound still covers the result.
inline std::vector<NodeId> join_legs(const std::vector<const std::vector<NodeId>*>& legs,
                                     NodeId src, NodeId dst, const std::string& what) {
    if (src == dst) return {};
    std::vector<NodeId> walk{src};
    for (const auto* leg : legs) {
        if (!leg || leg->empty()) continue;
        if (leg->front() == walk.back()) {
            walk.insert(walk.end(), leg->begin() + 1, leg->end());
        } else if (leg->back() == walk.back()) {
            walk.insert(walk.end(), leg->rbegin() + 1, leg->rend());
        } else {
            require(false, "routing legs do not chain: " + what);
        }
    }
    require(walk.back() == dst, "routing legs do not reach the target: " + what);
    std::vector<NodeId> out;
    std::map<NodeId, size_t> at;
    for (NodeId v : walk) {
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

} // namespace detail

namespace detail {

class SbeRun {
public:
    SbeRun(const GuestGraph& g0, const DecompositionTree& t, const SubGrid& m0,
           const SbeConfig& cfg, bool audit_mode)
        : g0_(g0), t_(t), m0_(m0), cfg_(cfg), audit_mode_(audit_mode) {
        delta0_ = g0.max_degree();
    }

    SbeResult run(std::vector<NodeId> u0) {
        require(t_.at(t_.root).externals.empty(), "sbe: root must have no external edges");
        result_.embedding.phi.assign(g0_.n, {});
        frame(t_.root, {}, m0_, std::move(u0));
        finalize();
        return std::move(result_);
    }

private:
    struct FrameOut {
        std::map<int, Coord> anchors;                   // slot edge id -> channel point
        std::map<int, std::vector<NodeId>> slot_paths;  // slot edge id -> routed collection path
        int w = 0;
        int k = 1;
    };

    const GuestGraph& g0_;
    const DecompositionTree& t_;
    const SubGrid& m0_;
    SbeConfig cfg_;
    bool audit_mode_;
    int delta0_ = 1;
    int next_frame_ = 0;
    SbeResult result_;
    // per guest edge: ordered (category, sorted edge keys) contributions
    std::map<int, std::vector<std::pair<std::string, std::vector<EdgeKey>>>> legs_;
    std::map<int, std::int64_t> budget_;

    void record(SbeFrame& fr, const std::string& name, double measured, double bound) {
        AuditCheck c{name, measured, bound, measured <= bound + 1e-7};
        if (!c.pass) {
            result_.audit.all_pass = false;
            std::string box = format_grid_spec(GridSpec(fr.box_dims));
            throw contract_error("sbe audit failure: " + name + " measured " +
                                 std::to_string(measured) + " > bound " + std::to_string(bound) +
                                 " at frame " + std::to_string(fr.id) + " (n=" +
                                 std::to_string(fr.n) + ", box " + box + ", w=" +
                                 std::to_string(fr.w) + ")");
        }
        fr.checks.push_back(std::move(c));
    }

    void add_leg(int edge, const std::string& tag, const std::vector<NodeId>& path,
                 std::int64_t budget_add) {
        budget_[edge] += budget_add;
        if (!audit_mode_) return;
        std::vector<EdgeKey> keys = Routing::path_edges(path);
        std::sort(keys.begin(), keys.end());
        legs_[edge].emplace_back(tag, std::move(keys));
    }

    static std::int64_t expected_lambda(std::int64_t count, const AxisGrid& pts, int dim) {
        return count == 0 ? 0 : ceil_div(count, section_size(pts, dim));
    }

    FrameOut frame(int tnode, const std::vector<Slot>& slots, const SubGrid& m,
                   std::vector<NodeId> u) {
        const auto& nd = t_.at(tnode);
        const std::int64_t n = static_cast<std::int64_t>(nd.nodes.size());
        require(static_cast<std::int64_t>(u.size()) == n, "sbe frame: |U| != n");

        SbeFrame fr;
        fr.id = next_frame_++;
        fr.tree_node = tnode;
        fr.n = n;
        fr.box_origin = m.origin;
        fr.box_dims = m.dims.dims;
        fr.w = channel_level_for(n, cfg_);
        fr.slot_count = static_cast<std::int64_t>(slots.size());

        const int lmax = *std::max_element(m.dims.dims.begin(), m.dims.dims.end());
        const bool base = static_cast<double>(lmax) <= cfg_.base_threshold() + 1e-9;
        fr.base = base;

        AxisGrid ch = channel_points(m, fr.w);
        if (!ch.empty()) {
            fr.k = channel_direction(ch);
            if (!slots.empty() || !base) fr.load_cap = load_ceiling(ch, cfg_, n);
        } else {
            require(base && slots.empty(),
                    "sbe frame: empty channel where one is required (frame " +
                        std::to_string(fr.id) + ")");
        }

        // expansion certificate: |X| <= C n^alpha
        record(fr, "slot_budget", static_cast<double>(slots.size()),
               cfg_.C * std::pow(static_cast<double>(n), cfg_.alpha));

        FrameOut out;
        out.w = fr.w;
        out.k = fr.k;
        if (base) {
            ++result_.audit.base_frames;
            base_frame(tnode, slots, m, u, ch, fr, out);
        } else {
            recursive_frame(tnode, slots, m, u, ch, fr, out);
        }
        result_.audit.frames.push_back(std::move(fr));
        return out;
    }

    /// Bottom of the recursion: place the whole remaining subgraph with the
    /// permutation-routing embedding and draw the external slots to their
    /// channel anchors across the full box.
    void base_frame(int tnode, const std::vector<Slot>& slots, const SubGrid& m,
                    const std::vector<NodeId>& u, const AxisGrid& ch, SbeFrame& fr,
                    FrameOut& out) {
        const auto& nd = t_.at(tnode);
        detail::LocalGraph lg = detail::induced_subgraph(g0_, nd.nodes);

        // node placement
        std::vector<Coord> phi_local;
        {
            std::vector<Slot> local_slots;
            local_slots.reserve(slots.size());
            for (const Slot& s : slots) local_slots.push_back({s.edge, lg.local_of.at(s.node)});
            SpreadStats stats;
            phi_local = base_node_map(lg.graph, local_slots, m, u, fr.k, &stats);
            if (!slots.empty())
                record(fr, "base_spread", static_cast<double>(stats.max_fiber_load),
                       std::exp(1.0) * slots.size() / stats.fibers + delta0_);
        }

        // permutation-routing embedding of the subgraph across the box
        {
            Embedding local = embed_by_permutation(lg.graph, m, phi_local);
            Measure meas = measure(local.rho);
            int delta_h = std::max(1, lg.graph.max_degree());
            record(fr, "base_embed_congestion", meas.congestion,
                   2.0 * ((delta_h + 1) / 2) *
                       *std::max_element(m.dims.dims.begin(), m.dims.dims.end()));
            std::int64_t path_budget = 2 * AxisGrid::of_box(m).span_sum();
            for (auto& [local_e, path] : local.rho.images) {
                int global_e = lg.global_edge[static_cast<size_t>(local_e)];
                add_leg(global_e, "base", path, path_budget);
                require(result_.embedding.rho.images.emplace(global_e, std::move(path)).second,
                        "sbe: duplicate edge image (internal)");
            }
            for (int i = 0; i < lg.graph.n; ++i)
                result_.embedding.phi[lg.global_node[i]] = phi_local[i];
        }

        // anchors and the collection routing for external slots
        if (!slots.empty()) {
            auto points = uniform_assign(static_cast<std::int64_t>(slots.size()), ch, fr.k);
            record(fr, "anchor_uniformity_k",
                   static_cast<double>(fiber_load(points, ch, fr.k)),
                   static_cast<double>(expected_lambda(slots.size(), ch, fr.k)));

            RoutingGraph rg;
            for (size_t i = 0; i < slots.size(); ++i) {
                Coord src = result_.embedding.phi[slots[i].node];
                Coord dst = ch.concrete(points[i]);
                out.anchors[slots[i].edge] = dst;
                rg.requests.push_back({slots[i].edge, src, dst});
            }

            RouteStats stats;
            Routing sigma = route_general_aspect(rg, m, fr.k, &stats);
            Measure meas = measure(sigma);
            double mu_here = m.dims.aspect_ratio();
            record(fr, "base_collect_congestion", meas.congestion,
                   2.0 * std::ceil(mu_here * std::max(stats.p, stats.q) - 1e-9));
            double s_k = static_cast<double>(section_size(ch, fr.k));
            record(fr, "base_collect_vs_section", meas.congestion,
                   2.0 * std::ceil(cfg_.mu * (std::exp(1.0) * slots.size() / s_k + delta0_) - 1e-9));

            std::int64_t path_budget = 2 * AxisGrid::of_box(m).span_sum();
            for (auto& [e, path] : sigma.images) {
                add_leg(static_cast<int>(e), "base", path, path_budget);
                out.slot_paths[static_cast<int>(e)] = std::move(path);
            }
        }
    }

    void recursive_frame(int tnode, const std::vector<Slot>& slots, const SubGrid& m,
                         const std::vector<NodeId>& u, const AxisGrid& ch, SbeFrame& fr,
                         FrameOut& out) {
        const auto& nd = t_.at(tnode);
        require(!t_.is_leaf(tnode), "sbe: recursion reached a leaf with a large host (internal)");
        require(!ch.empty(), "sbe frame " + std::to_string(fr.id) +
                                 ": empty channel in a recursive frame");

        const int c1 = nd.left, c2 = nd.right;
        const std::int64_t n1 = static_cast<std::int64_t>(t_.at(c1).nodes.size());
        const std::int64_t n2 = static_cast<std::int64_t>(t_.at(c2).nodes.size());
        record(fr, "balance", static_cast<double>(std::max(n1, n2)),
               std::ceil(cfg_.beta * static_cast<double>(fr.n) - 1e-9));

        int h = 1;
        for (int i = 2; i <= m.dim(); ++i)
            if (m.dims.dims[i - 1] > m.dims.dims[h - 1]) h = i;

        HostPartition part = partition_host(m, u, n1, n2, h);
        for (const SubGrid* mj : {&part.m1, &part.m2}) {
            record(fr, "partition_aspect", mj->dims.aspect_ratio(), cfg_.mu);
            record(fr, "partition_min_side_gt_2d",
                   2.0 * cfg_.d + 1.0,
                   static_cast<double>(*std::min_element(mj->dims.dims.begin(), mj->dims.dims.end())));
        }
        for (int j = 0; j < 2; ++j) {
            const SubGrid& mj = j == 0 ? part.m1 : part.m2;
            const std::vector<NodeId>& uj = j == 0 ? part.u1 : part.u2;
            std::set<NodeId> us(uj.begin(), uj.end());
            for (NodeId id : interior_ids(mj))
                require(us.count(id), "sbe: designated set misses an interior node (frame " +
                                          std::to_string(fr.id) + ")");
        }

        // channels the children expose at this frame's level must exist
        AxisGrid ch1 = channel_points(part.m1, fr.w);
        AxisGrid ch2 = channel_points(part.m2, fr.w);
        record(fr, "channel_nonempty_child1", ch1.empty() ? 1.0 : 0.0, 0.0);
        record(fr, "channel_nonempty_child2", ch2.empty() ? 1.0 : 0.0, 0.0);

        SubGrid m1 = part.m1, m2 = part.m2;

        // recurse
        FrameOut o1 = frame(c1, t_.at(c1).externals, m1, std::move(part.u1));
        FrameOut o2 = frame(c2, t_.at(c2).externals, m2, std::move(part.u2));

        // relay the children's slot anchors onto this frame's channel level
        std::map<int, Coord> relay1, relay2;
        Routing relay_route1 = relay_child(t_.at(c1).externals, m1, ch1, o1, fr, relay1, n1);
        Routing relay_route2 = relay_child(t_.at(c2).externals, m2, ch2, o2, fr, relay2, n2);

        // anchors of this frame's own slots
        std::map<int, Coord> psi;
        if (!slots.empty()) {
            auto points = uniform_assign(static_cast<std::int64_t>(slots.size()), ch, fr.k);
            record(fr, "anchor_uniformity_k",
                   static_cast<double>(fiber_load(points, ch, fr.k)),
                   static_cast<double>(expected_lambda(slots.size(), ch, fr.k)));
            for (size_t i = 0; i < slots.size(); ++i) {
                psi[slots[i].edge] = ch.concrete(points[i]);
                out.anchors[slots[i].edge] = psi[slots[i].edge];
            }
        }

        // junction routing on this frame's channel: cut edges between the two
        // relayed sides plus this frame's slots drawn from their side's relay
        std::vector<AbstractRequest> junction;
        std::set<int> child1_nodes(t_.at(c1).nodes.begin(), t_.at(c1).nodes.end());
        for (int e : nd.cut_edges) {
            require(relay1.count(e) && relay2.count(e), "sbe: cut edge missing a relay anchor");
            junction.push_back({e, ch.abstract_of(relay1[e]), ch.abstract_of(relay2[e])});
        }
        for (const Slot& s : slots) {
            const std::map<int, Coord>& relay = child1_nodes.count(s.node) ? relay1 : relay2;
            require(relay.count(s.edge), "sbe: slot missing a relay anchor");
            junction.push_back({s.edge, ch.abstract_of(relay.at(s.edge)),
                                ch.abstract_of(psi.at(s.edge))});
        }

        Routing junction_route;
        if (!junction.empty()) {
            auto order = detail::order_by_extent_desc(ch);
            require(order[0] == fr.k - 1, "sbe: junction order does not lead with the direction");
            RouteStats stats;
            junction_route = route_on_grid(std::move(junction), ch, order, {}, false, &stats);
            Measure meas = measure(junction_route);
            record(fr, "junction_congestion_alg", meas.congestion,
                   2.0 * std::max(stats.p, stats.q));
            std::int64_t d1 = load_ceiling(ch1, cfg_, n1);
            std::int64_t d2 = load_ceiling(ch2, cfg_, n2);
            std::int64_t dmax = std::max(d1, d2);
            std::int64_t dn = fr.load_cap;
            record(fr, "junction_congestion", meas.congestion,
                   2.0 * std::max(2 * dmax, dmax + dn));
            std::int64_t path_budget = 2 * ch.span_sum();
            for (auto& [e, path] : junction_route.images)
                add_leg(static_cast<int>(e), "w=" + std::to_string(fr.w), path, path_budget);
        }

        auto image_of = [](const std::map<std::int64_t, std::vector<NodeId>>& store,
                           std::int64_t key) -> const std::vector<NodeId>* {
            auto it = store.find(key);
            return it == store.end() ? nullptr : &it->second;
        };
        auto slot_path_of = [](const std::map<int, std::vector<NodeId>>& store,
                               int key) -> const std::vector<NodeId>* {
            auto it = store.find(key);
            return it == store.end() ? nullptr : &it->second;
        };

        // final images of the cut edges severed here
        for (int e : nd.cut_edges) {
            auto [gu, gv] = g0_.edges[e];
            int s1 = child1_nodes.count(gu) ? gu : gv;
            int s2 = g0_.other_end(e, s1);
            std::vector<const std::vector<NodeId>*> legs{
                slot_path_of(o1.slot_paths, e),     image_of(relay_route1.images, e),
                image_of(junction_route.images, e), image_of(relay_route2.images, e),
                slot_path_of(o2.slot_paths, e)};
            NodeId src = m.root.index_of(result_.embedding.phi[s1]);
            NodeId dst = m.root.index_of(result_.embedding.phi[s2]);
            auto path = detail::join_legs(legs, src, dst,
                                          "cut edge " + std::to_string(e) + " at frame " +
                                              std::to_string(fr.id));
            require(result_.embedding.rho.images.emplace(e, std::move(path)).second,
                    "sbe: duplicate cut edge image (internal)");
        }

        // this frame's slot collection paths
        for (const Slot& s : slots) {
            bool left_side = child1_nodes.count(s.node) != 0;
            FrameOut& oj = left_side ? o1 : o2;
            Routing& relay_route = left_side ? relay_route1 : relay_route2;
            std::vector<const std::vector<NodeId>*> legs{
                slot_path_of(oj.slot_paths, s.edge), image_of(relay_route.images, s.edge),
                image_of(junction_route.images, s.edge)};
            NodeId src = m.root.index_of(result_.embedding.phi[s.node]);
            NodeId dst = m.root.index_of(psi.at(s.edge));
            out.slot_paths[s.edge] = detail::join_legs(
                legs, src, dst, "slot " + std::to_string(s.edge) + " at frame " +
                                    std::to_string(fr.id));
        }

        if (audit_mode_) channel_disjointness_check(m, fr);
    }

    /// Builds the relay mapping of one child (uniform across this frame's
    /// direction and the child's own) and routes child anchors to relay
    /// anchors on the combined channel with the modified recursion order.
    Routing relay_child(const std::vector<Slot>& xj, const SubGrid& mj, const AxisGrid& chj,
                        FrameOut& oj, SbeFrame& fr, std::map<int, Coord>& relay,
                        std::int64_t nj) {
        Routing routed;
        if (xj.empty()) return routed;

        auto points = uniform_assign(static_cast<std::int64_t>(xj.size()), chj, fr.k, oj.k);
        record(fr, "relay_uniformity_k", static_cast<double>(fiber_load(points, chj, fr.k)),
               static_cast<double>(expected_lambda(xj.size(), chj, fr.k)));
        record(fr, "relay_uniformity_kj", static_cast<double>(fiber_load(points, chj, oj.k)),
               static_cast<double>(expected_lambda(xj.size(), chj, oj.k)));
        for (size_t i = 0; i < xj.size(); ++i) relay[xj[i].edge] = chj.concrete(points[i]);

        AxisGrid chjw = channel_points(mj, oj.w); // the child's own level
        require(!chjw.empty(), "sbe: child channel empty (internal)");
        AxisGrid combined = combined_channel_points(mj, oj.w, fr.w);

        std::vector<AbstractRequest> reqs;
        for (const Slot& s : xj)
            reqs.push_back({s.edge, combined.abstract_of(oj.anchors.at(s.edge)),
                            combined.abstract_of(relay.at(s.edge))});

        // recursion order and slice counts follow the child's own channel grid
        std::vector<int> vlen(combined.dim());
        std::vector<int> order(combined.dim());
        for (int i = 0; i < combined.dim(); ++i) {
            vlen[i] = chjw.extent(i);
            order[i] = i;
        }
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return vlen[a] > vlen[b]; });
        require(order[0] == oj.k - 1, "sbe: relay order does not lead with the child direction");

        RouteStats stats;
        routed = route_on_grid(std::move(reqs), combined, order, vlen, false, &stats);
        Measure meas = measure(routed);
        record(fr, "relay_congestion_alg", meas.congestion, 2.0 * std::max(stats.p, stats.q));
        record(fr, "relay_congestion", meas.congestion,
               2.0 * static_cast<double>(load_ceiling(chj, cfg_, nj)));
        std::int64_t path_budget = 2 * combined.span_sum();
        for (auto& [e, path] : routed.images)
            add_leg(static_cast<int>(e), "w=" + std::to_string(fr.w), path, path_budget);
        return routed;
    }

    /// Channels of distinct positive levels inside this box must be
    /// edge-disjoint; verified directly on the segment edge sets.
    void channel_disjointness_check(const SubGrid& m, SbeFrame& fr) {
        if (fr.w < 1) return;
        std::vector<std::vector<EdgeKey>> sets;
        for (int w = 1; w <= fr.w; ++w) {
            AxisGrid c = channel_points(m, w);
            if (c.empty()) {
                sets.emplace_back();
                continue;
            }
            sets.push_back(c.segment_edges());
        }
        for (size_t a = 0; a < sets.size(); ++a)
            for (size_t b = a + 1; b < sets.size(); ++b) {
                std::vector<EdgeKey> inter;
                std::set_intersection(sets[a].begin(), sets[a].end(), sets[b].begin(),
                                      sets[b].end(), std::back_inserter(inter));
                record(fr, "channel_disjointness", static_cast<double>(inter.size()), 0.0);
            }
    }

    void finalize() {
        std::sort(result_.audit.frames.begin(), result_.audit.frames.end(),
                  [](const SbeFrame& a, const SbeFrame& b) { return a.id < b.id; });
        for (int v = 0; v < g0_.n; ++v)
            require(!result_.embedding.phi[v].empty(), "sbe: node left unplaced (internal)");
        for (size_t e = 0; e < g0_.edges.size(); ++e)
            require(result_.embedding.rho.has(static_cast<std::int64_t>(e)),
                    "sbe: edge left unrouted (internal)");

        Measure meas = measure(result_.embedding.rho);
        result_.audit.total_congestion = meas.congestion;
        result_.audit.total_dilation = meas.dilation;

        for (auto& [e, path] : result_.embedding.rho.images) {
            auto it = budget_.find(static_cast<int>(e));
            std::int64_t allowance = it == budget_.end() ? 0 : it->second;
            if (path.size() >= 2)
                require(static_cast<std::int64_t>(path.size()) - 1 <= allowance,
                        "sbe: dilation budget exceeded on edge " + std::to_string(e));
        }

        if (!audit_mode_) return;
        // attribute every final edge use to the first leg that contains it
        std::map<std::string, std::unordered_map<EdgeKey, int>> per_cat;
        std::unordered_map<EdgeKey, int> total;
        for (const auto& [e, path] : result_.embedding.rho.images) {
            auto lit = legs_.find(static_cast<int>(e));
            for (size_t i = 0; i + 1 < path.size(); ++i) {
                EdgeKey key = edge_key(path[i], path[i + 1]);
                ++total[key];
                bool found = false;
                if (lit != legs_.end()) {
                    for (const auto& [tag, keys] : lit->second) {
                        if (std::binary_search(keys.begin(), keys.end(), key)) {
                            ++per_cat[tag][key];
                            found = true;
                            break;
                        }
                    }
                }
                if (!found) result_.audit.attribution_consistent = false;
            }
        }
        for (auto& [tag, m] : per_cat) {
            int peak = 0;
            for (auto& [k, c] : m) peak = std::max(peak, c);
            result_.audit.level_peak[tag] = peak;
        }
        // partition identity: per-category counts sum to the measured counts
        std::unordered_map<EdgeKey, int> summed;
        for (auto& [tag, m] : per_cat)
            for (auto& [k, c] : m) summed[k] += c;
        if (summed != total) result_.audit.attribution_consistent = false;
        if (meas.per_edge != total) result_.audit.attribution_consistent = false;
    }
};

} // namespace detail

/// Runs the separator-based embedding of g0 (with decomposition tree t) into
/// the host box m0. The designated set defaults to the interior plus the
/// smallest boundary nodes. Every per-step bound is asserted as the run
/// proceeds; violations abort with frame provenance.
inline SbeResult sbe_embed(const GuestGraph& g0, const DecompositionTree& t, const SubGrid& m0,
                           const SbeConfig& cfg, bool audit_mode = true,
                           std::vector<NodeId> u0 = {}) {
    require(m0.dim() >= 2, "sbe_embed: host dimension must be at least 2");
    require(m0.dim() == cfg.d, "sbe_embed: config dimension mismatch");
    require(m0.node_count() >= g0.n, "sbe_embed: host smaller than guest");
    require(host_is_minimal(m0.dims, g0.n),
            "sbe_embed: host is not minimal (some proper subgrid still fits the guest)");
    require(cfg.mu >= m0.dims.aspect_ratio() - 1e-12, "sbe_embed: mu below the host aspect ratio");
    if (u0.empty()) u0 = default_designated_set(m0, g0.n);
    require(static_cast<std::int64_t>(u0.size()) == g0.n, "sbe_embed: |U| != N");
    detail::SbeRun run(g0, t, m0, cfg, audit_mode);
    return run.run(std::move(u0));
}

/// Audit table: one row per frame plus one row per check.
inline void write_audit_table(std::ostream& os, const SbeAudit& audit) {
    os << "frame tree_node n w k |X| D base box checks\n";
    for (const auto& f : audit.frames) {
        os << f.id << ' ' << f.tree_node << ' ' << f.n << ' ' << f.w << ' ' << f.k << ' '
           << f.slot_count << ' ' << f.load_cap << ' ' << (f.base ? 1 : 0) << ' '
           << format_grid_spec(GridSpec(f.box_dims));
        for (const auto& c : f.checks)
            os << ' ' << c.name << '=' << c.measured << '/' << c.bound
               << (c.pass ? "" : "!FAIL");
        os << '\n';
    }
    os << "frames=" << audit.frames.size() << " base_frames=" << audit.base_frames
       << " congestion=" << audit.total_congestion << " dilation=" << audit.total_dilation
       << " all_pass=" << (audit.all_pass ? "true" : "false");
    for (const auto& [tag, peak] : audit.level_peak) os << ' ' << tag << "_peak=" << peak;
    os << '\n';
}

} // namespace gridembed
