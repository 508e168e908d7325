#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gridembed/core.hpp"
#include "gridembed/graph.hpp"
#include "gridembed/grid.hpp"
#include "gridembed/routing.hpp"

namespace gridembed {

/// Node map phi (guest node -> host coordinate, injective) plus a routing
/// keyed by guest edge id.
struct Embedding {
    std::vector<Coord> phi;
    Routing rho;
};

inline Measure measure(const Embedding& e) { return measure(e.rho); }

namespace detail {

inline std::string coord_text(const Coord& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    s += ')';
    return s;
}

inline Coord parse_coord_text(const std::string& tok) {
    require(tok.size() >= 3 && tok.front() == '(' && tok.back() == ')',
            "embedding text: malformed coordinate '" + tok + "'");
    Coord v;
    std::string body = tok.substr(1, tok.size() - 2);
    std::istringstream in(body);
    std::string part;
    while (std::getline(in, part, ',')) v.push_back(std::stoi(part));
    require(!v.empty(), "embedding text: empty coordinate");
    return v;
}

} // namespace detail

/// Text format: one line per guest node "v -> (x1,...,xd)", then one line per
/// guest edge "u v : (p1) (p2) ... (pk)" listing the path's node sequence.
inline void write_embedding(std::ostream& out, const GuestGraph& g, const GridSpec& host,
                            const Embedding& emb) {
    for (int v = 0; v < g.n; ++v)
        out << v << " -> " << detail::coord_text(emb.phi[v]) << '\n';
    for (size_t e = 0; e < g.edges.size(); ++e) {
        auto [u, v] = g.edges[e];
        out << u << ' ' << v << " :";
        auto it = emb.rho.images.find(static_cast<std::int64_t>(e));
        if (it != emb.rho.images.end())
            for (NodeId id : it->second) out << ' ' << detail::coord_text(host.coord_of(id));
        out << '\n';
    }
}

inline Embedding read_embedding(std::istream& in, const GuestGraph& g, const GridSpec& host) {
    std::map<std::pair<int, int>, int> edge_id;
    for (size_t e = 0; e < g.edges.size(); ++e) edge_id[g.edges[e]] = static_cast<int>(e);

    Embedding emb;
    emb.phi.assign(g.n, {});
    std::string line;
    int node_lines = 0;
    size_t edge_lines = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        if (node_lines < g.n) {
            int v;
            std::string arrow, coord;
            require(static_cast<bool>(ls >> v >> arrow >> coord) && arrow == "->",
                    "embedding text: bad node line '" + line + "'");
            require(v >= 0 && v < g.n, "embedding text: node id out of range");
            emb.phi[v] = detail::parse_coord_text(coord);
            ++node_lines;
        } else {
            int u, v;
            std::string colon;
            require(static_cast<bool>(ls >> u >> v >> colon) && colon == ":",
                    "embedding text: bad edge line '" + line + "'");
            if (u > v) std::swap(u, v);
            auto it = edge_id.find({u, v});
            require(it != edge_id.end(), "embedding text: unknown guest edge on line '" + line + "'");
            std::vector<NodeId> path;
            std::string tok;
            while (ls >> tok) path.push_back(host.index_of(detail::parse_coord_text(tok)));
            require(emb.rho.images.emplace(it->second, std::move(path)).second,
                    "embedding text: duplicate edge line");
            ++edge_lines;
        }
    }
    require(node_lines == g.n, "embedding text: missing node lines");
    require(edge_lines == g.edges.size(), "embedding text: missing edge lines");
    return emb;
}

} // namespace gridembed
