#pragma once

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "gridembed/core.hpp"
#include "gridembed/decompose.hpp"
#include "gridembed/generators.hpp"
#include "gridembed/oracles.hpp"
#include "gridembed/sbe.hpp"
#include "gridembed/verify.hpp"

namespace gridembed {

/// Smallest near-cubical host for n nodes: sides start at ceil(n^{1/d}) and
/// shrink until no proper subgrid still holds n nodes.
inline GridSpec minimal_cubical_host(std::int64_t n, int d) {
    int side = static_cast<int>(std::ceil(std::pow(static_cast<double>(n), 1.0 / d) - 1e-9));
    GridSpec g(std::vector<int>(d, side));
    while (g.node_count() < n) {
        ++g.dims[0];
        std::sort(g.dims.begin(), g.dims.end());
    }
    return shrink_to_minimal_host(g, n);
}

inline NodeSeparatorOracle oracle_for_family(const std::string& kind, const GuestGraph& g,
                                             const FamilySpec& f) {
    if (kind == "cbt") return centroid_oracle(g);
    if (kind == "grid2d") {
        int rows = f.rows, cols = f.cols;
        if (rows == 0 || cols == 0) {
            rows = static_cast<int>(std::floor(std::sqrt(static_cast<double>(g.n))));
            while (rows > 1 && g.n % rows != 0) --rows;
            cols = g.n / rows;
        }
        return hyperplane_oracle(rows, cols);
    }
    return greedy_bisection_oracle();
}

struct BenchRow {
    std::int64_t n = 0;
    int d = 0;
    GridSpec host;
    int max_degree = 0;
    int congestion = 0;
    int dilation = 0;
    std::int64_t frames = 0;
    std::int64_t base_frames = 0;
    double expansion = 0.0;
    std::string level_peaks;
    bool valid = false;
};

/// One full pipeline run: generate, decompose, embed, verify.
inline BenchRow bench_run(const FamilySpec& fam, int d, Frac epsilon) {
    GuestGraph g = gen_family(fam);
    NodeSeparatorOracle oracle = oracle_for_family(fam.kind, g, fam);
    DecompositionTree tree = build_decomposition_tree(g, oracle, epsilon);
    ExpansionAudit exp = audit_expansion(tree, oracle.alpha);

    GridSpec host = minimal_cubical_host(g.n, d);
    SubGrid m0 = SubGrid::whole(host);
    double beta_tree = oracle.beta.value() / (1.0 - epsilon.value());
    SbeConfig cfg = SbeConfig::make(d, oracle.alpha, std::max(1.0, exp.max_ratio), beta_tree,
                                    host.aspect_ratio());

    SbeResult res = sbe_embed(g, tree, m0, cfg, true);
    VerifyReport rep = verify_embedding(g, host, res.embedding);

    BenchRow row;
    row.n = g.n;
    row.d = d;
    row.host = host;
    row.max_degree = g.max_degree();
    row.congestion = rep.congestion;
    row.dilation = rep.dilation;
    row.frames = static_cast<std::int64_t>(res.audit.frames.size());
    row.base_frames = res.audit.base_frames;
    row.expansion = exp.max_ratio;
    row.valid = rep.valid && res.audit.all_pass && res.audit.attribution_consistent &&
                rep.congestion == res.audit.total_congestion;
    for (auto& [tag, peak] : res.audit.level_peak) {
        if (!row.level_peaks.empty()) row.level_peaks += '|';
        row.level_peaks += tag + ":" + std::to_string(peak);
    }
    return row;
}

inline void bench_csv_header(std::ostream& os) {
    os << "N,d,host,max_degree,congestion,dilation,frames,base_frames,expansion,"
          "level_peaks,valid\n";
}

inline void bench_csv_row(std::ostream& os, const BenchRow& row) {
    os << row.n << ',' << row.d << ',' << format_grid_spec(row.host) << ',' << row.max_degree
       << ',' << row.congestion << ',' << row.dilation << ',' << row.frames << ','
       << row.base_frames << ',' << row.expansion << ',' << row.level_peaks << ','
       << (row.valid ? "true" : "false") << '\n';
}

/// Sweep over guest sizes; rows are emitted in size order.
inline std::vector<BenchRow> bench_sweep(const std::string& kind, const std::vector<std::int64_t>& sizes,
                                         int d, std::uint64_t seed, int maxdeg, Frac epsilon,
                                         std::ostream& os) {
    bench_csv_header(os);
    std::vector<BenchRow> rows;
    for (std::int64_t n : sizes) {
        FamilySpec fam;
        fam.kind = kind;
        fam.n = n;
        fam.seed = seed;
        fam.maxdeg = maxdeg;
        BenchRow row = bench_run(fam, d, epsilon);
        bench_csv_row(os, row);
        rows.push_back(row);
    }
    return rows;
}

} // namespace gridembed
