// Command line front end: instance generation, separator-based embedding,
// verification, benchmark sweeps, and parameter/bound inspection.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridembed/gridembed.hpp"

namespace ge = gridembed;

namespace {

std::vector<std::int64_t> parse_sizes(const std::string& csv) {
    std::vector<std::int64_t> out;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(std::stoll(tok));
    return out;
}

ge::GuestGraph load_guest(const std::string& path) {
    std::ifstream in(path);
    ge::require(static_cast<bool>(in), "cannot open guest file: " + path);
    return ge::read_guest_graph(in);
}

struct OracleChoice {
    std::string kind = "tree"; // tree | grid | greedy
    std::string beta;          // optional override, e.g. "2/3"
};

ge::NodeSeparatorOracle make_oracle(const OracleChoice& c, const ge::GuestGraph& g) {
    ge::NodeSeparatorOracle o;
    if (c.kind == "tree") {
        o = ge::centroid_oracle(g);
    } else if (c.kind == "grid") {
        // infer rows x cols from the adjacency of node 0
        int cols = 0;
        for (int w : g.adj[0]) cols = std::max(cols, w);
        if (cols == 0) cols = 1;
        ge::require(g.n % cols == 0, "grid oracle: guest is not a rows x cols grid");
        o = ge::hyperplane_oracle(g.n / cols, cols);
    } else if (c.kind == "greedy") {
        o = ge::greedy_bisection_oracle();
    } else {
        ge::require(false, "unknown oracle kind: " + c.kind);
    }
    if (!c.beta.empty()) o.beta = ge::parse_frac(c.beta);
    return o;
}

int cmd_gen(const ge::FamilySpec& fam, int ell, const std::string& out_path,
            const std::string& embedding_out) {
    ge::GuestGraph g;
    ge::Embedding canonical;
    bool have_canonical = false;
    if (fam.kind == "lbg") {
        g = ge::gen_lower_bound_graph(ell);
        if (!embedding_out.empty()) {
            canonical = ge::canonical_lower_bound_embedding(ell, g);
            have_canonical = true;
        }
    } else {
        g = ge::gen_family(fam);
    }
    std::ofstream out(out_path);
    ge::require(static_cast<bool>(out), "cannot write " + out_path);
    ge::write_guest_graph(out, g);
    std::cerr << "wrote " << out_path << " (" << g.n << " nodes, " << g.edges.size()
              << " edges)\n";
    if (have_canonical) {
        std::ofstream eo(embedding_out);
        ge::require(static_cast<bool>(eo), "cannot write " + embedding_out);
        ge::write_embedding(eo, g, ge::GridSpec({ell, ell}), canonical);
        std::cerr << "wrote " << embedding_out << "\n";
    }
    return 0;
}

int cmd_embed(const std::string& guest_path, const std::string& grid_text,
              const OracleChoice& oc, const std::string& eps_text, bool audit,
              const std::string& out_path, const std::string& tree_path) {
    ge::GuestGraph g = load_guest(guest_path);
    ge::GridSpec host = ge::parse_grid_spec(grid_text);
    ge::require(host.dim() >= 2, "embed: host dimension must be at least 2");

    ge::GridSpec minimal = ge::shrink_to_minimal_host(host, g.n);
    if (minimal.dims != host.dims) {
        std::cerr << "warning: host " << ge::format_grid_spec(host)
                  << " is not minimal for N=" << g.n << "; shrinking to "
                  << ge::format_grid_spec(minimal) << "\n";
        host = minimal;
    }

    ge::NodeSeparatorOracle oracle = make_oracle(oc, g);
    ge::Frac eps = ge::parse_frac(eps_text);
    ge::DecompositionTree tree = ge::build_decomposition_tree(g, oracle, eps);
    if (!tree_path.empty()) {
        std::ofstream to(tree_path);
        ge::require(static_cast<bool>(to), "cannot write " + tree_path);
        ge::dump_tree(to, tree);
    }
    ge::ExpansionAudit exp = ge::audit_expansion(tree, oracle.alpha);
    double beta_tree = oracle.beta.value() / (1.0 - eps.value());
    ge::SbeConfig cfg = ge::SbeConfig::make(host.dim(), oracle.alpha, std::max(1.0, exp.max_ratio),
                                            beta_tree, host.aspect_ratio());

    ge::SbeResult res = ge::sbe_embed(g, tree, ge::SubGrid::whole(host), cfg, audit);
    if (audit) ge::write_audit_table(std::cerr, res.audit);

    if (out_path.empty()) {
        ge::write_embedding(std::cout, g, host, res.embedding);
    } else {
        std::ofstream out(out_path);
        ge::require(static_cast<bool>(out), "cannot write " + out_path);
        ge::write_embedding(out, g, host, res.embedding);
    }
    auto meas = ge::measure(res.embedding);
    std::cerr << "embedded N=" << g.n << " into " << ge::format_grid_spec(host)
              << ": congestion=" << meas.congestion << " dilation=" << meas.dilation << "\n";
    return 0;
}

int cmd_verify(const std::string& guest_path, const std::string& grid_text,
               const std::string& embedding_path) {
    ge::GuestGraph g = load_guest(guest_path);
    ge::GridSpec host = ge::parse_grid_spec(grid_text);
    std::ifstream in(embedding_path);
    ge::require(static_cast<bool>(in), "cannot open embedding file: " + embedding_path);
    ge::Embedding emb = ge::read_embedding(in, g, host);
    ge::VerifyReport rep = ge::verify_embedding(g, host, emb);
    for (const auto& p : rep.problems) std::cerr << "problem: " << p << "\n";
    std::cout << rep.summary() << "\n";
    return rep.valid ? 0 : 1;
}

int cmd_bench(const std::string& family, const std::string& sizes_csv, int d, std::uint64_t seed,
              int maxdeg, const std::string& eps_text, const std::string& out_path) {
    auto sizes = parse_sizes(sizes_csv);
    ge::Frac eps = ge::parse_frac(eps_text);
    if (out_path.empty()) {
        ge::bench_sweep(family, sizes, d, seed, maxdeg, eps, std::cout);
    } else {
        std::ofstream out(out_path);
        ge::require(static_cast<bool>(out), "cannot write " + out_path);
        ge::bench_sweep(family, sizes, d, seed, maxdeg, eps, out);
    }
    return 0;
}

int cmd_stats(const std::string& guest_path, const std::string& grid_text, double alpha,
              double c_coeff) {
    ge::GuestGraph g = load_guest(guest_path);
    std::cout << "nodes=" << g.n << " edges=" << g.edges.size()
              << " max_degree=" << g.max_degree() << "\n";
    if (!grid_text.empty()) {
        ge::GridSpec host = ge::parse_grid_spec(grid_text);
        auto rb = ge::reference_bounds(g.n, g.max_degree(), c_coeff, alpha, host.dim(), host);
        for (auto& [name, value] : rb.rows()) std::cout << name << ": " << value << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"guest-graph embedding into multidimensional grids with small edge-congestion"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a guest graph");
    ge::FamilySpec fam;
    int ell = 13;
    std::string gen_out = "guest.txt", gen_emb_out;
    gen->add_option("--family", fam.kind, "cbt | grid2d | random | lbg")->required();
    gen->add_option("--n", fam.n, "node count (cbt: 2^k-1, grid2d: rows*cols)");
    gen->add_option("--depth", fam.depth, "cbt depth (overrides --n)");
    gen->add_option("--rows", fam.rows, "grid2d rows");
    gen->add_option("--cols", fam.cols, "grid2d cols");
    gen->add_option("--maxdeg", fam.maxdeg, "random family degree cap");
    gen->add_option("--seed", fam.seed, "random family seed");
    gen->add_option("--ell", ell, "lbg side length (>= 9, ell mod 4 = 1)");
    gen->add_option("--out", gen_out, "output guest file");
    gen->add_option("--embedding-out", gen_emb_out, "lbg: also write the canonical embedding");

    // embed
    auto* embed = app.add_subcommand("embed", "embed a guest into a grid");
    std::string guest_path, grid_text, eps_text = "1/10", embed_out, tree_out;
    OracleChoice oc;
    bool audit = false;
    embed->add_option("--guest", guest_path, "guest graph file")->required();
    embed->add_option("--grid", grid_text, "host grid, e.g. 16x16")->required();
    embed->add_option("--oracle", oc.kind, "tree | grid | greedy");
    embed->add_option("--beta", oc.beta, "oracle balance override, e.g. 2/3");
    embed->add_option("--epsilon", eps_text, "decomposition slack in (0, 1-beta)");
    embed->add_flag("--audit", audit, "print the per-frame audit table to stderr");
    embed->add_option("--out", embed_out, "embedding output file (default: stdout)");
    embed->add_option("--dump-tree", tree_out, "write the decomposition tree dump");

    // verify
    auto* verify = app.add_subcommand("verify", "verify an embedding file");
    std::string v_guest, v_grid, v_emb;
    verify->add_option("--guest", v_guest, "guest graph file")->required();
    verify->add_option("--grid", v_grid, "host grid spec")->required();
    verify->add_option("--embedding", v_emb, "embedding file")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "sweep a family and emit CSV");
    std::string b_family = "cbt", b_sizes = "63,255,1023", b_eps = "1/10", b_out;
    int b_d = 2, b_maxdeg = 4;
    std::uint64_t b_seed = 1;
    bench->add_option("--family", b_family, "cbt | grid2d | random");
    bench->add_option("--sizes", b_sizes, "comma-separated guest sizes");
    bench->add_option("--d", b_d, "host dimension");
    bench->add_option("--seed", b_seed, "random family seed");
    bench->add_option("--maxdeg", b_maxdeg, "random family degree cap");
    bench->add_option("--epsilon", b_eps, "decomposition slack");
    bench->add_option("--out", b_out, "CSV output file (default: stdout)");

    // stats
    auto* stats = app.add_subcommand("stats", "guest statistics and reference bounds");
    std::string s_guest, s_grid;
    double s_alpha = 0.0, s_c = 1.0;
    stats->add_option("--guest", s_guest, "guest graph file")->required();
    stats->add_option("--grid", s_grid, "host grid spec (enables bound table)");
    stats->add_option("--alpha", s_alpha, "separator exponent");
    stats->add_option("--c", s_c, "expansion coefficient");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(fam, ell, gen_out, gen_emb_out);
        if (embed->parsed())
            return cmd_embed(guest_path, grid_text, oc, eps_text, audit, embed_out, tree_out);
        if (verify->parsed()) return cmd_verify(v_guest, v_grid, v_emb);
        if (bench->parsed())
            return cmd_bench(b_family, b_sizes, b_d, b_seed, b_maxdeg, b_eps, b_out);
        if (stats->parsed()) return cmd_stats(s_guest, s_grid, s_alpha, s_c);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
