// Acceptance suite: one criterion per section, one PASS/FAIL line each.
// Exit status is nonzero when any criterion fails.
//
// Derived regression constants (expansion table, congestion tables, the
// dilation factor) were measured on the first run and are enforced exactly;
// rerun with --pin to print freshly measured values.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "gridembed/gridembed.hpp"

using namespace gridembed;
namespace chrono = std::chrono;

namespace {

bool g_pin_mode = false;
int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << ": " << detail << "\n";
    if (!pass) ++g_failures;
}

double seconds_since(chrono::steady_clock::time_point t0) {
    return chrono::duration<double>(chrono::steady_clock::now() - t0).count();
}

RoutingGraph permutation_requests(const GridSpec& g, const std::vector<int>& target_of) {
    RoutingGraph rg;
    for (size_t i = 0; i < target_of.size(); ++i)
        rg.requests.push_back({static_cast<std::int64_t>(i), g.coord_of(static_cast<NodeId>(i)),
                               g.coord_of(static_cast<NodeId>(target_of[i]))});
    return rg;
}

// ---- pinned constants ------------------------------------------------------

// criterion 3: max external-edge count of the decomposition tree per cbt size
const std::map<std::int64_t, std::int64_t> kPinnedExpansion = {
    {63, 8}, {127, 8}, {255, 8}, {511, 8}};

// criterion 5: measured congestion per cbt size and host dimension
const std::map<std::int64_t, int> kPinnedCongestionD2 = {
    {255, 7}, {511, 8}, {1023, 8}, {2047, 11}, {4095, 11}};
const std::map<std::int64_t, int> kPinnedCongestionD3 = {
    {255, 5}, {511, 5}, {1023, 7}, {2047, 7}, {4095, 7}};

// criterion 8: dilation / (d N^{1/d}), worst case over the criterion-4 sweep
const double kPinnedDilationFactor = 2.33;

// ---- criteria ---------------------------------------------------------------

void criterion_1() {
    auto t0 = chrono::steady_clock::now();
    bool ok = true;
    std::int64_t checked = 0;
    for (const auto& dims : {std::vector<int>{2, 3}, std::vector<int>{3, 2}}) {
        GridSpec g(dims);
        std::vector<int> perm(6);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            RoutingGraph rg = permutation_requests(g, perm);
            Routing r = route_permutation(rg, SubGrid::whole(g));
            Measure m = measure(r);
            if (m.congestion > 6 || m.dilation > 10) ok = false;
            for (const auto& q : rg.requests) {
                auto it = r.images.find(q.id);
                if (it == r.images.end() ||
                    !check_path(g, it->second, g.index_of(q.src), g.index_of(q.dst)).empty())
                    ok = false;
            }
            ++checked;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    double secs = seconds_since(t0);
    ok = ok && checked == 1440 && secs < 10.0;
    report(1, ok,
           "permutation routing exact bounds on " + std::to_string(checked) +
               " permutations of Grid(2,3)/Grid(3,2), congestion<=6 dilation<=10, " +
               std::to_string(secs) + " s");
}

void criterion_2() {
    auto t0 = chrono::steady_clock::now();
    GridSpec host({8, 8});
    bool ok = true;
    int worst = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        GuestGraph g = gen_random_bounded_degree(64, 4, seed);
        Embedding emb = embed_by_permutation(g, SubGrid::whole(host));
        VerifyReport rep = verify_embedding(g, host, emb);
        if (!rep.valid || rep.congestion > 32) ok = false;
        worst = std::max(worst, rep.congestion);
    }
    double secs = seconds_since(t0);
    ok = ok && secs < 30.0;
    report(2, ok,
           "100 random guests (N=64, deg<=4) into Grid(8,8), all valid, worst congestion " +
               std::to_string(worst) + " <= 32, " + std::to_string(secs) + " s");
}

void criterion_3() {
    bool ok = true;
    std::string detail;
    std::int64_t prev = -1;
    for (std::int64_t n : {63LL, 127LL, 255LL, 511LL}) {
        FamilySpec fam;
        fam.kind = "cbt";
        fam.n = n;
        GuestGraph g = gen_family(fam);
        auto oracle = centroid_oracle(g); // beta = 2/3
        auto tree = build_decomposition_tree(g, oracle, {1, 10});
        auto rep = check_decomposition_tree(g, tree, oracle.beta, {1, 10});
        if (!rep.ok) {
            ok = false;
            detail += " structure(" + std::to_string(n) + "): " +
                      (rep.problems.empty() ? "?" : rep.problems.front());
        }
        auto audit = audit_expansion(tree, oracle.alpha);
        if (g_pin_mode)
            std::cout << "  pin criterion3 expansion N=" << n << " -> " << audit.max_externals
                      << "\n";
        else if (audit.max_externals != kPinnedExpansion.at(n))
            ok = false;
        if (prev >= 0 && audit.max_externals > prev) ok = false;
        prev = audit.max_externals;
        detail += " K(" + std::to_string(n) + ")=" + std::to_string(audit.max_externals);
    }
    report(3, ok, "decomposition structure exact (sizes, balance range, separator incidence);" +
                      detail);
}

struct SweepEntry {
    std::string kind;
    std::int64_t n;
    int d;
    GuestGraph guest;
    GridSpec host;
    SbeResult result;
    VerifyReport verified;
};

std::vector<SweepEntry> run_sweeps(bool& ok, std::string& detail) {
    std::vector<SweepEntry> entries;
    struct Job {
        const char* kind;
        std::int64_t n;
        int d;
    };
    std::vector<Job> jobs;
    for (std::int64_t n : {63LL, 127LL, 255LL, 511LL, 1023LL, 2047LL, 4095LL}) {
        jobs.push_back({"cbt", n, 2});
        jobs.push_back({"cbt", n, 3});
    }
    for (std::int64_t n : {256LL, 1024LL, 4096LL}) {
        jobs.push_back({"grid2d", n, 2});
        jobs.push_back({"grid2d", n, 3});
    }
    for (std::int64_t n : {64LL, 256LL, 1024LL, 4096LL}) {
        jobs.push_back({"random", n, 2});
        jobs.push_back({"random", n, 3});
    }
    for (const Job& job : jobs) {
        FamilySpec fam;
        fam.kind = job.kind;
        fam.n = job.n;
        fam.seed = 7;
        fam.maxdeg = 4;
        try {
            GuestGraph g = gen_family(fam);
            NodeSeparatorOracle oracle = oracle_for_family(fam.kind, g, fam);
            DecompositionTree tree = build_decomposition_tree(g, oracle, {1, 10});
            ExpansionAudit exp = audit_expansion(tree, oracle.alpha);
            GridSpec host = minimal_cubical_host(g.n, job.d);
            SbeConfig cfg =
                SbeConfig::make(job.d, oracle.alpha, std::max(1.0, exp.max_ratio),
                                oracle.beta.value() / 0.9, host.aspect_ratio());
            SweepEntry e;
            e.kind = job.kind;
            e.n = job.n;
            e.d = job.d;
            e.guest = g;
            e.host = host;
            e.result = sbe_embed(g, tree, SubGrid::whole(host), cfg, true);
            e.verified = verify_embedding(g, host, e.result.embedding);
            for (const auto& f : e.result.audit.frames)
                for (const auto& c : f.checks)
                    if (!c.pass) ok = false;
            if (!e.result.audit.all_pass || !e.verified.valid) ok = false;
            entries.push_back(std::move(e));
        } catch (const std::exception& ex) {
            ok = false;
            detail += std::string(" [") + job.kind + " N=" + std::to_string(job.n) +
                      " d=" + std::to_string(job.d) + ": " + ex.what() + "]";
        }
    }
    return entries;
}

void criterion_5(const std::vector<SweepEntry>& entries, bool sweeps_ok) {
    bool ok = sweeps_ok;
    std::map<std::int64_t, int> cong2, cong3;
    for (const auto& e : entries) {
        if (e.kind != "cbt" || e.n < 255) continue;
        (e.d == 2 ? cong2 : cong3)[e.n] = e.verified.congestion;
    }
    double lo3 = 1e18, hi3 = 0, lo2 = 1e18, hi2 = 0;
    for (auto& [n, c] : cong3) {
        lo3 = std::min(lo3, static_cast<double>(c));
        hi3 = std::max(hi3, static_cast<double>(c));
    }
    for (auto& [n, c] : cong2) {
        double scaled = c / std::log2(static_cast<double>(n));
        lo2 = std::min(lo2, scaled);
        hi2 = std::max(hi2, scaled);
    }
    if (cong3.size() != 5 || cong2.size() != 5) ok = false;
    if (hi3 > 2.0 * lo3 || hi2 > 2.0 * lo2) ok = false;
    if (g_pin_mode) {
        for (auto& [n, c] : cong2) std::cout << "  pin criterion5 d2 N=" << n << " -> " << c << "\n";
        for (auto& [n, c] : cong3) std::cout << "  pin criterion5 d3 N=" << n << " -> " << c << "\n";
    } else {
        for (auto& [n, c] : cong2)
            if (kPinnedCongestionD2.at(n) != c) ok = false;
        for (auto& [n, c] : cong3)
            if (kPinnedCongestionD3.at(n) != c) ok = false;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "d=3 ratio %.3f <= 2, d=2 (c/log2 N) ratio %.3f <= 2",
                  lo3 > 0 ? hi3 / lo3 : 0.0, lo2 > 0 ? hi2 / lo2 : 0.0);
    report(5, ok, std::string("regime windows over cbt sweep: ") + buf);
}

void criterion_6() {
    bool ok = true;
    GuestGraph g13 = gen_lower_bound_graph(13);
    if (g13.edges.size() != 265) ok = false;
    VerifyReport r13 = verify_embedding(g13, GridSpec({13, 13}),
                                        canonical_lower_bound_embedding(13, g13));
    if (!r13.valid || r13.congestion != 1 || r13.dilation != 48) ok = false;
    GuestGraph g9 = gen_lower_bound_graph(9);
    VerifyReport r9 =
        verify_embedding(g9, GridSpec({9, 9}), canonical_lower_bound_embedding(9, g9));
    if (!r9.valid || r9.congestion != 1 || r9.dilation != 16) ok = false;
    report(6, ok,
           "lower-bound construction: |E(G(13))|=" + std::to_string(g13.edges.size()) +
               ", canonical embeddings congestion 1, dilation 48 / 16");
}

void criterion_7(const std::vector<SweepEntry>& entries, bool sweeps_ok) {
    bool ok = sweeps_ok;
    int injected = 0, detected = 0;
    std::mt19937 rng(97);

    auto inject = [&](const GuestGraph& g, const GridSpec& host, Embedding emb) {
        std::vector<std::int64_t> keys;
        for (auto& [id, path] : emb.rho.images)
            if (path.size() >= 2) keys.push_back(id);
        if (keys.empty()) return;
        auto& path = emb.rho.images[keys[rng() % keys.size()]];
        path.erase(path.begin() + 1 + rng() % (path.size() - 1));
        ++injected;
        if (!verify_embedding(g, host, emb).valid) ++detected;
    };

    // audit totals match the independent verifier on every clean sweep run
    for (const auto& e : entries)
        if (e.verified.congestion != e.result.audit.total_congestion) ok = false;

    // 50 fault injections: the separator-based outputs first, permutation
    // embeddings for the remainder
    for (const auto& e : entries) {
        if (injected >= 50) break;
        inject(e.guest, e.host, e.result.embedding);
    }
    GridSpec host({8, 8});
    while (injected < 50) {
        GuestGraph g = gen_random_bounded_degree(64, 4, 1000 + injected);
        Embedding emb = embed_by_permutation(g, SubGrid::whole(host));
        if (!verify_embedding(g, host, emb).valid) {
            ok = false;
            break;
        }
        inject(g, host, emb);
    }
    if (detected != injected || injected < 50) ok = false;
    report(7, ok,
           "verifier independence: " + std::to_string(detected) + "/" + std::to_string(injected) +
               " corruptions detected; audit totals equal verifier congestion on all clean runs");
}

void criterion_8(const std::vector<SweepEntry>& entries, bool sweeps_ok) {
    bool ok = sweeps_ok;
    double worst = 0;
    for (const auto& e : entries) {
        double cap = e.d * std::pow(static_cast<double>(e.n), 1.0 / e.d);
        worst = std::max(worst, e.verified.dilation / cap);
    }
    if (g_pin_mode) std::cout << "  pin criterion8 dilation factor -> " << worst << "\n";
    if (worst > kPinnedDilationFactor + 1e-9) ok = false;
    char buf[96];
    std::snprintf(buf, sizeof buf, "max dilation / (d N^{1/d}) = %.3f <= %.2f", worst,
                  kPinnedDilationFactor);
    report(8, ok, buf);
}

} // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--pin") == 0) g_pin_mode = true;

    criterion_1();
    criterion_2();
    criterion_3();

    bool sweeps_ok = true;
    std::string sweep_detail;
    auto t0 = chrono::steady_clock::now();
    std::vector<SweepEntry> entries = run_sweeps(sweeps_ok, sweep_detail);
    double secs = seconds_since(t0);
    report(4, sweeps_ok,
           "per-frame partition/channel/relay/junction/spread checks, zero violations over " +
               std::to_string(entries.size()) + " runs (" + std::to_string(secs) + " s)" +
               sweep_detail);

    criterion_5(entries, sweeps_ok);
    criterion_6();
    criterion_7(entries, sweeps_ok);
    criterion_8(entries, sweeps_ok);

    std::cout << (g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED") << " ("
              << (8 - g_failures) << "/8)\n";
    return g_failures == 0 ? 0 : 1;
}
