#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gridembed/coloring.hpp"

using namespace gridembed;

TEST_CASE("bipartite edge coloring") {
    SECTION("perfect matching needs one color") {
        BipartiteMultigraph b;
        b.n_left = b.n_right = 4;
        for (int i = 0; i < 4; ++i) b.edges.emplace_back(i, (i + 1) % 4);
        int colors = 0;
        auto c = bipartite_edge_color(b, &colors);
        CHECK(colors == 1);
        CHECK(is_proper_edge_coloring(b, c));
    }
    SECTION("even cycle needs two colors") {
        // C6 as a bipartite graph: left {0,1,2}, right {0,1,2}
        BipartiteMultigraph b;
        b.n_left = b.n_right = 3;
        for (int i = 0; i < 3; ++i) {
            b.edges.emplace_back(i, i);
            b.edges.emplace_back(i, (i + 1) % 3);
        }
        int colors = 0;
        auto c = bipartite_edge_color(b, &colors);
        CHECK(colors == 2);
        CHECK(is_proper_edge_coloring(b, c));
    }
    SECTION("random multigraph colored with exactly max degree colors") {
        std::mt19937 rng(5);
        for (int trial = 0; trial < 20; ++trial) {
            BipartiteMultigraph b;
            b.n_left = 12;
            b.n_right = 14;
            std::vector<int> dl(b.n_left, 0), dr(b.n_right, 0);
            while (b.edges.size() < 50) {
                int u = static_cast<int>(rng() % b.n_left);
                int v = static_cast<int>(rng() % b.n_right);
                if (dl[u] >= 5 || dr[v] >= 5) continue;
                ++dl[u];
                ++dr[v];
                b.edges.emplace_back(u, v); // parallel edges allowed
            }
            int maxdeg = std::max(*std::max_element(dl.begin(), dl.end()),
                                  *std::max_element(dr.begin(), dr.end()));
            int colors = 0;
            auto c = bipartite_edge_color(b, &colors);
            REQUIRE(colors == maxdeg);
            REQUIRE(is_proper_edge_coloring(b, c));
            for (int col : c) {
                REQUIRE(col >= 0);
                REQUIRE(col < colors);
            }
        }
    }
    SECTION("custom processing order still colors properly") {
        BipartiteMultigraph b;
        b.n_left = b.n_right = 6;
        std::mt19937 rng(9);
        for (int i = 0; i < 18; ++i)
            b.edges.emplace_back(static_cast<int>(rng() % 6), static_cast<int>(rng() % 6));
        std::vector<int> order(b.edges.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(order.size() - 1 - i);
        auto c = bipartite_edge_color(b, nullptr, order);
        CHECK(is_proper_edge_coloring(b, c));
    }
}
