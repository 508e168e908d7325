#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "gridembed/channel.hpp"
#include "gridembed/sbe.hpp"

using namespace gridembed;

TEST_CASE("channel point sets") {
    GridSpec root({8, 8, 4});
    SubGrid m = SubGrid::whole(root);

    SECTION("level 1 of the 8x8x4 grid") {
        AxisGrid ch = channel_points(m, 1);
        CHECK(ch.axes[0] == std::vector<int>{3, 5, 7});
        CHECK(ch.axes[1] == std::vector<int>{3, 5, 7});
        CHECK(ch.axes[2] == std::vector<int>{2, 3});
        CHECK(ch.point_count() == 18);
        CHECK(section_size(ch, 1) == 6);
        CHECK(section_size(ch, 2) == 6);
        CHECK(section_size(ch, 3) == 9);
        CHECK(channel_direction(ch) == 1); // ties break toward the smaller dimension
    }
    SECTION("level 0 covers the whole interior") {
        AxisGrid ch = channel_points(m, 0);
        CHECK(ch.point_count() == m.interior_count());
        CHECK(ch.axes[0] == std::vector<int>{2, 3, 4, 5, 6, 7});
    }
    SECTION("levels have disjoint points and edge-disjoint channels") {
        AxisGrid c1 = channel_points(m, 1);
        AxisGrid c2 = channel_points(m, 2);
        CHECK(c2.axes[0] == std::vector<int>{2, 6});
        std::set<int> a(c1.axes[0].begin(), c1.axes[0].end());
        for (int x : c2.axes[0]) CHECK_FALSE(a.count(x));

        auto e1 = c1.segment_edges();
        auto e2 = c2.segment_edges();
        std::vector<EdgeKey> inter;
        std::set_intersection(e1.begin(), e1.end(), e2.begin(), e2.end(),
                              std::back_inserter(inter));
        CHECK(inter.empty());
    }
    SECTION("combined channel covers both levels") {
        AxisGrid cc = combined_channel_points(m, 1, 2);
        CHECK(cc.axes[0] == std::vector<int>{2, 3, 5, 6, 7});
        AxisGrid c1 = channel_points(m, 1);
        for (int x : c1.axes[0])
            CHECK(std::binary_search(cc.axes[0].begin(), cc.axes[0].end(), x));
        // level 0 combined with anything is the whole interior
        AxisGrid c0 = combined_channel_points(m, 0, 2);
        CHECK(c0.point_count() == m.interior_count());
    }
    SECTION("combined extras avoid every other positive level") {
        GridSpec big({32, 32});
        SubGrid mm = SubGrid::whole(big);
        auto cc = combined_channel_points(mm, 1, 2).segment_edges();
        auto c1 = channel_points(mm, 1).segment_edges();
        auto c2 = channel_points(mm, 2).segment_edges();
        std::vector<EdgeKey> extras;
        for (EdgeKey k : cc)
            if (!std::binary_search(c1.begin(), c1.end(), k) &&
                !std::binary_search(c2.begin(), c2.end(), k))
                extras.push_back(k);
        REQUIRE_FALSE(extras.empty());
        for (int w : {3, 4}) {
            auto other = channel_points(mm, w).segment_edges();
            for (EdgeKey k : extras) CHECK_FALSE(std::binary_search(other.begin(), other.end(), k));
        }
    }
    SECTION("subgrid channels use global residues") {
        SubGrid box(root, {2, 0, 0}, GridSpec({6, 8, 4}));
        AxisGrid ch = channel_points(box, 1);
        CHECK(ch.axes[0] == std::vector<int>{5, 7}); // interior 4..7, odd residues
    }
}

TEST_CASE("uniform mappings") {
    GridSpec root({8, 8, 4});
    AxisGrid ch = channel_points(SubGrid::whole(root), 1);

    SECTION("the four-point mapping is uniform across dimensions 1 and 3 only") {
        std::vector<Coord> assigned{ch.abstract_of({3, 3, 2}), ch.abstract_of({3, 5, 2}),
                                    ch.abstract_of({5, 3, 3}), ch.abstract_of({5, 5, 3})};
        CHECK(fiber_load(assigned, ch, 1) == 1); // == ceil(4/6)
        CHECK(fiber_load(assigned, ch, 2) == 2); // > ceil(4/6): not uniform
        CHECK(fiber_load(assigned, ch, 3) == 1); // == ceil(4/9)
    }
    SECTION("empty multiset maps to nothing") {
        CHECK(uniform_assign(0, ch, 1).empty());
    }
    SECTION("13 items across dimensions 1 and 3") {
        auto pts = uniform_assign(13, ch, 1, 3);
        CHECK(fiber_load(pts, ch, 1) == 3); // ceil(13/6)
        CHECK(fiber_load(pts, ch, 3) == 2); // ceil(13/9)
    }
    SECTION("single-dimension uniformity is exact for many sizes") {
        for (int count : {1, 5, 6, 7, 17, 18, 19, 54}) {
            auto pts = uniform_assign(count, ch, 2);
            CHECK(fiber_load(pts, ch, 2) == ceil_div(count, section_size(ch, 2)));
        }
    }
    SECTION("two-dimension uniformity is exact for many sizes") {
        for (int count : {1, 4, 6, 9, 13, 18, 25, 54, 100}) {
            auto pts = uniform_assign(count, ch, 1, 3);
            CHECK(fiber_load(pts, ch, 1) == ceil_div(count, section_size(ch, 1)));
            CHECK(fiber_load(pts, ch, 3) == ceil_div(count, section_size(ch, 3)));
        }
        // degenerate pair (k == k_j) falls back to the single-dimension rule
        auto pts = uniform_assign(7, ch, 2, 2);
        CHECK(fiber_load(pts, ch, 2) == ceil_div(7, section_size(ch, 2)));
    }
    SECTION("empty channels are rejected") {
        AxisGrid empty(root, {{}, {3}, {2}});
        CHECK_THROWS_AS(uniform_assign(3, empty, 1), contract_error);
    }
}

TEST_CASE("channel level formula") {
    SECTION("w = 0 whenever d <= 1/(1-alpha)") {
        SbeConfig cfg = SbeConfig::make(2, 0.9, 1.0, 0.5, 1.0);
        for (std::int64_t n : {1LL, 100LL, 1LL << 30}) CHECK(channel_level_for(n, cfg) == 0);
    }
    SECTION("n = 1 clamps to zero") {
        SbeConfig cfg = SbeConfig::make(3, 0.0, 1.0, 0.5, 1.0);
        CHECK(channel_level_for(1, cfg) == 0);
    }
    SECTION("recomputed value at n = 2^20") {
        SbeConfig cfg = SbeConfig::make(2, 0.0, 1.0, 0.5, 1.0);
        CHECK(cfg.mu == Catch::Approx(4.539682).margin(1e-4));
        // 0.5 * (0.5 * 20 - log2(mu / 0.5)) = 3.4086... -> 3
        CHECK(channel_level_for(1 << 20, cfg) == 3);
    }
    SECTION("monotone in n") {
        SbeConfig cfg = SbeConfig::make(2, 0.0, 1.0, 0.5, 1.0);
        int prev = 0;
        for (std::int64_t n = 1; n < (1 << 22); n = 2 * n + 1) {
            int w = channel_level_for(n, cfg);
            CHECK(w >= prev);
            prev = w;
        }
    }
}

TEST_CASE("mu floor exceeds 4") {
    for (double beta : {0.5, 0.55, 2.0 / 3, 0.74, 0.9})
        CHECK(SbeConfig::mu_floor(beta) > 4.0);
    CHECK(SbeConfig::mu_floor(0.5) == Catch::Approx(4.0 / 7 + std::exp(1.0) + 1.25));
}
