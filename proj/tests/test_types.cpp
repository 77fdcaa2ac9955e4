#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "hcw/types.hpp"
#include "test_util.hpp"

using namespace hcw;

namespace {

ColoredGraph plain(const Graph& g) { return ColoredGraph(g, std::vector<int>(g.n, 0)); }

}  // namespace

TEST_CASE("rank 0 is the atomic type") {
    TypeUniverse u;
    ColoredGraph p3 = plain(make_path(3));
    // The two endpoints look alike atomically as singletons; endpoint and
    // midpoint also do (same color, no loop), only extensions tell them apart.
    CHECK(u.rank_type(p3, {0}, 0) == u.rank_type(p3, {2}, 0));
    CHECK(u.rank_type(p3, {0}, 0) == u.rank_type(p3, {1}, 0));
    // Pairs: adjacency enters the atomic type.
    CHECK(u.rank_type(p3, {0, 1}, 0) != u.rank_type(p3, {0, 2}, 0));
}

TEST_CASE("path endpoints vs midpoint") {
    TypeUniverse u;
    ColoredGraph p3 = plain(make_path(3));
    for (int q = 0; q <= 3; ++q) CHECK(u.rank_type(p3, {0}, q) == u.rank_type(p3, {2}, q));
    CHECK(u.rank_type(p3, {0}, 1) != u.rank_type(p3, {1}, 1));
    CHECK_FALSE(ef_equivalent(p3, {0}, p3, {1}, 1));
    CHECK(ef_equivalent(p3, {0}, p3, {2}, 3));
}

TEST_CASE("caps are enforced") {
    TypeUniverse u(2, 3);
    ColoredGraph p3 = plain(make_path(3));
    CHECK_THROWS_AS(u.rank_type(p3, {0}, 3), Error);
    CHECK_THROWS_AS(u.rank_type(p3, {0, 1, 2, 0}, 1), Error);
    CHECK_THROWS_AS(ef_equivalent(p3, {0}, p3, {0}, 4, 3, 4), Error);
}

TEST_CASE("type refinement: equal rank q+1 implies equal rank q") {
    th::Rng rng(29);
    TypeUniverse u;
    for (int round = 0; round < 40; ++round) {
        Graph g = th::random_graph(rng, 2 + th::pick(rng, 4), 0.5);
        ColoredGraph cg(g, th::random_coloring(rng, g.n, 2));
        int a = th::pick(rng, g.n), b = th::pick(rng, g.n);
        for (int q = 0; q < 2; ++q) {
            if (u.rank_type(cg, {a}, q + 1) == u.rank_type(cg, {b}, q + 1))
                CHECK(u.rank_type(cg, {a}, q) == u.rank_type(cg, {b}, q));
        }
    }
}

TEST_CASE("identical structures are equivalent at every rank") {
    th::Rng rng(31);
    for (int round = 0; round < 20; ++round) {
        Graph g = th::random_graph(rng, 2 + th::pick(rng, 4), 0.5);
        ColoredGraph cg(g, th::random_coloring(rng, g.n, 2));
        std::vector<int> tuple{th::pick(rng, g.n), th::pick(rng, g.n)};
        for (int q = 0; q <= 2; ++q) CHECK(ef_equivalent(cg, tuple, cg, tuple, q));
    }
}

TEST_CASE("types agree with the game on random structures") {
    th::Rng rng(37);
    TypeUniverse u;
    for (int round = 0; round < 120; ++round) {
        int n = 2 + th::pick(rng, 4);
        Graph g = th::random_graph(rng, n, 0.5);
        ColoredGraph cg(g, th::random_coloring(rng, n, 2));
        Graph g2 = th::random_graph(rng, 2 + th::pick(rng, 4), 0.5);
        ColoredGraph cg2(g2, th::random_coloring(rng, g2.n, 2));
        for (int q = 0; q <= 2; ++q) {
            // Within one structure.
            std::vector<int> t1{th::pick(rng, n)}, t2{th::pick(rng, n)};
            CHECK((u.rank_type(cg, t1, q) == u.rank_type(cg, t2, q)) ==
                  ef_equivalent(cg, t1, cg, t2, q));
            // Across structures.
            std::vector<int> s2{th::pick(rng, g2.n)};
            CHECK((u.rank_type(cg, t1, q) == u.rank_type(cg2, s2, q)) ==
                  ef_equivalent(cg, t1, cg2, s2, q));
        }
    }
}

TEST_CASE("subtuple projection: equal pair types force equal member types") {
    // The compact running-color representation relies on this: rank-q
    // equivalence of tuples carries to positionally corresponding subtuples.
    th::Rng rng(43);
    TypeUniverse u;
    int checked = 0;
    for (int round = 0; round < 400 && checked < 60; ++round) {
        Graph g = th::random_graph(rng, 2 + th::pick(rng, 4), 0.5);
        ColoredGraph cg(g, th::random_coloring(rng, g.n, 2));
        int a1 = th::pick(rng, g.n), a2 = th::pick(rng, g.n);
        int b1 = th::pick(rng, g.n), b2 = th::pick(rng, g.n);
        for (int q = 0; q <= 2; ++q) {
            if (u.rank_type(cg, {a1, a2}, q) != u.rank_type(cg, {b1, b2}, q)) continue;
            ++checked;
            CHECK(u.rank_type(cg, {a1}, q) == u.rank_type(cg, {b1}, q));
            CHECK(u.rank_type(cg, {a2}, q) == u.rank_type(cg, {b2}, q));
        }
    }
    CHECK(checked > 0);
}
