#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>

#include "hcw/synthesis.hpp"
#include "test_util.hpp"

using namespace hcw;

namespace {

ColoredGraph full_product(const Graph& q, const Graph& m, const std::vector<int>& colors) {
    return ColoredGraph(strong_product(q, m), colors);
}

SynthesisContext make_ctx(const Graph& q, const Graph& m, ColoredGraph g, const char* xi, int r,
                          SynthesisOptions options = {}) {
    return SynthesisContext(q, m, decompose_small(m), std::move(g), parse_formula(xi), r, options);
}

// Definition-level enumeration of the initial color's table.
std::map<std::vector<std::pair<int, int>>, TypeId> brute_force_table(const SynthesisContext& ctx,
                                                                     int v) {
    int p = v / ctx.m().n, h = v % ctx.m().n;
    std::vector<std::pair<int, int>> universe;
    for (int c = 0; c < ctx.power_color_count(); ++c)
        for (int hh : ctx.wreach_of(h)) universe.emplace_back(c, hh);
    std::map<std::vector<std::pair<int, int>>, TypeId> table;
    REQUIRE(universe.size() <= 18);
    for (int mask = 0; mask < (1 << universe.size()); ++mask) {
        std::vector<std::pair<int, int>> w;
        for (size_t i = 0; i < universe.size(); ++i)
            if (mask & (1 << i)) w.push_back(universe[i]);
        // Z: the vertices with parameters in the ball realizing pairs of W.
        std::vector<int> z;
        std::set<std::pair<int, int>> projection;
        for (int pp : ctx.ball_of(p))
            for (int hh = 0; hh < ctx.m().n; ++hh) {
                auto pair = std::make_pair(ctx.power_coloring()[pp], hh);
                if (std::find(w.begin(), w.end(), pair) == w.end()) continue;
                z.push_back(ctx.product_id(pp, hh));
                projection.insert(pair);
            }
        if (projection != std::set<std::pair<int, int>>(w.begin(), w.end())) continue;
        std::sort(z.begin(), z.end(), [&](int a, int b) { return ctx.precedes(a, b); });
        z.push_back(v);
        std::sort(w.begin(), w.end());
        table[w] = ctx.types().rank_type_unchecked(ctx.gs(), z, ctx.q_type());
    }
    return table;
}

}  // namespace

TEST_CASE("initial colors: empty set entry and brute-force domain agreement") {
    Graph q = make_path(3), m = make_path(2);
    std::vector<int> colors(q.n * m.n, 0);
    auto ctx = make_ctx(q, m, full_product(q, m, colors), "(E x1 x2)", 1);

    for (int v = 0; v < q.n * m.n; ++v) {
        auto rc = initial_color(ctx, v);
        // The empty set is always defined and carries the vertex's own type.
        bool found_empty = false;
        for (auto& [w, type] : rc.table)
            if (w.empty()) {
                found_empty = true;
                CHECK(type == rc.base);
                CHECK(type == ctx.types().rank_type_unchecked(ctx.gs(), {v}, ctx.q_type()));
            }
        CHECK(found_empty);

        auto want = brute_force_table(ctx, v);
        REQUIRE(rc.table.size() == want.size());
        for (auto& [w, type] : rc.table) {
            auto sorted = w;
            std::sort(sorted.begin(), sorted.end());
            REQUIRE(want.count(sorted));
            CHECK(want[sorted] == type);
        }
        // The full-ground entry is the compact representative.
        CHECK(want[rc.ground] == rc.full_type);
    }
}

TEST_CASE("restrict_color: root keeps only the empty set, restriction is monotone") {
    Graph q = make_path(2), m = make_path(3);
    std::vector<int> colors(q.n * m.n, 0);
    auto ctx = make_ctx(q, m, full_product(q, m, colors), "(E x1 x2)", 1);
    const auto& td = ctx.decomposition();

    for (int v = 0; v < q.n * m.n; ++v) {
        auto rc = initial_color(ctx, v);
        auto at_root = restrict_color(rc, td.root, ctx);
        CHECK(at_root.table.size() == 1);
        CHECK(at_root.table[0].first.empty());
        CHECK(at_root.ground.empty());

        // Monotone along root paths: fewer forgotten vertices, larger domain.
        for (int t = 0; t < td.node_count(); ++t) {
            auto here = restrict_color(rc, t, ctx);
            int up = td.parent[t];
            if (up < 0) continue;
            auto above = restrict_color(rc, up, ctx);
            CHECK(above.table.size() <= here.table.size());
        }
    }
}

TEST_CASE("compact color equality coincides with table equality") {
    th::Rng rng(101);
    for (int round = 0; round < 12; ++round) {
        Graph q = th::coin(rng) ? make_path(2 + th::pick(rng, 3)) : make_cycle(3 + th::pick(rng, 2));
        Graph m = th::random_tree(rng, 1 + th::pick(rng, 3));
        ColoredGraph g = full_product(q, m, th::random_coloring(rng, q.n * m.n, 2));
        auto ctx = make_ctx(q, m, std::move(g), "(E x1 x2)", 1);
        int n = q.n * m.n;
        std::vector<RunningColor> full;
        for (int v = 0; v < n; ++v) full.push_back(initial_color(ctx, v));
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) {
                bool compact_equal = full[u] == full[v];
                bool table_equal = full[u].table == full[v].table;
                CHECK(compact_equal == table_equal);
            }
    }
}

TEST_CASE("column expressions") {
    // A single-vertex factor gives a one-vertex column.
    Graph k1 = make_path(1), m = make_path(2);
    std::vector<int> colors(2, 0);
    auto ctx1 = make_ctx(k1, m, full_product(k1, m, colors), "(E x1 x2)", 1);
    auto col = build_column_expression(ctx1, 0);
    auto value = evaluate(col.expr, power(k1, ctx1.r_sep(), true));
    CHECK(value.graph.n == 1);
    CHECK(value.graph.edge_count() == 0);

    // Q = P2 with the full product and the edge formula: the column is P2.
    Graph q = make_path(2);
    std::vector<int> colors2(q.n * m.n, 0);
    auto ctx2 = make_ctx(q, m, full_product(q, m, colors2), "(E x1 x2)", 1);
    auto col2 = build_column_expression(ctx2, 1);
    auto value2 = evaluate(col2.expr, power(q, ctx2.r_sep(), true));
    CHECK(value2.graph.n == 2);
    CHECK(value2.graph.edge_count() == 1);
    CHECK(col2.creation == std::vector<int>{ctx2.product_id(0, 1), ctx2.product_id(1, 1)});

    // Every added edge joins parameters adjacent in the evaluation power.
    Graph qr = power(q, ctx2.r_sep(), true);
    for (auto [u, v] : value2.graph.edges)
        CHECK(qr.adjacent_or_loop(value2.param_of(u), value2.param_of(v)));
}

TEST_CASE("synthesize: named small instances") {
    // Edge interpretation of P2 x K1 is P2.
    Graph q = make_path(2), m = make_path(1);
    std::vector<int> ones(q.n * m.n, 1);
    auto ctx = make_ctx(q, m, full_product(q, m, ones), "(E x1 x2)", 1);
    auto result = synthesize(ctx);
    auto value = evaluate(result.expr, power(q, 1, true));
    CHECK(th::value_matches(value, result.vertex_map, make_path(2)));
    CHECK(result.report.verified);

    // The never-true formula values the edgeless graph on the product.
    Graph q4 = make_path(4), m2 = make_path(2);
    std::vector<int> colors(q4.n * m2.n, 0);
    auto ctx2 = make_ctx(q4, m2, full_product(q4, m2, colors), "(or)", 1);
    auto result2 = synthesize(ctx2);
    auto value2 = evaluate(result2.expr, power(q4, 1, true));
    CHECK(value2.graph.n == 8);
    CHECK(value2.graph.edge_count() == 0);

    // Distance-2 restricted to color-1 vertices over a random spanning part.
    th::Rng rng(7);
    Graph product = strong_product(q4, m2);
    Graph spanning(product.n);
    for (auto e : product.edges)
        if (th::coin(rng, 0.7)) spanning.edges.push_back(e);
    spanning = normalized(std::move(spanning));
    ColoredGraph g(spanning, th::random_coloring(rng, product.n, 2));
    auto xi = parse_formula(
        "(or (and (E x1 x2) (color 1 x1) (color 1 x2))"
        " (exists y1 (and (color 1 y1) (color 1 x1) (color 1 x2) (E x1 y1) (E y1 x2))))");
    SynthesisContext ctx3(q4, m2, decompose_small(m2), g, xi, 2, {});
    auto result3 = synthesize(ctx3);
    auto value3 = evaluate(result3.expr, power(q4, 2, true));
    Graph want = interpret(g, xi);
    CHECK(th::value_matches(value3, result3.vertex_map, want));
}

TEST_CASE("synthesize: locality gate rejects non-local formulas") {
    Graph q = make_path(4), m = make_path(2);
    std::vector<int> colors(q.n * m.n, 0);
    auto ctx = make_ctx(q, m, full_product(q, m, colors), "(not (E x1 x2))", 1);
    CHECK_THROWS_WITH_AS(synthesize(ctx), doctest::Contains("not strongly local"), Error);
}

TEST_CASE("synthesize: randomized end-to-end batch") {
    th::Rng rng(2024);
    auto library = th::strongly_local_library();
    int done = 0;
    while (done < 40) {
        Graph q = th::coin(rng) ? make_path(2 + th::pick(rng, 5)) : make_cycle(3 + th::pick(rng, 4));
        Graph m = th::coin(rng) ? make_path(1 + th::pick(rng, 4)) : th::random_tree(rng, 2 + th::pick(rng, 3));
        Graph product = strong_product(q, m);
        Graph spanning(product.n);
        bool all = th::coin(rng, 0.3);
        for (auto e : product.edges)
            if (all || th::coin(rng)) spanning.edges.push_back(e);
        spanning = normalized(std::move(spanning));
        ColoredGraph g(spanning, th::random_coloring(rng, product.n, 2));
        auto& entry = library[th::pick(rng, static_cast<int>(library.size()))];
        if (!check_strong_locality(g, entry.xi, entry.r).holds) continue;

        SynthesisContext ctx(q, m, decompose_small(m), g, entry.xi, entry.r, {});
        auto result = synthesize(ctx);
        auto value = evaluate(result.expr, power(q, entry.r, true));
        Graph want = interpret(g, entry.xi);
        REQUIRE(value.graph.n == want.n);
        CHECK(th::value_matches(value, result.vertex_map, want));
        CHECK(result.report.palette == palette(result.expr));
        ++done;
    }
}

TEST_CASE("per-node values match the interpretation on both directions") {
    // assemble_subtree runs the node checks internally; this exercises the
    // public hook on one instance and inspects the root value directly.
    Graph q = make_path(4), m = make_path(3);
    th::Rng rng(10);
    Graph product = strong_product(q, m);
    Graph spanning(product.n);
    for (auto e : product.edges)
        if (th::coin(rng, 0.6)) spanning.edges.push_back(e);
    spanning = normalized(std::move(spanning));
    ColoredGraph g(spanning, th::random_coloring(rng, product.n, 2));
    auto ctx = make_ctx(q, m, g, "(or (E x1 x2) (exists y1 (and (E x1 y1) (E y1 x2))))", 2);

    auto root = assemble_subtree(ctx, ctx.decomposition().root);
    auto value = evaluate(root.expr, power(q, ctx.r_sep(), true));
    for (int i = 0; i < value.graph.n; ++i)
        for (int j = i + 1; j < value.graph.n; ++j)
            CHECK(value.graph.has_edge(i, j) ==
                  ctx.xi_graph().has_edge(root.creation[i], root.creation[j]));
}

TEST_CASE("renumber_colors: same value, dense palette") {
    th::Rng rng(107);
    for (int round = 0; round < 60; ++round) {
        Graph ho = reflexive_path(2 + th::pick(rng, 3));
        // Sparse color names on purpose.
        auto expr = th::random_expression(rng, ho, 2 + th::pick(rng, 5), 3);
        auto spread = expr;  // wrap with recolors into large ids
        spread = e_recolor(1, 101, spread);
        spread = e_recolor(2, 202, spread);
        spread = e_recolor(101, 1 + th::pick(rng, 2) * 300, spread);
        auto renumbered = renumber_colors(spread);
        auto before = evaluate(spread, ho);
        auto after = evaluate(renumbered, ho);
        REQUIRE(before.graph.n == after.graph.n);
        CHECK(before.graph.edges == after.graph.edges);
        for (int v = 0; v < before.graph.n; ++v)
            CHECK(before.param_of(v) == after.param_of(v));
        int pal = palette(spread);
        CHECK(palette(renumbered) == pal);
        // All colors in the renumbered tree's value lie in 1..palette.
        auto value = evaluate(renumbered, ho);
        for (auto& [p, c] : value.label) {
            CHECK(c >= 1);
            CHECK(c <= pal);
        }
        // Color classes are preserved exactly.
        for (int u = 0; u < before.graph.n; ++u)
            for (int v = 0; v < before.graph.n; ++v)
                CHECK((before.color_of(u) == before.color_of(v)) ==
                      (after.color_of(u) == after.color_of(v)));
    }
}

TEST_CASE("renumber_colors: retired color reused by the child gets a fresh number") {
    // Child value uses colors {1,2}; recoloring 1 -> 2 merges them, so the
    // child's 1 must take a number unused by the parent map.
    auto child = e_union(e_create(0, 1), e_create(0, 2));
    auto expr = e_recolor(1, 2, child);
    auto renumbered = renumber_colors(expr);
    auto before = evaluate(expr, k1_loop());
    auto after = evaluate(renumbered, k1_loop());
    CHECK(before.graph.edges == after.graph.edges);
    CHECK(after.color_of(0) == after.color_of(1));
    CHECK(palette(renumbered) == 2);
}

TEST_CASE("synthesize over treewidth-2 and branching column factors") {
    th::Rng rng(555);
    std::vector<Graph> ms = {make_cycle(4), make_complete(4),
                             make_graph(4, {{0, 1}, {0, 2}, {0, 3}}),  // star
                             make_graph(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}})};
    for (auto& m : ms) {
        Graph q = make_path(4);
        Graph product = strong_product(q, m);
        Graph spanning(product.n);
        for (auto e : product.edges)
            if (th::coin(rng, 0.6)) spanning.edges.push_back(e);
        spanning = normalized(std::move(spanning));
        ColoredGraph g(spanning, th::random_coloring(rng, product.n, 2));
        for (const char* text : {"(E x1 x2)", "(or (E x1 x2) (exists y1 (and (E x1 y1) (E y1 x2))))"}) {
            auto xi = parse_formula(text);
            int r = quantifier_rank(xi) == 0 ? 1 : 2;
            SynthesisContext ctx(q, m, decompose_small(m), g, xi, r, {});
            auto result = synthesize(ctx);
            auto value = evaluate(result.expr, power(q, r, true));
            CHECK(th::value_matches(value, result.vertex_map, interpret(g, xi)));
        }
    }
}

TEST_CASE("too low a type rank is caught by the per-node check, not silently wrong") {
    th::Rng rng(4242);
    auto library = th::strongly_local_library();
    int diagnostics = 0, successes = 0;
    for (int round = 0; round < 30; ++round) {
        Graph q = th::coin(rng) ? make_path(2 + th::pick(rng, 5)) : make_cycle(3 + th::pick(rng, 4));
        Graph m = th::coin(rng) ? make_path(1 + th::pick(rng, 4))
                                : th::random_tree(rng, 2 + th::pick(rng, 3));
        Graph product = strong_product(q, m);
        Graph spanning(product.n);
        for (auto e : product.edges)
            if (th::coin(rng)) spanning.edges.push_back(e);
        spanning = normalized(std::move(spanning));
        ColoredGraph g(spanning, th::random_coloring(rng, product.n, 2));
        auto& entry = library[th::pick(rng, static_cast<int>(library.size()))];
        if (!check_strong_locality(g, entry.xi, entry.r).holds) continue;
        SynthesisOptions low;
        low.q_type = 0;
        try {
            SynthesisContext ctx(q, m, decompose_small(m), g, entry.xi, entry.r, low);
            auto result = synthesize(ctx);
            // When rank 0 happens to suffice, the value is still verified.
            auto value = evaluate(result.expr, power(q, entry.r, true));
            CHECK(th::value_matches(value, result.vertex_map, interpret(g, entry.xi)));
            ++successes;
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("type rank too low") != std::string::npos);
            ++diagnostics;
        }
    }
    CHECK(diagnostics > 0);
    CHECK(successes > 0);
}

TEST_CASE("restriction at a forget node removes exactly the pairs naming its vertex") {
    Graph q = make_path(3), m = make_path(3);
    std::vector<int> colors(q.n * m.n, 0);
    auto ctx = make_ctx(q, m, full_product(q, m, colors), "(E x1 x2)", 1);
    const auto& td = ctx.decomposition();
    for (int t = 0; t < td.node_count(); ++t) {
        if (ctx.forgotten(t).size() != 1) continue;
        int h = ctx.forgotten(t)[0];
        for (int v = 0; v < q.n * m.n; ++v) {
            auto rc = initial_color(ctx, v);
            auto restricted = restrict_color(rc, t, ctx);
            int dropped = 0;
            for (auto& [w, type] : rc.table) {
                bool mentions = false;
                for (auto& pair : w) mentions = mentions || pair.second == h;
                if (mentions) ++dropped;
            }
            CHECK(rc.table.size() == restricted.table.size() + dropped);
            for (auto& [w, type] : restricted.table)
                for (auto& pair : w) CHECK(pair.second != h);
        }
    }
}

TEST_CASE("separation radius exceeding the locality radius still lands on the r-power") {
    // A rank-2 formula drives the separation radius to 16 (capped); the
    // final expression is still declared and exact over the r-th power.
    Graph q = make_path(5), m = make_path(2);
    th::Rng rng(11);
    Graph product = strong_product(q, m);
    ColoredGraph g(product, th::random_coloring(rng, product.n, 2));
    auto ctx = make_ctx(
        q, m, g,
        "(and (E x1 x2) (exists y1 (and (E x1 y1) (exists y2 (and (E y1 y2) (color 1 y2))))))", 2);
    CHECK(ctx.r_sep() == 16);
    auto result = synthesize(ctx);
    auto value = evaluate(result.expr, power(q, 2, true));
    CHECK(th::value_matches(value, result.vertex_map, ctx.xi_graph()));
}
