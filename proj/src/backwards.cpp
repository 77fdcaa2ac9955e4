#include "hcw/backwards.hpp"

#include <algorithm>
#include <set>

namespace hcw {

bool are_twins(const Graph& g, int u, int v) {
    if (u == v) return true;
    auto adj = adjacency(g);
    std::set<int> nu(adj[u].begin(), adj[u].end()), nv(adj[v].begin(), adj[v].end());
    nu.erase(u);
    nu.erase(v);
    nv.erase(u);
    nv.erase(v);
    return nu == nv;
}

TwinFreeWitness extract_twin_free_half_graph(const Graph& j, const std::vector<int>& side_a,
                                             const std::vector<int>& side_b, int kprime) {
    if (kprime < 1) throw Error("twin-free extraction: order must be >= 1");
    int block = kprime + 2;
    int need = 2 * block * block;
    int n = static_cast<int>(side_a.size());
    if (static_cast<int>(side_b.size()) != n || n < need)
        throw Error("twin-free extraction: sides must have equal length >= " + std::to_string(need));
    for (int i = 0; i < n; ++i)
        for (int jj = 0; jj < n; ++jj)
            if (j.has_edge(side_a[i], side_b[jj]) != (i <= jj))
                throw Error("twin-free extraction: sides do not realize a bi-induced half-graph");

    // Precompute adjacency once; twin tests are frequent.
    auto adj = adjacency(j);
    auto twins = [&](int u, int v) {
        std::set<int> nu(adj[u].begin(), adj[u].end()), nv(adj[v].begin(), adj[v].end());
        nu.erase(u);
        nu.erase(v);
        nv.erase(u);
        nv.erase(v);
        return nu == nv;
    };

    TwinFreeWitness out;
    for (int round = 1; round <= kprime + 1; ++round) {
        // One pick from block A_{2*round-1}, avoiding twins of the chosen B's.
        int a_lo = (2 * round - 2) * block;
        int chosen_a = -1;
        for (int i = a_lo; i < a_lo + block && chosen_a < 0; ++i) {
            bool clean = true;
            for (int b : out.side_b)
                if (twins(side_a[i], b)) clean = false;
            if (clean) chosen_a = side_a[i];
        }
        if (chosen_a < 0) throw Error("twin-free extraction: no twin-free pick in an A block");
        out.side_a.push_back(chosen_a);

        // One pick from block B_{2*round}, avoiding twins of the chosen A's.
        int b_lo = (2 * round - 1) * block;
        int chosen_b = -1;
        for (int i = b_lo; i < b_lo + block && chosen_b < 0; ++i) {
            bool clean = true;
            for (int a : out.side_a)
                if (twins(side_b[i], a)) clean = false;
            if (clean) chosen_b = side_b[i];
        }
        if (chosen_b < 0) throw Error("twin-free extraction: no twin-free pick in a B block");
        out.side_b.push_back(chosen_b);
    }

    // Postconditions: the selected tuples realize the pattern and are
    // pairwise twin-free.
    int order = kprime + 1;
    for (int i = 0; i < order; ++i)
        for (int jj = 0; jj < order; ++jj)
            if (j.has_edge(out.side_a[i], out.side_b[jj]) != (i <= jj))
                throw Error("twin-free extraction: selection broke the half-graph pattern");
    std::vector<int> all = out.side_a;
    all.insert(all.end(), out.side_b.begin(), out.side_b.end());
    for (size_t i = 0; i < all.size(); ++i)
        for (size_t jj = i + 1; jj < all.size(); ++jj)
            if (twins(all[i], all[jj]))
                throw Error("twin-free extraction: twins survived the selection");
    return out;
}

std::pair<Graph, int> augment_universal(const Graph& m) {
    Graph out = m;
    int u = m.n;
    out.n += 1;
    for (int v = 0; v < m.n; ++v) out.edges.emplace_back(v, u);
    return {normalized(std::move(out)), u};
}

namespace {

// Disjunction over all product colors whose first component is a.
FormulaPtr has_row_color(int a, int c2_count, Var v) {
    std::vector<FormulaPtr> kids;
    for (int b = 0; b < c2_count; ++b) kids.push_back(f_color(a * c2_count + b, v));
    return f_or(std::move(kids));
}

FormulaPtr has_column_color(int b, int c1_count, int c2_count, Var v) {
    std::vector<FormulaPtr> kids;
    for (int a = 0; a < c1_count; ++a) kids.push_back(f_color(a * c2_count + b, v));
    return f_or(std::move(kids));
}

FormulaPtr same_row_color(int c1_count, int c2_count, Var v1, Var v2) {
    std::vector<FormulaPtr> kids;
    for (int a = 0; a < c1_count; ++a)
        kids.push_back(f_and({has_row_color(a, c2_count, v1), has_row_color(a, c2_count, v2)}));
    return f_or(std::move(kids));
}

FormulaPtr same_column_color(int c1_count, int c2_count, Var v1, Var v2) {
    std::vector<FormulaPtr> kids;
    for (int b = 0; b < c2_count; ++b)
        kids.push_back(f_and({has_column_color(b, c1_count, c2_count, v1),
                              has_column_color(b, c1_count, c2_count, v2)}));
    return f_or(std::move(kids));
}

}  // namespace

FactorFormulas factor_formulas(int c1_count, int c2_count) {
    if (c1_count < 1 || c2_count < 1) throw Error("factor_formulas: color counts must be positive");
    FactorFormulas out;
    out.c1_count = c1_count;
    out.c2_count = c2_count;

    // Same row: equal first coloring and either an edge or a common
    // same-row neighbour; the universal column guarantees the witness.
    out.sigma1 = f_and(
        {same_row_color(c1_count, c2_count, x(1), x(2)),
         f_or({f_edge(x(1), x(2)),
               f_exists(1, f_and({same_row_color(c1_count, c2_count, x(1), y(1)),
                                  f_edge(x(1), y(1)), f_edge(y(1), x(2))}))})});

    // Adjacent rows: not the same row, and some vertex of x1's row touches x2.
    out.sigma2 = f_and(
        {f_not(out.sigma1),
         f_exists(1, f_and({substitute_free(out.sigma1, {{2, y(1)}}), f_edge(x(2), y(1))}))});

    // Same column under the row-closeness assumption.
    out.sigma3 = f_or({f_eq(x(1), x(2)),
                       f_and({f_edge(x(1), x(2)),
                              same_column_color(c1_count, c2_count, x(1), x(2))})});

    // Adjacent columns in the factor without the universal vertex, whose
    // color is fixed to the last one of the second coloring.
    auto not_uni = [&](Var v) {
        return f_not(has_column_color(c2_count - 1, c1_count, c2_count, v));
    };
    out.sigma4 = f_and(
        {f_not(out.sigma3), not_uni(x(1)), not_uni(x(2)),
         f_exists(1, f_and({substitute_free(out.sigma3, {{2, y(1)}}), f_edge(x(2), y(1))}))});
    return out;
}

ColoredProduct build_factor_instance(const Graph& q_prime, const Graph& m) {
    if (!q_prime.is_simple() || !m.is_simple())
        throw Error("build_factor_instance: factors must be simple");
    ColoredProduct out;
    auto [m_uni, uni] = augment_universal(m);
    out.column_factor = m_uni;
    out.universal = uni;

    auto c1 = greedy_proper_coloring(q_prime);
    auto c2 = greedy_proper_coloring(m_uni);
    out.c1_count = *std::max_element(c1.begin(), c1.end()) + 1;
    out.c2_count = *std::max_element(c2.begin(), c2.end()) + 1;
    // Relabel so the universal vertex carries the last color; it is the only
    // vertex of its color class because it is adjacent to everything.
    int uni_color = c2[uni];
    for (auto& c : c2) {
        if (c == uni_color)
            c = out.c2_count - 1;
        else if (c == out.c2_count - 1)
            c = uni_color;
    }

    Graph product = strong_product(q_prime, m_uni);
    std::vector<int> colors(product.n, 0);
    for (int q = 0; q < q_prime.n; ++q)
        for (int h = 0; h < m_uni.n; ++h)
            colors[q * m_uni.n + h] = c1[q] * out.c2_count + c2[h];
    out.product = ColoredGraph(std::move(product), std::move(colors));
    return out;
}

namespace {

// Exactly one neighbour; z1, z2 are fresh bound indices.
FormulaPtr degree_one(int yv, int fresh) {
    int z1 = fresh, z2 = fresh + 1;
    return f_and({f_exists(z1, f_edge(y(yv), y(z1))),
                  f_forall(z1, f_forall(z2, f_implies(f_and({f_edge(y(yv), y(z1)),
                                                             f_edge(y(yv), y(z2))}),
                                                      f_eq(y(z1), y(z2)))))});
}

// At least t pendant neighbours of x1, with the guards nested inside the
// quantifiers so evaluation prunes early.
FormulaPtr at_least_pendants(int t) {
    FormulaPtr body;
    for (int i = t; i >= 1; --i) {
        std::vector<FormulaPtr> parts;
        parts.push_back(f_edge(x(1), y(i)));
        for (int jj = 1; jj < i; ++jj) parts.push_back(f_not(f_eq(y(i), y(jj))));
        parts.push_back(degree_one(i, t + 1));
        if (body) parts.push_back(std::move(body));
        body = f_exists(i, f_and(std::move(parts)));
    }
    return body;
}

}  // namespace

LeafEncoding encode_colored_graph_as_leaves(const ColoredGraph& g) {
    LeafEncoding out;
    int k = 0;
    for (int c : g.color) {
        if (c < 1) throw Error("leaf encoding: colors must be 1-based");
        k = std::max(k, c);
    }
    out.color_count = k;

    Graph h = g.graph;
    for (int v = 0; v < g.graph.n; ++v)
        for (int i = 0; i <= g.color[v]; ++i) {
            int leaf = h.n;
            h.n += 1;
            h.edges.emplace_back(v, leaf);
        }
    out.graph = normalized(std::move(h));

    out.is_original =
        f_exists(1, f_exists(2, f_and({f_not(f_eq(y(1), y(2))), f_edge(x(1), y(1)),
                                       f_edge(x(1), y(2))})));

    for (int c = 1; c <= k; ++c)
        out.color_formula.push_back(
            f_and({at_least_pendants(c + 1), f_not(at_least_pendants(c + 2))}));
    return out;
}

ColoredGraph decode_leaf_encoding(const LeafEncoding& enc) {
    ColoredGraph bare(enc.graph, std::vector<int>(enc.graph.n, 0));
    std::vector<int> originals;
    for (int v = 0; v < enc.graph.n; ++v)
        if (eval_formula(bare, enc.is_original, {{1, v}})) originals.push_back(v);
    std::vector<int> colors;
    for (int v : originals) {
        int found = -1;
        for (int c = 1; c <= enc.color_count; ++c)
            if (eval_formula(bare, enc.color_formula[c - 1], {{1, v}})) {
                if (found != -1) throw Error("leaf decoding: ambiguous color");
                found = c;
            }
        if (found == -1) throw Error("leaf decoding: no color recognized");
        colors.push_back(found);
    }
    return ColoredGraph(induced_subgraph(enc.graph, originals), std::move(colors));
}

}  // namespace hcw
