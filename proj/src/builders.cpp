#include "hcw/builders.hpp"

#include <algorithm>
#include <set>

namespace hcw {

namespace {

constexpr int kFrozen = 1;

// Shade pair of a 1-based column: columns alternate between {2,3} and
// {4,5}; within a column rows alternate dark/light.
int shade(int column, int row) {
    int dark = column % 2 == 1 ? 2 : 4;
    return row % 2 == 1 ? dark : dark + 1;
}

ExprPtr build_column(int column, int b) {
    ExprPtr e = e_create(0, shade(column, 1));
    for (int j = 2; j <= b; ++j) {
        e = e_union(std::move(e), e_create(j - 1, shade(column, j)));
        e = e_add_edges(shade(column, j), shade(column, j - 1), std::move(e));
    }
    return e;
}

}  // namespace

ExprPtr grid_expression(int a, int b) {
    if (a <= 0 || b <= 0) throw Error("grid_expression: nonpositive dimensions");
    ExprPtr acc = build_column(1, b);
    for (int i = 2; i <= a; ++i) {
        acc = e_union(std::move(acc), build_column(i, b));
        acc = e_add_edges(shade(i, 1), shade(i - 1, 1), std::move(acc));
        if (b >= 2) acc = e_add_edges(shade(i, 2), shade(i - 1, 2), std::move(acc));
        acc = e_recolor(shade(i - 1, 1), kFrozen, std::move(acc));
        if (b >= 2) acc = e_recolor(shade(i - 1, 2), kFrozen, std::move(acc));
    }
    return acc;
}

int grid_expression_palette(int a, int b) {
    if (b == 1) return a >= 3 ? 3 : (a == 2 ? 2 : 1);
    return a >= 3 ? 5 : (a == 2 ? 4 : 2);
}

ProductEmbedding expression_to_product(const ExprPtr& expr, const Graph& ho) {
    ProductEmbedding emb;
    emb.left_factor = ho;
    emb.left_factor.loops.clear();
    auto depar_value = evaluate(deparameterize(expr), k1_loop());
    emb.right_factor = depar_value.graph;
    auto value = evaluate(expr, ho);
    for (int v = 0; v < value.graph.n; ++v)
        emb.injection.push_back(ProductVertex{value.param_of(v), v});
    return emb;
}

bool verify_embedding(const LabeledGraph& value, const ProductEmbedding& emb) {
    if (static_cast<int>(emb.injection.size()) != value.graph.n) return false;
    for (int u = 0; u < value.graph.n; ++u)
        for (int v = u + 1; v < value.graph.n; ++v) {
            auto [qu, mu] = emb.injection[u];
            auto [qv, mv] = emb.injection[v];
            bool product_edge = false;
            if (mu == mv) {
                product_edge = emb.left_factor.has_edge(qu, qv);
            } else if (emb.right_factor.has_edge(mu, mv)) {
                product_edge = qu == qv || emb.left_factor.has_edge(qu, qv);
            }
            if (product_edge != value.graph.has_edge(u, v)) return false;
        }
    return true;
}

namespace {

struct RowLift {
    const Graph& ho;
    int m_count;
    const std::vector<char>& kept;  // product index -> kept?
    int next_create = 0;

    ExprPtr walk(const ExprPtr& e) {
        switch (e->kind) {
            case Expr::Create: {
                int j = next_create++;
                ExprPtr row;
                for (int q = 0; q < ho.n; ++q) {
                    if (!kept[q * m_count + j]) continue;
                    auto c = e_create(q, e->color);
                    row = row ? e_union(std::move(row), std::move(c)) : std::move(c);
                }
                if (!row) return nullptr;
                return e_add_edges(e->color, e->color, std::move(row));
            }
            case Expr::Union: {
                auto l = walk(e->left);
                auto r = walk(e->right);
                if (l && r) return e_union(std::move(l), std::move(r));
                return l ? l : r;
            }
            case Expr::Recolor: {
                auto c = walk(e->left);
                return c ? e_recolor(e->c1, e->c2, std::move(c)) : nullptr;
            }
            case Expr::AddEdges: {
                auto c = walk(e->left);
                return c ? e_add_edges(e->c1, e->c2, std::move(c)) : nullptr;
            }
        }
        return nullptr;
    }
};

std::vector<char> keep_mask(const Graph& ho, int m_count, const std::optional<std::vector<int>>& keep) {
    std::vector<char> mask(static_cast<size_t>(ho.n) * m_count, 1);
    if (keep) {
        std::fill(mask.begin(), mask.end(), 0);
        for (int idx : *keep) {
            if (idx < 0 || idx >= static_cast<int>(mask.size()))
                throw Error("product_to_expression: keep references absent vertex " + std::to_string(idx));
            mask[idx] = 1;
        }
    }
    return mask;
}

}  // namespace

ExprPtr product_to_expression(const Graph& ho, const ExprPtr& m_expr,
                              const std::optional<std::vector<int>>& keep) {
    if (!ho.is_reflexive()) throw Error("product_to_expression: parameter graph must be reflexive");
    int m_count = count_creates(m_expr);
    auto mask = keep_mask(ho, m_count, keep);
    RowLift lift{ho, m_count, mask, 0};
    auto out = lift.walk(m_expr);
    if (!out) throw Error("product_to_expression: keep drops every vertex");
    return out;
}

std::vector<int> product_to_expression_index_map(const Graph& ho, const ExprPtr& m_expr,
                                                 const std::optional<std::vector<int>>& keep) {
    int m_count = count_creates(m_expr);
    auto mask = keep_mask(ho, m_count, keep);
    std::vector<int> map(mask.size(), -1);
    int next = 0;
    // Row creation order follows the traversal of m_expr's creates.
    std::function<void(const ExprPtr&, int&)> walk = [&](const ExprPtr& e, int& j) {
        if (e->kind == Expr::Create) {
            for (int q = 0; q < ho.n; ++q)
                if (mask[q * m_count + j]) map[q * m_count + j] = next++;
            ++j;
            return;
        }
        if (e->left) walk(e->left, j);
        if (e->right) walk(e->right, j);
    };
    int j = 0;
    walk(m_expr, j);
    return map;
}

ContractedExpression contract_path_power(const ExprPtr& expr, const Graph& ho, int r) {
    if (r < 1) throw Error("contract_path_power: r must be >= 1");
    if (ho.n < 1) throw Error("contract_path_power: empty parameter graph");
    Graph expected = power(make_path(ho.n), r, true);
    if (ho.edges != expected.edges || ho.loops != expected.loops)
        throw Error("contract_path_power: parameter graph is not the reflexive r-th power of a path");

    const int r3 = 3 * r;
    ContractedExpression out;
    out.residue_classes = r3;
    out.path = reflexive_path((ho.n - 1) / r + 1);

    std::function<ExprPtr(const ExprPtr&)> walk = [&](const ExprPtr& e) -> ExprPtr {
        switch (e->kind) {
            case Expr::Create:
                return e_create(e->param / r, e->color * r3 + e->param % r3);
            case Expr::Union:
                return e_union(walk(e->left), walk(e->right));
            case Expr::Recolor: {
                auto acc = walk(e->left);
                if (e->c1 == e->c2) return acc;
                for (int z = 0; z < r3; ++z)
                    acc = e_recolor(e->c1 * r3 + z, e->c2 * r3 + z, std::move(acc));
                return acc;
            }
            case Expr::AddEdges: {
                auto acc = walk(e->left);
                for (int z1 = 0; z1 < r3; ++z1)
                    for (int z2 = 0; z2 < r3; ++z2) {
                        if (e->c1 == e->c2 && z2 < z1) continue;
                        int delta = ((z1 - z2) % r3 + r3) % r3;
                        if (std::min(delta, r3 - delta) > r) continue;
                        acc = e_add_edges(e->c1 * r3 + z1, e->c2 * r3 + z2, std::move(acc));
                    }
                return acc;
            }
        }
        throw Error("contract_path_power: corrupt expression");
    };
    out.expr = walk(expr);
    return out;
}

ExprPtr cw_path_expression(int n) {
    if (n < 1) throw Error("cw_path_expression: nonpositive size");
    // 1 = settled, 2 = last vertex, 3 = fresh.
    ExprPtr e = e_create(0, 2);
    for (int i = 1; i < n; ++i) {
        e = e_union(std::move(e), e_create(0, 3));
        e = e_add_edges(3, 2, std::move(e));
        e = e_recolor(2, 1, std::move(e));
        e = e_recolor(3, 2, std::move(e));
    }
    return e;
}

ExprPtr cw_grid2d_expression(int a, int b) {
    if (a < 1 || b < 1) throw Error("cw_grid2d_expression: nonpositive dimensions");
    // Colors: 0 settled, j+1 = rightmost created vertex of row j, b+1 fresh.
    const int fresh = b + 1;
    ExprPtr e;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) {
            auto v = e_create(0, fresh);
            e = e ? e_union(std::move(e), std::move(v)) : std::move(v);
            if (i >= 1) e = e_add_edges(fresh, j + 1, std::move(e));
            if (j >= 1) e = e_add_edges(fresh, j, std::move(e));
            if (i >= 1) e = e_recolor(j + 1, 0, std::move(e));
            e = e_recolor(fresh, j + 1, std::move(e));
        }
    return e;
}

ExprPtr cartesian_path_expression(const ExprPtr& m_expr, int m) {
    if (m < 1) throw Error("cartesian_path_expression: nonpositive path length");
    // Composite colors: original color c with path residue z becomes c*3+z.
    // Same-residue edge additions join equal path positions only; adjacent
    // residues realize the path edges inside each row.
    std::function<ExprPtr(const ExprPtr&)> walk = [&](const ExprPtr& e) -> ExprPtr {
        switch (e->kind) {
            case Expr::Create: {
                ExprPtr row;
                for (int x = 0; x < m; ++x) {
                    auto v = e_create(x, e->color * 3 + x % 3);
                    row = row ? e_union(std::move(row), std::move(v)) : std::move(v);
                }
                for (int z = 0; z < 3 && m >= 2; ++z)
                    row = e_add_edges(e->color * 3 + z, e->color * 3 + (z + 1) % 3, std::move(row));
                return row;
            }
            case Expr::Union:
                return e_union(walk(e->left), walk(e->right));
            case Expr::Recolor: {
                auto acc = walk(e->left);
                if (e->c1 == e->c2) return acc;
                for (int z = 0; z < 3; ++z)
                    acc = e_recolor(e->c1 * 3 + z, e->c2 * 3 + z, std::move(acc));
                return acc;
            }
            case Expr::AddEdges: {
                auto acc = walk(e->left);
                for (int z = 0; z < 3; ++z)
                    acc = e_add_edges(e->c1 * 3 + z, e->c2 * 3 + z, std::move(acc));
                return acc;
            }
        }
        throw Error("cartesian_path_expression: corrupt expression");
    };
    return walk(m_expr);
}

ExprPtr trivial_expression(const Graph& g) {
    if (g.n < 1) throw Error("trivial_expression: cannot express the empty graph");
    ExprPtr e;
    for (int v = 0; v < g.n; ++v) {
        auto c = e_create(0, v + 1);
        e = e ? e_union(std::move(e), std::move(c)) : std::move(c);
    }
    for (auto [u, v] : g.edges) e = e_add_edges(u + 1, v + 1, std::move(e));
    return e;
}

}  // namespace hcw
