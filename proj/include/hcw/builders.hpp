#pragma once

#include <optional>
#include <vector>

#include "hcw/expr.hpp"
#include "hcw/graph.hpp"

namespace hcw {

/// Expression over the reflexive b-vertex path whose value is the a x b
/// grid, vertex (column i, row j) carrying parameter j and placed at value
/// index i*b + j. Columns are built with two alternating shade pairs and
/// completed columns are frozen into one extra color, so the palette is 5
/// as soon as a >= 3 and b >= 2, and never more.
ExprPtr grid_expression(int a, int b);

/// The palette grid_expression(a,b) actually attains (5 on full-size
/// inputs, smaller on degenerate ones where fewer colors can ever coexist).
int grid_expression_palette(int a, int b);

/// Embedding of an expression value into a strong product: left factor is
/// the loopless parameter graph, right factor the deparameterized value,
/// injection v -> (param(v), v).
struct ProductEmbedding {
    Graph left_factor;             // parameter graph minus loops
    Graph right_factor;            // value of the deparameterization
    std::vector<ProductVertex> injection;  // per value vertex
};

ProductEmbedding expression_to_product(const ExprPtr& expr, const Graph& ho);

/// True when the embedded image induces in left x right exactly the edges
/// of `value`; this is the defining invariant of ProductEmbedding.
bool verify_embedding(const LabeledGraph& value, const ProductEmbedding& emb);

/// Lifts an expression over the single looped vertex to an expression over
/// the reflexive graph ho whose value is the subgraph of
/// (ho minus loops) x value(m_expr) induced by `keep` (defaults to all
/// product vertices; product index = q * |value(m_expr)| + m). Each create
/// becomes a full row sharing the source color followed by a same-color
/// edge addition; the other operations carry over verbatim.
ExprPtr product_to_expression(const Graph& ho, const ExprPtr& m_expr,
                              const std::optional<std::vector<int>>& keep = std::nullopt);

/// Value index of product vertex (q, m) in the product_to_expression
/// output restricted to `keep`; -1 when dropped.
std::vector<int> product_to_expression_index_map(const Graph& ho, const ExprPtr& m_expr,
                                                 const std::optional<std::vector<int>>& keep);

/// Rewrites an expression over the reflexive r-th power of a path (vertex
/// ids in path order) into an expression over the plain reflexive path
/// obtained by contracting each index i to floor(i/r). Colors split into
/// 3r residue classes (color, i mod 3r) and every edge addition expands to
/// the residue pairs whose difference is at most r modulo 3r, which keeps
/// the value's edge set exactly. Palette grows by a factor of at most 3r.
struct ContractedExpression {
    ExprPtr expr;
    Graph path;  // the contracted reflexive path
    /// composite color id = original color * 3r + residue
    int residue_classes = 0;
};

ContractedExpression contract_path_power(const ExprPtr& expr, const Graph& ho, int r);

/// Clique-width style expression of the n-vertex path over the single
/// looped vertex; 3 colors, creation order = path order.
ExprPtr cw_path_expression(int n);

/// Clique-width style expression of the a x b grid over the single looped
/// vertex, creation order (i,j) -> i*b + j; palette b + 2.
ExprPtr cw_grid2d_expression(int a, int b);

/// Expression over the reflexive m-vertex path valued the Cartesian
/// product value(m_expr) x P_m: rows are real paths and cross edges join
/// equal path positions only, enforced with three residue classes per
/// color. Value index of (path position x, j-th created vertex of m_expr)
/// is j*m + x; palette is at most 3 * palette(m_expr).
ExprPtr cartesian_path_expression(const ExprPtr& m_expr, int m);

/// One-color-per-vertex expression of an arbitrary graph over the
/// single-vertex reflexive path; palette |V(g)|.
ExprPtr trivial_expression(const Graph& g);

}  // namespace hcw
