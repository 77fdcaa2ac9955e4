#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "hcw/graph.hpp"

namespace hcw {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Term tree over the four labeled-graph operations: create a single
/// labeled vertex, disjoint union, recolor, and parameterized edge
/// addition. Values are LabeledGraphs; the parameter graph is supplied at
/// evaluation time.
struct Expr {
    enum Kind { Create, Union, Recolor, AddEdges };
    Kind kind = Create;
    int param = 0;          // Create: parameter vertex id
    int color = 0;          // Create: color
    int c1 = 0, c2 = 0;     // Recolor: from/to. AddEdges: the color pair.
    ExprPtr left, right;    // Union: both. Recolor/AddEdges: left only.
};

ExprPtr e_create(int param, int color);
ExprPtr e_union(ExprPtr left, ExprPtr right);
ExprPtr e_recolor(int from, int to, ExprPtr child);
ExprPtr e_add_edges(int c1, int c2, ExprPtr child);

/// Value of an expression: a graph whose vertices carry (parameter vertex,
/// color) labels. Vertex ids follow creation order (leftmost-innermost
/// create first). The parameter map is always a graph homomorphism into
/// the parameter loop graph.
struct LabeledGraph {
    Graph graph;
    std::vector<std::pair<int, int>> label;  // (param, color) per vertex

    int param_of(int v) const { return label[v].first; }
    int color_of(int v) const { return label[v].second; }
};

/// Bottom-up evaluation over a parameter loop graph h. AddEdges joins every
/// pair with the requested colors (in either orientation) whose parameter
/// vertices are adjacent in h, where a loop makes a vertex adjacent to
/// itself; re-adding an existing edge is a no-op and self-edges never
/// appear. Throws when a create references a vertex outside h.
LabeledGraph evaluate(const ExprPtr& expr, const Graph& h);

/// The width measure of the expression: the maximum, over subexpressions,
/// of the number of distinct colors present in the subexpression's value.
int palette(const ExprPtr& expr);

int count_creates(const ExprPtr& expr);

/// Rewrites every create onto the single looped vertex of K1 (vertex 0),
/// recovering plain clique-width semantics.
ExprPtr deparameterize(const ExprPtr& expr);

/// Single looped vertex, the parameter graph of deparameterized terms.
Graph k1_loop();

struct StabilityVerdict {
    enum Outcome { Stable, Witness, Inconclusive } outcome = Stable;
    HalfGraphSearch search;  // witness sides when found
};

/// Evaluates the deparameterization over the single looped vertex and
/// searches its value for a bi-induced half-graph of the given order over
/// all disjoint side choices. Exact within the search budget.
StabilityVerdict is_k_stable(const ExprPtr& expr, int k, long long budget = 5000000);

/// Drops the creates outside `keep` (indices into the value's creation
/// order); the restricted expression's value is the induced subgraph of
/// the original value on `keep`. Returns nothing when every create is
/// dropped. `old_of_new[i]` maps the new value index i to the old one.
struct RestrictedExpr {
    ExprPtr expr;
    std::vector<int> old_of_new;
};
std::optional<RestrictedExpr> restrict_expression(const ExprPtr& expr,
                                                  const std::vector<int>& keep);

}  // namespace hcw
