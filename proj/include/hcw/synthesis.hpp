#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hcw/expr.hpp"
#include "hcw/formula.hpp"
#include "hcw/graph.hpp"
#include "hcw/tree_decomp.hpp"
#include "hcw/types.hpp"

namespace hcw {

/// Running color of a product vertex: a partial map from admissible W-sets
/// (pairs of a Q-power color and a still-relevant M-vertex) to type ids,
/// with the empty set always admissible. The admissible sets are exactly
/// the subsets of `ground` (the realizable pairs), and the value at a set W
/// is the type of the corresponding ordered vertex tuple with the vertex
/// itself appended.
///
/// Equality of two running colors as partial functions coincides with
/// equality of (ground, full_type): equal domains force equal grounds, and
/// rank-q equivalence of the maximal tuples carries to every positionally
/// corresponding subtuple, which settles all smaller W. The synthesis
/// compares colors through that compact form; `table` materializes the full
/// map for inspection and cross-checking at small scale.
struct RunningColor {
    std::vector<std::pair<int, int>> ground;  // sorted (power color, M-vertex) pairs
    TypeId base = -1;                         // value at the empty set
    TypeId full_type = -1;                    // value at the whole ground set

    /// Full partial map, one entry per admissible W (2^|ground| entries).
    std::vector<std::pair<std::vector<std::pair<int, int>>, TypeId>> table;

    bool operator==(const RunningColor& o) const {
        return ground == o.ground && base == o.base && full_type == o.full_type;
    }
};

struct SynthesisOptions {
    int q_type = 2;        // type rank used for colors
    int r_sep_cap = 16;    // ceiling for the effective separation radius
    bool check_nodes = true;  // verify value and labels at every node
};

/// Everything the bottom-up construction needs, precomputed once: the
/// bounded-degree factor Q, the decomposed factor M with its normalized
/// decomposition and forget order, the spanning subgraph G of their strong
/// product with its 2-coloring, the interpretation oracle, the proper
/// coloring of the 3*r_sep power of Q, the orders, and the per-vertex ball
/// and weak-reachability sets.
class SynthesisContext {
  public:
    SynthesisContext(Graph q, Graph m, TreeDecomposition td_raw, ColoredGraph g, FormulaPtr xi,
                     int r, SynthesisOptions options = {});

    const Graph& q() const { return q_; }
    const Graph& m() const { return m_; }
    const TreeDecomposition& decomposition() const { return td_; }
    const ForgetOrder& forget() const { return forget_; }
    const ColoredGraph& g() const { return g_; }
    const ColoredGraph& gs() const { return gs_; }
    const Graph& xi_graph() const { return xi_graph_; }
    const std::vector<int>& power_coloring() const { return s_q_; }
    int power_color_count() const { return s_q_count_; }
    int r() const { return r_; }
    int r_sep() const { return r_sep_; }
    int q_type() const { return options_.q_type; }
    const SynthesisOptions& options() const { return options_; }
    TypeUniverse& types() const { return types_; }

    int product_id(int p, int h) const { return p * m_.n + h; }
    const std::vector<int>& ball_of(int p) const { return ball_q_[p]; }
    const std::vector<int>& wreach_of(int h) const { return wreach_m_[h]; }

    /// True when u precedes v in the lexicographic order by (M-order of the
    /// second coordinate, power-color-refining order of the first).
    bool precedes(int u, int v) const;

    /// Compact running color of vertex v with the M-vertices in `excluded`
    /// removed from the relevant set (empty set = initial color).
    RunningColor running_color_fast(int v, const std::vector<int>& excluded) const;

    /// Interned id of the compact running color (cached).
    int running_color_key(int v, const std::vector<int>& excluded) const;

    const RunningColor& color_by_key(int key) const { return color_store_[key]; }

    /// Interned expression color labels used during assembly. The spaces
    /// are disjoint, which keeps the batched recolor steps cascade-free.
    int label_new_vertex() const { return intern_label(0, 0, 0); }
    int label_rc(int key) const { return intern_label(1, key, 0); }
    int label_col(int power_color, int key) const { return intern_label(2, power_color, key); }
    int label_tagged(int part, int inner) const { return intern_label(3, part, inner); }

    /// Y_t of the decomposition node: vertices occurring only in the
    /// subtree's bags (everything at the root).
    const std::vector<int>& forgotten(int t) const { return subtree_.forgotten[t]; }

    const FormulaPtr& xi() const { return xi_; }

  private:
    int intern_label(int tag, int a, int b) const;

    Graph q_, m_;
    TreeDecomposition td_;
    ForgetOrder forget_;
    SubtreeSets subtree_;
    ColoredGraph g_;
    ColoredGraph gs_;
    Graph xi_graph_;
    FormulaPtr xi_;
    int r_ = 0, r_sep_ = 0;
    SynthesisOptions options_;
    std::vector<int> s_q_;
    int s_q_count_ = 0;
    std::vector<int> rank_q_;  // position in the order refining s_q_
    std::vector<std::vector<int>> ball_q_;
    std::vector<std::vector<int>> wreach_m_;
    mutable TypeUniverse types_{64, 1 << 20};
    mutable std::vector<TypeId> base_cache_;
    mutable std::map<std::pair<int, std::vector<int>>, int> color_cache_;
    mutable std::vector<RunningColor> color_store_;
    mutable std::map<std::pair<std::vector<std::pair<int, int>>, std::pair<TypeId, TypeId>>, int>
        color_intern_;
    mutable std::map<std::tuple<int, int, int>, int> label_intern_;
};

/// Full running color with the table materialized; |ground| is capped
/// because the table has 2^|ground| entries.
RunningColor initial_color(const SynthesisContext& ctx, int v, int table_cap = 20);
RunningColor restrict_color(const RunningColor& c, int node, const SynthesisContext& ctx);

/// Expression valued the interpretation restricted to one column
/// V(Q) x {h}, vertices labeled with their initial colors paired with the
/// power coloring of the parameter.
struct ColumnExpression {
    ExprPtr expr;
    std::vector<int> creation;  // product vertex per value index
};
ColumnExpression build_column_expression(const SynthesisContext& ctx, int h);

/// One assembled decomposition node: the expression, its creation order,
/// and the set of M-columns present in the value.
struct NodeBuild {
    ExprPtr expr;
    std::vector<int> creation;  // product vertex per value index
    std::vector<int> columns;   // sorted M-vertices whose columns are present
};

NodeBuild assemble_node(const SynthesisContext& ctx, int t, std::vector<NodeBuild> children);
NodeBuild assemble_subtree(const SynthesisContext& ctx, int t);

struct SynthesisReport {
    int palette = 0;
    int r_sep = 0;
    int power_colors = 0;
    std::map<int, int> node_color_counts;  // decomposition node -> distinct colors
    bool verified = false;
    std::string note;
};

struct SynthesisResult {
    ExprPtr expr;  // over power(Q, r, reflexive), colors renumbered 1..palette
    /// Product vertex (q * |V(M)| + h) behind each value index; the value's
    /// vertex numbering follows construction order, not product order.
    std::vector<int> vertex_map;
    SynthesisReport report;
};

/// Runs the bottom-up construction over the decomposition and returns an
/// expression over the reflexive r-th power of Q whose value is exactly
/// the interpretation of G, with colors renumbered to a dense range.
/// Throws with a "type rank too low" diagnostic when the per-node check
/// catches an extra edge, which is the documented low-rank failure mode.
SynthesisResult synthesize(const SynthesisContext& ctx);

/// Top-down injective renumbering of expression colors into 1..palette:
/// parent and child maps agree on shared colors, a color retired by a
/// recolor reuses its target's number when free and a fresh number
/// otherwise.
ExprPtr renumber_colors(const ExprPtr& expr);

}  // namespace hcw
