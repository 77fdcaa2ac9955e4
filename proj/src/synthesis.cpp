#include "hcw/synthesis.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <numeric>
#include <set>
#include <tuple>

namespace hcw {

namespace {

int clamped_pow4(int rank, int cap) {
    long long v = 1;
    for (int i = 0; i < rank; ++i) {
        v *= 4;
        if (v >= cap) return cap;
    }
    return static_cast<int>(v);
}

}  // namespace

SynthesisContext::SynthesisContext(Graph q, Graph m, TreeDecomposition td_raw, ColoredGraph g,
                                   FormulaPtr xi, int r, SynthesisOptions options)
    : q_(normalized(std::move(q))),
      m_(normalized(std::move(m))),
      g_(std::move(g)),
      xi_(std::move(xi)),
      r_(r),
      options_(options) {
    if (r_ < 1) throw Error("synthesis: locality radius must be >= 1");
    if (!q_.is_simple() || !m_.is_simple()) throw Error("synthesis: factors must be simple");
    if (q_.n == 0 || m_.n == 0) throw Error("synthesis: factors must be nonempty");
    if (g_.graph.n != q_.n * m_.n)
        throw Error("synthesis: the colored graph must span the full product vertex set");
    Graph product = strong_product(q_, m_);
    for (auto [u, v] : g_.graph.edges)
        if (!product.has_edge(u, v))
            throw Error("synthesis: edge outside the strong product: " + std::to_string(u) + "," +
                        std::to_string(v));
    for (int c : g_.color)
        if (c != 0 && c != 1) throw Error("synthesis: expected a 2-colored graph with colors 0,1");

    td_ = is_normalized(m_, td_raw) ? std::move(td_raw) : normalize(m_, td_raw);
    forget_ = forget_order(m_, td_);
    subtree_ = subtree_sets(m_, td_);

    int rank = quantifier_rank(xi_);
    r_sep_ = std::max(r_, clamped_pow4(rank, options_.r_sep_cap));

    s_q_ = greedy_proper_coloring(power(q_, 3 * r_sep_, false));
    s_q_count_ = *std::max_element(s_q_.begin(), s_q_.end()) + 1;
    rank_q_.assign(q_.n, 0);
    {
        std::vector<int> order(q_.n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return s_q_[a] != s_q_[b] ? s_q_[a] < s_q_[b] : a < b;
        });
        for (int i = 0; i < q_.n; ++i) rank_q_[order[i]] = i;
    }

    ball_q_.resize(q_.n);
    for (int p = 0; p < q_.n; ++p) ball_q_[p] = ball(q_, {p}, r_sep_).vertices;
    wreach_m_ = wreach_all(m_, forget_.rank, r_sep_);

    std::vector<int> gs_colors(g_.graph.n);
    for (int v = 0; v < g_.graph.n; ++v) gs_colors[v] = g_.color[v] * s_q_count_ + s_q_[v / m_.n];
    gs_ = ColoredGraph(g_.graph, std::move(gs_colors));

    xi_graph_ = interpret(g_, xi_);
    base_cache_.assign(g_.graph.n, -1);
}

int SynthesisContext::intern_label(int tag, int a, int b) const {
    auto key = std::make_tuple(tag, a, b);
    auto it = label_intern_.find(key);
    if (it != label_intern_.end()) return it->second;
    int id = static_cast<int>(label_intern_.size());
    label_intern_.emplace(key, id);
    return id;
}

bool SynthesisContext::precedes(int u, int v) const {
    int hu = u % m_.n, hv = v % m_.n;
    int ru = forget_.rank[hu], rv = forget_.rank[hv];
    if (ru != rv) return ru < rv;
    return rank_q_[u / m_.n] < rank_q_[v / m_.n];
}

RunningColor SynthesisContext::running_color_fast(int v, const std::vector<int>& excluded) const {
    int p = v / m_.n, h = v % m_.n;
    std::vector<int> relevant;  // M-vertices of the pairs
    for (int hh : wreach_m_[h])
        if (!std::binary_search(excluded.begin(), excluded.end(), hh)) relevant.push_back(hh);
    std::vector<int> nearby;
    nearby.reserve(ball_q_[p].size() * relevant.size());
    for (int pp : ball_q_[p])
        for (int hh : relevant) nearby.push_back(product_id(pp, hh));
    std::sort(nearby.begin(), nearby.end(), [&](int a, int b) { return precedes(a, b); });

    RunningColor rc;
    for (int u : nearby) rc.ground.emplace_back(s_q_[u / m_.n], u % m_.n);
    std::sort(rc.ground.begin(), rc.ground.end());
    if (base_cache_[v] < 0)
        base_cache_[v] = types_.rank_type_unchecked(gs_, {v}, options_.q_type);
    rc.base = base_cache_[v];
    std::vector<int> tuple = nearby;
    tuple.push_back(v);
    rc.full_type = types_.rank_type_unchecked(gs_, tuple, options_.q_type);
    return rc;
}

int SynthesisContext::running_color_key(int v, const std::vector<int>& excluded) const {
    int h = v % m_.n;
    std::vector<int> masked;
    for (int hh : wreach_m_[h])
        if (std::binary_search(excluded.begin(), excluded.end(), hh)) masked.push_back(hh);
    auto cache_key = std::make_pair(v, std::move(masked));
    auto it = color_cache_.find(cache_key);
    if (it != color_cache_.end()) return it->second;

    RunningColor rc = running_color_fast(v, excluded);
    auto intern_key = std::make_pair(rc.ground, std::make_pair(rc.base, rc.full_type));
    auto [pos, inserted] = color_intern_.try_emplace(intern_key, static_cast<int>(color_store_.size()));
    if (inserted) color_store_.push_back(rc);
    color_cache_.emplace(std::move(cache_key), pos->second);
    return pos->second;
}

RunningColor initial_color(const SynthesisContext& ctx, int v, int table_cap) {
    RunningColor rc = ctx.running_color_fast(v, {});
    int k = static_cast<int>(rc.ground.size());
    if (k > table_cap) throw Error("initial_color: ground set too large to materialize the table");

    // The realizable vertex behind each ground pair, in ground order.
    int p = v / ctx.m().n, h = v % ctx.m().n;
    std::vector<std::pair<std::pair<int, int>, int>> realized;
    for (int pp : ctx.ball_of(p))
        for (int hh : ctx.wreach_of(h))
            realized.push_back({{ctx.power_coloring()[pp], hh}, ctx.product_id(pp, hh)});
    std::sort(realized.begin(), realized.end());

    for (int mask = 0; mask < (1 << k); ++mask) {
        std::vector<std::pair<int, int>> w;
        std::vector<int> members;
        for (int i = 0; i < k; ++i)
            if (mask & (1 << i)) {
                w.push_back(realized[i].first);
                members.push_back(realized[i].second);
            }
        std::sort(members.begin(), members.end(),
                  [&ctx](int a, int b) { return ctx.precedes(a, b); });
        members.push_back(v);
        rc.table.emplace_back(std::move(w),
                              ctx.types().rank_type_unchecked(ctx.gs(), members, ctx.q_type()));
    }
    return rc;
}

RunningColor restrict_color(const RunningColor& c, int node, const SynthesisContext& ctx) {
    const auto& gone = ctx.forgotten(node);
    RunningColor out;
    out.base = c.base;
    for (auto& pair : c.ground)
        if (!std::binary_search(gone.begin(), gone.end(), pair.second)) out.ground.push_back(pair);
    for (auto& [w, type] : c.table) {
        bool keep = true;
        for (auto& pair : w)
            if (std::binary_search(gone.begin(), gone.end(), pair.second)) {
                keep = false;
                break;
            }
        if (keep) out.table.emplace_back(w, type);
    }
    for (auto& [w, type] : out.table)
        if (w == out.ground) out.full_type = type;
    return out;
}

// ----------------------------------------------------------------- columns

ColumnExpression build_column_expression(const SynthesisContext& ctx, int h) {
    if (h < 0 || h >= ctx.m().n) throw Error("build_column_expression: vertex out of range");
    const Graph& q = ctx.q();
    ColumnExpression out;
    auto column_label = [&ctx](int v) {
        return ctx.label_col(ctx.power_coloring()[v / ctx.m().n],
                             ctx.running_color_key(v, {}));
    };
    int first = ctx.product_id(0, h);
    out.creation.push_back(first);
    ExprPtr expr = e_create(0, column_label(first));
    int new_vertex = ctx.label_new_vertex();
    for (int p = 1; p < q.n; ++p) {
        int v = ctx.product_id(p, h);
        expr = e_union(std::move(expr), e_create(p, new_vertex));
        std::set<int> partner_colors;
        for (int u : out.creation)
            if (ctx.xi_graph().has_edge(u, v)) partner_colors.insert(column_label(u));
        for (int c : partner_colors) expr = e_add_edges(new_vertex, c, std::move(expr));
        expr = e_recolor(new_vertex, column_label(v), std::move(expr));
        out.creation.push_back(v);
    }
    out.expr = std::move(expr);
    return out;
}

// ------------------------------------------------------------------- nodes

namespace {

struct RecolorPlan {
    // from-label -> to-label, applied as one batch; sources and targets live
    // in disjoint label spaces so sequential application cannot cascade.
    std::map<int, int> map;

    void add(int from, int to) {
        auto [it, inserted] = map.emplace(from, to);
        if (!inserted && it->second != to)
            throw Error("synthesis: inconsistent recoloring, color restriction not well-defined");
    }
    ExprPtr apply(ExprPtr e) const {
        for (auto& [from, to] : map)
            if (from != to) e = e_recolor(from, to, std::move(e));
        return e;
    }
};

void verify_node_value(const SynthesisContext& ctx, int t, const NodeBuild& built) {
    auto value = evaluate(built.expr, power(ctx.q(), ctx.r_sep(), true));
    if (value.graph.n != static_cast<int>(built.creation.size()))
        throw Error("synthesis: node value has the wrong vertex count");
    const auto& gone = ctx.forgotten(t);
    for (int i = 0; i < value.graph.n; ++i) {
        int v = built.creation[i];
        if (value.param_of(i) != v / ctx.m().n)
            throw Error("synthesis: node value carries a wrong parameter vertex");
        int expected = ctx.label_rc(ctx.running_color_key(v, gone));
        if (value.color_of(i) != expected)
            throw Error("synthesis: node value carries a wrong running color");
    }
    for (int i = 0; i < value.graph.n; ++i)
        for (int j = i + 1; j < value.graph.n; ++j) {
            bool built_edge = value.graph.has_edge(i, j);
            bool wanted = ctx.xi_graph().has_edge(built.creation[i], built.creation[j]);
            if (built_edge && !wanted)
                throw Error(
                    "synthesis: extra edge in the assembled value; type rank too low, retry "
                    "with q_type=" +
                    std::to_string(ctx.q_type() + 1));
            if (!built_edge && wanted)
                throw Error("synthesis: interpretation edge missing from the assembled value");
        }
}

}  // namespace

NodeBuild assemble_node(const SynthesisContext& ctx, int t, std::vector<NodeBuild> children) {
    const auto& td = ctx.decomposition();
    const auto& gone = ctx.forgotten(t);
    NodeBuild out;

    if (children.empty()) {
        // Leaf: one column, recolored from initial to running colors.
        if (t == td.root || td.bags[t].size() != 1)
            throw Error("synthesis: leaf node must carry a singleton bag");
        int h = td.bags[t][0];
        ColumnExpression column = build_column_expression(ctx, h);
        RecolorPlan plan;
        for (int v : column.creation) {
            int from = ctx.label_col(ctx.power_coloring()[v / ctx.m().n],
                                     ctx.running_color_key(v, {}));
            plan.add(from, ctx.label_rc(ctx.running_color_key(v, gone)));
        }
        out.expr = plan.apply(column.expr);
        out.creation = column.creation;
        out.columns = {h};
        if (ctx.options().check_nodes) verify_node_value(ctx, t, out);
        return out;
    }

    auto kids = td.children()[t];
    std::sort(kids.begin(), kids.end());
    if (kids.size() != children.size())
        throw Error("synthesis: child expression count does not match the decomposition");

    // Tag each child's running colors with its part index and union.
    ExprPtr expr;
    std::set<int> columns;
    for (size_t i = 0; i < children.size(); ++i) {
        const auto& child_gone = ctx.forgotten(kids[i]);
        RecolorPlan tagging;
        for (int v : children[i].creation) {
            int c = ctx.label_rc(ctx.running_color_key(v, child_gone));
            tagging.add(c, ctx.label_tagged(static_cast<int>(i) + 1, c));
        }
        ExprPtr tagged = tagging.apply(children[i].expr);
        expr = expr ? e_union(std::move(expr), std::move(tagged)) : std::move(tagged);
        out.creation.insert(out.creation.end(), children[i].creation.begin(),
                            children[i].creation.end());
        columns.insert(children[i].columns.begin(), children[i].columns.end());
    }

    // A vertex forgotten exactly here whose column is not yet present joins
    // as a third part.
    std::vector<int> fresh;
    for (int h = 0; h < ctx.m().n; ++h)
        if (ctx.forget().forget_node[h] == t && !columns.count(h)) fresh.push_back(h);
    if (fresh.size() > 1)
        throw Error("synthesis: more than one new column at a node; decomposition not smooth");
    ColumnExpression column;
    auto column_label = [&ctx](int v) {
        return ctx.label_col(ctx.power_coloring()[v / ctx.m().n], ctx.running_color_key(v, {}));
    };
    if (!fresh.empty()) {
        column = build_column_expression(ctx, fresh[0]);
        RecolorPlan tagging;
        for (int v : column.creation)
            tagging.add(column_label(v), ctx.label_tagged(3, column_label(v)));
        expr = e_union(std::move(expr), tagging.apply(column.expr));
        columns.insert(fresh[0]);
    }
    size_t expected_columns = fresh.size();
    for (auto& child : children) expected_columns += child.columns.size();
    if (columns.size() != expected_columns)
        throw Error("synthesis: child subtrees share a column");

    // Edge additions between the parts, one operation per color pair that an
    // actual interpretation edge realizes.
    std::set<std::pair<int, int>> ops;
    auto part_color = [&](size_t i, int v) {
        return ctx.label_tagged(static_cast<int>(i) + 1,
                                ctx.label_rc(ctx.running_color_key(v, ctx.forgotten(kids[i]))));
    };
    if (children.size() == 2) {
        for (int u : children[0].creation)
            for (int v : children[1].creation)
                if (ctx.xi_graph().has_edge(u, v))
                    ops.emplace(part_color(0, u), part_color(1, v));
    }
    if (!fresh.empty()) {
        for (size_t i = 0; i < children.size(); ++i)
            for (int u : children[i].creation)
                for (int w : column.creation)
                    if (ctx.xi_graph().has_edge(u, w))
                        ops.emplace(part_color(i, u), ctx.label_tagged(3, column_label(w)));
    }
    for (auto& [c1, c2] : ops) expr = e_add_edges(c1, c2, std::move(expr));

    // Final recoloring to the running colors of this node.
    RecolorPlan finish;
    for (size_t i = 0; i < children.size(); ++i)
        for (int v : children[i].creation)
            finish.add(part_color(i, v), ctx.label_rc(ctx.running_color_key(v, gone)));
    for (int w : column.creation)
        finish.add(ctx.label_tagged(3, column_label(w)),
                   ctx.label_rc(ctx.running_color_key(w, gone)));
    expr = finish.apply(std::move(expr));
    if (!fresh.empty())
        out.creation.insert(out.creation.end(), column.creation.begin(), column.creation.end());

    out.expr = std::move(expr);
    out.columns.assign(columns.begin(), columns.end());
    if (ctx.options().check_nodes) verify_node_value(ctx, t, out);
    return out;
}

NodeBuild assemble_subtree(const SynthesisContext& ctx, int t) {
    auto kids = ctx.decomposition().children()[t];
    std::sort(kids.begin(), kids.end());
    std::vector<NodeBuild> children;
    for (int c : kids) children.push_back(assemble_subtree(ctx, c));
    return assemble_node(ctx, t, std::move(children));
}

// --------------------------------------------------------------- renumber

namespace {

std::map<int, int> colors_of(const ExprPtr& e) {
    std::map<int, int> colors;
    switch (e->kind) {
        case Expr::Create:
            colors[e->color] = 1;
            break;
        case Expr::Union: {
            colors = colors_of(e->left);
            for (auto& [c, k] : colors_of(e->right)) colors[c] += k;
            break;
        }
        case Expr::Recolor: {
            colors = colors_of(e->left);
            auto it = colors.find(e->c1);
            if (it != colors.end() && e->c1 != e->c2) {
                colors[e->c2] += it->second;
                colors.erase(it);
            }
            break;
        }
        case Expr::AddEdges:
            colors = colors_of(e->left);
            break;
    }
    return colors;
}

struct Renumber {
    int pool;      // colors 1..pool available
    int absentee;  // pool + 1, used for operations on colors nobody has

    int fresh_outside(const std::map<int, int>& used) const {
        std::set<int> taken;
        for (auto& [c, num] : used) taken.insert(num);
        for (int i = 1; i <= pool; ++i)
            if (!taken.count(i)) return i;
        throw Error("renumber_colors: color pool exhausted; per-subexpression audit failed");
    }

    ExprPtr walk(const ExprPtr& e, const std::map<int, int>& out_map) const {
        switch (e->kind) {
            case Expr::Create:
                return e_create(e->param, out_map.at(e->color));
            case Expr::Union: {
                auto left_colors = colors_of(e->left);
                auto right_colors = colors_of(e->right);
                std::map<int, int> lm, rm;
                for (auto& [c, k] : left_colors) lm[c] = out_map.at(c);
                for (auto& [c, k] : right_colors) rm[c] = out_map.at(c);
                return e_union(walk(e->left, lm), walk(e->right, rm));
            }
            case Expr::AddEdges: {
                auto child = walk(e->left, out_map);
                auto mapped = [&](int c) {
                    auto it = out_map.find(c);
                    return it == out_map.end() ? absentee : it->second;
                };
                return e_add_edges(mapped(e->c1), mapped(e->c2), std::move(child));
            }
            case Expr::Recolor: {
                auto child_colors = colors_of(e->left);
                if (!child_colors.count(e->c1)) {
                    // Vacuous recolor; keep the node without touching live colors.
                    return e_recolor(absentee, absentee, walk(e->left, out_map));
                }
                std::map<int, int> in_map;
                for (auto& [c, k] : child_colors)
                    if (c != e->c1) in_map[c] = out_map.at(c);
                int target;
                if (child_colors.count(e->c2) && e->c1 != e->c2) {
                    in_map[e->c1] = fresh_outside(in_map);
                    target = out_map.at(e->c2);
                } else if (e->c1 == e->c2) {
                    in_map[e->c1] = out_map.at(e->c1);
                    target = in_map[e->c1];
                } else {
                    in_map[e->c1] = out_map.at(e->c2);
                    target = out_map.at(e->c2);
                }
                return e_recolor(in_map.at(e->c1), target, walk(e->left, in_map));
            }
        }
        throw Error("renumber_colors: corrupt expression");
    }
};

}  // namespace

ExprPtr renumber_colors(const ExprPtr& expr) {
    if (!expr) throw Error("renumber_colors: empty expression");
    int pool = palette(expr);
    Renumber r{pool, pool + 1};
    auto root_colors = colors_of(expr);
    std::map<int, int> out_map;
    int next = 1;
    for (auto& [c, k] : root_colors) out_map[c] = next++;
    return r.walk(expr, out_map);
}

// -------------------------------------------------------------- synthesize

SynthesisResult synthesize(const SynthesisContext& ctx) {
    auto locality = check_strong_locality(ctx.g(), ctx.xi(), ctx.r());
    if (!locality.holds) {
        std::string tuple;
        for (int v : locality.witness) tuple += " " + std::to_string(v);
        throw Error("synthesize: formula is not strongly local on this instance (" +
                    locality.reason + "; tuple" + tuple + ")");
    }

    SynthesisResult result;
    result.report.r_sep = ctx.r_sep();
    result.report.power_colors = ctx.power_color_count();

    NodeBuild root = assemble_subtree(ctx, ctx.decomposition().root);
    if (static_cast<int>(root.columns.size()) != ctx.m().n)
        throw Error("synthesize: root value does not cover every column");

    // Per-node distinct running colors over the forgotten columns.
    for (int t = 0; t < ctx.decomposition().node_count(); ++t) {
        const auto& gone = ctx.forgotten(t);
        std::set<int> distinct;
        for (int h : ctx.forgotten(t))
            for (int p = 0; p < ctx.q().n; ++p)
                distinct.insert(ctx.running_color_key(ctx.product_id(p, h), gone));
        result.report.node_color_counts[t] = static_cast<int>(distinct.size());
    }

    result.expr = renumber_colors(root.expr);

    // The final expression is declared over the reflexive r-th power; the
    // value there must still be the interpretation exactly.
    auto value = evaluate(result.expr, power(ctx.q(), ctx.r(), true));
    if (value.graph.n != static_cast<int>(root.creation.size()))
        throw Error("synthesize: final value has the wrong vertex count");
    for (int i = 0; i < value.graph.n; ++i)
        if (value.param_of(i) != root.creation[i] / ctx.m().n)
            throw Error("synthesize: final value carries a wrong parameter vertex");
    for (int i = 0; i < value.graph.n; ++i)
        for (int j = i + 1; j < value.graph.n; ++j)
            if (value.graph.has_edge(i, j) !=
                ctx.xi_graph().has_edge(root.creation[i], root.creation[j]))
                throw Error("synthesize: final value differs from the interpretation");

    result.vertex_map = root.creation;
    result.report.palette = palette(result.expr);
    result.report.verified = true;
    result.report.note = "value matches the interpretation edge-exactly";
    return result;
}

}  // namespace hcw
