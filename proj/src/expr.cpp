#include "hcw/expr.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

namespace hcw {

namespace {
ExprPtr node(Expr e) { return std::make_shared<Expr>(std::move(e)); }
}  // namespace

ExprPtr e_create(int param, int color) {
    Expr e;
    e.kind = Expr::Create;
    e.param = param;
    e.color = color;
    return node(std::move(e));
}

ExprPtr e_union(ExprPtr left, ExprPtr right) {
    if (!left || !right) throw Error("expr: union needs two children");
    Expr e;
    e.kind = Expr::Union;
    e.left = std::move(left);
    e.right = std::move(right);
    return node(std::move(e));
}

ExprPtr e_recolor(int from, int to, ExprPtr child) {
    if (!child) throw Error("expr: recolor needs a child");
    Expr e;
    e.kind = Expr::Recolor;
    e.c1 = from;
    e.c2 = to;
    e.left = std::move(child);
    return node(std::move(e));
}

ExprPtr e_add_edges(int c1, int c2, ExprPtr child) {
    if (!child) throw Error("expr: add_edges needs a child");
    Expr e;
    e.kind = Expr::AddEdges;
    e.c1 = c1;
    e.c2 = c2;
    e.left = std::move(child);
    return node(std::move(e));
}

namespace {

struct EvalState {
    const Graph& h;
    std::vector<std::pair<int, int>> label;
    std::set<std::pair<int, int>> edges;

    // Every operation acts on the value of its own subexpression only; a
    // subtree's vertices occupy the contiguous index range appended while it
    // runs, starting at `base`.
    void run(const ExprPtr& e) {
        size_t base = label.size();
        switch (e->kind) {
            case Expr::Create: {
                if (e->param < 0 || e->param >= h.n)
                    throw Error("evaluate: parameter vertex " + std::to_string(e->param) +
                                " outside the parameter graph");
                label.emplace_back(e->param, e->color);
                break;
            }
            case Expr::Union:
                run(e->left);
                run(e->right);
                break;
            case Expr::Recolor: {
                run(e->left);
                for (size_t i = base; i < label.size(); ++i)
                    if (label[i].second == e->c1) label[i].second = e->c2;
                break;
            }
            case Expr::AddEdges: {
                run(e->left);
                std::vector<int> us, vs;
                for (size_t i = base; i < label.size(); ++i) {
                    if (label[i].second == e->c1) us.push_back(static_cast<int>(i));
                    if (label[i].second == e->c2) vs.push_back(static_cast<int>(i));
                }
                for (int u : us)
                    for (int v : vs) {
                        if (u == v) continue;
                        if (!h.adjacent_or_loop(label[u].first, label[v].first)) continue;
                        edges.emplace(std::min(u, v), std::max(u, v));
                    }
                break;
            }
        }
    }
};

}  // namespace

LabeledGraph evaluate(const ExprPtr& expr, const Graph& h) {
    if (!expr) throw Error("evaluate: empty expression");
    EvalState state{h, {}, {}};
    state.run(expr);
    LabeledGraph out;
    out.label = std::move(state.label);
    out.graph.n = static_cast<int>(out.label.size());
    out.graph.edges.assign(state.edges.begin(), state.edges.end());
    out.graph = normalized(std::move(out.graph));
    // The parameter map must be a homomorphism into h as a loop graph.
    for (auto [u, v] : out.graph.edges)
        assert(h.adjacent_or_loop(out.label[u].first, out.label[v].first));
    return out;
}

namespace {

// Distinct-color multiset per subexpression, tracking the maximum count.
std::map<int, int> palette_walk(const ExprPtr& e, int& best) {
    std::map<int, int> colors;
    switch (e->kind) {
        case Expr::Create:
            colors[e->color] = 1;
            break;
        case Expr::Union: {
            colors = palette_walk(e->left, best);
            for (auto& [c, k] : palette_walk(e->right, best)) colors[c] += k;
            break;
        }
        case Expr::Recolor: {
            colors = palette_walk(e->left, best);
            auto it = colors.find(e->c1);
            if (it != colors.end() && e->c1 != e->c2) {
                colors[e->c2] += it->second;
                colors.erase(it);
            }
            break;
        }
        case Expr::AddEdges:
            colors = palette_walk(e->left, best);
            break;
    }
    best = std::max(best, static_cast<int>(colors.size()));
    return colors;
}

}  // namespace

int palette(const ExprPtr& expr) {
    if (!expr) throw Error("palette: empty expression");
    int best = 0;
    palette_walk(expr, best);
    return best;
}

int count_creates(const ExprPtr& expr) {
    if (!expr) return 0;
    if (expr->kind == Expr::Create) return 1;
    return count_creates(expr->left) + count_creates(expr->right);
}

ExprPtr deparameterize(const ExprPtr& expr) {
    Expr e = *expr;
    if (e.kind == Expr::Create) {
        e.param = 0;
        return node(std::move(e));
    }
    if (e.left) e.left = deparameterize(e.left);
    if (e.right) e.right = deparameterize(e.right);
    return node(std::move(e));
}

Graph k1_loop() { return make_graph(1, {}, {0}); }

StabilityVerdict is_k_stable(const ExprPtr& expr, int k, long long budget) {
    if (k < 1) throw Error("is_k_stable: order must be >= 1");
    auto value = evaluate(deparameterize(expr), k1_loop());
    StabilityVerdict verdict;
    verdict.search = find_bi_induced_half_graph_anywhere(value.graph, k, budget);
    if (verdict.search.found)
        verdict.outcome = StabilityVerdict::Witness;
    else if (verdict.search.inconclusive)
        verdict.outcome = StabilityVerdict::Inconclusive;
    return verdict;
}

namespace {

// next_index counts creates in traversal order; the returned expression is
// null when every create below was dropped.
ExprPtr restrict_walk(const ExprPtr& e, const std::vector<char>& keep, int& next_index,
                      std::vector<int>& old_of_new) {
    switch (e->kind) {
        case Expr::Create: {
            int idx = next_index++;
            if (!keep[idx]) return nullptr;
            old_of_new.push_back(idx);
            return e;
        }
        case Expr::Union: {
            auto l = restrict_walk(e->left, keep, next_index, old_of_new);
            auto r = restrict_walk(e->right, keep, next_index, old_of_new);
            if (l && r) return e_union(l, r);
            return l ? l : r;
        }
        case Expr::Recolor: {
            auto c = restrict_walk(e->left, keep, next_index, old_of_new);
            return c ? e_recolor(e->c1, e->c2, c) : nullptr;
        }
        case Expr::AddEdges: {
            auto c = restrict_walk(e->left, keep, next_index, old_of_new);
            return c ? e_add_edges(e->c1, e->c2, c) : nullptr;
        }
    }
    return nullptr;
}

}  // namespace

std::optional<RestrictedExpr> restrict_expression(const ExprPtr& expr, const std::vector<int>& keep) {
    int total = count_creates(expr);
    std::vector<char> mask(total, 0);
    for (int v : keep) {
        if (v < 0 || v >= total) throw Error("restrict_expression: index out of range");
        mask[v] = 1;
    }
    RestrictedExpr out;
    int counter = 0;
    out.expr = restrict_walk(expr, mask, counter, out.old_of_new);
    if (!out.expr) return std::nullopt;
    return out;
}

}  // namespace hcw
