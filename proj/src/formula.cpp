#include "hcw/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace hcw {

namespace {
FormulaPtr node(Formula f) { return std::make_shared<Formula>(std::move(f)); }
}  // namespace

FormulaPtr f_true() { return node({Formula::True}); }
FormulaPtr f_false() { return node({Formula::False}); }
FormulaPtr f_edge(Var a, Var b) {
    Formula f{Formula::Edge};
    f.a = a;
    f.b = b;
    return node(std::move(f));
}
FormulaPtr f_color(int c, Var a) {
    Formula f{Formula::Color};
    f.a = a;
    f.color = c;
    return node(std::move(f));
}
FormulaPtr f_eq(Var a, Var b) {
    Formula f{Formula::Eq};
    f.a = a;
    f.b = b;
    return node(std::move(f));
}
FormulaPtr f_not(FormulaPtr inner) {
    Formula f{Formula::Not};
    f.kids = {std::move(inner)};
    return node(std::move(f));
}
FormulaPtr f_and(std::vector<FormulaPtr> kids) {
    Formula f{Formula::And};
    f.kids = std::move(kids);
    return node(std::move(f));
}
FormulaPtr f_or(std::vector<FormulaPtr> kids) {
    Formula f{Formula::Or};
    f.kids = std::move(kids);
    return node(std::move(f));
}
FormulaPtr f_implies(FormulaPtr lhs, FormulaPtr rhs) {
    Formula f{Formula::Implies};
    f.kids = {std::move(lhs), std::move(rhs)};
    return node(std::move(f));
}
FormulaPtr f_exists(int y_index, FormulaPtr inner) {
    Formula f{Formula::Exists};
    f.quantified = y(y_index);
    f.kids = {std::move(inner)};
    return node(std::move(f));
}
FormulaPtr f_forall(int y_index, FormulaPtr inner) {
    Formula f{Formula::Forall};
    f.quantified = y(y_index);
    f.kids = {std::move(inner)};
    return node(std::move(f));
}

int quantifier_rank(const FormulaPtr& f) {
    int best = 0;
    for (auto& k : f->kids) best = std::max(best, quantifier_rank(k));
    if (f->kind == Formula::Exists || f->kind == Formula::Forall) best += 1;
    return best;
}

static void collect_free(const FormulaPtr& f, std::set<int>& out) {
    switch (f->kind) {
        case Formula::Edge:
        case Formula::Eq:
            if (!f->a.bound) out.insert(f->a.index);
            if (!f->b.bound) out.insert(f->b.index);
            break;
        case Formula::Color:
            if (!f->a.bound) out.insert(f->a.index);
            break;
        default:
            break;
    }
    for (auto& k : f->kids) collect_free(k, out);
}

std::vector<int> free_variables(const FormulaPtr& f) {
    std::set<int> s;
    collect_free(f, s);
    return {s.begin(), s.end()};
}

static int max_bound_index(const FormulaPtr& f) {
    int best = 0;
    if (f->kind == Formula::Exists || f->kind == Formula::Forall)
        best = f->quantified.index;
    for (auto& k : f->kids) best = std::max(best, max_bound_index(k));
    return best;
}

static FormulaPtr shift_bound(const FormulaPtr& f, int offset) {
    Formula out = *f;
    auto fix = [offset](Var v) { return v.bound ? Var{true, v.index + offset} : v; };
    out.a = fix(out.a);
    out.b = fix(out.b);
    out.quantified = fix(out.quantified);
    out.kids.clear();
    for (auto& k : f->kids) out.kids.push_back(shift_bound(k, offset));
    return node(std::move(out));
}

static FormulaPtr subst(const FormulaPtr& f, const std::map<int, Var>& mapping) {
    Formula out = *f;
    auto fix = [&mapping](Var v) {
        if (v.bound) return v;
        auto it = mapping.find(v.index);
        return it == mapping.end() ? v : it->second;
    };
    out.a = fix(out.a);
    out.b = fix(out.b);
    out.kids.clear();
    for (auto& k : f->kids) out.kids.push_back(subst(k, mapping));
    return node(std::move(out));
}

FormulaPtr substitute_free(const FormulaPtr& f, const std::map<int, Var>& mapping) {
    int hazard = 0;
    for (auto& [_, v] : mapping)
        if (v.bound) hazard = std::max(hazard, v.index);
    FormulaPtr safe = hazard > 0 ? shift_bound(f, hazard) : f;
    return subst(safe, mapping);
}

// ---------------------------------------------------------------- parsing

namespace {

struct SExpr {
    std::string atom;
    std::vector<SExpr> list;
    bool is_atom = false;
};

struct Parser {
    const std::string& text;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && (std::isspace(static_cast<unsigned char>(text[pos])) != 0)) ++pos;
    }

    SExpr parse() {
        skip_ws();
        if (pos >= text.size()) throw Error("formula parse: unexpected end of input");
        if (text[pos] == '(') {
            ++pos;
            SExpr e;
            while (true) {
                skip_ws();
                if (pos >= text.size()) throw Error("formula parse: missing ')'");
                if (text[pos] == ')') {
                    ++pos;
                    return e;
                }
                e.list.push_back(parse());
            }
        }
        if (text[pos] == ')') throw Error("formula parse: stray ')'");
        SExpr e;
        e.is_atom = true;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')')
            e.atom += text[pos++];
        return e;
    }
};

Var parse_var(const SExpr& e) {
    if (!e.is_atom || e.atom.size() < 2 || (e.atom[0] != 'x' && e.atom[0] != 'y'))
        throw Error("formula parse: expected a variable, got '" + e.atom + "'");
    int idx = 0;
    for (size_t i = 1; i < e.atom.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(e.atom[i])))
            throw Error("formula parse: bad variable '" + e.atom + "'");
        idx = idx * 10 + (e.atom[i] - '0');
    }
    if (idx < 1) throw Error("formula parse: variable indices are 1-based");
    return Var{e.atom[0] == 'y', idx};
}

FormulaPtr build(const SExpr& e, std::set<int>& bound_in_scope) {
    if (e.is_atom) {
        if (e.atom == "true") return f_true();
        if (e.atom == "false") return f_false();
        throw Error("formula parse: unexpected atom '" + e.atom + "'");
    }
    if (e.list.empty()) throw Error("formula parse: empty list");
    const SExpr& head = e.list[0];
    if (!head.is_atom) throw Error("formula parse: operator expected");
    const std::string& op = head.atom;

    auto check_var = [&bound_in_scope](Var v) {
        if (v.bound && !bound_in_scope.count(v.index))
            throw Error("formula parse: unbound variable y" + std::to_string(v.index));
        return v;
    };
    auto arity = [&](size_t k) {
        if (e.list.size() != k + 1)
            throw Error("formula parse: '" + op + "' expects " + std::to_string(k) + " arguments");
    };

    if (op == "E") {
        arity(2);
        return f_edge(check_var(parse_var(e.list[1])), check_var(parse_var(e.list[2])));
    }
    if (op == "=") {
        arity(2);
        return f_eq(check_var(parse_var(e.list[1])), check_var(parse_var(e.list[2])));
    }
    if (op == "color") {
        arity(2);
        if (!e.list[1].is_atom) throw Error("formula parse: color id expected");
        return f_color(std::stoi(e.list[1].atom), check_var(parse_var(e.list[2])));
    }
    if (op == "not") {
        arity(1);
        return f_not(build(e.list[1], bound_in_scope));
    }
    if (op == "implies") {
        arity(2);
        return f_implies(build(e.list[1], bound_in_scope), build(e.list[2], bound_in_scope));
    }
    if (op == "and" || op == "or") {
        std::vector<FormulaPtr> kids;
        for (size_t i = 1; i < e.list.size(); ++i) kids.push_back(build(e.list[i], bound_in_scope));
        return op == "and" ? f_and(std::move(kids)) : f_or(std::move(kids));
    }
    if (op == "exists" || op == "forall") {
        arity(2);
        Var v = parse_var(e.list[1]);
        if (!v.bound) throw Error("formula parse: quantifiers bind y-variables only");
        bool fresh = bound_in_scope.insert(v.index).second;
        auto body = build(e.list[2], bound_in_scope);
        if (fresh) bound_in_scope.erase(v.index);
        return op == "exists" ? f_exists(v.index, body) : f_forall(v.index, body);
    }
    throw Error("formula parse: unknown operator '" + op + "'");
}

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
    Parser p{text};
    SExpr e = p.parse();
    p.skip_ws();
    if (p.pos != text.size()) throw Error("formula parse: trailing input");
    std::set<int> bound;
    return build(e, bound);
}

std::string to_text(const FormulaPtr& f) {
    auto var = [](Var v) { return (v.bound ? "y" : "x") + std::to_string(v.index); };
    std::ostringstream os;
    switch (f->kind) {
        case Formula::True: os << "true"; break;
        case Formula::False: os << "false"; break;
        case Formula::Edge: os << "(E " << var(f->a) << " " << var(f->b) << ")"; break;
        case Formula::Eq: os << "(= " << var(f->a) << " " << var(f->b) << ")"; break;
        case Formula::Color: os << "(color " << f->color << " " << var(f->a) << ")"; break;
        case Formula::Not: os << "(not " << to_text(f->kids[0]) << ")"; break;
        case Formula::Implies:
            os << "(implies " << to_text(f->kids[0]) << " " << to_text(f->kids[1]) << ")";
            break;
        case Formula::And:
        case Formula::Or: {
            os << (f->kind == Formula::And ? "(and" : "(or");
            for (auto& k : f->kids) os << " " << to_text(k);
            os << ")";
            break;
        }
        case Formula::Exists:
        case Formula::Forall:
            os << (f->kind == Formula::Exists ? "(exists " : "(forall ") << var(f->quantified)
               << " " << to_text(f->kids[0]) << ")";
            break;
    }
    return os.str();
}

// ------------------------------------------------------------- evaluation

namespace {

struct Model {
    const ColoredGraph& s;
    std::vector<char> adj;  // n*n matrix, loops included

    explicit Model(const ColoredGraph& cg) : s(cg), adj(cg.graph.n * cg.graph.n, 0) {
        int n = cg.graph.n;
        for (auto [u, v] : cg.graph.edges) adj[u * n + v] = adj[v * n + u] = 1;
        for (int v : cg.graph.loops) adj[v * n + v] = 1;
    }

    bool edge(int u, int v) const { return adj[u * s.graph.n + v] != 0; }
};

struct Env {
    const std::map<int, int>& free_env;
    std::vector<int> bound_env;  // index -> vertex, -1 unset

    int lookup(Var v) const {
        if (v.bound) {
            if (v.index >= static_cast<int>(bound_env.size()) || bound_env[v.index] < 0)
                throw Error("formula eval: unbound variable y" + std::to_string(v.index));
            return bound_env[v.index];
        }
        auto it = free_env.find(v.index);
        if (it == free_env.end())
            throw Error("formula eval: unassigned free variable x" + std::to_string(v.index));
        return it->second;
    }
};

bool eval(const Model& m, const FormulaPtr& f, Env& env) {
    switch (f->kind) {
        case Formula::True: return true;
        case Formula::False: return false;
        case Formula::Edge: return m.edge(env.lookup(f->a), env.lookup(f->b));
        case Formula::Eq: return env.lookup(f->a) == env.lookup(f->b);
        case Formula::Color: return m.s.color[env.lookup(f->a)] == f->color;
        case Formula::Not: return !eval(m, f->kids[0], env);
        case Formula::Implies: return !eval(m, f->kids[0], env) || eval(m, f->kids[1], env);
        case Formula::And:
            for (auto& k : f->kids)
                if (!eval(m, k, env)) return false;
            return true;
        case Formula::Or:
            for (auto& k : f->kids)
                if (eval(m, k, env)) return true;
            return false;
        case Formula::Exists:
        case Formula::Forall: {
            int idx = f->quantified.index;
            if (idx >= static_cast<int>(env.bound_env.size())) env.bound_env.resize(idx + 1, -1);
            int saved = env.bound_env[idx];
            bool want = f->kind == Formula::Exists;
            bool result = !want;
            for (int v = 0; v < m.s.graph.n; ++v) {
                env.bound_env[idx] = v;
                if (eval(m, f->kids[0], env) == want) {
                    result = want;
                    break;
                }
            }
            env.bound_env[idx] = saved;
            return result;
        }
    }
    throw Error("formula eval: corrupt node");
}

}  // namespace

bool eval_formula(const ColoredGraph& s, const FormulaPtr& phi, const std::map<int, int>& assignment) {
    for (int v : free_variables(phi))
        if (!assignment.count(v))
            throw Error("formula eval: unassigned free variable x" + std::to_string(v));
    Model m(s);
    Env env{assignment, {}};
    return eval(m, phi, env);
}

Graph interpret(const ColoredGraph& g, const FormulaPtr& xi) {
    auto fv = free_variables(xi);
    for (int v : fv)
        if (v > 2) throw Error("interpret: free variables must be among x1, x2");
    Model m(g);
    int n = g.graph.n;
    std::vector<char> holds(n * n, 0);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            std::map<int, int> assignment{{1, u}, {2, v}};
            Env env{assignment, {}};
            holds[u * n + v] = eval(m, xi, env) ? 1 : 0;
        }
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (holds[u * n + v] != holds[v * n + u])
                throw Error("interpret: formula not symmetric, witness pair (" + std::to_string(u) +
                            "," + std::to_string(v) + ")");
    Graph out(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (holds[u * n + v]) out.edges.emplace_back(u, v);
    return normalized(std::move(out));
}

LocalityVerdict check_strong_locality(const ColoredGraph& g, const FormulaPtr& xi, int r) {
    auto fv = free_variables(xi);
    int arity = fv.empty() ? 0 : fv.back();
    if (arity > 2) throw Error("locality check: arity must be at most 2");
    arity = std::max(arity, 1);

    int n = g.graph.n;
    std::vector<std::vector<int>> tuples;
    if (arity == 1)
        for (int u = 0; u < n; ++u) tuples.push_back({u});
    else
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) tuples.push_back({u, v});

    for (auto& tuple : tuples) {
        std::map<int, int> assignment;
        for (size_t i = 0; i < tuple.size(); ++i) assignment[static_cast<int>(i) + 1] = tuple[i];
        bool global = eval_formula(g, xi, assignment);

        auto b = ball(g.graph, tuple, r);
        std::vector<int> pos(n, -1);
        for (size_t i = 0; i < b.vertices.size(); ++i) pos[b.vertices[i]] = static_cast<int>(i);
        std::vector<int> ball_colors;
        for (int v : b.vertices) ball_colors.push_back(g.color[v]);
        ColoredGraph local(b.induced, ball_colors);
        std::map<int, int> local_assignment;
        for (size_t i = 0; i < tuple.size(); ++i)
            local_assignment[static_cast<int>(i) + 1] = pos[tuple[i]];
        bool in_ball = eval_formula(local, xi, local_assignment);

        if (global != in_ball)
            return {false, "ball evaluation differs from global evaluation", tuple};
        if (global && tuple.size() == 2) {
            auto dist = bfs_distances(g.graph, {tuple[0]});
            if (dist[tuple[1]] < 0 || dist[tuple[1]] > r)
                return {false, "satisfied tuple exceeds the distance bound", tuple};
        }
    }
    return {};
}

}  // namespace hcw
