#include "hcw/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

namespace hcw {

bool Graph::has_edge(int u, int v) const {
    if (u == v) return false;
    if (u > v) std::swap(u, v);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

bool Graph::has_loop(int v) const {
    return std::binary_search(loops.begin(), loops.end(), v);
}

Graph normalized(Graph g) {
    for (auto& [u, v] : g.edges) {
        if (u == v) throw Error("graph: self edge " + std::to_string(u) + " must be a loop");
        if (u < 0 || v < 0 || u >= g.n || v >= g.n)
            throw Error("graph: edge endpoint out of range: " + std::to_string(u) + "," +
                        std::to_string(v));
        if (u > v) std::swap(u, v);
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    for (int v : g.loops)
        if (v < 0 || v >= g.n) throw Error("graph: loop vertex out of range: " + std::to_string(v));
    std::sort(g.loops.begin(), g.loops.end());
    g.loops.erase(std::unique(g.loops.begin(), g.loops.end()), g.loops.end());
    return g;
}

Graph make_graph(int n, std::vector<std::pair<int, int>> edges, std::vector<int> loops) {
    Graph g(n);
    g.edges = std::move(edges);
    g.loops = std::move(loops);
    return normalized(std::move(g));
}

std::vector<std::vector<int>> adjacency(const Graph& g) {
    std::vector<std::vector<int>> adj(g.n);
    for (auto [u, v] : g.edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    return adj;
}

std::vector<int> bfs_distances(const Graph& g, const std::vector<int>& sources) {
    auto adj = adjacency(g);
    std::vector<int> dist(g.n, -1);
    std::deque<int> queue;
    for (int s : sources) {
        if (s < 0 || s >= g.n) throw Error("bfs: source out of range");
        if (dist[s] != 0) {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int w : adj[u])
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
    }
    return dist;
}

int diameter(const Graph& g) {
    if (g.n == 0) return -1;
    int best = 0;
    for (int v = 0; v < g.n; ++v) {
        auto dist = bfs_distances(g, {v});
        for (int d : dist) {
            if (d < 0) return -1;
            best = std::max(best, d);
        }
    }
    return best;
}

ColoredGraph::ColoredGraph(Graph g, std::vector<int> c) : graph(std::move(g)), color(std::move(c)) {
    if (static_cast<int>(color.size()) != graph.n)
        throw Error("colored graph: color map must be total");
}

Graph strong_product(const Graph& left, const Graph& right) {
    Graph out(left.n * right.n);
    for (int q1 = 0; q1 < left.n; ++q1)
        for (int m1 = 0; m1 < right.n; ++m1) {
            int a = q1 * right.n + m1;
            // Enumerate the neighbourhood directly from the three rules.
            for (int q2 = q1; q2 < left.n; ++q2)
                for (int m2 = 0; m2 < right.n; ++m2) {
                    int b = q2 * right.n + m2;
                    if (b <= a) continue;
                    bool qe = q1 == q2, me = m1 == m2;
                    bool qa = left.has_edge(q1, q2), ma = right.has_edge(m1, m2);
                    if ((qe && ma) || (qa && me) || (qa && ma)) out.edges.emplace_back(a, b);
                }
        }
    return normalized(std::move(out));
}

Graph power(const Graph& g, int r, bool reflexive) {
    if (r < 1) throw Error("power: r must be >= 1");
    Graph out(g.n);
    for (int v = 0; v < g.n; ++v) {
        auto dist = bfs_distances(g, {v});
        for (int u = v + 1; u < g.n; ++u)
            if (dist[u] >= 1 && dist[u] <= r) out.edges.emplace_back(v, u);
    }
    if (reflexive) {
        out.loops.resize(g.n);
        std::iota(out.loops.begin(), out.loops.end(), 0);
    }
    return normalized(std::move(out));
}

Graph make_path(int vertices) {
    if (vertices <= 0) throw Error("path: nonpositive size");
    Graph g(vertices);
    for (int i = 0; i + 1 < vertices; ++i) g.edges.emplace_back(i, i + 1);
    return normalized(std::move(g));
}

Graph reflexive_path(int vertices) {
    Graph g = make_path(vertices);
    g.loops.resize(vertices);
    std::iota(g.loops.begin(), g.loops.end(), 0);
    return g;
}

Graph make_cycle(int vertices) {
    if (vertices < 3) throw Error("cycle: needs >= 3 vertices");
    Graph g = make_path(vertices);
    g.edges.emplace_back(0, vertices - 1);
    return normalized(std::move(g));
}

Graph make_complete(int vertices) {
    if (vertices <= 0) throw Error("complete: nonpositive size");
    Graph g(vertices);
    for (int i = 0; i < vertices; ++i)
        for (int j = i + 1; j < vertices; ++j) g.edges.emplace_back(i, j);
    return normalized(std::move(g));
}

GeneratorSpec GeneratorSpec::disjoint_copies(GeneratorSpec s, int copies) {
    GeneratorSpec out{DisjointCopies, 0, 0, 0, std::make_shared<GeneratorSpec>(std::move(s)), copies};
    return out;
}

static Graph grid2d(int a, int b) {
    if (a <= 0 || b <= 0) throw Error("grid2d: nonpositive dimension");
    Graph g(a * b);
    auto id = [b](int i, int j) { return i * b + j; };
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) {
            if (i + 1 < a) g.edges.emplace_back(id(i, j), id(i + 1, j));
            if (j + 1 < b) g.edges.emplace_back(id(i, j), id(i, j + 1));
        }
    return normalized(std::move(g));
}

static Graph grid3d(int a, int b, int c) {
    if (a <= 0 || b <= 0 || c <= 0) throw Error("grid3d: nonpositive dimension");
    Graph g(a * b * c);
    auto id = [b, c](int x, int y, int z) { return x * b * c + y * c + z; };
    for (int x = 0; x < a; ++x)
        for (int y = 0; y < b; ++y)
            for (int z = 0; z < c; ++z) {
                if (x + 1 < a) g.edges.emplace_back(id(x, y, z), id(x + 1, y, z));
                if (y + 1 < b) g.edges.emplace_back(id(x, y, z), id(x, y + 1, z));
                if (z + 1 < c) g.edges.emplace_back(id(x, y, z), id(x, y, z + 1));
            }
    return normalized(std::move(g));
}

static Graph pinned_grid(int n) {
    if (n <= 0) throw Error("pinned_grid: nonpositive order");
    int side = n * n;
    Graph g = grid2d(side, side);
    g.n += 1;
    int apex = side * side;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            int v = (i * n - 1) * side + (j * n - 1);
            g.edges.emplace_back(v, apex);
        }
    return normalized(std::move(g));
}

static Graph half_graph(int n) {
    if (n <= 0) throw Error("half_graph: nonpositive order");
    Graph g(2 * n);
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) g.edges.emplace_back(i - 1, n + j - 1);
    return normalized(std::move(g));
}

Graph generate(const GeneratorSpec& spec) {
    switch (spec.kind) {
        case GeneratorSpec::Path:
            return make_path(spec.a);
        case GeneratorSpec::Grid2D:
            return grid2d(spec.a, spec.b);
        case GeneratorSpec::Grid3D:
            return grid3d(spec.a, spec.b, spec.c);
        case GeneratorSpec::PinnedGrid:
            return pinned_grid(spec.a);
        case GeneratorSpec::HalfGraph:
            return half_graph(spec.a);
        case GeneratorSpec::DisjointCopies: {
            if (!spec.inner || spec.copies <= 0) throw Error("disjoint_copies: bad descriptor");
            Graph block = generate(*spec.inner);
            Graph g(block.n * spec.copies);
            for (int copy = 0; copy < spec.copies; ++copy) {
                int off = copy * block.n;
                for (auto [u, v] : block.edges) g.edges.emplace_back(u + off, v + off);
                for (int v : block.loops) g.loops.push_back(v + off);
            }
            return normalized(std::move(g));
        }
    }
    throw Error("generate: unknown descriptor");
}

std::vector<int> greedy_proper_coloring(const Graph& g) {
    if (!g.is_simple()) throw Error("greedy coloring: expects a simple graph");
    auto adj = adjacency(g);
    std::vector<int> color(g.n, -1);
    for (int v = 0; v < g.n; ++v) {
        std::set<int> used;
        for (int w : adj[v])
            if (color[w] >= 0) used.insert(color[w]);
        int c = 0;
        while (used.count(c)) ++c;
        color[v] = c;
    }
    return color;
}

Graph induced_subgraph(const Graph& g, const std::vector<int>& vertices) {
    std::vector<int> vs = vertices;
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    std::vector<int> pos(g.n, -1);
    for (size_t i = 0; i < vs.size(); ++i) {
        if (vs[i] < 0 || vs[i] >= g.n) throw Error("induced_subgraph: vertex out of range");
        pos[vs[i]] = static_cast<int>(i);
    }
    Graph out(static_cast<int>(vs.size()));
    for (auto [u, v] : g.edges)
        if (pos[u] >= 0 && pos[v] >= 0) out.edges.emplace_back(pos[u], pos[v]);
    for (int v : g.loops)
        if (pos[v] >= 0) out.loops.push_back(pos[v]);
    return normalized(std::move(out));
}

BallResult ball(const Graph& g, const std::vector<int>& centers, int r) {
    if (centers.empty()) throw Error("ball: needs at least one center");
    if (r < 0) throw Error("ball: negative radius");
    BallResult res;
    res.distance = bfs_distances(g, centers);
    for (int v = 0; v < g.n; ++v)
        if (res.distance[v] >= 0 && res.distance[v] <= r) res.vertices.push_back(v);
        else res.distance[v] = -1;
    res.induced = induced_subgraph(g, res.vertices);
    return res;
}

namespace {

// Checks whether the bipartite adjacency between the chosen sets admits the
// staircase orderings; fills the ordered witness when it does. Only edges
// between the two chosen sets matter.
bool staircase_witness(const Graph& g, const std::vector<int>& us, const std::vector<int>& vs,
                       std::vector<int>& out_u, std::vector<int>& out_v) {
    int k = static_cast<int>(us.size());
    std::vector<std::pair<int, int>> by_degree;  // (-cross degree, u)
    for (int u : us) {
        int d = 0;
        for (int v : vs) d += g.has_edge(u, v);
        by_degree.emplace_back(-d, u);
    }
    std::sort(by_degree.begin(), by_degree.end());
    for (int i = 0; i < k; ++i)
        if (-by_degree[i].first != k - i) return false;
    std::vector<int> u_order;
    for (auto& [negd, u] : by_degree) u_order.push_back(u);
    // v_i is the unique vertex adjacent to u_i but not to u_{i+1}; the last
    // v is the one adjacent to everything ordered last.
    std::vector<int> v_order;
    std::vector<bool> taken(vs.size(), false);
    for (int i = 0; i < k; ++i) {
        int found = -1;
        for (size_t j = 0; j < vs.size(); ++j) {
            if (taken[j]) continue;
            bool adj_cur = g.has_edge(u_order[i], vs[j]);
            bool adj_next = i + 1 < k && g.has_edge(u_order[i + 1], vs[j]);
            if (adj_cur && !adj_next) {
                found = static_cast<int>(j);
                break;
            }
        }
        if (found < 0) return false;
        taken[found] = true;
        v_order.push_back(vs[found]);
    }
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (g.has_edge(u_order[i], v_order[j]) != (i <= j)) return false;
    out_u = u_order;
    out_v = v_order;
    return true;
}

bool next_subset(std::vector<int>& idx, int n) {
    int k = static_cast<int>(idx.size());
    for (int i = k - 1; i >= 0; --i) {
        if (idx[i] < n - (k - i)) {
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

HalfGraphSearch find_bi_induced_half_graph(const Graph& g, const std::vector<int>& side_a,
                                           const std::vector<int>& side_b, int order, int cap) {
    if (order < 1) throw Error("half-graph search: order must be >= 1");
    for (int a : side_a)
        for (int b : side_b)
            if (a == b) throw Error("half-graph search: sides must be disjoint");
    HalfGraphSearch res;
    if (static_cast<int>(side_a.size() + side_b.size()) > cap) {
        res.inconclusive = true;
        return res;
    }
    int na = static_cast<int>(side_a.size()), nb = static_cast<int>(side_b.size());
    if (na < order || nb < order) return res;
    std::vector<int> ia(order), ib(order);
    std::iota(ia.begin(), ia.end(), 0);
    do {
        std::vector<int> us;
        for (int i : ia) us.push_back(side_a[i]);
        std::iota(ib.begin(), ib.end(), 0);
        do {
            std::vector<int> vs;
            for (int i : ib) vs.push_back(side_b[i]);
            if (staircase_witness(g, us, vs, res.side_a, res.side_b)) {
                res.found = true;
                return res;
            }
        } while (next_subset(ib, nb));
    } while (next_subset(ia, na));
    return res;
}

HalfGraphSearch find_bi_induced_half_graph_anywhere(const Graph& g, int order, long long budget) {
    if (order < 1) throw Error("half-graph search: order must be >= 1");
    HalfGraphSearch res;
    if (g.n < 2 * order) return res;
    // Candidate count check before enumerating.
    auto choose = [](int n, int k) {
        long double r = 1;
        for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    };
    if (choose(g.n, order) * choose(g.n - order, order) > static_cast<long double>(budget)) {
        res.inconclusive = true;
        return res;
    }
    std::vector<int> ia(order), ib(order);
    std::iota(ia.begin(), ia.end(), 0);
    do {
        std::vector<int> us(ia.begin(), ia.end());
        std::vector<bool> in_a(g.n, false);
        for (int u : us) in_a[u] = true;
        std::vector<int> rest;
        for (int v = 0; v < g.n; ++v)
            if (!in_a[v]) rest.push_back(v);
        std::iota(ib.begin(), ib.end(), 0);
        do {
            std::vector<int> vs;
            for (int i : ib) vs.push_back(rest[i]);
            if (staircase_witness(g, us, vs, res.side_a, res.side_b)) {
                res.found = true;
                return res;
            }
        } while (next_subset(ib, static_cast<int>(rest.size())));
    } while (next_subset(ia, g.n));
    return res;
}

}  // namespace hcw
