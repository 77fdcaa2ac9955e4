#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hcw {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Finite simple graph with an optional set of loops. Vertices are dense
/// 0-based ids. Plain edges are stored as sorted (u,v) pairs with u < v;
/// loops live in a separate sorted list so that simple, loop and reflexive
/// graphs share one type.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // u < v, sorted, unique
    std::vector<int> loops;                  // sorted, unique

    Graph() = default;
    explicit Graph(int vertices) : n(vertices) {
        if (vertices < 0) throw Error("graph: negative vertex count");
    }

    bool has_edge(int u, int v) const;
    bool has_loop(int v) const;
    /// Adjacency including a possible loop at u==v; this is the edge
    /// relation of the graph viewed as a loop graph.
    bool adjacent_or_loop(int u, int v) const {
        return u == v ? has_loop(u) : has_edge(u, v);
    }
    int edge_count() const { return static_cast<int>(edges.size()); }
    bool is_reflexive() const { return static_cast<int>(loops.size()) == n; }
    bool is_simple() const { return loops.empty(); }
};

/// Sorts and deduplicates edge/loop lists, checks vertex ids, rejects
/// self-entries in `edges`. All library constructors go through this.
Graph normalized(Graph g);

Graph make_graph(int n, std::vector<std::pair<int, int>> edges,
                 std::vector<int> loops = {});

std::vector<std::vector<int>> adjacency(const Graph& g);

/// BFS distances from a set of sources; unreachable vertices get -1.
std::vector<int> bfs_distances(const Graph& g, const std::vector<int>& sources);

int diameter(const Graph& g);  // -1 when disconnected or empty

/// Graph plus a total vertex coloring (arbitrary natural color ids).
struct ColoredGraph {
    Graph graph;
    std::vector<int> color;  // size graph.n

    ColoredGraph() = default;
    ColoredGraph(Graph g, std::vector<int> c);
};

/// A vertex of a strong product: q indexes the left factor, m the right.
/// The canonical flattening used everywhere is row-major: q * |right| + m.
struct ProductVertex {
    int q = 0;
    int m = 0;
};

inline int product_index(const ProductVertex& v, int right_count) {
    return v.q * right_count + v.m;
}
inline ProductVertex product_vertex(int index, int right_count) {
    return ProductVertex{index / right_count, index % right_count};
}

/// Strong product: [q1,m1] ~ [q2,m2] when each coordinate is equal or
/// adjacent and the pairs differ. Loops on the factors are ignored.
Graph strong_product(const Graph& left, const Graph& right);

/// r-th power: joins distinct vertices at distance <= r; with `reflexive`
/// set, additionally puts a loop on every vertex. r must be >= 1.
Graph power(const Graph& g, int r, bool reflexive);

/// Reflexive r-vertex path 0-1-...-(r-1); convenience used all over.
Graph reflexive_path(int vertices);
Graph make_path(int vertices);
Graph make_cycle(int vertices);
Graph make_complete(int vertices);

/// Generator descriptor for the named graph families. Deterministic vertex
/// numbering is documented per family in generate().
struct GeneratorSpec {
    enum Kind { Path, Grid2D, Grid3D, PinnedGrid, HalfGraph, DisjointCopies } kind;
    int a = 0, b = 0, c = 0;
    std::shared_ptr<GeneratorSpec> inner;  // DisjointCopies only
    int copies = 0;                        // DisjointCopies only

    static GeneratorSpec path(int n) { return {Path, n, 0, 0, nullptr, 0}; }
    static GeneratorSpec grid2d(int a, int b) { return {Grid2D, a, b, 0, nullptr, 0}; }
    static GeneratorSpec grid3d(int a, int b, int c) { return {Grid3D, a, b, c, nullptr, 0}; }
    static GeneratorSpec pinned_grid(int n) { return {PinnedGrid, n, 0, 0, nullptr, 0}; }
    static GeneratorSpec half_graph(int n) { return {HalfGraph, n, 0, 0, nullptr, 0}; }
    static GeneratorSpec disjoint_copies(GeneratorSpec s, int copies);
};

/// Numbering conventions:
///  - path(n): 0-1-...-(n-1)
///  - grid2d(a,b): vertex (i,j) -> i*b + j, unit steps in either coordinate
///  - grid3d(a,b,c): vertex (x,y,z) -> x*b*c + y*c + z
///  - pinned_grid(n): n^2 x n^2 grid with (i,j), 1-based, -> (i-1)*n^2+(j-1);
///    apex vertex is id n^4, adjacent exactly to [i*n, j*n], 1 <= i,j <= n
///  - half_graph(n): u_i = i-1, v_j = n+j-1, edge u_i v_j iff i <= j
///  - disjoint_copies: consecutive blocks of the inner graph's vertices
Graph generate(const GeneratorSpec& spec);

/// Greedy proper coloring, vertices in id order, least free color.
/// Uses at most maxdegree+1 colors.
std::vector<int> greedy_proper_coloring(const Graph& g);

struct BallResult {
    std::vector<int> vertices;   // sorted original ids at distance <= r
    Graph induced;               // re-indexed by position in `vertices`
    std::vector<int> distance;   // per original id; -1 outside the ball
};

BallResult ball(const Graph& g, const std::vector<int>& centers, int r);

Graph induced_subgraph(const Graph& g, const std::vector<int>& vertices);

/// Outcome of the exact bi-induced half-graph search. `witness` holds the
/// two ordered sides when found. `inconclusive` is reported instead of
/// guessing when the search space exceeds the cap.
struct HalfGraphSearch {
    bool found = false;
    bool inconclusive = false;
    std::vector<int> side_a;  // u_1..u_k
    std::vector<int> side_b;  // v_1..v_k
};

/// Searches for ordered tuples u_1..u_k in sideA and v_1..v_k in sideB with
/// u_i v_j an edge iff i <= j and no other sideA-sideB edge among the chosen
/// vertices. Exact for |A|+|B| <= cap.
HalfGraphSearch find_bi_induced_half_graph(const Graph& g,
                                           const std::vector<int>& side_a,
                                           const std::vector<int>& side_b,
                                           int order, int cap = 16);

/// Same search over all disjoint side choices drawn from the whole graph.
HalfGraphSearch find_bi_induced_half_graph_anywhere(const Graph& g, int order,
                                                    long long budget = 5000000);

}  // namespace hcw
