#include "hcw/lower_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace hcw {

bool Perturbation::flipped(int i, int j) const {
    for (auto& [a, b] : flip)
        if ((a == i && b == j) || (a == j && b == i)) return true;
    return false;
}

std::vector<int> Perturbation::class_of(int n) const {
    std::vector<int> cls(n, -1);
    for (int i = 0; i < class_count(); ++i)
        for (int v : parts[i]) {
            if (v < 0 || v >= n) throw Error("perturbation: vertex out of range");
            if (cls[v] != -1) throw Error("perturbation: classes overlap at " + std::to_string(v));
            cls[v] = i;
        }
    for (int v = 0; v < n; ++v)
        if (cls[v] == -1) throw Error("perturbation: vertex " + std::to_string(v) + " unassigned");
    return cls;
}

Graph apply_perturbation(const Graph& g, const Perturbation& p) {
    auto cls = p.class_of(g.n);
    Graph out(g.n);
    out.loops = g.loops;
    for (int u = 0; u < g.n; ++u)
        for (int v = u + 1; v < g.n; ++v) {
            bool e = g.has_edge(u, v);
            if (p.flipped(cls[u], cls[v])) e = !e;
            if (e) out.edges.emplace_back(u, v);
        }
    return normalized(std::move(out));
}

CleanSubgrid prune_to_clean_subgrid(int n, const Perturbation& p) {
    if (n <= 0) throw Error("prune: nonpositive grid side");
    auto cls = p.class_of(n * n * n);
    auto count_in = [&](int c, const Subgrid3& s) {
        int count = 0;
        for (int x = s.offset_x; x < s.offset_x + s.side; ++x)
            for (int yy = s.offset_y; yy < s.offset_y + s.side; ++yy)
                for (int z = s.offset_z; z < s.offset_z + s.side; ++z)
                    if (cls[x * n * n + yy * n + z] == c) ++count;
        return count;
    };

    CleanSubgrid out;
    out.subgrid = {0, 0, 0, n};
    while (true) {
        int target = -1;
        for (int c = 0; c < p.class_count() && target < 0; ++c) {
            int k = count_in(c, out.subgrid);
            if (k >= 1 && k <= 12) target = c;
        }
        if (target < 0) break;
        int third = out.subgrid.side / 3;
        if (third == 0) {
            out.clean = false;
            for (int c = 0; c < p.class_count(); ++c) {
                int k = count_in(c, out.subgrid);
                if (k >= 1 && k <= 12) out.stuck_classes.push_back(c);
            }
            break;
        }
        bool placed = false;
        for (int dx = 0; dx < 3 && !placed; ++dx)
            for (int dy = 0; dy < 3 && !placed; ++dy)
                for (int dz = 0; dz < 3 && !placed; ++dz) {
                    Subgrid3 candidate{out.subgrid.offset_x + dx * third,
                                       out.subgrid.offset_y + dy * third,
                                       out.subgrid.offset_z + dz * third, third};
                    if (count_in(target, candidate) == 0) {
                        out.subgrid = candidate;
                        placed = true;
                    }
                }
        if (!placed) throw Error("prune: no empty third-subgrid found; class not small");
        ++out.rounds;
        if (out.rounds > p.class_count())
            throw Error("prune: more rounds than classes; should be impossible");
    }

    for (int x = out.subgrid.offset_x; x < out.subgrid.offset_x + out.subgrid.side; ++x)
        for (int yy = out.subgrid.offset_y; yy < out.subgrid.offset_y + out.subgrid.side; ++yy)
            for (int z = out.subgrid.offset_z; z < out.subgrid.offset_z + out.subgrid.side; ++z)
                out.vertex_ids.push_back(x * n * n + yy * n + z);
    out.restricted.flip = p.flip;
    out.restricted.parts.assign(p.class_count(), {});
    for (int id : out.vertex_ids) out.restricted.parts[cls[id]].push_back(id);
    return out;
}

namespace {

struct SplitWalk {
    int total;
    int preorder = 0;
    BalancedSplit best;

    // Returns (creation offset after subtree, subtree size); fills best with
    // the deepest union whose subtree reaches 2/3 of the value.
    int walk(const ExprPtr& e, int first) {
        int my_preorder = preorder++;
        switch (e->kind) {
            case Expr::Create:
                return 1;
            case Expr::Union: {
                int left = walk(e->left, first);
                int right = walk(e->right, first + left);
                int size = left + right;
                // Children were offered first, so the first hit is bottommost.
                if (3 * size >= 2 * total && best.union_node_preorder == -1) {
                    if (3 * left >= total && 3 * left <= 2 * total)
                        best = {my_preorder, first, left, total};
                    else if (3 * right >= total && 3 * right <= 2 * total)
                        best = {my_preorder, first + left, right, total};
                    else
                        throw Error("balanced split: no child in range; not bottommost");
                }
                return size;
            }
            case Expr::Recolor:
            case Expr::AddEdges:
                return walk(e->left, first);
        }
        throw Error("balanced split: corrupt expression");
    }
};

}  // namespace

BalancedSplit balanced_union_subexpression(const ExprPtr& expr) {
    int total = count_creates(expr);
    if (total < 3) throw Error("balanced split: needs at least 3 vertices");
    SplitWalk walk{total};
    walk.walk(expr, 0);
    if (walk.best.union_node_preorder < 0)
        throw Error("balanced split: no union subexpression found");
    return walk.best;
}

namespace {

struct GridView {
    int side;
    int dim;

    int total() const { return dim == 3 ? side * side * side : side * side; }
    int id3(int x, int y, int z) const { return x * side * side + y * side + z; }
    int id2(int x, int y) const { return x * side + y; }
};

// One two-colored edge from a non-monochromatic sequence of vertex ids.
std::optional<std::pair<int, int>> edge_on_line(const std::vector<int>& line,
                                                const std::vector<char>& in_a) {
    for (size_t i = 0; i + 1 < line.size(); ++i)
        if (in_a[line[i]] != in_a[line[i + 1]]) {
            int a = in_a[line[i]] ? line[i] : line[i + 1];
            int b = in_a[line[i]] ? line[i + 1] : line[i];
            return std::make_pair(a, b);
        }
    return std::nullopt;
}

// The plane-census step shared by both dimensions: collects one two-colored
// edge per useful line of an s x s grid given by explicit vertex ids.
// rows[i] and cols[j] are the two line directions.
void collect_from_plane(const std::vector<std::vector<int>>& rows,
                        const std::vector<std::vector<int>>& cols, const std::vector<char>& in_a,
                        std::set<std::pair<int, int>>& out) {
    auto mono_colors = [&](const std::vector<std::vector<int>>& lines) {
        std::set<char> colors;
        for (auto& line : lines) {
            bool mono = true;
            for (int v : line)
                if (in_a[v] != in_a[line[0]]) {
                    mono = false;
                    break;
                }
            if (mono) colors.insert(in_a[line[0]]);
        }
        return colors;
    };
    auto rc = mono_colors(rows), cc = mono_colors(cols);
    const std::vector<std::vector<int>>* scan = nullptr;
    if (rc.size() == 2)
        scan = &cols;  // monochromatic rows of both colors: every column mixes
    else if (cc.size() == 2)
        scan = &rows;
    else
        scan = &rows;  // all monochromatic lines share a color: non-mono rows suffice
    for (auto& line : *scan)
        if (auto e = edge_on_line(line, in_a)) out.insert(*e);
}

}  // namespace

std::vector<std::pair<int, int>> induced_matching_bicolored_grid(int side, int dim,
                                                                 const std::vector<char>& in_a) {
    if (dim != 2 && dim != 3) throw Error("matching: dimension must be 2 or 3");
    GridView view{side, dim};
    if (static_cast<int>(in_a.size()) != view.total())
        throw Error("matching: partition size mismatch");
    long long count_a = std::count(in_a.begin(), in_a.end(), char(1));
    long long count_b = view.total() - count_a;
    if (3 * count_a < view.total() || 3 * count_b < view.total())
        throw Error("matching: the partition must be 1/3-balanced");

    std::set<std::pair<int, int>> collected;
    if (dim == 2) {
        std::vector<std::vector<int>> rows(side), cols(side);
        for (int x = 0; x < side; ++x)
            for (int y = 0; y < side; ++y) {
                rows[x].push_back(view.id2(x, y));
                cols[y].push_back(view.id2(x, y));
            }
        collect_from_plane(rows, cols, in_a, collected);
    } else {
        // Planes fix the first coordinate; perpendicular lines vary it.
        long long balanced_planes = 0;
        bool majority_a_seen = false, majority_b_seen = false;
        std::vector<int> balanced_ids;
        for (int x = 0; x < side; ++x) {
            long long a_here = 0;
            for (int y = 0; y < side; ++y)
                for (int z = 0; z < side; ++z) a_here += in_a[view.id3(x, y, z)];
            long long b_here = static_cast<long long>(side) * side - a_here;
            if (6 * a_here >= static_cast<long long>(side) * side &&
                6 * b_here >= static_cast<long long>(side) * side) {
                ++balanced_planes;
                balanced_ids.push_back(x);
            } else if (a_here > b_here) {
                majority_a_seen = true;
            } else {
                majority_b_seen = true;
            }
        }
        if (majority_a_seen && majority_b_seen) {
            for (int y = 0; y < side; ++y)
                for (int z = 0; z < side; ++z) {
                    std::vector<int> line;
                    for (int x = 0; x < side; ++x) line.push_back(view.id3(x, y, z));
                    if (auto e = edge_on_line(line, in_a)) collected.insert(*e);
                }
        } else {
            for (int x : balanced_ids) {
                std::vector<std::vector<int>> rows(side), cols(side);
                for (int y = 0; y < side; ++y)
                    for (int z = 0; z < side; ++z) {
                        rows[y].push_back(view.id3(x, y, z));
                        cols[z].push_back(view.id3(x, y, z));
                    }
                collect_from_plane(rows, cols, in_a, collected);
            }
        }
    }

    // Greedy extraction with the induced-matching exclusion rule.
    Graph grid = dim == 2 ? generate(GeneratorSpec::grid2d(side, side))
                          : generate(GeneratorSpec::grid3d(side, side, side));
    auto adj = adjacency(grid);
    std::vector<char> blocked(view.total(), 0);  // endpoint or endpoint-neighbor of a pick
    std::vector<std::pair<int, int>> matching;
    for (auto& [a, b] : collected) {
        if (blocked[a] || blocked[b]) continue;
        matching.emplace_back(a, b);
        blocked[a] = blocked[b] = 1;
        for (int w : adj[a]) blocked[w] = 1;
        for (int w : adj[b]) blocked[w] = 1;
    }

    long long bound_num = dim == 3 ? static_cast<long long>(side) * side : side;
    long long bound_den = dim == 3 ? 36 * 61 : 75;
    if (static_cast<long long>(matching.size()) * bound_den < bound_num)
        throw Error("matching: extraction fell below the guaranteed size");
    if (!is_induced_matching(grid, matching))
        throw Error("matching: extraction is not an induced matching");
    return matching;
}

bool is_induced_matching(const Graph& g, const std::vector<std::pair<int, int>>& matching) {
    std::set<int> used;
    for (auto& [a, b] : matching) {
        if (!g.has_edge(a, b)) return false;
        if (!used.insert(a).second || !used.insert(b).second) return false;
    }
    for (size_t i = 0; i < matching.size(); ++i)
        for (size_t j = i + 1; j < matching.size(); ++j) {
            int ends1[2] = {matching[i].first, matching[i].second};
            int ends2[2] = {matching[j].first, matching[j].second};
            for (int u : ends1)
                for (int v : ends2)
                    if (g.has_edge(u, v)) return false;
        }
    return true;
}

// -------------------------------------------------------------------- audit

namespace {

struct AuditRun {
    AuditReport report;

    bool check(const std::string& name, bool ok, const std::string& detail = "") {
        report.checks.push_back({name, ok, detail});
        return ok;
    }
};

bool is_reflexive_path(const Graph& g) {
    if (g.n < 1 || !g.is_reflexive()) return false;
    Graph expected = reflexive_path(g.n);
    return g.edges == expected.edges;
}

int span_of_params(const LabeledGraph& value, const std::vector<int>& vertices) {
    int lo = 1 << 30, hi = -1;
    for (int v : vertices) {
        lo = std::min(lo, value.param_of(v));
        hi = std::max(hi, value.param_of(v));
    }
    return hi - lo + 1;
}

struct SplitData {
    std::vector<int> a_members;  // original value ids in the balanced child
    std::vector<int> colors;     // color of each a_member inside the child value
};

// Runs the balanced split on the restriction of `expr` to `keep` and reads
// the colors that the balanced child's value assigns to its vertices.
SplitData split_and_colors(const ExprPtr& expr, const Graph& p_path, const std::vector<int>& keep,
                           std::vector<int>& out_old_of_new, BalancedSplit& out_split) {
    auto restricted = restrict_expression(expr, keep);
    if (!restricted) throw Error("audit: restriction dropped everything");
    out_old_of_new = restricted->old_of_new;
    out_split = balanced_union_subexpression(restricted->expr);

    // Recover the balanced child by its creation range: it sits directly
    // below a union node, and no other union child can carry the same range.
    struct ChildFinder {
        int first, size;
        ExprPtr child;
        int walk(const ExprPtr& e, int at) {
            switch (e->kind) {
                case Expr::Create:
                    return 1;
                case Expr::Union: {
                    int l = walk(e->left, at);
                    int r = walk(e->right, at + l);
                    if (!child) {
                        if (at == first && l == size) child = e->left;
                        if (at + l == first && r == size) child = e->right;
                    }
                    return l + r;
                }
                default:
                    return walk(e->left, at);
            }
        }
    };
    ChildFinder finder{out_split.child_first, out_split.child_size, nullptr};
    finder.walk(restricted->expr, 0);
    if (!finder.child) throw Error("audit: balanced child not found");
    auto child_value = evaluate(finder.child, p_path);

    SplitData data;
    for (int i = 0; i < out_split.child_size; ++i) {
        data.a_members.push_back(out_old_of_new[out_split.child_first + i]);
        data.colors.push_back(child_value.color_of(i));
    }
    return data;
}

}  // namespace

AuditReport audit_color_lower_bound(const ExprPtr& expr, const Graph& p_path, int n,
                                    const Perturbation& p, AuditVariant variant) {
    AuditRun run;
    if (!is_reflexive_path(p_path)) throw Error("audit: parameter graph must be a reflexive path");

    Graph base = variant == AuditVariant::Grid3D
                     ? generate(GeneratorSpec::grid3d(n, n, n))
                     : generate(GeneratorSpec::disjoint_copies(GeneratorSpec::pinned_grid(n), n));
    Graph expected = apply_perturbation(base, p);
    auto value = evaluate(expr, p_path);
    run.report.palette = palette(expr);

    bool value_ok = value.graph.n == expected.n && value.graph.edges == expected.edges;
    if (!run.check("value-is-perturbed-grid", value_ok,
                   value_ok ? "" : "expression value differs from the perturbed grid"))
        return run.report;

    int k = p.class_count();
    long long kk = static_cast<long long>(k) * k;

    try {
        if (variant == AuditVariant::Grid3D) {
            auto clean = prune_to_clean_subgrid(n, p);
            int m = clean.subgrid.side;
            run.report.subgrid_side = m;
            long long floor_bound = n;
            for (int i = 0; i < k; ++i) floor_bound /= 3;
            run.check("clean-subgrid", m >= floor_bound && !clean.vertex_ids.empty(),
                      "side " + std::to_string(m) + " after " + std::to_string(clean.rounds) +
                          " rounds");
            bool clean_ok = clean.clean;
            for (int c = 0; c < k; ++c) {
                int count = static_cast<int>(clean.restricted.parts[c].size());
                if (count >= 1 && count <= 12) clean_ok = false;
            }
            run.check("classes-empty-or-large", clean_ok);

            Graph perturbed_local = induced_subgraph(expected, clean.vertex_ids);
            Graph grid_local = induced_subgraph(base, clean.vertex_ids);
            bool dist_ok = true;
            std::vector<std::vector<int>> dists(perturbed_local.n);
            for (int v = 0; v < perturbed_local.n; ++v)
                dists[v] = bfs_distances(perturbed_local, {v});
            for (auto [u, v] : grid_local.edges)
                if (dists[u][v] < 0 || dists[u][v] > 3) dist_ok = false;
            run.check("grid-edges-within-distance-3", dist_ok);
            int diam = diameter(perturbed_local);
            run.check("perturbed-diameter", diam >= 0 && diam < 9 * m,
                      "diameter " + std::to_string(diam));

            int span = span_of_params(value, clean.vertex_ids);
            run.report.parameter_span = span;
            run.check("parameter-span", span <= 9 * m, "span " + std::to_string(span));

            BalancedSplit split;
            std::vector<int> old_of_new;
            auto data = split_and_colors(expr, p_path, clean.vertex_ids, old_of_new, split);
            run.check("balanced-split", 3 * split.child_size >= split.total &&
                                            3 * split.child_size <= 2 * split.total,
                      "child holds " + std::to_string(split.child_size) + " of " +
                          std::to_string(split.total));

            // Partition of the subgrid (local ids) by membership in the child.
            std::vector<char> in_a(clean.vertex_ids.size(), 0);
            std::set<int> a_set(data.a_members.begin(), data.a_members.end());
            for (size_t i = 0; i < clean.vertex_ids.size(); ++i)
                if (a_set.count(clean.vertex_ids[i])) in_a[i] = 1;
            auto matching = induced_matching_bicolored_grid(m, 3, in_a);
            run.report.matching_size = static_cast<int>(matching.size());
            Graph local_grid = generate(GeneratorSpec::grid3d(m, m, m));
            run.check("induced-matching",
                      is_induced_matching(local_grid, matching) &&
                          static_cast<long long>(matching.size()) * 36 * 61 >=
                              static_cast<long long>(m) * m,
                      "size " + std::to_string(matching.size()));

            // Pigeonhole over the parameter vertices of the A-endpoints.
            std::map<int, std::vector<int>> by_param;
            for (auto& [a, b] : matching)
                by_param[value.param_of(clean.vertex_ids[a])].push_back(clean.vertex_ids[a]);
            int best_param = -1;
            size_t best_size = 0;
            for (auto& [param, members] : by_param)
                if (members.size() > best_size) {
                    best_size = members.size();
                    best_param = param;
                }
            auto& chosen = by_param[best_param];
            run.report.pigeonhole_class_size = static_cast<int>(chosen.size());
            run.check("pigeonhole",
                      static_cast<long long>(chosen.size()) * span >=
                          static_cast<long long>(matching.size()),
                      "class of " + std::to_string(chosen.size()) + " at parameter " +
                          std::to_string(best_param));

            // Colors of the chosen vertices inside the balanced child.
            std::map<int, int> color_of_member;
            for (int i = 0; i < split.child_size; ++i)
                color_of_member[data.a_members[i]] = data.colors[i];
            std::set<int> distinct;
            std::map<int, int> per_color;
            for (int v : chosen) {
                distinct.insert(color_of_member.at(v));
                per_color[color_of_member.at(v)]++;
            }
            run.report.distinct_colors_observed = static_cast<int>(distinct.size());
            bool no_big_class = true;
            for (auto& [c, count] : per_color)
                if (count > kk) no_big_class = false;
            run.check("color-classes-bounded", no_big_class,
                      std::to_string(distinct.size()) + " distinct colors");

            run.report.lower_bound_measured =
                static_cast<int>((chosen.size() + kk - 1) / kk);
            run.report.lower_bound_worst_case =
                static_cast<double>(m) / (9.0 * 36 * 61 * k * k);
            run.check("palette-at-least-bound",
                      run.report.palette >= run.report.lower_bound_measured &&
                          run.report.distinct_colors_observed >= run.report.lower_bound_measured,
                      "palette " + std::to_string(run.report.palette) + " >= " +
                          std::to_string(run.report.lower_bound_measured));
        } else {
            // Disjoint pinned grids. Copy j occupies a block of n^4+1 ids with
            // the apex last in the block.
            int block = n * n * n * n + 1;
            auto cls = p.class_of(base.n);
            std::vector<char> alive(n, 1);
            int removals = 0;
            while (true) {
                std::vector<long long> grid_count(k, 0);
                std::vector<int> apex_count(k, 0);
                for (int j = 0; j < n; ++j) {
                    if (!alive[j]) continue;
                    for (int i = 0; i < block - 1; ++i) grid_count[cls[j * block + i]]++;
                    apex_count[cls[j * block + block - 1]]++;
                }
                int victim = -1;
                for (int j = 0; j < n && victim < 0; ++j) {
                    if (!alive[j]) continue;
                    bool small_hit = false;
                    for (int i = 0; i < block - 1 && !small_hit; ++i)
                        if (grid_count[cls[j * block + i]] <= 8) small_hit = true;
                    bool rare = apex_count[cls[j * block + block - 1]] <= 1;
                    if (small_hit || rare) victim = j;
                }
                if (victim < 0) break;
                alive[victim] = 0;
                ++removals;
            }
            bool any_alive = std::count(alive.begin(), alive.end(), char(1)) > 0;
            run.check("surviving-copy", any_alive && removals <= 9 * k,
                      std::to_string(removals) + " removals");
            if (!any_alive) {
                run.report.ok = false;
                return run.report;
            }
            int copy = 0;
            while (!alive[copy]) ++copy;

            std::vector<int> alive_vertices;
            for (int j = 0; j < n; ++j)
                if (alive[j])
                    for (int i = 0; i < block; ++i) alive_vertices.push_back(j * block + i);
            Graph h_alive = induced_subgraph(expected, alive_vertices);
            std::vector<int> pos(base.n, -1);
            for (size_t i = 0; i < alive_vertices.size(); ++i) pos[alive_vertices[i]] = static_cast<int>(i);

            std::vector<int> grid_ids;  // original ids of the copy's grid vertices
            for (int i = 0; i < block - 1; ++i) grid_ids.push_back(copy * block + i);
            bool dist_ok = true;
            for (int i = 0; i < block - 1 && dist_ok; ++i) {
                auto dist = bfs_distances(h_alive, {pos[grid_ids[i]]});
                for (int jj = 0; jj < block - 1; ++jj) {
                    int d = dist[pos[grid_ids[jj]]];
                    if (d < 0 || d > 18 * n + 4) dist_ok = false;
                }
            }
            run.check("pinned-distance", dist_ok);

            int span = span_of_params(value, grid_ids);
            run.report.parameter_span = span;
            run.check("parameter-span", span <= 18 * n + 5, "span " + std::to_string(span));

            BalancedSplit split;
            std::vector<int> old_of_new;
            auto data = split_and_colors(expr, p_path, grid_ids, old_of_new, split);
            run.check("balanced-split", 3 * split.child_size >= split.total &&
                                            3 * split.child_size <= 2 * split.total,
                      "child holds " + std::to_string(split.child_size) + " of " +
                          std::to_string(split.total));

            int side = n * n;
            std::vector<char> in_a(side * side, 0);
            std::set<int> a_set(data.a_members.begin(), data.a_members.end());
            for (int i = 0; i < side * side; ++i)
                if (a_set.count(copy * block + i)) in_a[i] = 1;
            auto matching = induced_matching_bicolored_grid(side, 2, in_a);
            run.report.matching_size = static_cast<int>(matching.size());
            Graph local_grid = generate(GeneratorSpec::grid2d(side, side));
            run.check("induced-matching",
                      is_induced_matching(local_grid, matching) &&
                          static_cast<long long>(matching.size()) * 75 >= side,
                      "size " + std::to_string(matching.size()));

            std::map<int, std::vector<int>> by_param;
            for (auto& [a, b] : matching)
                by_param[value.param_of(copy * block + a)].push_back(copy * block + a);
            int best_param = -1;
            size_t best_size = 0;
            for (auto& [param, members] : by_param)
                if (members.size() > best_size) {
                    best_size = members.size();
                    best_param = param;
                }
            auto& chosen = by_param[best_param];
            run.report.pigeonhole_class_size = static_cast<int>(chosen.size());
            run.check("pigeonhole",
                      static_cast<long long>(chosen.size()) * span >=
                          static_cast<long long>(matching.size()));

            std::map<int, int> color_of_member;
            for (int i = 0; i < split.child_size; ++i)
                color_of_member[data.a_members[i]] = data.colors[i];
            std::set<int> distinct;
            std::map<int, int> per_color;
            for (int v : chosen) {
                distinct.insert(color_of_member.at(v));
                per_color[color_of_member.at(v)]++;
            }
            run.report.distinct_colors_observed = static_cast<int>(distinct.size());
            bool no_big_class = true;
            for (auto& [c, count] : per_color)
                if (count > kk) no_big_class = false;
            run.check("color-classes-bounded", no_big_class,
                      std::to_string(distinct.size()) + " distinct colors");

            run.report.lower_bound_measured =
                static_cast<int>((chosen.size() + kk - 1) / kk);
            run.report.lower_bound_worst_case =
                (static_cast<double>(side) / 75.0) / (18.0 * n + 4) / (k * k);
            run.check("palette-at-least-bound",
                      run.report.palette >= run.report.lower_bound_measured &&
                          run.report.distinct_colors_observed >= run.report.lower_bound_measured,
                      "palette " + std::to_string(run.report.palette) + " >= " +
                          std::to_string(run.report.lower_bound_measured));
        }
    } catch (const Error& e) {
        run.check("pipeline", false, e.what());
    }

    run.report.ok = true;
    for (auto& c : run.report.checks) run.report.ok = run.report.ok && c.ok;
    return run.report;
}

}  // namespace hcw
