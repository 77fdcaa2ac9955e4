#include "hcw/tree_decomp.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace hcw {

std::vector<std::vector<int>> TreeDecomposition::children() const {
    std::vector<std::vector<int>> ch(node_count());
    for (int t = 0; t < node_count(); ++t)
        if (parent[t] >= 0) ch[parent[t]].push_back(t);
    return ch;
}

int TreeDecomposition::width() const {
    int w = -1;
    for (auto& bag : bags) w = std::max(w, static_cast<int>(bag.size()) - 1);
    return w;
}

namespace {

bool tree_shape_ok(const TreeDecomposition& td, std::string& why) {
    int n = td.node_count();
    if (n == 0 || static_cast<int>(td.bags.size()) != n) {
        why = "node/bag count mismatch";
        return false;
    }
    if (td.root < 0 || td.root >= n || td.parent[td.root] != -1) {
        why = "bad root";
        return false;
    }
    for (int t = 0; t < n; ++t) {
        if (t == td.root) continue;
        if (td.parent[t] < 0 || td.parent[t] >= n) {
            why = "node " + std::to_string(t) + " has no parent";
            return false;
        }
    }
    // Every node must reach the root without cycles.
    for (int t = 0; t < n; ++t) {
        int steps = 0, cur = t;
        while (cur != td.root) {
            cur = td.parent[cur];
            if (cur < 0 || ++steps > n) {
                why = "cycle or dangling parent at node " + std::to_string(t);
                return false;
            }
        }
    }
    return true;
}

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

DecompositionVerdict validate(const Graph& m, const TreeDecomposition& td) {
    DecompositionVerdict verdict;
    std::string why;
    if (!tree_shape_ok(td, why)) return {false, "tree-shape", why};
    for (auto& bag : td.bags)
        for (int v : bag)
            if (v < 0 || v >= m.n) return {false, "tree-shape", "bag vertex out of range"};

    std::vector<char> covered(m.n, 0);
    for (auto& bag : td.bags)
        for (int v : bag) covered[v] = 1;
    for (int v = 0; v < m.n; ++v)
        if (!covered[v]) return {false, "vertex-cover", "vertex " + std::to_string(v) + " in no bag"};

    for (auto [u, v] : m.edges) {
        bool ok = false;
        for (auto& bag : td.bags) {
            bool bu = std::binary_search(bag.begin(), bag.end(), u);
            bool bv = std::binary_search(bag.begin(), bag.end(), v);
            if (bu && bv) {
                ok = true;
                break;
            }
        }
        if (!ok)
            return {false, "edge-cover",
                    "edge " + std::to_string(u) + "," + std::to_string(v) + " in no bag"};
    }

    // Interpolation: the nodes containing v must induce a subtree.
    auto ch = td.children();
    for (int v = 0; v < m.n; ++v) {
        std::vector<int> holding;
        for (int t = 0; t < td.node_count(); ++t)
            if (std::binary_search(td.bags[t].begin(), td.bags[t].end(), v)) holding.push_back(t);
        if (holding.empty()) continue;
        std::set<int> hold(holding.begin(), holding.end());
        // Walk from the first holder; all holders must be reachable inside hold.
        std::set<int> seen;
        std::vector<int> stack{holding.front()};
        seen.insert(holding.front());
        while (!stack.empty()) {
            int t = stack.back();
            stack.pop_back();
            std::vector<int> around = ch[t];
            if (td.parent[t] >= 0) around.push_back(td.parent[t]);
            for (int s : around)
                if (hold.count(s) && !seen.count(s)) {
                    seen.insert(s);
                    stack.push_back(s);
                }
        }
        if (seen.size() != hold.size())
            return {false, "interpolation", "vertex " + std::to_string(v) + " occurs in a disconnected node set"};
    }
    return verdict;
}

namespace {

struct Builder {
    std::vector<int> parent;
    std::vector<std::vector<int>> bags;
    int add(int par, std::vector<int> bag) {
        parent.push_back(par);
        bags.push_back(sorted_unique(std::move(bag)));
        return static_cast<int>(parent.size()) - 1;
    }
};

std::vector<int> bag_minus(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

bool is_normalized(const Graph& m, const TreeDecomposition& td) {
    if (!validate(m, td).ok) return false;
    if (!td.bags[td.root].empty()) return false;
    auto ch = td.children();
    std::vector<int> leaf_seen(m.n, 0);
    for (int t = 0; t < td.node_count(); ++t) {
        if (ch[t].size() > 2) return false;
        if (ch[t].empty() && t != td.root) {
            if (td.bags[t].size() != 1) return false;
            if (++leaf_seen[td.bags[t][0]] > 1) return false;
        }
        if (td.parent[t] >= 0) {
            auto& a = td.bags[t];
            auto& b = td.bags[td.parent[t]];
            if (bag_minus(a, b).size() > 1 || bag_minus(b, a).size() > 1) return false;
        }
    }
    return true;
}

TreeDecomposition normalize(const Graph& m, const TreeDecomposition& td) {
    auto verdict = validate(m, td);
    if (!verdict.ok) throw Error("normalize: invalid decomposition (" + verdict.axiom + ": " + verdict.witness + ")");
    if (m.n == 0) throw Error("normalize: empty graph has no usable decomposition");

    // Work on a mutable copy structured as children lists built by re-rooting
    // at td.root and copying bags.
    Builder b;
    std::vector<int> remap(td.node_count(), -1);
    // BFS copy keeps node order deterministic.
    std::vector<int> queue{td.root};
    remap[td.root] = b.add(-1, td.bags[td.root]);
    auto ch0 = td.children();
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int t = queue[qi];
        for (int c : ch0[t]) {
            remap[c] = b.add(remap[t], td.bags[c]);
            queue.push_back(c);
        }
    }

    // Step 1: binarize. A node with k > 2 children gets a chain of copies of
    // its own bag, each taking over one extra child.
    for (int t = 0; t < static_cast<int>(b.parent.size()); ++t) {
        while (true) {
            std::vector<int> kids;
            for (int s = 0; s < static_cast<int>(b.parent.size()); ++s)
                if (b.parent[s] == t) kids.push_back(s);
            if (kids.size() <= 2) break;
            int extension = b.add(t, b.bags[t]);
            for (size_t i = 1; i < kids.size(); ++i) b.parent[kids[i]] = extension;
        }
    }

    // Step 2: smooth every tree edge by a remove-one-then-add-one chain.
    for (int t = 0; t < static_cast<int>(b.parent.size()); ++t) {
        int par = b.parent[t];
        if (par < 0) continue;
        auto removed = bag_minus(b.bags[par], b.bags[t]);
        auto added = bag_minus(b.bags[t], b.bags[par]);
        if (removed.size() <= 1 && added.size() <= 1) continue;
        // Walk from the parent bag to the child bag one vertex at a time:
        // drop the extras, then add the news. The final step is the edge to
        // t itself, so the last bag of the walk is not materialized.
        std::vector<std::vector<int>> walk;
        std::vector<int> cur = b.bags[par];
        for (int x : removed) {
            cur = bag_minus(cur, {x});
            walk.push_back(cur);
        }
        for (int y : added) {
            cur.push_back(y);
            cur = sorted_unique(cur);
            walk.push_back(cur);
        }
        walk.pop_back();
        int attach = par;
        for (auto& bag : walk) attach = b.add(attach, bag);
        b.parent[t] = attach;
    }

    // Step 3: graft a forgetting chain above the root until its bag is empty.
    int root = 0;
    while (!b.bags[root].empty()) {
        auto bag = b.bags[root];
        bag.pop_back();
        int nr = b.add(-1, bag);
        b.parent[root] = nr;
        root = nr;
    }

    // Step 4: repeatedly delete leaves whose bag is contained in the parent
    // bag. Such a leaf adds nothing; afterwards every surviving leaf owns a
    // vertex found nowhere else, which keeps leaf bags pairwise distinct.
    std::vector<char> alive(b.parent.size(), 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int t = 0; t < static_cast<int>(b.parent.size()); ++t) {
            if (!alive[t] || t == root) continue;
            bool leaf = true;
            for (int s = 0; s < static_cast<int>(b.parent.size()); ++s)
                if (alive[s] && b.parent[s] == t) {
                    leaf = false;
                    break;
                }
            if (!leaf) continue;
            if (bag_minus(b.bags[t], b.bags[b.parent[t]]).empty()) {
                alive[t] = 0;
                changed = true;
            }
        }
    }

    // Step 5: every remaining leaf keeps the one vertex missing from its
    // parent and sheds the rest along a descending chain.
    int live_count = static_cast<int>(b.parent.size());
    for (int t = 0; t < live_count; ++t) {
        if (!alive[t] || t == root) continue;
        bool leaf = true;
        for (int s = 0; s < static_cast<int>(b.parent.size()); ++s)
            if (alive[s] && b.parent[s] == t) {
                leaf = false;
                break;
            }
        if (!leaf || b.bags[t].size() <= 1) continue;
        auto own = bag_minus(b.bags[t], b.bags[b.parent[t]]);
        if (own.empty()) throw Error("normalize: redundant leaf survived pruning");
        int keep = own[0];
        std::vector<int> cur = b.bags[t];
        int attach = t;
        while (cur.size() > 1) {
            // Drop the largest vertex that is not `keep`.
            for (int i = static_cast<int>(cur.size()) - 1; i >= 0; --i)
                if (cur[i] != keep) {
                    cur.erase(cur.begin() + i);
                    break;
                }
            attach = b.add(attach, cur);
            alive.push_back(1);
        }
    }

    // Compact into the final decomposition, nodes in BFS order from the root.
    TreeDecomposition out;
    std::vector<int> newid(b.parent.size(), -1);
    std::vector<int> order{root};
    newid[root] = 0;
    out.parent.push_back(-1);
    out.bags.push_back(b.bags[root]);
    for (size_t qi = 0; qi < order.size(); ++qi) {
        int t = order[qi];
        for (int s = 0; s < static_cast<int>(b.parent.size()); ++s) {
            if (!alive[s] || b.parent[s] != t || newid[s] >= 0) continue;
            newid[s] = static_cast<int>(out.parent.size());
            out.parent.push_back(newid[t]);
            out.bags.push_back(b.bags[s]);
            order.push_back(s);
        }
    }
    out.root = 0;

    auto check = validate(m, out);
    if (!check.ok) throw Error("normalize: internal failure (" + check.axiom + ")");
    if (out.width() != td.width()) throw Error("normalize: width changed");
    if (!is_normalized(m, out)) throw Error("normalize: normal form not reached");
    return out;
}

ForgetOrder forget_order(const Graph& m, const TreeDecomposition& td) {
    auto verdict = validate(m, td);
    if (!verdict.ok) throw Error("forget_order: invalid decomposition");
    if (!td.bags[td.root].empty()) throw Error("forget_order: root bag must be empty");
    for (int t = 0; t < td.node_count(); ++t)
        if (td.parent[t] >= 0) {
            auto& a = td.bags[t];
            auto& p = td.bags[td.parent[t]];
            std::vector<int> d1, d2;
            std::set_difference(a.begin(), a.end(), p.begin(), p.end(), std::back_inserter(d1));
            std::set_difference(p.begin(), p.end(), a.begin(), a.end(), std::back_inserter(d2));
            if (d1.size() > 1 || d2.size() > 1) throw Error("forget_order: decomposition not smooth");
        }

    ForgetOrder fo;
    fo.preorder.assign(td.node_count(), -1);
    auto ch = td.children();
    for (auto& kids : ch) std::sort(kids.begin(), kids.end());
    int counter = 0;
    std::function<void(int)> visit = [&](int t) {
        fo.preorder[t] = counter++;
        for (int c : ch[t]) visit(c);
    };
    visit(td.root);

    fo.forget_node.assign(m.n, -1);
    for (int t = 0; t < td.node_count(); ++t) {
        const auto& bag = td.bags[t];
        for (int v : bag) {
            bool in_parent = false;
            if (td.parent[t] >= 0) {
                auto& p = td.bags[td.parent[t]];
                in_parent = std::binary_search(p.begin(), p.end(), v);
            }
            if (!in_parent) {
                if (fo.forget_node[v] != -1)
                    throw Error("forget_order: vertex " + std::to_string(v) + " forgotten twice");
                fo.forget_node[v] = t;
            }
        }
    }
    for (int v = 0; v < m.n; ++v)
        if (fo.forget_node[v] < 0) throw Error("forget_order: vertex never forgotten");

    fo.order.resize(m.n);
    std::iota(fo.order.begin(), fo.order.end(), 0);
    std::sort(fo.order.begin(), fo.order.end(), [&](int a, int c) {
        int pa = fo.preorder[fo.forget_node[a]], pc = fo.preorder[fo.forget_node[c]];
        return pa != pc ? pa < pc : a < c;
    });
    fo.rank.assign(m.n, 0);
    for (int i = 0; i < m.n; ++i) fo.rank[fo.order[i]] = i;
    return fo;
}

std::vector<int> wreach(const Graph& m, const std::vector<int>& rank, int r, int v) {
    auto all = wreach_all(m, rank, r);
    return all[v];
}

std::vector<std::vector<int>> wreach_all(const Graph& m, const std::vector<int>& rank, int r) {
    if (static_cast<int>(rank.size()) != m.n) throw Error("wreach: order must be total");
    auto adj = adjacency(m);
    std::vector<std::vector<int>> result(m.n);
    // BFS from u inside the subgraph of vertices ranked >= rank[u] marks
    // every v it reaches within r steps; u is then weakly reachable from v.
    for (int u = 0; u < m.n; ++u) {
        std::vector<int> dist(m.n, -1);
        dist[u] = 0;
        std::vector<int> frontier{u};
        result[u].push_back(u);
        for (int step = 1; step <= r && !frontier.empty(); ++step) {
            std::vector<int> next;
            for (int x : frontier)
                for (int w : adj[x]) {
                    if (dist[w] >= 0 || rank[w] < rank[u]) continue;
                    dist[w] = step;
                    next.push_back(w);
                    result[w].push_back(u);
                }
            frontier = std::move(next);
        }
    }
    for (auto& set : result) std::sort(set.begin(), set.end());
    return result;
}

namespace {

// Reachability closure used by the elimination-order search: neighbours of v
// in the graph where the eliminated set S has been contracted away.
std::vector<int> fill_neighbors(const Graph& g, const std::vector<std::vector<int>>& adj,
                                const std::vector<char>& eliminated, int v) {
    std::vector<char> seen(g.n, 0);
    std::vector<int> out, stack{v};
    seen[v] = 1;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int w : adj[x]) {
            if (seen[w]) continue;
            seen[w] = 1;
            if (eliminated[w])
                stack.push_back(w);
            else if (w != v)
                out.push_back(w);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct TwSearch {
    const Graph& g;
    std::vector<std::vector<int>> adj;
    std::map<std::vector<char>, int> memo;

    int best_from(std::vector<char>& eliminated, int remaining, int bound) {
        if (remaining == 0) return 0;
        auto it = memo.find(eliminated);
        if (it != memo.end()) return it->second;
        int best = g.n;  // upper sentinel
        for (int v = 0; v < g.n; ++v) {
            if (eliminated[v]) continue;
            int deg = static_cast<int>(fill_neighbors(g, adj, eliminated, v).size());
            if (deg >= best || deg >= bound) continue;
            eliminated[v] = 1;
            int sub = best_from(eliminated, remaining - 1, bound);
            eliminated[v] = 0;
            best = std::min(best, std::max(deg, sub));
        }
        memo[eliminated] = best;
        return best;
    }
};

}  // namespace

int treewidth_small(const Graph& m, int cap) {
    if (m.n > cap) throw Error("treewidth: graph exceeds the exact-search cap");
    if (m.n == 0) return -1;
    TwSearch search{m, adjacency(m), {}};
    std::vector<char> eliminated(m.n, 0);
    return search.best_from(eliminated, m.n, m.n);
}

TreeDecomposition decompose_small(const Graph& m, int cap) {
    if (m.n > cap) throw Error("decompose_small: graph exceeds the exact-search cap");
    if (m.n == 0) throw Error("decompose_small: empty graph");
    int target = treewidth_small(m, cap);

    // Recover an elimination order realizing the optimum, greedily: pick any
    // vertex whose fill-degree stays within target and whose remainder still
    // achieves it.
    TwSearch search{m, adjacency(m), {}};
    std::vector<char> eliminated(m.n, 0);
    std::vector<int> order;
    for (int step = 0; step < m.n; ++step) {
        bool advanced = false;
        for (int v = 0; v < m.n && !advanced; ++v) {
            if (eliminated[v]) continue;
            int deg = static_cast<int>(fill_neighbors(m, search.adj, eliminated, v).size());
            if (deg > target) continue;
            eliminated[v] = 1;
            if (search.best_from(eliminated, m.n - step - 1, m.n) <= target) {
                order.push_back(v);
                advanced = true;
            } else {
                eliminated[v] = 0;
            }
        }
        if (!advanced) throw Error("decompose_small: order reconstruction failed");
    }

    // Standard elimination-order to tree-decomposition construction.
    TreeDecomposition td;
    std::vector<int> node_of(m.n, -1);  // vertex -> node whose bag is {v} + later neighbors
    std::fill(eliminated.begin(), eliminated.end(), 0);
    std::vector<std::vector<int>> bag_for(m.n);
    for (int v : order) {
        auto nb = fill_neighbors(m, search.adj, eliminated, v);
        bag_for[v] = nb;
        bag_for[v].push_back(v);
        std::sort(bag_for[v].begin(), bag_for[v].end());
        eliminated[v] = 1;
    }
    // Build nodes in reverse elimination order; attach each to the node of
    // its earliest-later neighbour.
    td.parent.clear();
    td.bags.clear();
    std::vector<int> position(m.n, 0);
    for (int i = 0; i < m.n; ++i) position[order[i]] = i;
    for (int i = m.n - 1; i >= 0; --i) {
        int v = order[i];
        int id = static_cast<int>(td.bags.size());
        td.bags.push_back(bag_for[v]);
        td.parent.push_back(-1);
        node_of[v] = id;
        // Attach to the node of the lowest-position later neighbour.
        int attach = -1, best_pos = m.n + 1;
        for (int w : bag_for[v])
            if (w != v && position[w] > i && position[w] < best_pos) {
                best_pos = position[w];
                attach = node_of[w];
            }
        if (attach >= 0) {
            td.parent[id] = attach;
        } else if (id != 0) {
            td.parent[id] = 0;  // disconnected piece hangs off the first node
        }
    }
    td.root = 0;
    auto verdict = validate(m, td);
    if (!verdict.ok) throw Error("decompose_small: construction failed (" + verdict.axiom + ")");
    if (td.width() != target) throw Error("decompose_small: width mismatch");
    return td;
}

SubtreeSets subtree_sets(const Graph& m, const TreeDecomposition& td) {
    SubtreeSets out;
    int n = td.node_count();
    out.bag_union.assign(n, {});
    out.forgotten.assign(n, {});
    auto ch = td.children();
    std::function<void(int)> visit = [&](int t) {
        std::set<int> acc(td.bags[t].begin(), td.bags[t].end());
        for (int c : ch[t]) {
            visit(c);
            acc.insert(out.bag_union[c].begin(), out.bag_union[c].end());
        }
        out.bag_union[t].assign(acc.begin(), acc.end());
        if (t == td.root) {
            out.forgotten[t].resize(m.n);
            std::iota(out.forgotten[t].begin(), out.forgotten[t].end(), 0);
        } else {
            auto& pbag = td.bags[td.parent[t]];
            std::set_difference(acc.begin(), acc.end(), pbag.begin(), pbag.end(),
                                std::back_inserter(out.forgotten[t]));
        }
    };
    visit(td.root);
    return out;
}

}  // namespace hcw
