#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hcw/graph.hpp"

namespace hcw {

/// Rooted tree decomposition: node ids 0..node_count-1, parent map with -1
/// at the root, one bag per node.
struct TreeDecomposition {
    int root = 0;
    std::vector<int> parent;             // parent[root] == -1
    std::vector<std::vector<int>> bags;  // sorted vertex lists

    int node_count() const { return static_cast<int>(parent.size()); }
    std::vector<std::vector<int>> children() const;
    int width() const;
};

struct DecompositionVerdict {
    bool ok = true;
    std::string axiom;    // "tree-shape", "vertex-cover", "edge-cover", "interpolation"
    std::string witness;  // human-readable description of the violation
};

/// Checks the three decomposition axioms (plus tree shape) and names a
/// witness for the first violation found.
DecompositionVerdict validate(const Graph& m, const TreeDecomposition& td);

/// Is the decomposition in the normal form produced by normalize():
/// valid, empty root bag, at most two children per node, singleton leaf
/// bags, smooth, and no vertex occurring in more than one leaf bag.
bool is_normalized(const Graph& m, const TreeDecomposition& td);

/// Rebuilds the decomposition into the normal form above without changing
/// its width. Rejects invalid input with the validation verdict.
TreeDecomposition normalize(const Graph& m, const TreeDecomposition& td);

/// Forget data of a normalized decomposition. `order` lists the graph
/// vertices in increasing order; position in it is the rank. The order is
/// consistent with the root-first preorder of the forget nodes, ties broken
/// by vertex id.
struct ForgetOrder {
    std::vector<int> order;        // vertices, smallest first
    std::vector<int> rank;         // vertex -> position in order
    std::vector<int> forget_node;  // vertex -> unique node with v in X_t \ X_parent(t)
    std::vector<int> preorder;     // node -> preorder rank (root first)
};

ForgetOrder forget_order(const Graph& m, const TreeDecomposition& td);

/// Vertices weakly r-reachable from v: endpoints u of paths of length <= r
/// on which u is minimal in `rank` (lower rank = smaller). Includes v.
std::vector<int> wreach(const Graph& m, const std::vector<int>& rank, int r, int v);

/// All weak reachability sets at once; wreach_all(g,rank,r)[v] == wreach(...,v).
std::vector<std::vector<int>> wreach_all(const Graph& m, const std::vector<int>& rank, int r);

/// Exact minimum-width tree decomposition by branch and bound over
/// elimination orders. Only for small graphs; the cap guards the search.
TreeDecomposition decompose_small(const Graph& m, int cap = 10);

int treewidth_small(const Graph& m, int cap = 10);

/// X_t^+ (union of bags in the subtree) and Y_t (vertices occurring only in
/// the subtree's bags; the whole vertex set at the root).
struct SubtreeSets {
    std::vector<std::vector<int>> bag_union;   // per node, sorted
    std::vector<std::vector<int>> forgotten;   // per node, sorted (Y sets)
};

SubtreeSets subtree_sets(const Graph& m, const TreeDecomposition& td);

}  // namespace hcw
