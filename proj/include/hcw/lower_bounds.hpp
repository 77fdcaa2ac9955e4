#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hcw/expr.hpp"
#include "hcw/graph.hpp"

namespace hcw {

/// Partition of a vertex set into labeled classes plus a symmetric flip
/// relation on class labels; applying it complements the edges between
/// (and within) the flipped class pairs.
struct Perturbation {
    std::vector<std::vector<int>> parts;          // classes, may be empty
    std::vector<std::pair<int, int>> flip;        // symmetric pairs of class ids (0-based)

    int class_count() const { return static_cast<int>(parts.size()); }
    bool flipped(int i, int j) const;
    std::vector<int> class_of(int n) const;  // vertex -> class id, validates the partition
};

Graph apply_perturbation(const Graph& g, const Perturbation& p);

/// Axis-aligned induced subgrid of a 3D cube grid.
struct Subgrid3 {
    int offset_x = 0, offset_y = 0, offset_z = 0;
    int side = 0;

    bool contains(int x, int y, int z) const {
        return x >= offset_x && x < offset_x + side && y >= offset_y && y < offset_y + side &&
               z >= offset_z && z < offset_z + side;
    }
};

struct CleanSubgrid {
    Subgrid3 subgrid;
    Perturbation restricted;          // classes restricted to the subgrid (original ids kept)
    std::vector<int> vertex_ids;      // original grid ids, subgrid-local row-major order
    int rounds = 0;
    bool clean = true;                // every class empty or met in > 12 vertices
    std::vector<int> stuck_classes;   // still small when the grid ran out of room
};

/// Shrinks an n x n x n grid through third-subgrids until every class of
/// the perturbation either misses the subgrid or meets it in more than 12
/// vertices. At most one round per class; the result has side >= n / 3^k
/// rounded down once per shrink. When the grid becomes too small to keep
/// splitting (the guarantee needs large n), the best subgrid reached is
/// returned with `clean` unset and the stuck classes listed.
CleanSubgrid prune_to_clean_subgrid(int n, const Perturbation& p);

struct BalancedSplit {
    int union_node_preorder = -1;   // preorder index of the union node
    int child_first = 0;            // creation-order range of the balanced child
    int child_size = 0;
    int total = 0;
};

/// Finds the bottommost union node valued at least 2N/3 vertices; one of
/// its children then holds between N/3 and 2N/3 of the N value vertices,
/// and its creation-order range is returned.
BalancedSplit balanced_union_subexpression(const ExprPtr& expr);

/// Extracts an induced matching between the two sides of a 1/3-balanced
/// partition of a grid: at least side^2/(36*61) edges in the 3D cube of
/// the given side, at least side/75 in the 2D square. The construction
/// collects two-colored edges from unbalanced lines and planes, then picks
/// greedily with an exclusion radius.
std::vector<std::pair<int, int>> induced_matching_bicolored_grid(int side, int dim,
                                                                 const std::vector<char>& in_a);

/// Independent brute-force check used as the matching oracle.
bool is_induced_matching(const Graph& g, const std::vector<std::pair<int, int>>& matching);

struct AuditCheck {
    std::string name;
    bool ok = false;
    std::string detail;
};

struct AuditReport {
    bool ok = false;
    std::vector<AuditCheck> checks;
    int subgrid_side = 0;
    int parameter_span = 0;
    int matching_size = 0;
    int pigeonhole_class_size = 0;    // |A^M_i|
    int distinct_colors_observed = 0; // colors on the pigeonhole class in the balanced child
    int lower_bound_measured = 0;     // ceil(|A^M_i| / k^2)
    double lower_bound_worst_case = 0.0;
    int palette = 0;
};

enum class AuditVariant { Grid3D, Pinned };

/// Checks the color lower-bound pipeline on a concrete instance: the value
/// of `expr` over the reflexive path `p_path` must be the perturbation of
/// the named grid (3D cube of side n, or n disjoint pinned grids of order
/// n). Verifies the clean subgrid, the distance facts, the parameter span,
/// the balanced split with its induced matching, and the pigeonhole color
/// count, and asserts the derived bound against the measured palette.
/// Sub-claim failures appear as failed checks rather than exceptions.
AuditReport audit_color_lower_bound(const ExprPtr& expr, const Graph& p_path, int n,
                                    const Perturbation& p, AuditVariant variant);

}  // namespace hcw
