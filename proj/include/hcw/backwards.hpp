#pragma once

#include <utility>
#include <vector>

#include "hcw/formula.hpp"
#include "hcw/graph.hpp"

namespace hcw {

struct TwinFreeWitness {
    std::vector<int> side_a;  // ordered, realizes order k'+1
    std::vector<int> side_b;
};

/// From ordered sides realizing a bi-induced half-graph of order at least
/// 2(k'+2)^2, selects a twin-free bi-induced half-graph of order k'+1 by
/// picking one vertex from every other block of size k'+2, skipping
/// candidates with a twin among the previously chosen opposite side.
TwinFreeWitness extract_twin_free_half_graph(const Graph& j, const std::vector<int>& side_a,
                                             const std::vector<int>& side_b, int kprime);

/// True when u and v have the same neighbourhood apart from one another.
bool are_twins(const Graph& g, int u, int v);

/// Adds a vertex adjacent to everything; returns the new graph and the id
/// of the universal vertex (the old vertex count).
std::pair<Graph, int> augment_universal(const Graph& m);

/// The four factor-recovery formulas over a product colored by the pair of
/// proper factor colorings, encoded as color id = c1 * c2_count + c2 with
/// the universal vertex's second coloring fixed to c2_count - 1:
///   sigma1: the two vertices lie in the same row (equal first coordinate),
///   sigma2: their rows are adjacent in the loopless factor,
///   sigma3: same column, valid when the rows are equal or adjacent,
///   sigma4: columns adjacent in the factor without the universal vertex,
///           valid under the same row-closeness assumption.
struct FactorFormulas {
    FormulaPtr sigma1, sigma2, sigma3, sigma4;
    int c1_count = 0, c2_count = 0;
};

FactorFormulas factor_formulas(int c1_count, int c2_count);

/// Strong product of the loopless row factor with the column factor plus a
/// universal vertex, colored for factor_formulas: c1 greedy on the row
/// factor, c2 greedy on the augmented column factor relabeled so the
/// universal vertex holds the last color.
struct ColoredProduct {
    ColoredGraph product;
    int c1_count = 0, c2_count = 0;
    int universal = 0;        // vertex id of the universal vertex in the column factor
    Graph column_factor;      // the augmented column factor
};

ColoredProduct build_factor_instance(const Graph& q_prime, const Graph& m);

/// Encodes vertex colors 1..k as pendant leaves: vertex v of color c gains
/// c+1 leaves. Originals are recognizable as the vertices of degree >= 2
/// and the color is the number of degree-one neighbours minus one.
struct LeafEncoding {
    Graph graph;              // originals first, then leaves in vertex order
    FormulaPtr is_original;   // arity 1
    std::vector<FormulaPtr> color_formula;  // index c-1 recognizes color c
    int color_count = 0;
};

LeafEncoding encode_colored_graph_as_leaves(const ColoredGraph& g);

/// Reads the encoded graph back: vertices of degree >= 2 with their
/// recovered colors and induced edges. Used to verify the round trip.
ColoredGraph decode_leaf_encoding(const LeafEncoding& enc);

}  // namespace hcw
