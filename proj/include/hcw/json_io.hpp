#pragma once

#include <optional>
#include <string>

#include "hcw/expr.hpp"
#include "hcw/graph.hpp"
#include "hcw/tree_decomp.hpp"

namespace hcw {

/// Graph wire format:
///   {"n": int, "edges": [[u,v],...], "loops": [v,...],
///    "colors": {"0": c0, ...}}          (colors optional)
/// Serialization is canonical (edges as [min,max], sorted) and
/// byte-deterministic for a given value.
std::string graph_to_json(const Graph& g);
std::string colored_graph_to_json(const ColoredGraph& g);

struct ParsedGraph {
    Graph graph;
    std::optional<std::vector<int>> colors;

    ColoredGraph colored() const {
        if (!colors) throw Error("graph json: no colors present");
        return ColoredGraph(graph, *colors);
    }
};

ParsedGraph parse_graph(const std::string& text);

std::string graph_to_dot(const Graph& g);

/// Decomposition wire format:
///   {"nodes": n, "root": r, "parent": [...], "bags": [[...],...]}
std::string decomposition_to_json(const TreeDecomposition& td);
TreeDecomposition parse_decomposition(const std::string& text);

/// Expression wire format, nested objects:
///   {"op":"create","param":h,"color":c}
///   {"op":"union","left":...,"right":...}
///   {"op":"recolor","from":c1,"to":c2,"child":...}
///   {"op":"add_edges","c1":...,"c2":...,"child":...}
std::string expression_to_json(const ExprPtr& e);
ExprPtr parse_expression(const std::string& text);

}  // namespace hcw
