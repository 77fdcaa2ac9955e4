#include "hcw/json_io.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace hcw {

using json = nlohmann::ordered_json;

namespace {

json graph_value(const Graph& g) {
    json j;
    j["n"] = g.n;
    j["edges"] = json::array();
    for (auto [u, v] : g.edges) j["edges"].push_back({u, v});
    j["loops"] = g.loops;
    return j;
}

Graph graph_from(const json& j) {
    if (!j.contains("n") || !j["n"].is_number_integer()) throw Error("graph json: missing n");
    Graph g(j["n"].get<int>());
    for (auto& e : j.value("edges", json::array())) {
        if (!e.is_array() || e.size() != 2) throw Error("graph json: malformed edge");
        int u = e[0].get<int>(), v = e[1].get<int>();
        if (u < 0 || v < 0 || u >= g.n || v >= g.n)
            throw Error("graph json: dangling endpoint id " + std::to_string(u < 0 || u >= g.n ? u : v));
        g.edges.emplace_back(u, v);
    }
    for (auto& l : j.value("loops", json::array())) {
        int v = l.get<int>();
        if (v < 0 || v >= g.n) throw Error("graph json: dangling loop id " + std::to_string(v));
        g.loops.push_back(v);
    }
    return normalized(std::move(g));
}

}  // namespace

std::string graph_to_json(const Graph& g) { return graph_value(g).dump(2) + "\n"; }

std::string colored_graph_to_json(const ColoredGraph& g) {
    json j = graph_value(g.graph);
    json colors = json::object();
    for (int v = 0; v < g.graph.n; ++v) colors[std::to_string(v)] = g.color[v];
    j["colors"] = std::move(colors);
    return j.dump(2) + "\n";
}

ParsedGraph parse_graph(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw Error(std::string("graph json: parse failure: ") + e.what());
    }
    ParsedGraph out;
    out.graph = graph_from(j);
    if (j.contains("colors")) {
        std::vector<int> colors(out.graph.n, 0);
        std::vector<char> seen(out.graph.n, 0);
        for (auto& [key, value] : j["colors"].items()) {
            int v = std::stoi(key);
            if (v < 0 || v >= out.graph.n) throw Error("graph json: color for unknown vertex " + key);
            colors[v] = value.get<int>();
            seen[v] = 1;
        }
        for (int v = 0; v < out.graph.n; ++v)
            if (!seen[v]) throw Error("graph json: color map not total, vertex " + std::to_string(v));
        out.colors = std::move(colors);
    }
    return out;
}

std::string graph_to_dot(const Graph& g) {
    std::ostringstream os;
    os << "graph g {\n";
    for (int v = 0; v < g.n; ++v) os << "  v" << v << ";\n";
    for (int v : g.loops) os << "  v" << v << " -- v" << v << ";\n";
    for (auto [u, v] : g.edges) os << "  v" << u << " -- v" << v << ";\n";
    os << "}\n";
    return os.str();
}

std::string decomposition_to_json(const TreeDecomposition& td) {
    json j;
    j["nodes"] = td.node_count();
    j["root"] = td.root;
    j["parent"] = td.parent;
    j["bags"] = td.bags;
    return j.dump(2) + "\n";
}

TreeDecomposition parse_decomposition(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw Error(std::string("decomposition json: parse failure: ") + e.what());
    }
    TreeDecomposition td;
    int nodes = j.at("nodes").get<int>();
    td.root = j.at("root").get<int>();
    td.parent = j.at("parent").get<std::vector<int>>();
    td.bags = j.at("bags").get<std::vector<std::vector<int>>>();
    if (static_cast<int>(td.parent.size()) != nodes || static_cast<int>(td.bags.size()) != nodes)
        throw Error("decomposition json: inconsistent node count");
    for (auto& bag : td.bags) std::sort(bag.begin(), bag.end());
    return td;
}

namespace {

json expr_value(const ExprPtr& e) {
    json j;
    switch (e->kind) {
        case Expr::Create:
            j["op"] = "create";
            j["param"] = e->param;
            j["color"] = e->color;
            break;
        case Expr::Union:
            j["op"] = "union";
            j["left"] = expr_value(e->left);
            j["right"] = expr_value(e->right);
            break;
        case Expr::Recolor:
            j["op"] = "recolor";
            j["from"] = e->c1;
            j["to"] = e->c2;
            j["child"] = expr_value(e->left);
            break;
        case Expr::AddEdges:
            j["op"] = "add_edges";
            j["c1"] = e->c1;
            j["c2"] = e->c2;
            j["child"] = expr_value(e->left);
            break;
    }
    return j;
}

ExprPtr expr_from(const json& j) {
    std::string op = j.at("op").get<std::string>();
    if (op == "create") return e_create(j.at("param").get<int>(), j.at("color").get<int>());
    if (op == "union") return e_union(expr_from(j.at("left")), expr_from(j.at("right")));
    if (op == "recolor")
        return e_recolor(j.at("from").get<int>(), j.at("to").get<int>(), expr_from(j.at("child")));
    if (op == "add_edges")
        return e_add_edges(j.at("c1").get<int>(), j.at("c2").get<int>(), expr_from(j.at("child")));
    throw Error("expression json: unknown op '" + op + "'");
}

}  // namespace

std::string expression_to_json(const ExprPtr& e) {
    if (!e) throw Error("expression json: empty expression");
    return expr_value(e).dump(2) + "\n";
}

ExprPtr parse_expression(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw Error(std::string("expression json: parse failure: ") + e.what());
    }
    return expr_from(j);
}

}  // namespace hcw
