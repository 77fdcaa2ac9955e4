#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>

#include "hcw/cli.hpp"
#include "hcw/json_io.hpp"
#include "test_util.hpp"

using namespace hcw;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content = "")
        : path("cli_test_" + name) {
        if (!content.empty()) {
            std::ofstream out(path);
            out << content;
        }
    }
    ~TempFile() { std::remove(path.c_str()); }
};

int run(const std::vector<std::string>& argv, std::string* out_text = nullptr) {
    std::string out, err;
    int code = run_command(argv, out, err);
    if (out_text) *out_text = out;
    return code;
}

}  // namespace

TEST_CASE("graph json round trip is canonical") {
    Graph p3 = make_path(3);
    auto text = graph_to_json(p3);
    auto parsed = parse_graph(text);
    CHECK(graph_to_json(parsed.graph) == text);

    // Reversed edges normalize to [min, max].
    auto messy = parse_graph("{\"n\": 3, \"edges\": [[2,1],[1,0]]}");
    CHECK(messy.graph.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});

    CHECK_THROWS_WITH_AS(parse_graph("{\"n\": 2, \"edges\": [[0,5]]}"),
                         doctest::Contains("5"), Error);
    CHECK_THROWS_AS(parse_graph("{"), Error);

    // Colored round trip.
    ColoredGraph cg(p3, {1, 0, 1});
    auto ctext = colored_graph_to_json(cg);
    auto cparsed = parse_graph(ctext);
    REQUIRE(cparsed.colors.has_value());
    CHECK(*cparsed.colors == cg.color);
}

TEST_CASE("decomposition json round trip") {
    TreeDecomposition td;
    td.root = 0;
    td.parent = {-1, 0};
    td.bags = {{0, 1}, {1, 2}};
    auto text = decomposition_to_json(td);
    auto back = parse_decomposition(text);
    CHECK(decomposition_to_json(back) == text);
}

TEST_CASE("cli: generate, repeated runs byte-identical") {
    std::string first, second;
    CHECK(run({"generate", "grid2d", "3", "3"}, &first) == 0);
    CHECK(run({"generate", "grid2d", "3", "3"}, &second) == 0);
    CHECK(first == second);
    auto g = parse_graph(first);
    CHECK(g.graph.n == 9);
    CHECK(g.graph.edge_count() == 12);

    std::string copies;
    CHECK(run({"generate", "disjoint-copies", "--of", "pinned-grid", "2", "2"}, &copies) == 0);
    CHECK(parse_graph(copies).graph.n == 34);

    std::string dot;
    CHECK(run({"--format", "dot", "generate", "path", "2"}, &dot) == 0);
    CHECK(dot.find("v0 -- v1") != std::string::npos);
}

TEST_CASE("cli: unknown subcommand exits 2") {
    std::string out, err;
    CHECK(run_command({"frobnicate"}, out, err) == 2);
}

TEST_CASE("cli: product, power, build, verify pipeline") {
    TempFile a("a.json", graph_to_json(make_path(2)));
    TempFile b("b.json", graph_to_json(make_path(2)));
    std::string prod;
    CHECK(run({"product", a.path, b.path}, &prod) == 0);
    CHECK(parse_graph(prod).graph.edge_count() == 6);

    std::string powered;
    CHECK(run({"power", a.path, "1", "--reflexive"}, &powered) == 0);
    CHECK(parse_graph(powered).graph.loops.size() == 2);

    std::string grid_expr;
    CHECK(run({"build", "grid-expr", "3", "3"}, &grid_expr) == 0);
    TempFile expr_file("expr.json", grid_expr);
    TempFile param_file("param.json", graph_to_json(reflexive_path(3)));
    std::string grid;
    CHECK(run({"generate", "grid2d", "3", "3"}, &grid) == 0);
    TempFile against("against.json", grid);
    CHECK(run({"verify", "--expr", expr_file.path, "--param-graph", param_file.path, "--against",
               against.path}) == 0);

    // Mismatch exits 1.
    TempFile wrong("wrong.json", graph_to_json(make_path(9)));
    CHECK(run({"verify", "--expr", expr_file.path, "--param-graph", param_file.path, "--against",
               wrong.path}) == 1);
}

TEST_CASE("cli: interpret and synthesize") {
    Graph q = make_path(3), m = make_path(2);
    Graph product = strong_product(q, m);
    ColoredGraph g(product, std::vector<int>(product.n, 0));
    TempFile gfile("g.json", colored_graph_to_json(g));
    TempFile xi("xi.sx", "(E x1 x2)\n");

    std::string interp;
    CHECK(run({"interpret", "--graph", gfile.path, "--xi", xi.path}, &interp) == 0);
    CHECK(parse_graph(interp).graph.edges == product.edges);

    TempFile qfile("q.json", graph_to_json(q));
    TempFile mfile("m.json", graph_to_json(m));
    TempFile tdfile("td.json", decomposition_to_json(decompose_small(m)));
    TempFile expr_out("synth.json");
    TempFile report_out("report.json");
    CHECK(run({"-o", expr_out.path, "synthesize", "--q", qfile.path, "--m", mfile.path, "--td",
               tdfile.path, "--g", gfile.path, "--xi", xi.path, "--r", "1", "--report",
               report_out.path}) == 0);
    // The expression values the interpretation under the reported vertex map.
    TempFile against_file("xi-interp.json", interp);
    TempFile powered_param("qr.json", graph_to_json(power(q, 1, true)));
    CHECK(run({"verify", "--expr", expr_out.path, "--param-graph", powered_param.path, "--against",
               against_file.path, "--vertex-map", report_out.path}) == 0);
}

TEST_CASE("cli: lower-bound audit and backwards subcommands") {
    int n = 3;
    Graph cube = generate(GeneratorSpec::grid3d(n, n, n));
    std::ostringstream pert_json;
    pert_json << "{\"parts\": [[";
    for (int v = 0; v < cube.n; ++v) pert_json << (v ? "," : "") << v;
    pert_json << "]], \"flip\": []}";
    TempFile pert("p.json", pert_json.str());
    auto expr = cartesian_path_expression(cw_grid2d_expression(n, n), n);
    TempFile expr_file("cube-expr.json", expression_to_json(expr));
    TempFile path_file("p3.json", graph_to_json(reflexive_path(n)));
    std::string report;
    CHECK(run({"lower-bound", "audit", "--expr", expr_file.path, "--param-graph", path_file.path,
               "--n", "3", "--perturbation", pert.path},
              &report) == 0);
    CHECK(report.find("\"ok\": true") != std::string::npos);

    ColoredGraph colored(make_path(3), {1, 2, 1});
    TempFile colored_file("colored.json", colored_graph_to_json(colored));
    std::string encoded;
    CHECK(run({"backwards", "encode-colors", "--graph", colored_file.path}, &encoded) == 0);
    CHECK(parse_graph(encoded).graph.n == 3 + 2 + 3 + 2);

    std::string formulas;
    CHECK(run({"backwards", "factor-formulas", "--c1", "2", "--c2", "3"}, &formulas) == 0);
    CHECK(std::count(formulas.begin(), formulas.end(), '\n') == 4);
}

TEST_CASE("cli: check-stable and contract-power") {
    auto hg = trivial_expression(generate(GeneratorSpec::half_graph(3)));
    TempFile expr_file("hg.json", expression_to_json(hg));
    CHECK(run({"check-stable", "--expr", expr_file.path, "--k", "4"}) == 0);
    CHECK(run({"check-stable", "--expr", expr_file.path, "--k", "3"}) == 1);

    Graph p3sq = power(make_path(3), 2, true);
    auto wide = e_add_edges(1, 2, e_union(e_create(0, 1), e_create(2, 2)));
    TempFile wide_file("wide.json", expression_to_json(wide));
    TempFile sq_file("sq.json", graph_to_json(p3sq));
    std::string contracted;
    CHECK(run({"convert", "contract-power", "--expr", wide_file.path, "--param-graph", sq_file.path,
               "--r", "2"},
              &contracted) == 0);
    CHECK(contracted.find("residue_classes") != std::string::npos);
}
