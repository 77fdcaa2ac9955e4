#include "hcw/cli.hpp"

#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hcw/backwards.hpp"
#include "hcw/builders.hpp"
#include "hcw/json_io.hpp"
#include "hcw/lower_bounds.hpp"
#include "hcw/synthesis.hpp"

namespace hcw {

namespace {

using json = nlohmann::ordered_json;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spill(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

void emit(const std::string& out_path, const std::string& content, std::string& out) {
    if (out_path.empty())
        out += content;
    else
        spill(out_path, content);
}

Graph load_graph(const std::string& path) { return parse_graph(slurp(path)).graph; }

ColoredGraph load_colored(const std::string& path) { return parse_graph(slurp(path)).colored(); }

Perturbation load_perturbation(const std::string& path) {
    json j = json::parse(slurp(path));
    Perturbation p;
    p.parts = j.at("parts").get<std::vector<std::vector<int>>>();
    for (auto& f : j.at("flip")) p.flip.emplace_back(f[0].get<int>(), f[1].get<int>());
    return p;
}

GeneratorSpec spec_from(const std::string& kind, const std::vector<int>& dims, size_t at = 0) {
    auto need = [&](size_t k) {
        if (dims.size() - at < k) throw CLI::ValidationError("generate", "missing dimensions");
    };
    if (kind == "path") {
        need(1);
        return GeneratorSpec::path(dims[at]);
    }
    if (kind == "grid2d") {
        need(2);
        return GeneratorSpec::grid2d(dims[at], dims[at + 1]);
    }
    if (kind == "grid3d") {
        need(3);
        return GeneratorSpec::grid3d(dims[at], dims[at + 1], dims[at + 2]);
    }
    if (kind == "pinned-grid") {
        need(1);
        return GeneratorSpec::pinned_grid(dims[at]);
    }
    if (kind == "half-graph") {
        need(1);
        return GeneratorSpec::half_graph(dims[at]);
    }
    throw CLI::ValidationError("generate", "unknown generator kind '" + kind + "'");
}

std::string audit_to_json(const AuditReport& r) {
    json j;
    j["ok"] = r.ok;
    j["subgrid_side"] = r.subgrid_side;
    j["parameter_span"] = r.parameter_span;
    j["matching_size"] = r.matching_size;
    j["pigeonhole_class_size"] = r.pigeonhole_class_size;
    j["distinct_colors_observed"] = r.distinct_colors_observed;
    j["lower_bound_measured"] = r.lower_bound_measured;
    j["lower_bound_worst_case"] = r.lower_bound_worst_case;
    j["palette"] = r.palette;
    j["checks"] = json::array();
    for (auto& c : r.checks) {
        json entry;
        entry["name"] = c.name;
        entry["ok"] = c.ok;
        entry["detail"] = c.detail;
        j["checks"].push_back(entry);
    }
    return j.dump(2) + "\n";
}

}  // namespace

int run_command(const std::vector<std::string>& argv, std::string& out, std::string& err) {
    CLI::App app{"graph expression toolkit"};
    app.require_subcommand(1);

    std::string out_path, format = "json";
    unsigned long long seed = 0;
    app.add_option("-o,--output", out_path, "output file (stdout when omitted)");
    app.add_option("--format", format, "json or dot")->check(CLI::IsMember({"json", "dot"}));
    app.add_option("--seed", seed, "seed for randomized drivers");

    // generate
    auto* gen = app.add_subcommand("generate", "emit a named graph");
    std::string gen_kind, gen_inner;
    std::vector<int> gen_dims;
    gen->add_option("kind", gen_kind,
                    "path|grid2d|grid3d|pinned-grid|half-graph|disjoint-copies")
        ->required();
    gen->add_option("dims", gen_dims, "dimensions (copies count first for disjoint-copies)");
    gen->add_option("--of", gen_inner, "inner kind for disjoint-copies");

    // product / power
    auto* product = app.add_subcommand("product", "strong product of two graphs");
    std::string left_path, right_path;
    product->add_option("left", left_path)->required();
    product->add_option("right", right_path)->required();

    auto* pw = app.add_subcommand("power", "graph power");
    std::string pw_path;
    int pw_r = 1;
    bool pw_reflexive = false;
    pw->add_option("graph", pw_path)->required();
    pw->add_option("r", pw_r)->required();
    pw->add_flag("--reflexive", pw_reflexive, "add a loop on every vertex");

    // build
    auto* build = app.add_subcommand("build", "constructive expressions");
    auto* build_grid = build->add_subcommand("grid-expr", "grid expression over a reflexive path");
    int bg_a = 0, bg_b = 0;
    build_grid->add_option("a", bg_a)->required();
    build_grid->add_option("b", bg_b)->required();

    // convert
    auto* convert = app.add_subcommand("convert", "expression translations");
    auto* c_prod = convert->add_subcommand("expr-to-product", "embed a value into a strong product");
    std::string ce_expr, ce_param;
    c_prod->add_option("--expr", ce_expr)->required();
    c_prod->add_option("--param-graph", ce_param)->required();
    auto* c_contract = convert->add_subcommand("contract-power", "retarget from a path power to a path");
    std::string cc_expr, cc_param;
    int cc_r = 1;
    c_contract->add_option("--expr", cc_expr)->required();
    c_contract->add_option("--param-graph", cc_param)->required();
    c_contract->add_option("--r", cc_r)->required();

    // interpret
    auto* interp = app.add_subcommand("interpret", "apply a binary formula to a colored graph");
    std::string in_graph, in_formula;
    interp->add_option("--graph", in_graph)->required();
    interp->add_option("--xi", in_formula)->required();

    // synthesize
    auto* synth = app.add_subcommand("synthesize", "expression from a local interpretation");
    std::string sy_q, sy_m, sy_td, sy_g, sy_xi, sy_report;
    int sy_r = 1, sy_qtype = 2, sy_cap = 16;
    synth->add_option("--q", sy_q)->required();
    synth->add_option("--m", sy_m)->required();
    synth->add_option("--td", sy_td)->required();
    synth->add_option("--g", sy_g)->required();
    synth->add_option("--xi", sy_xi)->required();
    synth->add_option("--r", sy_r)->required();
    synth->add_option("--q-type", sy_qtype);
    synth->add_option("--r-sep-cap", sy_cap);
    synth->add_option("--report", sy_report, "write the run report here");

    // check-stable
    auto* stable = app.add_subcommand("check-stable", "half-graph stability of an expression");
    std::string st_expr;
    int st_k = 1;
    stable->add_option("--expr", st_expr)->required();
    stable->add_option("--k", st_k)->required();

    // lower-bound audit
    auto* lb = app.add_subcommand("lower-bound", "lower-bound machinery");
    auto* lb_audit = lb->add_subcommand("audit", "color lower-bound audit");
    std::string lb_expr, lb_param, lb_pert, lb_variant = "grid3d";
    int lb_n = 0;
    lb_audit->add_option("--expr", lb_expr)->required();
    lb_audit->add_option("--param-graph", lb_param)->required();
    lb_audit->add_option("--n", lb_n)->required();
    lb_audit->add_option("--perturbation", lb_pert)->required();
    lb_audit->add_option("--variant", lb_variant)->check(CLI::IsMember({"grid3d", "pinned"}));

    // backwards
    auto* back = app.add_subcommand("backwards", "factor recovery and encodings");
    auto* back_enc = back->add_subcommand("encode-colors", "encode colors as pendant leaves");
    std::string be_graph, be_formulas;
    back_enc->add_option("--graph", be_graph)->required();
    back_enc->add_option("--formulas-out", be_formulas, "path prefix for the decoding formulas");
    auto* back_ff = back->add_subcommand("factor-formulas", "emit the four factor formulas");
    int ff_c1 = 0, ff_c2 = 0;
    std::string ff_prefix;
    back_ff->add_option("--c1", ff_c1)->required();
    back_ff->add_option("--c2", ff_c2)->required();
    back_ff->add_option("--out-prefix", ff_prefix, "file prefix, four .sx files");

    // verify
    auto* verify = app.add_subcommand("verify", "compare an expression value to a graph");
    std::string vf_expr, vf_param, vf_against, vf_map;
    verify->add_option("--expr", vf_expr)->required();
    verify->add_option("--param-graph", vf_param)->required();
    verify->add_option("--against", vf_against)->required();
    verify->add_option("--vertex-map", vf_map,
                       "synthesize report whose vertex_map aligns value and target ids");

    // Global flags may appear after a subcommand name.
    std::function<void(CLI::App*)> allow_fallthrough = [&](CLI::App* cmd) {
        cmd->fallthrough();
        for (auto* sub : cmd->get_subcommands({})) allow_fallthrough(sub);
    };
    for (auto* sub : app.get_subcommands({})) allow_fallthrough(sub);

    std::vector<const char*> cargs;
    cargs.push_back("hcw");
    for (auto& a : argv) cargs.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        std::ostringstream os;
        int code = app.exit(e, os, os);
        (code == 0 ? out : err) += os.str();
        return code == 0 ? 0 : 2;
    }

    auto emit_graph = [&](const Graph& g) {
        emit(out_path, format == "dot" ? graph_to_dot(g) : graph_to_json(g), out);
    };

    try {
        if (*gen) {
            if (gen_kind == "disjoint-copies") {
                if (gen_inner.empty() || gen_dims.empty())
                    throw Error("generate: disjoint-copies needs --of <kind> and <copies> <dims...>");
                emit_graph(generate(GeneratorSpec::disjoint_copies(
                    spec_from(gen_inner, gen_dims, 1), gen_dims[0])));
            } else {
                emit_graph(generate(spec_from(gen_kind, gen_dims)));
            }
            return 0;
        }
        if (*product) {
            emit_graph(strong_product(load_graph(left_path), load_graph(right_path)));
            return 0;
        }
        if (*pw) {
            emit_graph(power(load_graph(pw_path), pw_r, pw_reflexive));
            return 0;
        }
        if (*build_grid) {
            emit(out_path, expression_to_json(grid_expression(bg_a, bg_b)), out);
            return 0;
        }
        if (*c_prod) {
            auto expr = parse_expression(slurp(ce_expr));
            auto ho = load_graph(ce_param);
            auto embedding = expression_to_product(expr, ho);
            auto value = evaluate(expr, ho);
            json j;
            j["left_factor"] = json::parse(graph_to_json(embedding.left_factor));
            j["right_factor"] = json::parse(graph_to_json(embedding.right_factor));
            j["injection"] = json::array();
            for (auto& pv : embedding.injection) j["injection"].push_back({pv.q, pv.m});
            j["verified"] = verify_embedding(value, embedding);
            emit(out_path, j.dump(2) + "\n", out);
            return j["verified"].get<bool>() ? 0 : 1;
        }
        if (*c_contract) {
            auto expr = parse_expression(slurp(cc_expr));
            auto ho = load_graph(cc_param);
            auto contracted = contract_path_power(expr, ho, cc_r);
            json j;
            j["expr"] = json::parse(expression_to_json(contracted.expr));
            j["param_graph"] = json::parse(graph_to_json(contracted.path));
            j["residue_classes"] = contracted.residue_classes;
            emit(out_path, j.dump(2) + "\n", out);
            return 0;
        }
        if (*interp) {
            auto g = load_colored(in_graph);
            auto xi = parse_formula(slurp(in_formula));
            emit_graph(interpret(g, xi));
            return 0;
        }
        if (*synth) {
            SynthesisOptions options;
            options.q_type = sy_qtype;
            options.r_sep_cap = sy_cap;
            SynthesisContext ctx(load_graph(sy_q), load_graph(sy_m),
                                 parse_decomposition(slurp(sy_td)), load_colored(sy_g),
                                 parse_formula(slurp(sy_xi)), sy_r, options);
            auto result = synthesize(ctx);
            emit(out_path, expression_to_json(result.expr), out);
            json rep;
            rep["palette"] = result.report.palette;
            rep["r_sep"] = result.report.r_sep;
            rep["power_colors"] = result.report.power_colors;
            rep["verified"] = result.report.verified;
            rep["note"] = result.report.note;
            rep["node_color_counts"] = json::object();
            for (auto& [t, c] : result.report.node_color_counts)
                rep["node_color_counts"][std::to_string(t)] = c;
            rep["vertex_map"] = result.vertex_map;
            if (!sy_report.empty())
                spill(sy_report, rep.dump(2) + "\n");
            else
                out += rep.dump(2) + "\n";
            return result.report.verified ? 0 : 1;
        }
        if (*stable) {
            auto expr = parse_expression(slurp(st_expr));
            auto verdict = is_k_stable(expr, st_k);
            json j;
            j["outcome"] = verdict.outcome == StabilityVerdict::Stable ? "stable"
                           : verdict.outcome == StabilityVerdict::Witness ? "witness"
                                                                          : "inconclusive";
            if (verdict.outcome == StabilityVerdict::Witness) {
                j["side_a"] = verdict.search.side_a;
                j["side_b"] = verdict.search.side_b;
            }
            emit(out_path, j.dump(2) + "\n", out);
            return verdict.outcome == StabilityVerdict::Stable ? 0 : 1;
        }
        if (*lb_audit) {
            auto expr = parse_expression(slurp(lb_expr));
            auto path = load_graph(lb_param);
            auto pert = load_perturbation(lb_pert);
            auto report = audit_color_lower_bound(
                expr, path, lb_n, pert,
                lb_variant == "pinned" ? AuditVariant::Pinned : AuditVariant::Grid3D);
            emit(out_path, audit_to_json(report), out);
            return report.ok ? 0 : 1;
        }
        if (*back_enc) {
            auto g = load_colored(be_graph);
            auto enc = encode_colored_graph_as_leaves(g);
            emit(out_path, graph_to_json(enc.graph), out);
            if (!be_formulas.empty()) {
                spill(be_formulas + ".original.sx", to_text(enc.is_original) + "\n");
                for (size_t c = 0; c < enc.color_formula.size(); ++c)
                    spill(be_formulas + ".color" + std::to_string(c + 1) + ".sx",
                          to_text(enc.color_formula[c]) + "\n");
            }
            return 0;
        }
        if (*back_ff) {
            auto ff = factor_formulas(ff_c1, ff_c2);
            if (!ff_prefix.empty()) {
                spill(ff_prefix + ".sigma1.sx", to_text(ff.sigma1) + "\n");
                spill(ff_prefix + ".sigma2.sx", to_text(ff.sigma2) + "\n");
                spill(ff_prefix + ".sigma3.sx", to_text(ff.sigma3) + "\n");
                spill(ff_prefix + ".sigma4.sx", to_text(ff.sigma4) + "\n");
            } else {
                out += to_text(ff.sigma1) + "\n" + to_text(ff.sigma2) + "\n" +
                       to_text(ff.sigma3) + "\n" + to_text(ff.sigma4) + "\n";
            }
            return 0;
        }
        if (*verify) {
            auto expr = parse_expression(slurp(vf_expr));
            auto ho = load_graph(vf_param);
            auto against = load_graph(vf_against);
            auto value = evaluate(expr, ho);
            std::vector<int> map(value.graph.n);
            for (int i = 0; i < value.graph.n; ++i) map[i] = i;
            if (!vf_map.empty()) map = json::parse(slurp(vf_map)).at("vertex_map").get<std::vector<int>>();
            bool same = value.graph.n == against.n &&
                        static_cast<int>(map.size()) == value.graph.n;
            for (int u = 0; same && u < value.graph.n; ++u)
                for (int v = u + 1; same && v < value.graph.n; ++v)
                    same = value.graph.has_edge(u, v) == against.has_edge(map[u], map[v]);
            out += same ? "match\n" : "mismatch\n";
            return same ? 0 : 1;
        }
    } catch (const std::exception& e) {
        err += std::string(e.what()) + "\n";
        return 1;
    }
    err += "no subcommand executed\n";
    return 2;
}

}  // namespace hcw
