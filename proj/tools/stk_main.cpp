#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stk/balance.hpp"
#include "stk/errors.hpp"
#include "stk/graph.hpp"
#include "stk/json_io.hpp"
#include "stk/model.hpp"
#include "stk/rng.hpp"
#include "stk/staged_tree.hpp"
#include "stk/toric.hpp"

namespace {

using stk::Json;

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    if (text.find(',') == std::string::npos) {
        // compact digit form, e.g. "1234"
        for (char c : text) {
            if (c < '0' || c > '9')
                throw stk::ParseError(std::string("cannot parse ") + what + " '" + text + "'");
            out.push_back(c - '0');
        }
        if (out.empty()) throw stk::ParseError(std::string("empty ") + what);
        return out;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string tok = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        try {
            out.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw stk::ParseError(std::string("cannot parse ") + what + " '" + text + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

stk::StateSpace parse_cards(const std::string& text, int p) {
    auto vals = parse_int_list(text, "--cards");
    if (static_cast<int>(vals.size()) == 1)
        return stk::StateSpace::uniform(p, vals[0]);
    if (static_cast<int>(vals.size()) != p)
        throw stk::ParseError("--cards lists " + std::to_string(vals.size()) +
                              " entries for " + std::to_string(p) + " variables");
    return stk::StateSpace(vals);
}

std::uint64_t default_max_leaves() {
    if (const char* env = std::getenv("STK_MAX_LEAVES")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw stk::ParseError(std::string("STK_MAX_LEAVES is not a number: '") + env + "'");
        }
    }
    return stk::StagedTree::kDefaultMaxLeaves;
}

void emit(const Json& j, const std::string& out_path) {
    std::string text = j.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        stk::write_text_file(out_path, text);
}

// The extension used when a command receives a DAG: identity when valid,
// otherwise the first enumerated one.
stk::LinearExtension extension_for(const stk::Dag& g) {
    auto id = stk::LinearExtension::identity(g.node_count());
    if (stk::is_linear_extension(g, id)) return id;
    auto all = stk::enumerate_linear_extensions(g);
    return all.front();
}

int cmd_build(const std::string& dag_path, const std::string& order_text,
              const std::string& cards_text, const std::string& out_path,
              const std::string& dot_path, std::uint64_t max_leaves) {
    stk::Dag g = stk::dag_from_json(stk::load_json_file(dag_path));
    stk::LinearExtension pi = order_text.empty()
                                  ? stk::LinearExtension::identity(g.node_count())
                                  : stk::LinearExtension(parse_int_list(order_text, "--order"));
    stk::StateSpace s = parse_cards(cards_text, g.node_count());
    stk::StagedTree t = stk::StagedTree::from_dag(g, pi, s, max_leaves);
    emit(stk::tree_to_json(t), out_path);
    if (!dot_path.empty()) stk::write_text_file(dot_path, stk::export_dot(t));
    return 0;
}

int cmd_check(const std::string& input_path, const std::string& order_text,
              const std::string& cards_text, const std::string& out_path,
              std::uint64_t max_leaves) {
    Json input = stk::load_json_file(input_path);
    Json report;
    std::optional<stk::StagedTree> tree;
    if (stk::looks_like_dag(input)) {
        stk::Dag g = stk::dag_from_json(input);
        stk::LinearExtension pi = order_text.empty()
                                      ? extension_for(g)
                                      : stk::LinearExtension(parse_int_list(order_text, "--order"));
        stk::StateSpace s = parse_cards(cards_text, g.node_count());
        tree = stk::StagedTree::from_dag(g, pi, s, max_leaves);
        report["perfect"] = stk::is_perfect(g);
        report["chordal_skeleton"] = stk::is_chordal(stk::skeleton(g));
    } else {
        tree = stk::tree_from_json(input, max_leaves);
    }
    report["balanced"] = stk::is_balanced(*tree).balanced;
    report["simple"] = stk::is_simple(*tree);
    auto recognized = stk::recognize_dag_staging(*tree);
    report["dag_representable"] = recognized.has_value();
    if (recognized && !report.contains("perfect")) {
        report["perfect"] = stk::is_perfect(recognized->dag);
        report["chordal_skeleton"] = stk::is_chordal(stk::skeleton(recognized->dag));
    }
    emit(report, out_path);
    return 0;
}

// One sweep case: records the perfect/balanced agreement for (g, pi, cards).
Json sweep_case(int id, const stk::Dag& g, const stk::LinearExtension& pi,
                const stk::StateSpace& s, std::uint64_t max_leaves, int* disagreements) {
    stk::StagedTree t = stk::StagedTree::from_dag(g, pi, s, max_leaves);
    bool perfect = stk::is_perfect(g);
    bool balanced = stk::is_balanced(t).balanced;
    bool agree = perfect == balanced;
    if (!agree) ++*disagreements;
    Json rec;
    rec["id"] = id;
    Json edges = Json::array();
    for (auto [u, v] : g.edges()) edges.push_back({u, v});
    rec["edges"] = std::move(edges);
    rec["order"] = pi.order();
    rec["cards"] = s.cards();
    rec["perfect"] = perfect;
    rec["balanced"] = balanced;
    rec["agree"] = agree;
    return rec;
}

stk::LinearExtension random_extension(const stk::Dag& g, stk::Rng& rng) {
    int p = g.node_count();
    std::vector<int> placed;
    std::vector<bool> used(static_cast<std::size_t>(p) + 1, false);
    while (static_cast<int>(placed.size()) < p) {
        std::vector<int> ready;
        for (int v = 1; v <= p; ++v) {
            if (used[v]) continue;
            bool ok = true;
            for (int u : g.parents(v))
                if (!used[u]) ok = false;
            if (ok) ready.push_back(v);
        }
        int pick = ready[rng.uniform_int(static_cast<int>(ready.size()))];
        used[pick] = true;
        placed.push_back(pick);
    }
    return stk::LinearExtension(placed);
}

int cmd_verify_theorem(int p, const std::string& cards_text, const std::string& mode, int n,
                       std::uint64_t seed, const std::string& out_path, int max_nodes,
                       std::uint64_t max_leaves) {
    auto card_choices = parse_int_list(cards_text, "--cards");
    Json report;
    report["mode"] = mode;
    report["p"] = p;
    report["card_choices"] = card_choices;
    report["seed"] = seed;
    report["bounds"] = {{"max_nodes", max_nodes}, {"max_leaves", max_leaves}};
    Json cases = Json::array();
    int disagreements = 0;
    int id = 0;

    if (mode == "exhaustive") {
        stk::StateSpace s = stk::StateSpace::uniform(p, card_choices[0]);
        for (const auto& g : stk::enumerate_dags(p, max_nodes))
            for (const auto& pi : stk::enumerate_linear_extensions(g))
                cases.push_back(sweep_case(id++, g, pi, s, max_leaves, &disagreements));
    } else if (mode == "random") {
        stk::Rng rng(seed);
        for (int c = 0; c < n; ++c) {
            stk::Dag g = stk::random_dag(p, 0.5, rng.next_u64());
            std::vector<int> cards;
            for (int v = 0; v < p; ++v)
                cards.push_back(card_choices[rng.uniform_int(static_cast<int>(card_choices.size()))]);
            stk::LinearExtension pi = random_extension(g, rng);
            cases.push_back(sweep_case(id++, g, pi, stk::StateSpace(cards), max_leaves, &disagreements));
        }
    } else {
        throw stk::ParseError("--mode must be 'exhaustive' or 'random'");
    }

    report["cases"] = std::move(cases);
    report["summary"] = {{"cases", id}, {"disagreements", disagreements}};
    emit(report, out_path);
    std::cerr << "verify-theorem: " << id << " cases, " << disagreements << " disagreements\n";
    return disagreements == 0 ? 0 : 1;
}

int cmd_toric_check(const std::string& dag_path, const std::string& order_text,
                    const std::string& cards_text, int samples, std::uint64_t seed, double tol,
                    bool exact, const std::string& out_path, std::uint64_t max_leaves) {
    stk::Dag g = stk::dag_from_json(stk::load_json_file(dag_path));
    stk::LinearExtension pi = order_text.empty()
                                  ? extension_for(g)
                                  : stk::LinearExtension(parse_int_list(order_text, "--order"));
    stk::StateSpace s = parse_cards(cards_text, g.node_count());
    stk::StagedTree t = stk::StagedTree::from_dag(g, pi, s, max_leaves);

    stk::ExponentMatrix psi = stk::exponent_matrix_psi_toric(t);
    stk::ExponentMatrix cliques = stk::exponent_matrix_cliques(g, s);
    auto psi_rels = stk::quadratic_relations(psi);
    auto clique_rels = stk::quadratic_relations(cliques);

    Json report;
    report["seed"] = seed;
    report["samples"] = samples;
    report["tol"] = tol;
    report["exact"] = exact;
    report["relations"] = {{"psi_toric", stk::relations_to_json(psi, psi_rels)},
                           {"cliques", stk::relations_to_json(cliques, clique_rels)}};

    bool all_ok = true;
    Json sample_reports = Json::array();
    stk::Rng rng(seed);
    for (int i = 0; i < samples; ++i) {
        auto alpha = stk::sample_parameters(t, rng.next_u64());
        auto f = stk::leaf_distribution(t, alpha);
        auto psi_rep = stk::check_vanishing(psi, psi_rels, f, tol, exact);
        auto clique_rep = stk::check_vanishing(cliques, clique_rels, f, tol, exact);
        all_ok = all_ok && psi_rep.all_ok && clique_rep.all_ok;
        Json rec;
        rec["sample"] = i;
        rec["psi_toric"] = stk::vanishing_report_to_json(psi, psi_rep);
        rec["cliques"] = stk::vanishing_report_to_json(cliques, clique_rep);
        sample_reports.push_back(std::move(rec));
    }
    report["checks"] = std::move(sample_reports);
    report["all_ok"] = all_ok;
    emit(report, out_path);
    std::cerr << "toric-check: " << (all_ok ? "all relations vanish" : "failing relations found")
              << "\n";
    return all_ok ? 0 : 1;
}

int cmd_render(const std::string& input_path, const std::string& order_text,
               const std::string& cards_text, const std::string& out_path,
               std::uint64_t max_leaves) {
    Json input = stk::load_json_file(input_path);
    std::optional<stk::StagedTree> tree;
    if (stk::looks_like_dag(input)) {
        stk::Dag g = stk::dag_from_json(input);
        stk::LinearExtension pi = order_text.empty()
                                      ? extension_for(g)
                                      : stk::LinearExtension(parse_int_list(order_text, "--order"));
        tree = stk::StagedTree::from_dag(g, pi, parse_cards(cards_text, g.node_count()), max_leaves);
    } else {
        tree = stk::tree_from_json(input, max_leaves);
    }
    std::string dot = stk::export_dot(*tree);
    if (out_path.empty())
        std::cout << dot;
    else
        stk::write_text_file(out_path, dot);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"staged tree toolkit: build, check and sweep staged-tree representations of DAG models"};
    app.require_subcommand(1);

    std::string dag_path, input_path, order_text, cards_text = "2", out_path, dot_path, mode = "exhaustive";
    int p = 3, n = 100, samples = 20, max_nodes = 4;
    std::uint64_t seed = 1;
    double tol = 1e-9;
    bool exact = false;
    std::uint64_t max_leaves = 0;  // resolved after parsing (env, then flag)

    auto add_max_leaves = [&](CLI::App* cmd) {
        cmd->add_option("--max-leaves", max_leaves, "leaf-count bound (env STK_MAX_LEAVES)");
    };

    CLI::App* build = app.add_subcommand("build", "build the staged tree of a DAG");
    build->add_option("dag", dag_path, "DAG JSON file")->required();
    build->add_option("--order", order_text, "linear extension, e.g. 1234 (default identity)");
    build->add_option("--cards", cards_text, "cardinalities, single value or comma list");
    build->add_option("--out", out_path, "output tree JSON path (default stdout)");
    build->add_option("--dot", dot_path, "also write a DOT rendering here");
    add_max_leaves(build);

    CLI::App* check = app.add_subcommand("check", "report perfect/chordal/balanced/simple/recognizable");
    check->add_option("input", input_path, "DAG or staged-tree JSON file")->required();
    check->add_option("--order", order_text, "extension for DAG input");
    check->add_option("--cards", cards_text, "cardinalities for DAG input");
    check->add_option("--out", out_path, "output report path (default stdout)");
    add_max_leaves(check);

    CLI::App* verify = app.add_subcommand("verify-theorem", "sweep perfect-vs-balanced agreement");
    verify->add_option("--max-nodes", max_nodes, "exhaustive enumeration bound (default 4)");
    verify->add_option("-p,--nodes", p, "node count per case")->required();
    verify->add_option("--cards", cards_text, "cardinality choices, e.g. 2 or 2,3");
    verify->add_option("--mode", mode, "exhaustive | random");
    verify->add_option("-n,--cases", n, "number of random cases");
    verify->add_option("--seed", seed, "random seed");
    verify->add_option("--out", out_path, "output report path (default stdout)");
    add_max_leaves(verify);

    CLI::App* toric = app.add_subcommand("toric-check", "quadratic-relation vanishing on sampled model points");
    toric->add_option("dag", dag_path, "DAG JSON file")->required();
    toric->add_option("--order", order_text, "extension (default identity or first)");
    toric->add_option("--cards", cards_text, "cardinalities");
    toric->add_option("--samples", samples, "sampled model points");
    toric->add_option("--seed", seed, "random seed");
    toric->add_option("--tol", tol, "float-mode tolerance");
    toric->add_flag("--exact", exact, "exact rational residuals");
    toric->add_option("--out", out_path, "output report path (default stdout)");
    add_max_leaves(toric);

    CLI::App* render = app.add_subcommand("render", "DOT rendering of a tree or DAG");
    render->add_option("input", input_path, "DAG or staged-tree JSON file")->required();
    render->add_option("--order", order_text, "extension for DAG input");
    render->add_option("--cards", cards_text, "cardinalities for DAG input");
    render->add_option("--out", out_path, "output DOT path (default stdout)");
    add_max_leaves(render);

    try {
        app.parse(argc, argv);
        if (max_leaves == 0) max_leaves = default_max_leaves();
        if (build->parsed())
            return cmd_build(dag_path, order_text, cards_text, out_path, dot_path, max_leaves);
        if (check->parsed())
            return cmd_check(input_path, order_text, cards_text, out_path, max_leaves);
        if (verify->parsed())
            return cmd_verify_theorem(p, cards_text, mode, n, seed, out_path, max_nodes, max_leaves);
        if (toric->parsed())
            return cmd_toric_check(dag_path, order_text, cards_text, samples, seed, tol, exact,
                                   out_path, max_leaves);
        if (render->parsed())
            return cmd_render(input_path, order_text, cards_text, out_path, max_leaves);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const stk::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const stk::BoundError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const stk::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
