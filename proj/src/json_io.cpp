#include "stk/json_io.hpp"

#include <fstream>

#include "stk/errors.hpp"

namespace stk {

namespace {

const Json& require_key(const Json& j, const char* key) {
    if (!j.is_object()) throw ParseError("expected a JSON object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing key '") + key + "'");
    return *it;
}

std::vector<int> int_array(const Json& j, const char* key) {
    const Json& a = require_key(j, key);
    if (!a.is_array()) throw ParseError(std::string("'") + key + "' must be an array");
    std::vector<int> out;
    for (const auto& e : a) {
        if (!e.is_number_integer()) throw ParseError(std::string("'") + key + "' must hold integers");
        out.push_back(e.get<int>());
    }
    return out;
}

}  // namespace

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
}

Dag dag_from_json(const Json& j) {
    const Json& pj = require_key(j, "p");
    if (!pj.is_number_integer()) throw ParseError("'p' must be an integer");
    const Json& ej = require_key(j, "edges");
    if (!ej.is_array()) throw ParseError("'edges' must be an array of [source,target] pairs");
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : ej) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number_integer())
            throw ParseError("'edges' entries must be [source,target] integer pairs");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return Dag(pj.get<int>(), std::move(edges));
}

Json dag_to_json(const Dag& g) {
    Json j;
    j["p"] = g.node_count();
    Json edges = Json::array();
    for (auto [u, v] : g.edges()) edges.push_back({u, v});
    j["edges"] = std::move(edges);
    return j;
}

StagedTree tree_from_json(const Json& j, std::uint64_t max_leaves) {
    LinearExtension order{int_array(j, "order")};
    StateSpace space{int_array(j, "cardinalities")};
    const Json& sj = require_key(j, "stages");
    if (!sj.is_array()) throw ParseError("'stages' must be an array of levels");
    std::vector<std::vector<std::vector<OutcomePrefix>>> blocks;
    for (const auto& level : sj) {
        if (!level.is_array()) throw ParseError("'stages' levels must be arrays of blocks");
        std::vector<std::vector<OutcomePrefix>> level_blocks;
        for (const auto& block : level) {
            if (!block.is_array()) throw ParseError("'stages' blocks must be arrays of prefixes");
            std::vector<OutcomePrefix> prefixes;
            for (const auto& prefix : block) {
                if (!prefix.is_array()) throw ParseError("'stages' prefixes must be arrays");
                OutcomePrefix x;
                for (const auto& val : prefix) {
                    if (!val.is_number_integer())
                        throw ParseError("'stages' prefix entries must be integers");
                    x.push_back(val.get<int>());
                }
                prefixes.push_back(std::move(x));
            }
            level_blocks.push_back(std::move(prefixes));
        }
        blocks.push_back(std::move(level_blocks));
    }
    return StagedTree::from_staging(order, space, blocks, max_leaves);
}

Json tree_to_json(const StagedTree& t) {
    if (!t.is_product_shape() || !is_stratified(t))
        throw PreconditionError("only stratified product trees serialize to the staging format");
    Json j;
    j["order"] = t.ordering().order();
    j["cardinalities"] = t.state_space().cards();
    Json stages = Json::array();
    for (const auto& level : t.staging_blocks()) {
        Json level_json = Json::array();
        for (const auto& block : level) {
            Json block_json = Json::array();
            for (const auto& prefix : block) block_json.push_back(prefix);
            level_json.push_back(std::move(block_json));
        }
        stages.push_back(std::move(level_json));
    }
    j["stages"] = std::move(stages);
    return j;
}

LeafDistribution dist_from_json(const Json& j) {
    LinearExtension order{int_array(j, "order")};
    int p = order.size();
    const Json& pj = require_key(j, "probabilities");
    if (!pj.is_array() || pj.empty())
        throw ParseError("'probabilities' must be a nonempty array");

    std::vector<std::pair<OutcomePrefix, Rat>> entries;
    std::vector<int> cards(static_cast<std::size_t>(p), 0);
    for (const auto& e : pj) {
        OutcomePrefix x;
        for (const auto& val : require_key(e, "outcome")) {
            if (!val.is_number_integer()) throw ParseError("'outcome' entries must be integers");
            x.push_back(val.get<int>());
        }
        if (static_cast<int>(x.size()) != p)
            throw ParseError("'outcome' length disagrees with 'order'");
        const Json& rj = require_key(e, "p");
        if (!rj.is_string()) throw ParseError("'p' (probability) must be a \"num/den\" string");
        for (int k = 0; k < p; ++k) {
            if (x[k] < 0) throw ParseError("'outcome' entries must be nonnegative");
            cards[k] = std::max(cards[k], x[k] + 1);
        }
        entries.emplace_back(std::move(x), rat_from_string(rj.get<std::string>()));
    }
    if (j.contains("cardinalities")) {
        // cardinalities are per variable; outcomes are per ordering slot
        auto given = int_array(j, "cardinalities");
        if (static_cast<int>(given.size()) != p)
            throw ParseError("'cardinalities' length disagrees with 'order'");
        for (int k = 0; k < p; ++k) {
            int slot_card = given[order.at(k + 1) - 1];
            if (slot_card < cards[k])
                throw ParseError("'cardinalities' too small for the listed outcomes");
            cards[k] = slot_card;
        }
    }
    std::vector<int> cards_by_var(static_cast<std::size_t>(p));
    for (int k = 0; k < p; ++k) cards_by_var[order.at(k + 1) - 1] = cards[k];
    StateSpace space{cards_by_var};

    std::uint64_t n = space.total_outcomes();
    if (entries.size() != n)
        throw ParseError("'probabilities' lists " + std::to_string(entries.size()) +
                         " outcomes, state space has " + std::to_string(n));
    std::vector<Rat> probs(n);
    std::vector<bool> seen(n, false);
    for (auto& [x, r] : entries) {
        std::uint64_t rank = 0;
        for (int k = 0; k < p; ++k)
            rank = rank * static_cast<std::uint64_t>(cards[k]) + static_cast<std::uint64_t>(x[k]);
        if (seen[rank]) throw ParseError("duplicate outcome in 'probabilities'");
        seen[rank] = true;
        probs[rank] = std::move(r);
    }
    return LeafDistribution(order, space, std::move(probs));
}

Json dist_to_json(const LeafDistribution& f) {
    Json j;
    j["order"] = f.ordering().order();
    j["cardinalities"] = f.state_space().cards();
    Json probs = Json::array();
    for (std::uint64_t r = 0; r < f.probabilities().size(); ++r) {
        Json e;
        e["outcome"] = f.outcome_of(r);
        e["p"] = rat_to_string(f.probabilities()[r]);
        probs.push_back(std::move(e));
    }
    j["probabilities"] = std::move(probs);
    return j;
}

Json validation_report_to_json(const StagedTree& t, const ValidationReport& rep) {
    Json j;
    j["ok"] = rep.ok();
    Json issues = Json::array();
    for (const auto& issue : rep.issues) {
        Json e;
        e["axiom"] = issue.axiom;
        if (issue.v >= 0) e["v"] = t.prefix_of(issue.v);
        if (issue.w >= 0) e["w"] = t.prefix_of(issue.w);
        e["message"] = issue.message;
        issues.push_back(std::move(e));
    }
    j["issues"] = std::move(issues);
    return j;
}

Json balance_report_to_json(const StagedTree& t, const BalanceReport& rep) {
    Json j;
    j["balanced"] = rep.balanced;
    Json failures = Json::array();
    for (const auto& f : rep.failures) {
        Json e;
        e["level"] = f.level;
        e["v"] = t.prefix_of(f.v);
        e["w"] = t.prefix_of(f.w);
        e["i"] = f.i;
        e["j"] = f.j;
        failures.push_back(std::move(e));
    }
    j["failures"] = std::move(failures);
    return j;
}

Json relations_to_json(const ExponentMatrix& m, const std::vector<BinomialRelation>& rels) {
    Json arr = Json::array();
    for (const auto& rel : rels) {
        Json e;
        Json pos = Json::array(), neg = Json::array();
        for (int c : rel.positive) pos.push_back(m.column_outcomes[c]);
        for (int c : rel.negative) neg.push_back(m.column_outcomes[c]);
        e["pos"] = std::move(pos);
        e["neg"] = std::move(neg);
        arr.push_back(std::move(e));
    }
    return arr;
}

Json vanishing_report_to_json(const ExponentMatrix& m, const VanishingReport& rep) {
    Json j;
    j["tol"] = rep.tol;
    j["exact"] = rep.exact_mode;
    j["all_ok"] = rep.all_ok;
    Json entries = Json::array();
    for (const auto& e : rep.entries) {
        Json entry;
        Json pos = Json::array(), neg = Json::array();
        for (int c : e.rel.positive) pos.push_back(m.column_outcomes[c]);
        for (int c : e.rel.negative) neg.push_back(m.column_outcomes[c]);
        entry["pos"] = std::move(pos);
        entry["neg"] = std::move(neg);
        entry["residual"] = e.residual;
        if (rep.exact_mode) entry["residual_exact"] = e.residual_exact;
        entry["ok"] = e.ok;
        entries.push_back(std::move(entry));
    }
    j["relations"] = std::move(entries);
    return j;
}

bool looks_like_dag(const Json& j) { return j.is_object() && j.contains("edges"); }

}  // namespace stk
