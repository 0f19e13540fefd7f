#include "stk/toric.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "stk/errors.hpp"

namespace stk {

bool ExponentMatrix::homogeneous() const {
    for (const auto& col : columns)
        if (col.size() != columns.front().size()) return false;
    return true;
}

ExponentMatrix exponent_matrix_psi_toric(const StagedTree& t) {
    if (!t.is_product_shape())
        throw PreconditionError("exponent matrices require a product tree");
    if (!validate(t).ok()) throw PreconditionError("tree violates the staged-tree axioms");

    ExponentMatrix m;
    m.row_names.push_back("z");
    for (LabelId id = 0; id < t.labels().size(); ++id)
        m.row_names.push_back(t.labels().name(id));

    int p = t.var_count();
    const auto& pi = t.ordering();
    for (int leaf : t.level(p)) {
        std::vector<int> col = {0};
        for (int v = leaf; v != t.root();) {
            int parent = t.parent(v);
            // label on the incoming edge
            OutcomePrefix x = t.prefix_of(v);
            col.push_back(1 + t.label_by_value(parent, x.back()));
            v = parent;
        }
        std::sort(col.begin(), col.end());
        m.columns.push_back(std::move(col));

        OutcomePrefix x = t.prefix_of(leaf);
        std::vector<int> by_var(static_cast<std::size_t>(p));
        for (int k = 0; k < p; ++k) by_var[pi.at(k + 1) - 1] = x[k];
        m.column_outcomes.push_back(std::move(by_var));
    }
    return m;
}

ExponentMatrix exponent_matrix_cliques(const Dag& g, const StateSpace& s, int max_nodes) {
    int p = g.node_count();
    if (p > max_nodes)
        throw BoundError("clique matrix limited to " + std::to_string(max_nodes) + " nodes");
    if (s.var_count() != p) throw PreconditionError("DAG and state space sizes disagree");

    auto cliques = maximal_cliques(skeleton(g));
    ExponentMatrix m;
    // rows: (clique, clique outcome) in clique order then lexicographic outcome order
    std::vector<std::map<std::vector<int>, int>> row_of(cliques.size());
    for (std::size_t c = 0; c < cliques.size(); ++c) {
        std::vector<int> x(cliques[c].size(), 0);
        bool done = false;
        while (!done) {
            std::string name = "phi[";
            for (std::size_t i = 0; i < cliques[c].size(); ++i)
                name += (i ? "," : "") + std::to_string(cliques[c][i]);
            name += "]=(";
            for (std::size_t i = 0; i < x.size(); ++i) name += (i ? "," : "") + std::to_string(x[i]);
            name += ")";
            row_of[c][x] = static_cast<int>(m.row_names.size());
            m.row_names.push_back(std::move(name));
            done = true;
            for (int i = static_cast<int>(x.size()) - 1; i >= 0; --i) {
                if (++x[i] < s.card(cliques[c][i])) {
                    done = false;
                    break;
                }
                x[i] = 0;
            }
        }
    }
    // columns: full outcomes in variable-space lexicographic order
    std::vector<int> x(static_cast<std::size_t>(p), 0);
    bool done = false;
    while (!done) {
        std::vector<int> col;
        for (std::size_t c = 0; c < cliques.size(); ++c) {
            std::vector<int> xc;
            for (int v : cliques[c]) xc.push_back(x[v - 1]);
            col.push_back(row_of[c].at(xc));
        }
        std::sort(col.begin(), col.end());
        m.columns.push_back(std::move(col));
        m.column_outcomes.push_back(x);
        done = true;
        for (int i = p - 1; i >= 0; --i) {
            if (++x[i] < s.card(i + 1)) {
                done = false;
                break;
            }
            x[i] = 0;
        }
    }
    return m;
}

std::vector<BinomialRelation> quadratic_relations(const ExponentMatrix& m, std::size_t max_cols) {
    if (static_cast<std::size_t>(m.cols()) > max_cols)
        throw BoundError("relation enumeration limited to " + std::to_string(max_cols) +
                         " columns");
    // group unordered column pairs by their exponent-sum vector
    std::map<std::vector<int>, std::vector<std::pair<int, int>>> groups;
    for (int a = 0; a < m.cols(); ++a)
        for (int b = a; b < m.cols(); ++b) {
            std::vector<int> key;
            key.reserve(m.columns[a].size() + m.columns[b].size());
            std::merge(m.columns[a].begin(), m.columns[a].end(), m.columns[b].begin(),
                       m.columns[b].end(), std::back_inserter(key));
            groups[std::move(key)].emplace_back(a, b);
        }
    std::vector<BinomialRelation> out;
    for (const auto& [key, pairs] : groups)
        for (std::size_t i = 0; i < pairs.size(); ++i)
            for (std::size_t j = i + 1; j < pairs.size(); ++j) {
                BinomialRelation rel;
                rel.positive = {pairs[i].first, pairs[i].second};
                rel.negative = {pairs[j].first, pairs[j].second};
                out.push_back(std::move(rel));
            }
    std::sort(out.begin(), out.end(), [](const BinomialRelation& a, const BinomialRelation& b) {
        return std::tie(a.positive, a.negative) < std::tie(b.positive, b.negative);
    });
    return out;
}

VanishingReport check_vanishing(const ExponentMatrix& m, const std::vector<BinomialRelation>& rels,
                                const LeafDistribution& f, double tol, bool exact_mode) {
    VanishingReport rep;
    rep.tol = tol;
    rep.exact_mode = exact_mode;
    std::vector<Rat> exact(m.cols());
    std::vector<double> approx(m.cols());
    for (int c = 0; c < m.cols(); ++c) {
        exact[c] = f.prob_by_assignment(m.column_outcomes[c]);
        approx[c] = rat_to_double(exact[c]);
    }
    for (const auto& rel : rels) {
        VanishingEntry e;
        e.rel = rel;
        if (exact_mode) {
            Rat pos = 1, neg = 1;
            for (int c : rel.positive) pos *= exact[c];
            for (int c : rel.negative) neg *= exact[c];
            Rat res = pos - neg;
            e.residual_exact = rat_to_string(res);
            e.residual = rat_to_double(res);
            e.ok = res == 0;
        } else {
            double pos = 1, neg = 1;
            for (int c : rel.positive) pos *= approx[c];
            for (int c : rel.negative) neg *= approx[c];
            e.residual = pos - neg;
            e.ok = std::abs(e.residual) <= tol;
        }
        if (!e.ok) rep.all_ok = false;
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

}  // namespace stk
