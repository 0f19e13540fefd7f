#include "stk/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stk/errors.hpp"
#include "stk/rng.hpp"

namespace stk {

const Rat& ParameterAssignment::at(LabelId id) const {
    auto it = values.find(id);
    if (it == values.end())
        throw PreconditionError("no parameter value for label id " + std::to_string(id));
    return it->second;
}

void check_parameters(const StagedTree& t, const ParameterAssignment& a) {
    for (int v = 0; v < t.vertex_count(); ++v) {
        if (t.is_leaf(v)) continue;
        Rat sum = 0;
        for (int i = 0; i < t.child_count(v); ++i) {
            const Rat& val = a.at(t.edge_label(v, i));
            if (val <= 0 || val >= 1)
                throw PreconditionError("parameter outside (0,1) at vertex " + t.vertex_name(v));
            sum += val;
        }
        if (sum != 1)
            throw PreconditionError("parameters at vertex " + t.vertex_name(v) +
                                    " sum to " + rat_to_string(sum) + ", not 1");
    }
}

ParameterAssignment sample_parameters(const StagedTree& t, std::uint64_t seed) {
    constexpr std::int64_t kDen = 1000000000;
    Rng rng(seed);
    ParameterAssignment a;
    for (const auto& stage : t.stages()) {
        int v0 = stage[0];
        int d = t.child_count(v0);
        if (d == 0) continue;
        // uniform on the simplex via normalized exponentials, then rounded
        std::vector<double> e(d);
        double total = 0;
        for (int i = 0; i < d; ++i) {
            e[i] = -std::log(rng.uniform01());
            total += e[i];
        }
        std::vector<std::int64_t> w(d);
        std::int64_t wsum = 0;
        for (int i = 0; i < d; ++i) {
            w[i] = std::max<std::int64_t>(1, std::llround(e[i] / total * kDen));
            wsum += w[i];
        }
        for (int i = 0; i < d; ++i) a.values[t.edge_label(v0, i)] = Rat(w[i], wsum);
    }
    check_parameters(t, a);
    return a;
}

LeafDistribution::LeafDistribution(LinearExtension order, StateSpace space, std::vector<Rat> probs)
    : order_(std::move(order)), space_(std::move(space)), probs_(std::move(probs)) {
    if (order_.size() != space_.var_count())
        throw PreconditionError("ordering and state space disagree on the variable count");
    for (int k = 0; k < space_.var_count(); ++k) slot_cards_.push_back(space_.card(order_.at(k + 1)));
    if (probs_.size() != space_.total_outcomes())
        throw PreconditionError("distribution has " + std::to_string(probs_.size()) +
                                " entries, state space has " +
                                std::to_string(space_.total_outcomes()));
    Rat sum = 0;
    for (const Rat& p : probs_) {
        if (p <= 0) throw PreconditionError("distribution entries must be strictly positive");
        sum += p;
    }
    if (sum != 1)
        throw PreconditionError("distribution sums to " + rat_to_string(sum) + ", not 1");
}

std::uint64_t LeafDistribution::rank_of(const OutcomePrefix& full) const {
    if (static_cast<int>(full.size()) != var_count())
        throw PreconditionError("outcome has wrong length");
    std::uint64_t r = 0;
    for (int k = 0; k < var_count(); ++k) {
        if (full[k] < 0 || full[k] >= slot_cards_[k])
            throw PreconditionError("outcome value out of range");
        r = r * static_cast<std::uint64_t>(slot_cards_[k]) + static_cast<std::uint64_t>(full[k]);
    }
    return r;
}

OutcomePrefix LeafDistribution::outcome_of(std::uint64_t rank) const {
    OutcomePrefix x(var_count());
    for (int k = var_count() - 1; k >= 0; --k) {
        x[k] = static_cast<int>(rank % static_cast<std::uint64_t>(slot_cards_[k]));
        rank /= static_cast<std::uint64_t>(slot_cards_[k]);
    }
    return x;
}

const Rat& LeafDistribution::prob(const OutcomePrefix& full) const { return probs_[rank_of(full)]; }

const Rat& LeafDistribution::prob_by_assignment(const std::vector<int>& value_of_var) const {
    if (static_cast<int>(value_of_var.size()) != var_count())
        throw PreconditionError("assignment has wrong length");
    OutcomePrefix full(var_count());
    for (int k = 0; k < var_count(); ++k) full[k] = value_of_var[order_.at(k + 1) - 1];
    return prob(full);
}

Rat LeafDistribution::prefix_marginal(const OutcomePrefix& prefix) const {
    if (static_cast<int>(prefix.size()) > var_count())
        throw PreconditionError("prefix longer than the variable count");
    std::vector<int> value_of_var(static_cast<std::size_t>(var_count()), -1);
    for (std::size_t k = 0; k < prefix.size(); ++k)
        value_of_var[order_.at(static_cast<int>(k) + 1) - 1] = prefix[k];
    return assignment_marginal(value_of_var);
}

Rat LeafDistribution::assignment_marginal(const std::vector<int>& value_of_var) const {
    if (static_cast<int>(value_of_var.size()) != var_count())
        throw PreconditionError("assignment has wrong length");
    Rat sum = 0;
    std::uint64_t n = space_.total_outcomes();
    for (std::uint64_t r = 0; r < n; ++r) {
        OutcomePrefix x = outcome_of(r);
        bool match = true;
        for (int k = 0; k < var_count() && match; ++k) {
            int want = value_of_var[order_.at(k + 1) - 1];
            if (want >= 0 && x[k] != want) match = false;
        }
        if (match) sum += probs_[r];
    }
    return sum;
}

LeafDistribution leaf_distribution(const StagedTree& t, const ParameterAssignment& a) {
    if (!t.is_product_shape())
        throw PreconditionError("leaf distributions require a product tree");
    check_parameters(t, a);
    std::vector<Rat> probs;
    probs.reserve(t.level(t.var_count()).size());
    // leaf order in a product tree equals prefix rank order
    std::vector<Rat> partial(t.vertex_count());
    partial[t.root()] = 1;
    for (int k = 0; k < t.var_count(); ++k)
        for (int v : t.level(k))
            for (int i = 0; i < t.child_count(v); ++i)
                partial[t.child(v, i)] = partial[v] * a.at(t.edge_label(v, i));
    for (int leaf : t.level(t.var_count())) probs.push_back(partial[leaf]);
    return LeafDistribution(t.ordering(), t.state_space(), std::move(probs));
}

Rat conditional(const LeafDistribution& f, const OutcomePrefix& prefix, int next_value) {
    Rat denom = f.prefix_marginal(prefix);
    if (denom == 0) throw PreconditionError("conditioning on a zero-probability prefix");
    OutcomePrefix ext = prefix;
    ext.push_back(next_value);
    return f.prefix_marginal(ext) / denom;
}

bool check_dag_factorization(const LeafDistribution& f, const Dag& g, const StateSpace& s) {
    int p = g.node_count();
    if (s.var_count() != p || f.var_count() != p)
        throw PreconditionError("DAG, state space and distribution sizes disagree");
    std::uint64_t n = s.total_outcomes();
    // enumerate outcomes in variable space
    std::vector<int> x(static_cast<std::size_t>(p), 0);
    for (std::uint64_t it = 0; it < n; ++it) {
        Rat product = 1;
        for (int k = 1; k <= p; ++k) {
            std::vector<int> joint(static_cast<std::size_t>(p), -1);
            std::vector<int> given(static_cast<std::size_t>(p), -1);
            for (int u : g.parents(k)) {
                joint[u - 1] = x[u - 1];
                given[u - 1] = x[u - 1];
            }
            joint[k - 1] = x[k - 1];
            product *= f.assignment_marginal(joint) / f.assignment_marginal(given);
        }
        if (f.prob_by_assignment(x) != product) return false;
        for (int k = p - 1; k >= 0; --k) {
            if (++x[k] < s.card(k + 1)) break;
            x[k] = 0;
        }
    }
    return true;
}

bool check_invariances(const LeafDistribution& f, const StagedTree& t) {
    if (!t.is_product_shape())
        throw PreconditionError("invariance checks require a product tree");
    if (!(t.ordering() == f.ordering()) || !(t.state_space() == f.state_space()))
        throw PreconditionError("tree and distribution disagree on ordering or state space");
    for (const auto& stage : t.stages()) {
        int v0 = stage[0];
        if (t.is_leaf(v0)) continue;
        OutcomePrefix base = t.prefix_of(v0);
        for (std::size_t i = 1; i < stage.size(); ++i) {
            OutcomePrefix other = t.prefix_of(stage[i]);
            for (int c = 0; c < t.child_count(v0); ++c) {
                int value = t.child_value(v0, c);
                if (conditional(f, base, value) != conditional(f, other, value)) return false;
            }
        }
    }
    return true;
}

}  // namespace stk
