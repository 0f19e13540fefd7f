#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stk/errors.hpp"
#include "stk/json_io.hpp"
#include "stk/model.hpp"
#include "stk/rng.hpp"
#include "oracles.hpp"

using namespace stk;

namespace {

StagedTree g2_tree() {
    return StagedTree::from_dag(oracles::g2(), LinearExtension::identity(4),
                                StateSpace::uniform(4, 2));
}

LeafDistribution uniform_distribution(const LinearExtension& order, const StateSpace& s) {
    std::uint64_t n = s.total_outcomes();
    return LeafDistribution(order, s, std::vector<Rat>(n, Rat(1, n)));
}

// strictly positive pseudo-random distribution, not drawn from any model
LeafDistribution random_distribution(const LinearExtension& order, const StateSpace& s,
                                     std::uint64_t seed) {
    Rng rng(seed);
    std::uint64_t n = s.total_outcomes();
    std::vector<std::int64_t> w(n);
    std::int64_t total = 0;
    for (auto& x : w) {
        x = 1 + rng.uniform_int(1000);
        total += x;
    }
    std::vector<Rat> probs;
    for (auto x : w) probs.emplace_back(x, total);
    return LeafDistribution(order, s, std::move(probs));
}

}  // namespace

TEST_CASE("sample_parameters") {
    auto t = g2_tree();
    auto a1 = sample_parameters(t, 17);
    auto a2 = sample_parameters(t, 17);
    CHECK(a1.values == a2.values);
    auto a3 = sample_parameters(t, 18);
    CHECK(a1.values != a3.values);

    // per-vertex sums are exactly 1 and every value sits in (0,1)
    for (int v = 0; v < t.vertex_count(); ++v) {
        if (t.is_leaf(v)) continue;
        Rat sum = 0;
        for (int i = 0; i < t.child_count(v); ++i) {
            const Rat& val = a1.at(t.edge_label(v, i));
            CHECK(val > 0);
            CHECK(val < 1);
            sum += val;
        }
        CHECK(sum == 1);
    }

    StateSpace binary1(std::vector<int>{2});
    auto one_level = StagedTree::from_dag(Dag(1, {}), LinearExtension::identity(1), binary1);
    auto a = sample_parameters(one_level, 5);
    Rat alpha = a.at(one_level.edge_label(0, 0));
    CHECK(a.at(one_level.edge_label(0, 1)) == 1 - alpha);
}

TEST_CASE("leaf_distribution") {
    StateSpace binary1(std::vector<int>{2});
    auto one_level = StagedTree::from_dag(Dag(1, {}), LinearExtension::identity(1), binary1);
    ParameterAssignment a;
    a.values[one_level.edge_label(0, 0)] = Rat(1, 3);
    a.values[one_level.edge_label(0, 1)] = Rat(2, 3);
    auto f = leaf_distribution(one_level, a);
    CHECK(f.probabilities() == std::vector<Rat>{Rat(1, 3), Rat(2, 3)});

    // mass 1 exactly, all entries positive, and the root polynomial agrees
    auto t = g2_tree();
    auto alpha = sample_parameters(t, 23);
    auto f2 = leaf_distribution(t, alpha);
    Rat sum = 0;
    for (const Rat& p : f2.probabilities()) {
        CHECK(p > 0);
        sum += p;
    }
    CHECK(sum == 1);
    std::map<LabelId, Rat> point(alpha.values.begin(), alpha.values.end());
    CHECK(interpolating_poly(t, t.root()).evaluate(point) == 1);
}

TEST_CASE("normalization invariant for every vertex") {
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        int p = 2 + rng.uniform_int(3);
        Dag g = random_dag(p, 0.5, rng.next_u64());
        auto exts = enumerate_linear_extensions(g);
        auto t = StagedTree::from_dag(g, exts[rng.uniform_int(static_cast<int>(exts.size()))],
                                      StateSpace::uniform(p, 2));
        auto alpha = sample_parameters(t, rng.next_u64());
        std::map<LabelId, Rat> point(alpha.values.begin(), alpha.values.end());
        auto polys = interpolating_all(t);
        for (int v = 0; v < t.vertex_count(); ++v) CHECK(polys[v].evaluate(point) == 1);
    }
}

TEST_CASE("conditional equals the edge parameter (exact)") {
    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        int p = 2 + rng.uniform_int(3);
        Dag g = random_dag(p, 0.5, rng.next_u64());
        std::vector<int> cards;
        for (int i = 0; i < p; ++i) cards.push_back(2 + rng.uniform_int(2));
        auto exts = enumerate_linear_extensions(g);
        auto t = StagedTree::from_dag(g, exts[rng.uniform_int(static_cast<int>(exts.size()))],
                                      StateSpace(cards));
        auto alpha = sample_parameters(t, rng.next_u64());
        auto f = leaf_distribution(t, alpha);
        for (int v = 0; v < t.vertex_count(); ++v) {
            if (t.is_leaf(v)) continue;
            OutcomePrefix prefix = t.prefix_of(v);
            for (int i = 0; i < t.child_count(v); ++i)
                CHECK(conditional(f, prefix, t.child_value(v, i)) == alpha.at(t.edge_label(v, i)));
        }
    }
}

TEST_CASE("conditional corner cases") {
    StateSpace s(std::vector<int>{2, 3});
    auto order = LinearExtension::identity(2);
    auto f = uniform_distribution(order, s);
    CHECK(conditional(f, {}, 0) == Rat(1, 2));
    CHECK(conditional(f, {1}, 2) == Rat(1, 3));

    // p = 1 base case: conditioning on the empty prefix returns f itself
    StateSpace s1(std::vector<int>{3});
    LeafDistribution f1(LinearExtension::identity(1), s1,
                        {Rat(1, 6), Rat(2, 6), Rat(3, 6)});
    CHECK(conditional(f1, {}, 0) == Rat(1, 6));
    CHECK(conditional(f1, {}, 2) == Rat(1, 2));

    CHECK_THROWS_AS(conditional(f, {5}, 0), PreconditionError);
    CHECK_THROWS_AS(LeafDistribution(order, s, std::vector<Rat>(6, Rat(1, 7))),
                    PreconditionError);
    CHECK_THROWS_AS(LeafDistribution(order, s, {0, 0, 0, 0, 0, 1}), PreconditionError);
}

TEST_CASE("check_dag_factorization") {
    auto t = g2_tree();
    auto f = leaf_distribution(t, sample_parameters(t, 51));
    CHECK(check_dag_factorization(f, oracles::g2(), StateSpace::uniform(4, 2)));

    // independence distribution factorizes over the edgeless DAG
    StateSpace s(std::vector<int>{2, 3});
    auto indep = uniform_distribution(LinearExtension::identity(2), s);
    CHECK(check_dag_factorization(indep, Dag(2, {}), s));

    // a random strictly positive distribution does not factorize over G1
    auto random_f = random_distribution(LinearExtension::identity(4), StateSpace::uniform(4, 2), 99);
    CHECK_FALSE(check_dag_factorization(random_f, oracles::g1(), StateSpace::uniform(4, 2)));

    // but a model sample for G1 does
    auto t1 = StagedTree::from_dag(oracles::g1(), LinearExtension::identity(4),
                                   StateSpace::uniform(4, 2));
    auto f1 = leaf_distribution(t1, sample_parameters(t1, 52));
    CHECK(check_dag_factorization(f1, oracles::g1(), StateSpace::uniform(4, 2)));
}

TEST_CASE("model equality: DAG CPDs induce the same leaf distribution") {
    // random CPDs for G2, alpha keyed by the tree labels, f built two ways
    Rng rng(61);
    auto t = g2_tree();
    const Dag g = oracles::g2();
    ParameterAssignment alpha;
    for (const auto& stage : t.stages()) {
        int v0 = stage[0];
        int d = t.child_count(v0);
        if (d == 0) continue;
        std::vector<std::int64_t> w(d);
        std::int64_t total = 0;
        for (auto& x : w) {
            x = 1 + rng.uniform_int(999);
            total += x;
        }
        for (int i = 0; i < d; ++i) alpha.values[t.edge_label(v0, i)] = Rat(w[i], total);
    }
    auto f = leaf_distribution(t, alpha);

    // direct product of the conditional probability tables, leaf by leaf
    for (int leaf : t.level(4)) {
        OutcomePrefix x = t.prefix_of(leaf);
        Rat product = 1;
        int v = t.root();
        for (int k = 0; k < 4; ++k) {
            product *= alpha.at(t.label_by_value(v, x[k]));
            v = t.child_by_value(v, x[k]);
        }
        CHECK(f.prob(x) == product);
    }
    CHECK(check_dag_factorization(f, g, StateSpace::uniform(4, 2)));
}

TEST_CASE("check_invariances") {
    auto t = g2_tree();
    auto f = leaf_distribution(t, sample_parameters(t, 71));
    CHECK(check_invariances(f, t));

    // perturb one same-stage vertex's row: swap its two conditional values
    std::vector<std::vector<Rat>> row(t.vertex_count());
    auto alpha = sample_parameters(t, 72);
    for (int v = 0; v < t.vertex_count(); ++v)
        for (int i = 0; i < t.child_count(v); ++i)
            row[v].push_back(alpha.at(t.edge_label(v, i)));
    int v_perturb = -1;
    for (const auto& stage : t.stages())
        if (stage.size() > 1 && !t.is_leaf(stage[0])) v_perturb = stage[1];
    REQUIRE(v_perturb >= 0);
    std::swap(row[v_perturb][0], row[v_perturb][1]);

    std::vector<Rat> probs(t.level(4).size());
    std::vector<Rat> partial(t.vertex_count());
    partial[t.root()] = 1;
    for (int v = 0; v < t.vertex_count(); ++v)
        for (int i = 0; i < t.child_count(v); ++i)
            partial[t.child(v, i)] = partial[v] * row[v][i];
    for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = partial[t.level(4)[i]];
    LeafDistribution perturbed(t.ordering(), t.state_space(), std::move(probs));
    CHECK_FALSE(check_invariances(perturbed, t));

    // fully singleton staging: vacuously true for any distribution
    Dag complete(3, {{1, 2}, {1, 3}, {2, 3}});
    auto tc = StagedTree::from_dag(complete, LinearExtension::identity(3),
                                   StateSpace::uniform(3, 2));
    auto any_f = random_distribution(LinearExtension::identity(3), StateSpace::uniform(3, 2), 5);
    CHECK(check_invariances(any_f, tc));
}

TEST_CASE("distribution json round trip") {
    auto t = g2_tree();
    auto f = leaf_distribution(t, sample_parameters(t, 81));
    auto j = dist_to_json(f);
    CHECK(j["probabilities"][0].contains("outcome"));
    CHECK(j["probabilities"][0]["p"].is_string());
    auto back = dist_from_json(j);
    CHECK(back.probabilities() == f.probabilities());
    CHECK(back.ordering() == f.ordering());

    // cardinalities key is optional when every outcome value appears
    j.erase("cardinalities");
    auto inferred = dist_from_json(j);
    CHECK(inferred.probabilities() == f.probabilities());

    auto bad = dist_to_json(f);
    bad["probabilities"][0]["p"] = "1/0";
    CHECK_THROWS_AS(dist_from_json(bad), ParseError);
}
