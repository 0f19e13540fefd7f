#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "stk/errors.hpp"
#include "stk/json_io.hpp"
#include "stk/model.hpp"
#include "stk/rng.hpp"
#include "stk/toric.hpp"
#include "oracles.hpp"

using namespace stk;

namespace {

StagedTree tree_of(const Dag& g, const StateSpace& s) {
    return StagedTree::from_dag(g, LinearExtension::identity(g.node_count()), s);
}

std::vector<int> pair_sum(const ExponentMatrix& m, const std::vector<int>& cols) {
    std::vector<int> merged;
    for (int c : cols) merged.insert(merged.end(), m.columns[c].begin(), m.columns[c].end());
    std::sort(merged.begin(), merged.end());
    return merged;
}

}  // namespace

TEST_CASE("psi-toric exponent matrix") {
    StateSpace binary1(std::vector<int>{2});
    auto small = tree_of(Dag(1, {}), binary1);
    auto m = exponent_matrix_psi_toric(small);
    CHECK(m.rows() == 3);  // z plus two labels
    CHECK(m.cols() == 2);
    CHECK(m.columns[0] == std::vector<int>{0, 1});
    CHECK(m.columns[1] == std::vector<int>{0, 2});
    CHECK(m.homogeneous());

    auto t1 = tree_of(oracles::g1(), StateSpace::uniform(4, 2));
    auto m1 = exponent_matrix_psi_toric(t1);
    CHECK(m1.cols() == 16);
    CHECK(m1.rows() == 1 + t1.labels().size());
    for (const auto& col : m1.columns) CHECK(col.size() == 5);  // z plus p = 4 labels
    // column outcomes enumerate the joint space
    std::set<std::vector<int>> outcomes(m1.column_outcomes.begin(), m1.column_outcomes.end());
    CHECK(outcomes.size() == 16);
}

TEST_CASE("clique exponent matrix") {
    auto g2 = oracles::g2();
    StateSpace s = StateSpace::uniform(4, 2);
    auto m = exponent_matrix_cliques(g2, s);
    // cliques {1,2} and {2,3,4}: 4 + 8 rows, one 1 per clique per column
    CHECK(m.rows() == 12);
    CHECK(m.cols() == 16);
    for (const auto& col : m.columns) CHECK(col.size() == 2);
    CHECK(m.homogeneous());

    Dag complete(3, {{1, 2}, {1, 3}, {2, 3}});
    auto mc = exponent_matrix_cliques(complete, StateSpace::uniform(3, 2));
    CHECK(mc.rows() == 8);
    CHECK(mc.cols() == 8);
    std::set<std::vector<int>> distinct(mc.columns.begin(), mc.columns.end());
    CHECK(distinct.size() == 8);  // permutation-like: all columns distinct singletons
    for (const auto& col : mc.columns) CHECK(col.size() == 1);

    auto me = exponent_matrix_cliques(Dag(2, {}), StateSpace::uniform(2, 2));
    CHECK(me.rows() == 4);
    CHECK(me.cols() == 4);
    for (const auto& col : me.columns) CHECK(col.size() == 2);

    CHECK_THROWS_AS(exponent_matrix_cliques(Dag(11, {}), StateSpace::uniform(11, 2)), BoundError);
}

TEST_CASE("quadratic_relations") {
    // 2x2 identity-like matrix: all pair sums distinct
    ExponentMatrix ident;
    ident.row_names = {"a", "b"};
    ident.columns = {{0}, {1}};
    ident.column_outcomes = {{0}, {1}};
    CHECK(quadratic_relations(ident).empty());

    // independence model on two binary variables: the single relation
    // p00 p11 = p01 p10
    auto m = exponent_matrix_cliques(Dag(2, {}), StateSpace::uniform(2, 2));
    auto rels = quadratic_relations(m);
    REQUIRE(rels.size() == 1);
    auto outcome = [&](int c) { return m.column_outcomes[c]; };
    std::set<std::vector<int>> pos = {outcome(rels[0].positive[0]), outcome(rels[0].positive[1])};
    std::set<std::vector<int>> neg = {outcome(rels[0].negative[0]), outcome(rels[0].negative[1])};
    std::set<std::vector<int>> expected_pos = {{0, 0}, {1, 1}};
    std::set<std::vector<int>> expected_neg = {{0, 1}, {1, 0}};
    bool straight = pos == expected_pos && neg == expected_neg;
    bool flipped = pos == expected_neg && neg == expected_pos;
    CHECK((straight || flipped));

    // kernel-lattice membership for every emitted relation
    for (const Dag& g : {oracles::g1(), oracles::g2()}) {
        auto t = tree_of(g, StateSpace::uniform(4, 2));
        for (const auto& mat :
             {exponent_matrix_psi_toric(t), exponent_matrix_cliques(g, StateSpace::uniform(4, 2))}) {
            for (const auto& rel : quadratic_relations(mat)) {
                CHECK(pair_sum(mat, rel.positive) == pair_sum(mat, rel.negative));
                CHECK(rel.positive != rel.negative);
            }
        }
    }
}

TEST_CASE("homogeneity across random DAGs") {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        int p = 2 + rng.uniform_int(3);
        Dag g = random_dag(p, 0.5, rng.next_u64());
        std::vector<int> cards;
        for (int i = 0; i < p; ++i) cards.push_back(2 + rng.uniform_int(2));
        StateSpace s(cards);
        auto t = StagedTree::from_dag(
            g, enumerate_linear_extensions(g)[0], s);
        CHECK(exponent_matrix_psi_toric(t).homogeneous());
        CHECK(exponent_matrix_cliques(g, s).homogeneous());
    }
}

TEST_CASE("vanishing on perfect-DAG model points") {
    auto g2 = oracles::g2();
    StateSpace s = StateSpace::uniform(4, 2);
    auto t = tree_of(g2, s);
    auto psi = exponent_matrix_psi_toric(t);
    auto cliq = exponent_matrix_cliques(g2, s);
    auto psi_rels = quadratic_relations(psi);
    auto cliq_rels = quadratic_relations(cliq);
    CHECK_FALSE(psi_rels.empty());
    CHECK_FALSE(cliq_rels.empty());
    Rng rng(91);
    for (int sample = 0; sample < 5; ++sample) {
        auto f = leaf_distribution(t, sample_parameters(t, rng.next_u64()));
        for (const auto* pair : {&psi_rels, &cliq_rels}) {
            const auto& mat = pair == &psi_rels ? psi : cliq;
            auto exact = check_vanishing(mat, *pair, f, 1e-9, true);
            CHECK(exact.all_ok);
            for (const auto& e : exact.entries) CHECK(e.residual_exact == "0/1");
            auto approx = check_vanishing(mat, *pair, f, 1e-9, false);
            CHECK(approx.all_ok);
        }
    }

    // empty relation set: trivially passing
    auto f = leaf_distribution(t, sample_parameters(t, 1));
    CHECK(check_vanishing(psi, {}, f, 1e-9, false).all_ok);
}

TEST_CASE("non-perfect G1: clique relations fail on model points") {
    auto g1 = oracles::g1();
    StateSpace s = StateSpace::uniform(4, 2);
    auto t = tree_of(g1, s);
    auto f = leaf_distribution(t, sample_parameters(t, 4242));

    // relations of the tree's own monomial map lie in its kernel, so they
    // vanish on any model point even though G1 is not perfect
    auto psi = exponent_matrix_psi_toric(t);
    CHECK(check_vanishing(psi, quadratic_relations(psi), f, 1e-9, true).all_ok);

    // the clique-map relations encode the decomposable model of the chordal
    // skeleton, which a collider model point violates
    auto cliq = exponent_matrix_cliques(g1, s);
    auto rels = quadratic_relations(cliq);
    CHECK_FALSE(rels.empty());
    auto rep = check_vanishing(cliq, rels, f, 1e-9, true);
    CHECK_FALSE(rep.all_ok);
    int failing = 0;
    for (const auto& e : rep.entries)
        if (!e.ok) ++failing;
    CHECK(failing > 0);
    // float mode agrees on the failures at this tolerance
    auto rep_float = check_vanishing(cliq, rels, f, 1e-9, false);
    CHECK_FALSE(rep_float.all_ok);

    // relation and report serialization as outcome tuples with residuals
    auto jr = relations_to_json(cliq, rels);
    REQUIRE_FALSE(jr.empty());
    CHECK(jr[0]["pos"].size() == 2);
    CHECK(jr[0]["pos"][0].size() == 4);
    auto jv = vanishing_report_to_json(cliq, rep);
    CHECK(jv["all_ok"] == false);
    CHECK(jv["relations"][0].contains("residual"));
    CHECK(jv["relations"][0].contains("residual_exact"));
}
