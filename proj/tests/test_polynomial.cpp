#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stk/errors.hpp"
#include "stk/polynomial.hpp"
#include "stk/rng.hpp"
#include "stk/staged_tree.hpp"
#include "oracles.hpp"

using namespace stk;

namespace {

Poly x() { return Poly::variable(0); }
Poly y() { return Poly::variable(1); }

Poly random_poly(Rng& rng, int max_terms, int max_vars) {
    Poly out;
    int terms = 1 + rng.uniform_int(max_terms);
    for (int t = 0; t < terms; ++t) {
        std::vector<LabelId> factors;
        int deg = rng.uniform_int(4);
        for (int d = 0; d < deg; ++d) factors.push_back(rng.uniform_int(max_vars));
        int coeff = rng.uniform_int(9) - 4;
        out += Poly::term(Monomial::from_factors(factors), coeff);
    }
    return out;
}

std::map<LabelId, Rat> random_point(Rng& rng, int max_vars) {
    std::map<LabelId, Rat> point;
    for (LabelId id = 0; id < max_vars; ++id)
        point[id] = Rat(1 + rng.uniform_int(100), 1 + rng.uniform_int(100));
    return point;
}

}  // namespace

TEST_CASE("ring basics") {
    CHECK((x() + y()) * (x() - y()) == x() * x() - y() * y());
    CHECK((x() + y()) * (x() + y()) == x() * x() + Poly::constant(2) * x() * y() + y() * y());
    Poly a = (x() + y()) * (x() + Poly::constant(3));
    CHECK(a * Poly() == Poly());
    CHECK((a * Poly()).is_zero());
    CHECK(a + Poly() == a);
    CHECK(a * Poly::constant(1) == a);
    CHECK(a - a == Poly());
}

TEST_CASE("canonical form") {
    // same polynomial assembled in different orders compares equal
    Poly p1 = x() * y() + Poly::constant(2) * x() + y();
    Poly p2 = y() + x() * y() + x() + x();
    CHECK(p1 == p2);
    CHECK(Poly::term(Monomial::from_factors({0, 0, 1}), 1).degree() == 3);
    CHECK(Poly::constant(0) == Poly());
    CHECK(Monomial::from_factors({1, 0, 1}).powers() ==
          std::vector<std::pair<LabelId, int>>{{0, 1}, {1, 2}});
}

TEST_CASE("ring laws on random polynomials") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        Poly a = random_poly(rng, 5, 4), b = random_poly(rng, 5, 4), c = random_poly(rng, 5, 4);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
    }
}

TEST_CASE("evaluate") {
    std::map<LabelId, Rat> point = {{0, Rat(1, 3)}, {1, Rat(2, 3)}};
    CHECK((x() + y()).evaluate(point) == 1);
    CHECK(Poly::constant(1).evaluate({}) == 1);
    CHECK((x() * x() + y()).evaluate(point) == Rat(1, 9) + Rat(2, 3));
    CHECK_THROWS_AS((x() + Poly::variable(7)).evaluate(point), PreconditionError);
}

TEST_CASE("evaluation homomorphism on random inputs") {
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        Poly a = random_poly(rng, 4, 3), b = random_poly(rng, 4, 3);
        auto point = random_point(rng, 3);
        CHECK((a + b).evaluate(point) == a.evaluate(point) + b.evaluate(point));
        CHECK((a * b).evaluate(point) == a.evaluate(point) * b.evaluate(point));
    }
}

TEST_CASE("probabilistic identity testing agrees with structural equality") {
    // structural equality implies equal evaluations everywhere (a theorem);
    // the converse holds at random points only with high probability, so this
    // is a sanity check, not a proof
    Rng rng(37);
    int checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        Poly a = random_poly(rng, 5, 3), b = random_poly(rng, 5, 3);
        bool structurally_equal = a == b;
        bool all_points_agree = true;
        for (int pt = 0; pt < 1000 && all_points_agree; ++pt) {
            auto point = random_point(rng, 3);
            if (a.evaluate(point) != b.evaluate(point)) all_points_agree = false;
        }
        CHECK(structurally_equal == all_points_agree);
        if (structurally_equal != all_points_agree) break;
        ++checked;
    }
    CHECK(checked == 50);
}

TEST_CASE("interpolating polynomials") {
    StateSpace binary1(std::vector<int>{2});
    auto one_level = StagedTree::from_dag(Dag(1, {}), LinearExtension::identity(1), binary1);
    Poly troot = interpolating_poly(one_level, one_level.root());
    // theta_0 + theta_1: two root-to-leaf paths
    CHECK(troot.term_count() == 2);
    CHECK(troot.degree() == 1);
    CHECK(troot == Poly::variable(one_level.edge_label(0, 0)) +
                       Poly::variable(one_level.edge_label(0, 1)));

    auto t1 = StagedTree::from_dag(oracles::g1(), LinearExtension::identity(4),
                                   StateSpace::uniform(4, 2));
    // every leaf contributes one coefficient-1 term of degree p - level
    Poly tv = interpolating_poly(t1, OutcomePrefix{0});
    CHECK(tv.term_count() == 8);
    for (const auto& [m, c] : tv.terms()) {
        CHECK(c == 1);
        CHECK(m.degree() == 3);
    }
    for (int leaf : t1.level(4)) CHECK(interpolating_poly(t1, leaf) == Poly::constant(1));
    CHECK_THROWS_AS(interpolating_poly(t1, OutcomePrefix{5}), PreconditionError);

    // recursive identity t(v) = sum_e theta(e) t(child(e)), structurally
    auto all = interpolating_all(t1);
    for (int v = 0; v < t1.vertex_count(); ++v) {
        if (t1.is_leaf(v)) {
            CHECK(all[v] == Poly::constant(1));
            continue;
        }
        Poly rhs;
        for (int i = 0; i < t1.child_count(v); ++i)
            rhs += Poly::variable(t1.edge_label(v, i)) * all[t1.child(v, i)];
        CHECK(all[v] == rhs);
    }
}

TEST_CASE("text export uses conditional-probability notation") {
    StateSpace binary1(std::vector<int>{2});
    auto one_level = StagedTree::from_dag(Dag(1, {}), LinearExtension::identity(1), binary1);
    auto name = [&](LabelId id) { return one_level.labels().name(id); };
    CHECK(interpolating_poly(one_level, one_level.root()).to_string(name) ==
          "f(x1=0) + f(x1=1)");
    CHECK(Poly().to_string(name) == "0");

    auto t2 = StagedTree::from_dag(oracles::g2(), LinearExtension::identity(4),
                                   StateSpace::uniform(4, 2));
    auto name2 = [&](LabelId id) { return t2.labels().name(id); };
    // conditioning context shows the parent configuration
    int v = *t2.find_vertex({0, 1});
    std::string text = Poly::variable(t2.edge_label(v, 0)).to_string(name2);
    CHECK(text == "f(x3=0|x2=1)");
}
