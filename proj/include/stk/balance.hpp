#ifndef STK_BALANCE_HPP
#define STK_BALANCE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "stk/graph.hpp"
#include "stk/staged_tree.hpp"

namespace stk {

struct BalanceFailure {
    int stage;
    int level;
    int v, w;  // vertex ids, v < w
    int i, j;  // outcome values of the failing child pair, i < j
};

struct BalanceReport {
    bool balanced = true;
    std::vector<BalanceFailure> failures;
};

/// Exact symbolic check of t(v_i)t(w_j) = t(w_i)t(v_j) for all child pairs,
/// children of w reindexed by matching edge labels. v and w must lie in the
/// same stage.
bool is_balanced_pair(const StagedTree& t, int v, int w);
bool is_balanced_pair(const StagedTree& t, const OutcomePrefix& v, const OutcomePrefix& w);

/// Checks every unordered same-stage pair; failures listed in deterministic
/// (stage, pair, child-pair) order.
BalanceReport is_balanced(const StagedTree& t);

/// True iff every same-stage pair is in the same position, i.e. has equal
/// interpolating polynomials.
bool is_simple(const StagedTree& t);

/// The explicit coordinatewise witness for a perfect DAG under the identity
/// extension: given same-stage prefixes v,w at level i and a completion pair
/// (y, y') over variables i+2..p, keeps coordinate k when i+1 is an ancestor
/// of k and swaps it otherwise. The per-coordinate label-pair identity the
/// witness must satisfy is verified symbolically for every pair of distinct
/// outcomes of variable i+1; the returned map is an involution.
std::pair<std::vector<int>, std::vector<int>> witness_bijection(
    const Dag& g, const LinearExtension& pi, const StateSpace& s, const OutcomePrefix& v,
    const OutcomePrefix& w, const std::vector<int>& y, const std::vector<int>& y_prime);

/// Term-multiset oracle: expands both sides of the balance identity into
/// multisets of path-label products and compares them, with no polynomial
/// arithmetic involved. Only available for DAG-built trees; the number of
/// completion pairs per side must not exceed pair_bound.
bool lemma_balance_bruteforce(const StagedTree& t, int v, int w, std::uint64_t pair_bound = 64);
bool lemma_balance_bruteforce(const StagedTree& t, const OutcomePrefix& v, const OutcomePrefix& w,
                              std::uint64_t pair_bound = 64);

}  // namespace stk

#endif
