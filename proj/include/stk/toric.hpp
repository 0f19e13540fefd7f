#ifndef STK_TORIC_HPP
#define STK_TORIC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "stk/graph.hpp"
#include "stk/model.hpp"
#include "stk/staged_tree.hpp"

namespace stk {

/// 0/1 exponent matrix of a monomial map. Rows are codomain indeterminates,
/// columns are joint outcomes; column c lists the (sorted) rows with a 1.
/// Column sums are constant for both maps produced here.
struct ExponentMatrix {
    std::vector<std::string> row_names;
    std::vector<std::vector<int>> columns;
    /// Full outcome per column as values per variable (1-based variables).
    std::vector<std::vector<int>> column_outcomes;

    int rows() const { return static_cast<int>(row_names.size()); }
    int cols() const { return static_cast<int>(columns.size()); }
    bool homogeneous() const;
};

/// Map sending the outcome of leaf v to z times the product of the labels on
/// the root-to-leaf path: rows are {z} followed by the label indeterminates;
/// every column sum equals p+1.
ExponentMatrix exponent_matrix_psi_toric(const StagedTree& t);

/// Clique map of the skeleton: one row per (maximal clique, clique outcome),
/// column x has a 1 at (C, x_C) for every maximal clique C.
ExponentMatrix exponent_matrix_cliques(const Dag& g, const StateSpace& s, int max_nodes = 10);

/// p_a p_b - p_c p_d with equal exponent-sum vectors; the kernel-lattice
/// membership is guaranteed by construction.
struct BinomialRelation {
    std::vector<int> positive;  // column indices, sorted
    std::vector<int> negative;

    bool operator==(const BinomialRelation& o) const {
        return positive == o.positive && negative == o.negative;
    }
};

/// All unordered pairs of distinct column pairs with equal exponent-sum
/// vectors, deduplicated, in deterministic order.
std::vector<BinomialRelation> quadratic_relations(const ExponentMatrix& m,
                                                  std::size_t max_cols = 4096);

struct VanishingEntry {
    BinomialRelation rel;
    double residual = 0.0;        // float-mode residual
    std::string residual_exact;   // exact-mode residual as "num/den" ("" in float mode)
    bool ok = false;
};

struct VanishingReport {
    double tol = 0.0;
    bool exact_mode = false;
    bool all_ok = true;
    std::vector<VanishingEntry> entries;
};

/// Evaluates each relation on f. Float mode flags |residual| > tol; exact mode
/// requires the rational residual to be identically zero.
VanishingReport check_vanishing(const ExponentMatrix& m, const std::vector<BinomialRelation>& rels,
                                const LeafDistribution& f, double tol, bool exact_mode);

}  // namespace stk

#endif
