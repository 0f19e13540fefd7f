#ifndef STK_MODEL_HPP
#define STK_MODEL_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "stk/graph.hpp"
#include "stk/rational.hpp"
#include "stk/staged_tree.hpp"

namespace stk {

/// A point of the canonical parameter space: one rational in (0,1) per label,
/// summing to exactly 1 over the out-edges of every vertex. Keying by label
/// makes same-stage vertices share values by construction.
struct ParameterAssignment {
    std::map<LabelId, Rat> values;

    const Rat& at(LabelId id) const;
};

/// Throws PreconditionError unless the assignment is valid for the tree.
void check_parameters(const StagedTree& t, const ParameterAssignment& a);

/// One probability vector per stage, drawn uniformly from the simplex, then
/// rounded to denominator 10^9 and renormalized exactly. Deterministic per seed.
ParameterAssignment sample_parameters(const StagedTree& t, std::uint64_t seed);

/// A strictly positive exact distribution over the full outcome space,
/// indexed by leaf prefixes in the tree's ordering.
class LeafDistribution {
public:
    /// probs indexed by prefix rank (slot 0 most significant); must be
    /// strictly positive and sum to exactly 1.
    LeafDistribution(LinearExtension order, StateSpace space, std::vector<Rat> probs);

    const LinearExtension& ordering() const { return order_; }
    const StateSpace& state_space() const { return space_; }
    const std::vector<Rat>& probabilities() const { return probs_; }
    int var_count() const { return space_.var_count(); }

    std::uint64_t rank_of(const OutcomePrefix& full) const;
    OutcomePrefix outcome_of(std::uint64_t rank) const;
    const Rat& prob(const OutcomePrefix& full) const;
    /// Probability of a full outcome given as values per variable (1-based).
    const Rat& prob_by_assignment(const std::vector<int>& value_of_var) const;

    /// Marginal probability of a prefix of the ordering.
    Rat prefix_marginal(const OutcomePrefix& prefix) const;
    /// Marginal of a partial assignment of variables (vars 1-based; -1 = free).
    Rat assignment_marginal(const std::vector<int>& value_of_var) const;

private:
    LinearExtension order_;
    StateSpace space_;
    std::vector<int> slot_cards_;
    std::vector<Rat> probs_;
};

/// The image of a parameter point: exact path products over the leaves.
LeafDistribution leaf_distribution(const StagedTree& t, const ParameterAssignment& a);

/// f(next_value | prefix) by exact marginal ratios.
Rat conditional(const LeafDistribution& f, const OutcomePrefix& prefix, int next_value);

/// True iff f(x) equals the product of f(x_k | x_{pa(k)}) for every outcome,
/// with all conditionals computed by marginalization.
bool check_dag_factorization(const LeafDistribution& f, const Dag& g, const StateSpace& s);

/// True iff same-stage vertices induce identical next-variable conditionals.
bool check_invariances(const LeafDistribution& f, const StagedTree& t);

}  // namespace stk

#endif
