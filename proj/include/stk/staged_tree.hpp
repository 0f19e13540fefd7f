#ifndef STK_STAGED_TREE_HPP
#define STK_STAGED_TREE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stk/graph.hpp"
#include "stk/polynomial.hpp"

namespace stk {

/// Outcome cardinalities d_1..d_p of the joint state space; each >= 2.
class StateSpace {
public:
    explicit StateSpace(std::vector<int> cards);
    static StateSpace uniform(int p, int d);

    int var_count() const { return static_cast<int>(cards_.size()); }
    int card(int var) const;  // 1-based variable index
    const std::vector<int>& cards() const { return cards_; }
    /// Product of all cardinalities (number of joint outcomes), capped check.
    std::uint64_t total_outcomes() const;

    bool operator==(const StateSpace& o) const { return cards_ == o.cards_; }

private:
    std::vector<int> cards_;
};

/// Values x_{pi_1}..x_{pi_k} along the tree's ordering; the length is the level.
using OutcomePrefix = std::vector<int>;

/// Semantic identity of an edge label. Two labels are equal iff their keys
/// are equal. DAG-built trees key by (variable, value, parent configuration);
/// staging-built trees key by (variable, value, stage tag).
struct LabelKey {
    int var = 0;
    int value = 0;
    std::vector<std::pair<int, int>> context;  // (parent var, parent value), sorted
    int stage_tag = -1;

    auto operator<=>(const LabelKey&) const = default;
};

class LabelTable {
public:
    LabelId intern(const LabelKey& k);
    const LabelKey& key(LabelId id) const { return keys_.at(id); }
    /// Notation in the style f(x3=1|x1=0,x2=1).
    std::string name(LabelId id) const;
    int size() const { return static_cast<int>(keys_.size()); }

private:
    std::map<LabelKey, LabelId> ids_;
    std::vector<LabelKey> keys_;
};

/// Level-structured rooted tree with an edge labeling and the stage partition
/// it induces (vertices grouped by equality of outgoing label sets).
/// Immutable after construction.
class StagedTree {
public:
    static constexpr std::uint64_t kDefaultMaxLeaves = 1000000;

    /// The staged tree of a DAG under a linear extension: edge labels keyed by
    /// the conditioned variable, its outcome, and the parent configuration.
    static StagedTree from_dag(const Dag& g, const LinearExtension& pi, const StateSpace& s,
                               std::uint64_t max_leaves = kDefaultMaxLeaves);

    /// Product tree over (order, cards) with an explicit staging: blocks[k-1]
    /// lists the stage blocks of level k (k = 1..p-1) as prefix lists. Labels
    /// are derived from the blocks, never supplied.
    static StagedTree from_staging(const LinearExtension& order, const StateSpace& s,
                                   const std::vector<std::vector<std::vector<OutcomePrefix>>>& blocks,
                                   std::uint64_t max_leaves = kDefaultMaxLeaves);

    /// Arbitrary edge-labelled tree (not necessarily uniform or stratified).
    /// Vertex 0 is the root; parent/value/label describe each vertex's
    /// incoming edge (entries for vertex 0 ignored). Intended for loaders and
    /// test fixtures; `validate` is the gatekeeper for axiom compliance.
    static StagedTree from_raw(const LinearExtension& order, const StateSpace& s,
                               std::vector<int> parent, std::vector<int> value,
                               std::vector<LabelId> label, LabelTable table);

    int vertex_count() const { return static_cast<int>(verts_.size()); }
    int edge_count() const { return vertex_count() - 1; }
    int root() const { return 0; }
    int var_count() const { return space_.var_count(); }

    int level_of(int v) const { return verts_[v].depth; }
    /// Vertices of level k, in construction (lexicographic-prefix) order.
    const std::vector<int>& level(int k) const { return levels_.at(k); }
    int level_count() const { return static_cast<int>(levels_.size()) - 1; }  // deepest level

    bool is_leaf(int v) const { return verts_[v].children.empty(); }
    int parent(int v) const { return verts_[v].parent; }
    int child_count(int v) const { return static_cast<int>(verts_[v].children.size()); }
    int child(int v, int i) const { return verts_[v].children[i]; }
    int child_value(int v, int i) const { return verts_[v].values[i]; }
    /// -1 when v has no child on that outcome.
    int child_by_value(int v, int value) const;
    LabelId edge_label(int v, int i) const { return verts_[v].labels[i]; }
    /// Sorted label ids of the out-edges of v.
    const std::vector<LabelId>& label_set(int v) const { return verts_[v].label_set; }
    /// Label on the edge v -> child with the given outcome; -1 when absent.
    LabelId label_by_value(int v, int value) const;

    OutcomePrefix prefix_of(int v) const;
    std::optional<int> find_vertex(const OutcomePrefix& prefix) const;
    std::string vertex_name(int v) const;

    int stage_of(int v) const { return stage_of_[v]; }
    int stage_count() const { return static_cast<int>(stages_.size()); }
    /// Vertices per stage, each sorted; stages ordered by first vertex id.
    const std::vector<std::vector<int>>& stages() const { return stages_; }
    /// Stage blocks of levels 1..p-1 as prefix lists (serialization form).
    std::vector<std::vector<std::vector<OutcomePrefix>>> staging_blocks() const;

    const LinearExtension& ordering() const { return order_; }
    const StateSpace& state_space() const { return space_; }
    /// Cardinality of the variable at 0-based ordering slot k, i.e. d_{pi_{k+1}}.
    int slot_card(int slot) const { return space_.card(order_.at(slot + 1)); }
    const LabelTable& labels() const { return labels_; }
    /// The DAG this tree was built from, when built by from_dag.
    const std::optional<Dag>& source_dag() const { return source_dag_; }
    /// True iff the tree is the full product tree over (order, cards).
    bool is_product_shape() const { return product_shape_; }

private:
    struct VertexRec {
        int parent = -1;
        int depth = 0;
        int in_value = -1;
        std::vector<int> children;      // ordered by outcome value
        std::vector<int> values;        // outcome per out-edge
        std::vector<LabelId> labels;    // label per out-edge
        std::vector<LabelId> label_set; // sorted
    };

    StagedTree() : order_(LinearExtension::identity(1)), space_({2}) {}

    static StagedTree build_product_skeleton(const LinearExtension& order, const StateSpace& s,
                                             std::uint64_t max_leaves);
    void finalize();  // label sets, stages, product-shape flag

    LinearExtension order_;
    StateSpace space_;
    std::vector<VertexRec> verts_;
    std::vector<std::vector<int>> levels_;
    LabelTable labels_;
    std::vector<int> stage_of_;
    std::vector<std::vector<int>> stages_;
    std::optional<Dag> source_dag_;
    bool product_shape_ = false;
};

struct ValidationIssue {
    int axiom;  // 1: duplicate label on a vertex; 2: overlapping unequal label
                // sets; 3: stored staging differs from the label-induced one
    int v = -1;
    int w = -1;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
};

/// Checks both staged-tree axioms plus the stage-partition cross-check.
/// Violations are report entries, not exceptions.
ValidationReport validate(const StagedTree& t);

bool is_uniform(const StagedTree& t);
bool is_stratified(const StagedTree& t);
bool is_compatibly_labeled(const StagedTree& t);

struct RecognizedDag {
    Dag dag;
    LinearExtension order;
};

/// Recovers (G, pi) when every level's staging is the fiber partition of a
/// coordinate projection; nullopt otherwise. Requires a valid, uniform,
/// stratified, compatibly labeled product tree.
std::optional<RecognizedDag> recognize_dag_staging(const StagedTree& t);

/// Stage-colored DOT rendering; singleton stages white.
std::string export_dot(const StagedTree& t, std::uint64_t max_leaves = 4096);

/// Interpolating polynomials of every vertex, bottom-up in one pass:
/// t(v) = sum over edges e in E(v) of theta(e) * t(child), t(leaf) = 1.
std::vector<Poly> interpolating_all(const StagedTree& t);
Poly interpolating_poly(const StagedTree& t, int v);
Poly interpolating_poly(const StagedTree& t, const OutcomePrefix& v);

}  // namespace stk

#endif
