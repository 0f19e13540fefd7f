#ifndef STK_GRAPH_HPP
#define STK_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace stk {

/// Directed acyclic graph on nodes 1..p. Immutable after construction;
/// the constructor rejects self-loops, duplicate edges, out-of-range
/// endpoints and directed cycles.
class Dag {
public:
    Dag(int p, std::vector<std::pair<int, int>> edges);

    int node_count() const { return p_; }
    /// Edges sorted lexicographically as (source, target).
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    bool has_edge(int u, int v) const;
    /// Edge in either direction.
    bool adjacent(int u, int v) const;

    std::vector<int> parents(int v) const;
    std::vector<int> children(int v) const;
    /// Transitive closure of the parent relation, excluding v. Sorted.
    std::vector<int> ancestors(int v) const;
    /// Transitive closure of the child relation, excluding v. Sorted.
    std::vector<int> descendants(int v) const;

    bool is_ancestor(int u, int v) const;  // u in ancestors(v)

    bool operator==(const Dag& o) const { return p_ == o.p_ && edges_ == o.edges_; }
    bool operator<(const Dag& o) const {
        return p_ != o.p_ ? p_ < o.p_ : edges_ < o.edges_;
    }

private:
    void check_node(int v) const;

    int p_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> parents_;   // parents_[v-1], sorted
    std::vector<std::vector<int>> children_;  // children_[v-1], sorted
};

/// Simple undirected graph on nodes 1..p, edges stored as (u < v).
class UndirectedGraph {
public:
    UndirectedGraph(int p, std::vector<std::pair<int, int>> edges);

    int node_count() const { return p_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    bool adjacent(int u, int v) const;
    const std::vector<int>& neighbors(int v) const;

private:
    int p_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
};

/// A permutation pi_1..pi_p of 1..p, used as the causal ordering of a tree.
class LinearExtension {
public:
    explicit LinearExtension(std::vector<int> order);
    static LinearExtension identity(int p);

    int size() const { return static_cast<int>(order_.size()); }
    /// pi_k, 1-based k.
    int at(int k) const { return order_[k - 1]; }
    /// Position of node in the order (1-based), i.e. pi^{-1}.
    int position(int node) const { return pos_[node - 1]; }
    bool is_identity() const;
    const std::vector<int>& order() const { return order_; }

    bool operator==(const LinearExtension& o) const { return order_ == o.order_; }

private:
    std::vector<int> order_;
    std::vector<int> pos_;
};

/// True iff every edge u->v satisfies position(u) < position(v).
bool is_linear_extension(const Dag& g, const LinearExtension& pi);

/// All linear extensions in lexicographic order. Guarded because the count
/// can reach p!.
std::vector<LinearExtension> enumerate_linear_extensions(const Dag& g, int max_nodes = 8);

/// Forget edge orientations.
UndirectedGraph skeleton(const Dag& g);

/// Maximum-cardinality search followed by a perfect-elimination-ordering
/// check; true iff the graph is chordal.
bool is_chordal(const UndirectedGraph& ug);

/// Returns a perfect elimination ordering if one exists (i.e. iff chordal).
std::optional<std::vector<int>> perfect_elimination_ordering(const UndirectedGraph& ug);

/// True iff every parent set induces a complete subDAG.
bool is_perfect(const Dag& g);

struct Collider {
    int i, l, j;  // i -> l <- j with i < j and i,j non-adjacent
    bool operator==(const Collider& o) const { return i == o.i && l == o.l && j == o.j; }
};

/// Lexicographically least collider triple, or nullopt iff the DAG is perfect.
std::optional<Collider> find_collider(const Dag& g);

/// All labeled DAGs on p nodes in deterministic order. Generated by orienting
/// edge subsets along every permutation and de-duplicating.
std::vector<Dag> enumerate_dags(int p, int max_nodes = 5);

/// Random DAG: sample a random permutation, keep each unordered pair with
/// probability edge_prob, orient along the permutation. Reproducible per seed.
Dag random_dag(int p, double edge_prob, std::uint64_t seed);

/// Relabel nodes so that pi becomes the identity extension: node pi_k -> k.
Dag relabel_to_identity(const Dag& g, const LinearExtension& pi);

/// Maximal cliques by Bron-Kerbosch with pivoting; each clique sorted and the
/// list sorted lexicographically. Requires p <= 64.
std::vector<std::vector<int>> maximal_cliques(const UndirectedGraph& ug);

}  // namespace stk

#endif
