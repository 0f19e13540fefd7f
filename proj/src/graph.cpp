#include "stk/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <tuple>

#include "stk/errors.hpp"
#include "stk/rng.hpp"

namespace stk {

namespace {

// Kahn's algorithm; empty result means a directed cycle.
bool topological_sort(int p, const std::vector<std::vector<int>>& children,
                      const std::vector<std::vector<int>>& parents, std::vector<int>* out) {
    std::vector<int> indeg(p);
    for (int v = 0; v < p; ++v) indeg[v] = static_cast<int>(parents[v].size());
    std::vector<int> queue;
    for (int v = 0; v < p; ++v)
        if (indeg[v] == 0) queue.push_back(v);
    std::vector<int> order;
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        order.push_back(v + 1);
        for (int c : children[v])
            if (--indeg[c - 1] == 0) queue.push_back(c - 1);
    }
    if (static_cast<int>(order.size()) != p) return false;
    if (out) *out = std::move(order);
    return true;
}

std::vector<int> reachable_from(int v, int p, const std::vector<std::vector<int>>& next) {
    std::vector<bool> seen(p + 1, false);
    std::vector<int> stack = next[v - 1];
    std::vector<int> out;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        if (seen[u]) continue;
        seen[u] = true;
        out.push_back(u);
        for (int w : next[u - 1])
            if (!seen[w]) stack.push_back(w);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

Dag::Dag(int p, std::vector<std::pair<int, int>> edges) : p_(p) {
    if (p < 1) throw ParseError("node count must be >= 1, got " + std::to_string(p));
    parents_.resize(p);
    children_.resize(p);
    std::sort(edges.begin(), edges.end());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto [u, v] = edges[i];
        if (u < 1 || u > p || v < 1 || v > p)
            throw ParseError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                             ") out of range 1.." + std::to_string(p));
        if (u == v) throw ParseError("self-loop at node " + std::to_string(u));
        if (i > 0 && edges[i] == edges[i - 1])
            throw ParseError("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
        children_[u - 1].push_back(v);
        parents_[v - 1].push_back(u);
    }
    edges_ = std::move(edges);
    for (auto& vec : parents_) std::sort(vec.begin(), vec.end());
    for (auto& vec : children_) std::sort(vec.begin(), vec.end());
    if (!topological_sort(p_, children_, parents_, nullptr))
        throw ParseError("edge set contains a directed cycle");
}

void Dag::check_node(int v) const {
    if (v < 1 || v > p_)
        throw PreconditionError("node " + std::to_string(v) + " out of range 1.." + std::to_string(p_));
}

bool Dag::has_edge(int u, int v) const {
    check_node(u);
    check_node(v);
    const auto& ch = children_[u - 1];
    return std::binary_search(ch.begin(), ch.end(), v);
}

bool Dag::adjacent(int u, int v) const { return has_edge(u, v) || has_edge(v, u); }

std::vector<int> Dag::parents(int v) const {
    check_node(v);
    return parents_[v - 1];
}

std::vector<int> Dag::children(int v) const {
    check_node(v);
    return children_[v - 1];
}

std::vector<int> Dag::ancestors(int v) const {
    check_node(v);
    return reachable_from(v, p_, parents_);
}

std::vector<int> Dag::descendants(int v) const {
    check_node(v);
    return reachable_from(v, p_, children_);
}

bool Dag::is_ancestor(int u, int v) const {
    check_node(u);
    auto an = ancestors(v);
    return std::binary_search(an.begin(), an.end(), u);
}

UndirectedGraph::UndirectedGraph(int p, std::vector<std::pair<int, int>> edges) : p_(p) {
    if (p < 1) throw ParseError("node count must be >= 1, got " + std::to_string(p));
    adj_.resize(p);
    for (auto& [u, v] : edges) {
        if (u < 1 || u > p || v < 1 || v > p)
            throw ParseError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                             ") out of range 1.." + std::to_string(p));
        if (u == v) throw ParseError("self-loop at node " + std::to_string(u));
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (i > 0 && edges[i] == edges[i - 1])
            throw ParseError("duplicate edge (" + std::to_string(edges[i].first) + "," +
                             std::to_string(edges[i].second) + ")");
        adj_[edges[i].first - 1].push_back(edges[i].second);
        adj_[edges[i].second - 1].push_back(edges[i].first);
    }
    edges_ = std::move(edges);
    for (auto& vec : adj_) std::sort(vec.begin(), vec.end());
}

bool UndirectedGraph::adjacent(int u, int v) const {
    if (u < 1 || u > p_ || v < 1 || v > p_)
        throw PreconditionError("node out of range 1.." + std::to_string(p_));
    const auto& n = adj_[u - 1];
    return std::binary_search(n.begin(), n.end(), v);
}

const std::vector<int>& UndirectedGraph::neighbors(int v) const {
    if (v < 1 || v > p_)
        throw PreconditionError("node " + std::to_string(v) + " out of range 1.." + std::to_string(p_));
    return adj_[v - 1];
}

LinearExtension::LinearExtension(std::vector<int> order) : order_(std::move(order)) {
    int p = static_cast<int>(order_.size());
    if (p < 1) throw ParseError("empty ordering");
    pos_.assign(p, 0);
    for (int k = 1; k <= p; ++k) {
        int node = order_[k - 1];
        if (node < 1 || node > p)
            throw ParseError("ordering entry " + std::to_string(node) + " out of range 1.." +
                             std::to_string(p));
        if (pos_[node - 1] != 0)
            throw ParseError("ordering repeats node " + std::to_string(node));
        pos_[node - 1] = k;
    }
}

LinearExtension LinearExtension::identity(int p) {
    std::vector<int> o(p);
    std::iota(o.begin(), o.end(), 1);
    return LinearExtension(std::move(o));
}

bool LinearExtension::is_identity() const {
    for (int k = 1; k <= size(); ++k)
        if (order_[k - 1] != k) return false;
    return true;
}

bool is_linear_extension(const Dag& g, const LinearExtension& pi) {
    if (pi.size() != g.node_count())
        throw PreconditionError("ordering has " + std::to_string(pi.size()) + " entries, DAG has " +
                                std::to_string(g.node_count()) + " nodes");
    for (auto [u, v] : g.edges())
        if (pi.position(u) >= pi.position(v)) return false;
    return true;
}

namespace {

void extensions_rec(const Dag& g, std::vector<int>& placed, std::vector<bool>& used,
                    std::vector<LinearExtension>& out) {
    int p = g.node_count();
    if (static_cast<int>(placed.size()) == p) {
        out.emplace_back(placed);
        return;
    }
    for (int v = 1; v <= p; ++v) {
        if (used[v]) continue;
        bool ready = true;
        for (int u : g.parents(v))
            if (!used[u]) {
                ready = false;
                break;
            }
        if (!ready) continue;
        used[v] = true;
        placed.push_back(v);
        extensions_rec(g, placed, used, out);
        placed.pop_back();
        used[v] = false;
    }
}

}  // namespace

std::vector<LinearExtension> enumerate_linear_extensions(const Dag& g, int max_nodes) {
    if (g.node_count() > max_nodes)
        throw BoundError("extension enumeration limited to " + std::to_string(max_nodes) +
                         " nodes, got " + std::to_string(g.node_count()));
    std::vector<LinearExtension> out;
    std::vector<int> placed;
    std::vector<bool> used(g.node_count() + 1, false);
    extensions_rec(g, placed, used, out);
    return out;
}

UndirectedGraph skeleton(const Dag& g) {
    std::vector<std::pair<int, int>> edges;
    for (auto [u, v] : g.edges()) edges.emplace_back(std::min(u, v), std::max(u, v));
    // Opposite orientations of the same pair collapse to one undirected edge.
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return UndirectedGraph(g.node_count(), std::move(edges));
}

std::optional<std::vector<int>> perfect_elimination_ordering(const UndirectedGraph& ug) {
    int p = ug.node_count();
    // Maximum-cardinality search; ties broken by smallest node for determinism.
    std::vector<int> weight(p + 1, 0);
    std::vector<bool> numbered(p + 1, false);
    std::vector<int> visit;  // MCS visit order
    for (int step = 0; step < p; ++step) {
        int best = -1;
        for (int v = 1; v <= p; ++v)
            if (!numbered[v] && (best == -1 || weight[v] > weight[best])) best = v;
        numbered[best] = true;
        visit.push_back(best);
        for (int u : ug.neighbors(best))
            if (!numbered[u]) ++weight[u];
    }
    // Reversed MCS order is a perfect elimination ordering iff chordal.
    std::vector<int> peo(visit.rbegin(), visit.rend());
    std::vector<int> pos(p + 1, 0);
    for (int i = 0; i < p; ++i) pos[peo[i]] = i;
    for (int i = 0; i < p; ++i) {
        std::vector<int> later;
        for (int u : ug.neighbors(peo[i]))
            if (pos[u] > i) later.push_back(u);
        for (std::size_t a = 0; a < later.size(); ++a)
            for (std::size_t b = a + 1; b < later.size(); ++b)
                if (!ug.adjacent(later[a], later[b])) return std::nullopt;
    }
    return peo;
}

bool is_chordal(const UndirectedGraph& ug) { return perfect_elimination_ordering(ug).has_value(); }

bool is_perfect(const Dag& g) {
    for (int k = 1; k <= g.node_count(); ++k) {
        auto pa = g.parents(k);
        for (std::size_t a = 0; a < pa.size(); ++a)
            for (std::size_t b = a + 1; b < pa.size(); ++b)
                if (!g.adjacent(pa[a], pa[b])) return false;
    }
    return true;
}

std::optional<Collider> find_collider(const Dag& g) {
    std::optional<Collider> best;
    for (int l = 1; l <= g.node_count(); ++l) {
        auto pa = g.parents(l);
        for (std::size_t a = 0; a < pa.size(); ++a)
            for (std::size_t b = a + 1; b < pa.size(); ++b) {
                if (g.adjacent(pa[a], pa[b])) continue;
                Collider c{pa[a], l, pa[b]};
                if (!best || std::tie(c.i, c.l, c.j) < std::tie(best->i, best->l, best->j)) best = c;
            }
    }
    return best;
}

std::vector<Dag> enumerate_dags(int p, int max_nodes) {
    if (p > max_nodes)
        throw BoundError("exhaustive DAG enumeration limited to " + std::to_string(max_nodes) +
                         " nodes, got " + std::to_string(p));
    if (p < 1) throw PreconditionError("node count must be >= 1");
    std::vector<std::pair<int, int>> pairs;
    for (int u = 1; u <= p; ++u)
        for (int v = u + 1; v <= p; ++v) pairs.emplace_back(u, v);
    int m = static_cast<int>(pairs.size());

    std::vector<int> perm(p);
    std::iota(perm.begin(), perm.end(), 1);
    std::set<std::vector<std::pair<int, int>>> seen;
    do {
        std::vector<int> pos(p + 1);
        for (int k = 0; k < p; ++k) pos[perm[k]] = k;
        for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
            std::vector<std::pair<int, int>> edges;
            for (int e = 0; e < m; ++e)
                if (mask & (1ull << e)) {
                    auto [u, v] = pairs[e];
                    if (pos[u] < pos[v])
                        edges.emplace_back(u, v);
                    else
                        edges.emplace_back(v, u);
                }
            std::sort(edges.begin(), edges.end());
            seen.insert(std::move(edges));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::vector<Dag> out;
    out.reserve(seen.size());
    for (const auto& edges : seen) out.emplace_back(p, edges);
    return out;
}

Dag random_dag(int p, double edge_prob, std::uint64_t seed) {
    if (p < 1) throw PreconditionError("node count must be >= 1");
    if (edge_prob < 0.0 || edge_prob > 1.0)
        throw PreconditionError("edge probability must lie in [0,1]");
    Rng rng(seed);
    std::vector<int> perm(p);
    std::iota(perm.begin(), perm.end(), 1);
    rng.shuffle(perm);
    std::vector<int> pos(p + 1);
    for (int k = 0; k < p; ++k) pos[perm[k]] = k;
    std::vector<std::pair<int, int>> edges;
    for (int u = 1; u <= p; ++u)
        for (int v = u + 1; v <= p; ++v)
            if (rng.uniform01() < edge_prob) {
                if (pos[u] < pos[v])
                    edges.emplace_back(u, v);
                else
                    edges.emplace_back(v, u);
            }
    return Dag(p, std::move(edges));
}

Dag relabel_to_identity(const Dag& g, const LinearExtension& pi) {
    if (!is_linear_extension(g, pi))
        throw PreconditionError("ordering is not a linear extension of the DAG");
    std::vector<std::pair<int, int>> edges;
    for (auto [u, v] : g.edges()) edges.emplace_back(pi.position(u), pi.position(v));
    return Dag(g.node_count(), std::move(edges));
}

namespace {

using Mask = std::uint64_t;

void bron_kerbosch(Mask r, Mask p, Mask x, const std::vector<Mask>& adj,
                   std::vector<Mask>& cliques) {
    if (p == 0 && x == 0) {
        cliques.push_back(r);
        return;
    }
    // Pivot: vertex of P|X with most neighbours in P.
    Mask px = p | x;
    int pivot = -1, best = -1;
    for (int v = 0; v < static_cast<int>(adj.size()); ++v)
        if (px & (1ull << v)) {
            int cnt = __builtin_popcountll(p & adj[v]);
            if (cnt > best) {
                best = cnt;
                pivot = v;
            }
        }
    Mask candidates = p & ~adj[pivot];
    for (int v = 0; v < static_cast<int>(adj.size()); ++v) {
        Mask bit = 1ull << v;
        if (!(candidates & bit)) continue;
        bron_kerbosch(r | bit, p & adj[v], x & adj[v], adj, cliques);
        p &= ~bit;
        x |= bit;
    }
}

}  // namespace

std::vector<std::vector<int>> maximal_cliques(const UndirectedGraph& ug) {
    int p = ug.node_count();
    if (p > 64) throw BoundError("clique enumeration limited to 64 nodes");
    std::vector<Mask> adj(p, 0);
    for (auto [u, v] : ug.edges()) {
        adj[u - 1] |= 1ull << (v - 1);
        adj[v - 1] |= 1ull << (u - 1);
    }
    std::vector<Mask> cliques;
    bron_kerbosch(0, p == 64 ? ~0ull : (1ull << p) - 1, 0, adj, cliques);
    std::vector<std::vector<int>> out;
    for (Mask m : cliques) {
        std::vector<int> c;
        for (int v = 0; v < p; ++v)
            if (m & (1ull << v)) c.push_back(v + 1);
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace stk
