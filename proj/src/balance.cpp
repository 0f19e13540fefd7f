#include "stk/balance.hpp"

#include <algorithm>
#include <string>

#include "stk/errors.hpp"

namespace stk {

namespace {

int child_by_label(const StagedTree& t, int v, LabelId label) {
    for (int i = 0; i < t.child_count(v); ++i)
        if (t.edge_label(v, i) == label) return t.child(v, i);
    return -1;
}

void require_same_stage(const StagedTree& t, int v, int w) {
    if (v < 0 || v >= t.vertex_count() || w < 0 || w >= t.vertex_count())
        throw PreconditionError("vertex id out of range");
    if (t.stage_of(v) != t.stage_of(w))
        throw PreconditionError("vertices " + t.vertex_name(v) + " and " + t.vertex_name(w) +
                                " are not in the same stage");
    if (t.label_set(v) != t.label_set(w))
        throw PreconditionError("same-stage vertices with unequal label sets: invalid staged tree");
}

// Checks one pair against precomputed interpolating polynomials. Appends the
// failing child pairs when `out` is given, otherwise stops at the first one.
bool balanced_pair_impl(const StagedTree& t, const std::vector<Poly>& tp, int v, int w,
                        std::vector<BalanceFailure>* out) {
    bool ok = true;
    for (int a = 0; a < t.child_count(v) && (ok || out); ++a)
        for (int b = a + 1; b < t.child_count(v) && (ok || out); ++b) {
            LabelId la = t.edge_label(v, a), lb = t.edge_label(v, b);
            int va = t.child(v, a), vb = t.child(v, b);
            int wa = child_by_label(t, w, la), wb = child_by_label(t, w, lb);
            if (tp[va] * tp[wb] == tp[wa] * tp[vb]) continue;
            ok = false;
            if (out)
                out->push_back({t.stage_of(v), t.level_of(v), std::min(v, w), std::max(v, w),
                                t.child_value(v, a), t.child_value(v, b)});
        }
    return ok;
}

int vertex_of_prefix(const StagedTree& t, const OutcomePrefix& x) {
    auto v = t.find_vertex(x);
    if (!v) throw PreconditionError("prefix is not a tree vertex");
    return *v;
}

}  // namespace

bool is_balanced_pair(const StagedTree& t, int v, int w) {
    require_same_stage(t, v, w);
    auto tp = interpolating_all(t);
    return balanced_pair_impl(t, tp, v, w, nullptr);
}

bool is_balanced_pair(const StagedTree& t, const OutcomePrefix& v, const OutcomePrefix& w) {
    return is_balanced_pair(t, vertex_of_prefix(t, v), vertex_of_prefix(t, w));
}

BalanceReport is_balanced(const StagedTree& t) {
    if (!validate(t).ok())
        throw PreconditionError("tree violates the staged-tree axioms; run validate");
    auto tp = interpolating_all(t);
    BalanceReport rep;
    for (const auto& stage : t.stages()) {
        if (t.is_leaf(stage[0])) continue;  // childless pairs are trivially balanced
        for (std::size_t a = 0; a < stage.size(); ++a)
            for (std::size_t b = a + 1; b < stage.size(); ++b)
                balanced_pair_impl(t, tp, stage[a], stage[b], &rep.failures);
    }
    rep.balanced = rep.failures.empty();
    return rep;
}

bool is_simple(const StagedTree& t) {
    if (!validate(t).ok())
        throw PreconditionError("tree violates the staged-tree axioms; run validate");
    auto tp = interpolating_all(t);
    for (const auto& stage : t.stages())
        for (std::size_t i = 1; i < stage.size(); ++i)
            if (!(tp[stage[i]] == tp[stage[0]])) return false;
    return true;
}

namespace {

LabelKey dag_label(const Dag& g, int var, int value, const std::vector<int>& assignment) {
    LabelKey key;
    key.var = var;
    key.value = value;
    for (int u : g.parents(var)) key.context.emplace_back(u, assignment[u - 1]);
    return key;
}

}  // namespace

std::pair<std::vector<int>, std::vector<int>> witness_bijection(
    const Dag& g, const LinearExtension& pi, const StateSpace& s, const OutcomePrefix& v,
    const OutcomePrefix& w, const std::vector<int>& y, const std::vector<int>& y_prime) {
    int p = g.node_count();
    if (!pi.is_identity())
        throw PreconditionError("witness construction assumes the identity ordering; relabel the DAG first");
    if (!is_linear_extension(g, pi))
        throw PreconditionError("identity is not a linear extension of the DAG");
    if (!is_perfect(g))
        throw PreconditionError("witness is only guaranteed for perfect DAGs");
    if (s.var_count() != p) throw PreconditionError("state space size mismatch");

    int i = static_cast<int>(v.size());
    if (static_cast<int>(w.size()) != i || i >= p)
        throw PreconditionError("v and w must be prefixes of equal level below p");
    int tail = p - i - 1;
    if (static_cast<int>(y.size()) != tail || static_cast<int>(y_prime.size()) != tail)
        throw PreconditionError("completions must cover variables i+2..p");
    for (int k = 0; k < i; ++k)
        if (v[k] < 0 || v[k] >= s.card(k + 1) || w[k] < 0 || w[k] >= s.card(k + 1))
            throw PreconditionError("prefix outcome out of range");
    for (int k = 0; k < tail; ++k)
        if (y[k] < 0 || y[k] >= s.card(i + 2 + k) || y_prime[k] < 0 ||
            y_prime[k] >= s.card(i + 2 + k))
            throw PreconditionError("completion outcome out of range");
    // same stage in T_G: prefixes agree on the parents of variable i+1
    for (int u : g.parents(i + 1))
        if (v[u - 1] != w[u - 1])
            throw PreconditionError("prefixes do not lie in the same stage");

    std::vector<int> z(tail), z_prime(tail);
    for (int k = 0; k < tail; ++k) {
        if (g.is_ancestor(i + 1, i + 2 + k)) {
            z[k] = y[k];
            z_prime[k] = y_prime[k];
        } else {
            z[k] = y_prime[k];
            z_prime[k] = y[k];
        }
    }

    // symbolic verification of the per-coordinate label-pair identity
    auto assemble = [&](const OutcomePrefix& head, int mid, const std::vector<int>& tail_vals) {
        std::vector<int> full(p);
        for (int k = 0; k < i; ++k) full[k] = head[k];
        full[i] = mid;
        for (int k = 0; k < tail; ++k) full[i + 1 + k] = tail_vals[k];
        return full;
    };
    int d = s.card(i + 1);
    for (int k = i + 2; k <= p; ++k) {
        for (int sv = 0; sv < d; ++sv)
            for (int rv = 0; rv < d; ++rv) {
                if (sv == rv) continue;
                auto l1 = dag_label(g, k, y[k - i - 2], assemble(v, sv, y));
                auto l2 = dag_label(g, k, y_prime[k - i - 2], assemble(w, rv, y_prime));
                auto r1 = dag_label(g, k, z[k - i - 2], assemble(w, sv, z));
                auto r2 = dag_label(g, k, z_prime[k - i - 2], assemble(v, rv, z_prime));
                bool match = (l1 == r1 && l2 == r2) || (l1 == r2 && l2 == r1);
                if (!match)
                    throw Error("witness identity failed at variable " + std::to_string(k) +
                                "; the DAG cannot be perfect");
            }
    }
    return {z, z_prime};
}

namespace {

// All root-to-leaf label vectors of the subtree below vertex x, each sorted.
void collect_paths(const StagedTree& t, int x, std::vector<LabelId>& cur,
                   std::vector<std::vector<LabelId>>& out) {
    if (t.is_leaf(x)) {
        auto sorted = cur;
        std::sort(sorted.begin(), sorted.end());
        out.push_back(std::move(sorted));
        return;
    }
    for (int i = 0; i < t.child_count(x); ++i) {
        cur.push_back(t.edge_label(x, i));
        collect_paths(t, t.child(x, i), cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<LabelId>> merged_products(const std::vector<std::vector<LabelId>>& lhs,
                                                  const std::vector<std::vector<LabelId>>& rhs) {
    std::vector<std::vector<LabelId>> out;
    out.reserve(lhs.size() * rhs.size());
    for (const auto& a : lhs)
        for (const auto& b : rhs) {
            std::vector<LabelId> m;
            m.reserve(a.size() + b.size());
            std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(m));
            out.push_back(std::move(m));
        }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

bool lemma_balance_bruteforce(const StagedTree& t, int v, int w, std::uint64_t pair_bound) {
    if (!t.source_dag())
        throw PreconditionError("the term-multiset oracle is only stated for DAG-built trees");
    require_same_stage(t, v, w);
    std::vector<std::vector<std::vector<LabelId>>> paths_v(t.child_count(v)),
        paths_w(t.child_count(v));
    for (int a = 0; a < t.child_count(v); ++a) {
        std::vector<LabelId> cur;
        collect_paths(t, t.child(v, a), cur, paths_v[a]);
        collect_paths(t, child_by_label(t, w, t.edge_label(v, a)), cur, paths_w[a]);
        std::uint64_t pairs = static_cast<std::uint64_t>(paths_v[a].size()) * paths_w[a].size();
        if (pairs > pair_bound)
            throw BoundError("completion-pair count " + std::to_string(pairs) +
                             " exceeds the oracle bound " + std::to_string(pair_bound));
    }
    for (int a = 0; a < t.child_count(v); ++a)
        for (int b = a + 1; b < t.child_count(v); ++b)
            if (merged_products(paths_v[a], paths_w[b]) != merged_products(paths_w[a], paths_v[b]))
                return false;
    return true;
}

bool lemma_balance_bruteforce(const StagedTree& t, const OutcomePrefix& v, const OutcomePrefix& w,
                              std::uint64_t pair_bound) {
    return lemma_balance_bruteforce(t, vertex_of_prefix(t, v), vertex_of_prefix(t, w), pair_bound);
}

}  // namespace stk
