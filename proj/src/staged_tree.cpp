#include "stk/staged_tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "stk/errors.hpp"

namespace stk {

namespace {

std::string prefix_to_string(const OutcomePrefix& x) {
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(x[i]);
    }
    return s + ")";
}

}  // namespace

StateSpace::StateSpace(std::vector<int> cards) : cards_(std::move(cards)) {
    if (cards_.empty()) throw ParseError("state space needs at least one variable");
    for (std::size_t i = 0; i < cards_.size(); ++i)
        if (cards_[i] < 2)
            throw ParseError("cardinality of variable " + std::to_string(i + 1) +
                             " must be >= 2, got " + std::to_string(cards_[i]));
}

StateSpace StateSpace::uniform(int p, int d) {
    return StateSpace(std::vector<int>(static_cast<std::size_t>(p), d));
}

int StateSpace::card(int var) const {
    if (var < 1 || var > var_count())
        throw PreconditionError("variable " + std::to_string(var) + " out of range");
    return cards_[var - 1];
}

std::uint64_t StateSpace::total_outcomes() const {
    std::uint64_t n = 1;
    for (int d : cards_) {
        if (n > (1ull << 62) / static_cast<std::uint64_t>(d))
            throw BoundError("state space too large");
        n *= static_cast<std::uint64_t>(d);
    }
    return n;
}

LabelId LabelTable::intern(const LabelKey& k) {
    auto it = ids_.find(k);
    if (it != ids_.end()) return it->second;
    LabelId id = static_cast<LabelId>(keys_.size());
    ids_.emplace(k, id);
    keys_.push_back(k);
    return id;
}

std::string LabelTable::name(LabelId id) const {
    const LabelKey& k = keys_.at(id);
    std::string s = "f(x" + std::to_string(k.var) + "=" + std::to_string(k.value);
    if (!k.context.empty()) {
        s += "|";
        for (std::size_t i = 0; i < k.context.size(); ++i) {
            if (i) s += ",";
            s += "x" + std::to_string(k.context[i].first) + "=" +
                 std::to_string(k.context[i].second);
        }
    } else if (k.stage_tag >= 0) {
        s += "|s" + std::to_string(k.stage_tag);
    }
    return s + ")";
}

StagedTree StagedTree::build_product_skeleton(const LinearExtension& order, const StateSpace& s,
                                              std::uint64_t max_leaves) {
    if (order.size() != s.var_count())
        throw PreconditionError("ordering and state space disagree on the variable count");
    std::uint64_t leaves = s.total_outcomes();
    if (leaves > max_leaves)
        throw BoundError("tree would have " + std::to_string(leaves) + " leaves, bound is " +
                         std::to_string(max_leaves));

    StagedTree t;
    t.order_ = order;
    t.space_ = s;
    int p = s.var_count();
    t.verts_.clear();
    t.verts_.push_back(VertexRec{});
    t.levels_.assign(static_cast<std::size_t>(p) + 1, {});
    t.levels_[0] = {0};
    for (int k = 0; k < p; ++k) {
        int d = s.card(order.at(k + 1));
        for (int v : t.levels_[k]) {
            for (int c = 0; c < d; ++c) {
                int id = static_cast<int>(t.verts_.size());
                VertexRec rec;
                rec.parent = v;
                rec.depth = k + 1;
                rec.in_value = c;
                t.verts_.push_back(std::move(rec));
                t.verts_[v].children.push_back(id);
                t.verts_[v].values.push_back(c);
                t.levels_[k + 1].push_back(id);
            }
        }
    }
    return t;
}

StagedTree StagedTree::from_dag(const Dag& g, const LinearExtension& pi, const StateSpace& s,
                                std::uint64_t max_leaves) {
    if (g.node_count() != s.var_count())
        throw PreconditionError("DAG and state space disagree on the variable count");
    if (!is_linear_extension(g, pi))
        throw PreconditionError("ordering is not a linear extension of the DAG");

    StagedTree t = build_product_skeleton(pi, s, max_leaves);
    int p = s.var_count();
    for (int k = 0; k < p; ++k) {
        int var = pi.at(k + 1);
        auto pa = g.parents(var);
        for (int v : t.levels_[k]) {
            OutcomePrefix x = t.prefix_of(v);
            std::vector<std::pair<int, int>> ctx;
            for (int u : pa) ctx.emplace_back(u, x[pi.position(u) - 1]);
            for (std::size_t i = 0; i < t.verts_[v].children.size(); ++i) {
                LabelKey key;
                key.var = var;
                key.value = t.verts_[v].values[i];
                key.context = ctx;
                t.verts_[v].labels.push_back(t.labels_.intern(key));
            }
        }
    }
    t.source_dag_ = g;
    t.finalize();
    return t;
}

StagedTree StagedTree::from_staging(const LinearExtension& order, const StateSpace& s,
                                    const std::vector<std::vector<std::vector<OutcomePrefix>>>& blocks,
                                    std::uint64_t max_leaves) {
    int p = s.var_count();
    if (static_cast<int>(blocks.size()) != std::max(p - 1, 0))
        throw ParseError("staging must list levels 1.." + std::to_string(p - 1) + ", got " +
                         std::to_string(blocks.size()) + " levels");

    StagedTree t = build_product_skeleton(order, s, max_leaves);

    // block id per vertex; the root forms its own implicit block 0
    std::vector<int> block_of(t.verts_.size(), -1);
    block_of[0] = 0;
    int next_block = 1;
    for (int k = 1; k <= p - 1; ++k) {
        std::vector<bool> covered(t.levels_[k].size(), false);
        for (const auto& block : blocks[k - 1]) {
            if (block.empty()) throw ParseError("empty stage block at level " + std::to_string(k));
            for (const auto& prefix : block) {
                if (static_cast<int>(prefix.size()) != k)
                    throw ParseError("prefix " + prefix_to_string(prefix) + " is not at level " +
                                     std::to_string(k));
                auto vid = t.find_vertex(prefix);
                if (!vid)
                    throw ParseError("prefix " + prefix_to_string(prefix) +
                                     " is outside the state space");
                std::size_t rank = static_cast<std::size_t>(
                    std::find(t.levels_[k].begin(), t.levels_[k].end(), *vid) -
                    t.levels_[k].begin());
                if (covered[rank])
                    throw ParseError("prefix " + prefix_to_string(prefix) +
                                     " appears in two stage blocks");
                covered[rank] = true;
                block_of[*vid] = next_block;
            }
            ++next_block;
        }
        for (std::size_t r = 0; r < covered.size(); ++r)
            if (!covered[r])
                throw ParseError("level " + std::to_string(k) + " prefix " +
                                 prefix_to_string(t.prefix_of(t.levels_[k][r])) +
                                 " missing from the staging");
    }

    for (int k = 0; k < p; ++k) {
        int var = order.at(k + 1);
        for (int v : t.levels_[k]) {
            for (std::size_t i = 0; i < t.verts_[v].children.size(); ++i) {
                LabelKey key;
                key.var = var;
                key.value = t.verts_[v].values[i];
                key.stage_tag = block_of[v];
                t.verts_[v].labels.push_back(t.labels_.intern(key));
            }
        }
    }
    t.finalize();

    // cross-check: the label-induced partition must reproduce the input blocks
    std::map<int, int> stage_to_block, block_to_stage;
    for (int v = 0; v < t.vertex_count(); ++v) {
        if (t.is_leaf(v)) continue;
        auto [a, fa] = stage_to_block.emplace(t.stage_of_[v], block_of[v]);
        auto [b, fb] = block_to_stage.emplace(block_of[v], t.stage_of_[v]);
        if (a->second != block_of[v] || b->second != t.stage_of_[v])
            throw ParseError("staging blocks are inconsistent with the derived labels");
    }
    return t;
}

StagedTree StagedTree::from_raw(const LinearExtension& order, const StateSpace& s,
                                std::vector<int> parent, std::vector<int> value,
                                std::vector<LabelId> label, LabelTable table) {
    int p = s.var_count();
    if (order.size() != p)
        throw PreconditionError("ordering and state space disagree on the variable count");
    std::size_t n = parent.size();
    if (n == 0 || value.size() != n || label.size() != n)
        throw ParseError("raw tree arrays must be nonempty and of equal length");
    if (parent[0] != -1) throw ParseError("vertex 0 must be the root (parent -1)");

    StagedTree t;
    t.order_ = order;
    t.space_ = s;
    t.verts_.assign(n, VertexRec{});
    int max_depth = 0;
    for (std::size_t v = 1; v < n; ++v) {
        if (parent[v] < 0 || parent[v] >= static_cast<int>(v))
            throw ParseError("vertex " + std::to_string(v) +
                             " must have a parent with a smaller id");
        int d = t.verts_[parent[v]].depth + 1;
        if (d > p)
            throw ParseError("vertex " + std::to_string(v) + " is deeper than the variable count");
        int var = order.at(d);
        if (value[v] < 0 || value[v] >= s.card(var))
            throw ParseError("vertex " + std::to_string(v) + " outcome " +
                             std::to_string(value[v]) + " out of range for variable " +
                             std::to_string(var));
        if (label[v] < 0 || label[v] >= table.size())
            throw ParseError("vertex " + std::to_string(v) + " has an unknown label id");
        t.verts_[v].parent = parent[v];
        t.verts_[v].depth = d;
        t.verts_[v].in_value = value[v];
        max_depth = std::max(max_depth, d);
    }
    t.levels_.assign(static_cast<std::size_t>(max_depth) + 1, {});
    for (std::size_t v = 0; v < n; ++v) t.levels_[t.verts_[v].depth].push_back(static_cast<int>(v));
    for (std::size_t v = 1; v < n; ++v) {
        VertexRec& par = t.verts_[parent[v]];
        par.children.push_back(static_cast<int>(v));
        par.values.push_back(value[v]);
        par.labels.push_back(label[v]);
    }
    // order out-edges by outcome value; duplicate outcomes make prefixes ambiguous
    for (auto& rec : t.verts_) {
        std::vector<std::size_t> idx(rec.children.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return rec.values[a] < rec.values[b]; });
        VertexRec sorted = rec;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            sorted.children[i] = rec.children[idx[i]];
            sorted.values[i] = rec.values[idx[i]];
            sorted.labels[i] = rec.labels[idx[i]];
        }
        for (std::size_t i = 1; i < sorted.values.size(); ++i)
            if (sorted.values[i] == sorted.values[i - 1])
                throw ParseError("two sibling edges share outcome " +
                                 std::to_string(sorted.values[i]));
        rec = std::move(sorted);
    }
    t.labels_ = std::move(table);
    t.finalize();
    return t;
}

void StagedTree::finalize() {
    for (auto& rec : verts_) {
        rec.label_set = rec.labels;
        std::sort(rec.label_set.begin(), rec.label_set.end());
    }
    stage_of_.assign(verts_.size(), -1);
    stages_.clear();
    std::map<std::vector<LabelId>, int> stage_ids;
    for (int v = 0; v < vertex_count(); ++v) {
        auto [it, fresh] = stage_ids.emplace(verts_[v].label_set, stage_count());
        if (fresh) stages_.emplace_back();
        stage_of_[v] = it->second;
        stages_[it->second].push_back(v);
    }

    product_shape_ = level_count() == var_count();
    if (product_shape_) {
        for (int k = 0; k < var_count() && product_shape_; ++k) {
            int d = slot_card(k);
            for (int v : levels_[k]) {
                if (child_count(v) != d) {
                    product_shape_ = false;
                    break;
                }
                for (int i = 0; i < d; ++i)
                    if (verts_[v].values[i] != i) {
                        product_shape_ = false;
                        break;
                    }
            }
        }
    }
}

int StagedTree::child_by_value(int v, int value) const {
    const auto& vals = verts_[v].values;
    auto it = std::lower_bound(vals.begin(), vals.end(), value);
    if (it == vals.end() || *it != value) return -1;
    return verts_[v].children[it - vals.begin()];
}

LabelId StagedTree::label_by_value(int v, int value) const {
    const auto& vals = verts_[v].values;
    auto it = std::lower_bound(vals.begin(), vals.end(), value);
    if (it == vals.end() || *it != value) return -1;
    return verts_[v].labels[it - vals.begin()];
}

OutcomePrefix StagedTree::prefix_of(int v) const {
    OutcomePrefix x;
    for (int u = v; u != 0; u = verts_[u].parent) x.push_back(verts_[u].in_value);
    std::reverse(x.begin(), x.end());
    return x;
}

std::optional<int> StagedTree::find_vertex(const OutcomePrefix& prefix) const {
    int v = 0;
    for (int c : prefix) {
        v = child_by_value(v, c);
        if (v < 0) return std::nullopt;
    }
    return v;
}

std::string StagedTree::vertex_name(int v) const {
    if (v == 0) return "r";
    OutcomePrefix x = prefix_of(v);
    bool compact = true;
    for (int d : space_.cards())
        if (d > 10) compact = false;
    std::string s;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!compact && i) s += ".";
        s += std::to_string(x[i]);
    }
    return s;
}

std::vector<std::vector<std::vector<OutcomePrefix>>> StagedTree::staging_blocks() const {
    int p = var_count();
    std::vector<std::vector<std::vector<OutcomePrefix>>> out(std::max(p - 1, 0));
    for (int k = 1; k <= p - 1 && k < static_cast<int>(levels_.size()); ++k) {
        std::map<int, std::size_t> block_of_stage;  // stage id -> block index in this level
        for (int v : levels_[k]) {
            auto [it, fresh] = block_of_stage.emplace(stage_of_[v], out[k - 1].size());
            if (fresh) out[k - 1].emplace_back();
            out[k - 1][it->second].push_back(prefix_of(v));
        }
    }
    return out;
}

ValidationReport StagedTree_validate_impl(const StagedTree& t) {
    ValidationReport rep;
    // axiom 1: out-edge labels of a vertex are pairwise distinct
    for (int v = 0; v < t.vertex_count(); ++v) {
        const auto& ls = t.label_set(v);
        for (std::size_t i = 1; i < ls.size(); ++i)
            if (ls[i] == ls[i - 1]) {
                rep.issues.push_back({1, v, -1,
                                      "vertex " + t.vertex_name(v) + " repeats label " +
                                          t.labels().name(ls[i])});
                break;
            }
    }
    // axiom 2: label sets equal or disjoint. Each label must occur in exactly
    // one distinct label-set class; a label shared by two different classes
    // witnesses an overlapping unequal pair.
    std::map<std::vector<LabelId>, int> cls;  // label set -> representative vertex
    std::map<LabelId, int> owner;             // label -> representative vertex of its class
    for (int v = 0; v < t.vertex_count(); ++v) {
        auto [it, fresh] = cls.emplace(t.label_set(v), v);
        if (!fresh) continue;
        const auto& ls = t.label_set(v);
        for (std::size_t i = 0; i < ls.size(); ++i) {
            if (i > 0 && ls[i] == ls[i - 1]) continue;  // axiom-1 territory
            LabelId id = ls[i];
            auto [oit, ofresh] = owner.emplace(id, v);
            if (!ofresh)
                rep.issues.push_back({2, oit->second, v,
                                      "vertices " + t.vertex_name(oit->second) + " and " +
                                          t.vertex_name(v) +
                                          " have overlapping but unequal label sets (share " +
                                          t.labels().name(id) + ")"});
        }
    }
    // stored staging must match the label-induced partition (always true for
    // trees built in-process; guards against future deserialization bugs)
    for (int v = 0; v < t.vertex_count(); ++v) {
        int rep_v = t.stages()[t.stage_of(v)][0];
        if (t.label_set(v) != t.label_set(rep_v)) {
            rep.issues.push_back({3, rep_v, v, "stored staging disagrees with labels"});
            return rep;
        }
    }
    return rep;
}

ValidationReport validate(const StagedTree& t) { return StagedTree_validate_impl(t); }

bool is_uniform(const StagedTree& t) {
    for (int k = 0; k <= t.level_count(); ++k) {
        const auto& lev = t.level(k);
        for (std::size_t i = 1; i < lev.size(); ++i)
            if (t.child_count(lev[i]) != t.child_count(lev[0])) return false;
    }
    return true;
}

bool is_stratified(const StagedTree& t) {
    int p = t.var_count();
    for (int v = 0; v < t.vertex_count(); ++v)
        if (t.is_leaf(v) && t.level_of(v) != p) return false;
    for (const auto& stage : t.stages())
        for (std::size_t i = 1; i < stage.size(); ++i)
            if (t.level_of(stage[i]) != t.level_of(stage[0])) return false;
    return true;
}

bool is_compatibly_labeled(const StagedTree& t) {
    for (const auto& stage : t.stages()) {
        int v = stage[0];
        for (std::size_t i = 1; i < stage.size(); ++i) {
            int w = stage[i];
            if (t.child_count(v) != t.child_count(w)) return false;
            for (int a = 0; a < t.child_count(v); ++a) {
                int c = t.child_value(v, a);
                if (t.label_by_value(w, c) != t.edge_label(v, a)) return false;
            }
        }
    }
    return true;
}

std::optional<RecognizedDag> recognize_dag_staging(const StagedTree& t) {
    if (!validate(t).ok()) throw PreconditionError("tree violates the staged-tree axioms");
    if (!t.is_product_shape() || !is_uniform(t) || !is_stratified(t) || !is_compatibly_labeled(t))
        throw PreconditionError(
            "recognition requires a uniform, stratified, compatibly labeled product tree");

    int p = t.var_count();
    const LinearExtension& pi = t.ordering();
    std::vector<std::pair<int, int>> edges;
    for (int k = 0; k < p; ++k) {
        const auto& lev = t.level(k);
        // prefix of the vertex at rank r in level k is the mixed-radix digits of r
        std::vector<int> radix(k);
        for (int j = 0; j < k; ++j) radix[j] = t.slot_card(j);
        std::vector<std::uint64_t> stride(k, 1);
        for (int j = k - 2; j >= 0; --j)
            stride[j] = stride[j + 1] * static_cast<std::uint64_t>(radix[j + 1]);

        // candidate projection coordinates: slots where changing the value can
        // change the stage
        std::vector<int> proj;
        for (int j = 0; j < k; ++j) {
            bool matters = false;
            for (std::size_t r = 0; r < lev.size() && !matters; ++r) {
                int digit = static_cast<int>((r / stride[j]) % static_cast<std::uint64_t>(radix[j]));
                for (int a = 0; a < radix[j] && !matters; ++a) {
                    if (a == digit) continue;
                    std::size_t r2 = static_cast<std::size_t>(
                        static_cast<long long>(r) +
                        static_cast<long long>(a - digit) * static_cast<long long>(stride[j]));
                    if (t.stage_of(lev[r]) != t.stage_of(lev[r2])) matters = true;
                }
            }
            if (matters) proj.push_back(j);
        }
        // verify: staging == fiber partition of the projection onto proj
        std::map<std::vector<int>, int> stage_of_key;
        std::map<int, std::vector<int>> key_of_stage;
        for (std::size_t r = 0; r < lev.size(); ++r) {
            std::vector<int> key;
            for (int j : proj)
                key.push_back(static_cast<int>((r / stride[j]) % static_cast<std::uint64_t>(radix[j])));
            int st = t.stage_of(lev[r]);
            auto [it, fresh] = stage_of_key.emplace(key, st);
            if (!fresh && it->second != st) return std::nullopt;
            auto [it2, fresh2] = key_of_stage.emplace(st, key);
            if (!fresh2 && it2->second != key) return std::nullopt;
        }
        for (int j : proj) edges.emplace_back(pi.at(j + 1), pi.at(k + 1));
    }
    return RecognizedDag{Dag(p, std::move(edges)), pi};
}

namespace {

std::string hsv_hex(double h, double s, double v) {
    double r = 0, g = 0, b = 0;
    int i = static_cast<int>(h * 6.0) % 6;
    double f = h * 6.0 - std::floor(h * 6.0);
    double q1 = v * (1 - s), q2 = v * (1 - f * s), q3 = v * (1 - (1 - f) * s);
    switch (i) {
        case 0: r = v; g = q3; b = q1; break;
        case 1: r = q2; g = v; b = q1; break;
        case 2: r = q1; g = v; b = q3; break;
        case 3: r = q1; g = q2; b = v; break;
        case 4: r = q3; g = q1; b = v; break;
        default: r = v; g = q1; b = q2; break;
    }
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(r * 255 + 0.5),
                  static_cast<int>(g * 255 + 0.5), static_cast<int>(b * 255 + 0.5));
    return buf;
}

}  // namespace

std::string export_dot(const StagedTree& t, std::uint64_t max_leaves) {
    std::uint64_t leaves = 0;
    for (int v = 0; v < t.vertex_count(); ++v)
        if (t.is_leaf(v)) ++leaves;
    if (leaves > max_leaves)
        throw BoundError("DOT export limited to " + std::to_string(max_leaves) + " leaves");

    // color by stage discovery order; singleton stages stay white
    std::vector<std::string> color(t.stage_count(), "white");
    int colored = 0;
    for (int s = 0; s < t.stage_count(); ++s)
        if (t.stages()[s].size() > 1)
            color[s] = hsv_hex(std::fmod(0.618033988749895 * colored++, 1.0), 0.45, 0.92);

    std::string out = "digraph staged_tree {\n  rankdir=LR;\n  node [shape=circle, style=filled, fontsize=10];\n";
    for (int v = 0; v < t.vertex_count(); ++v) {
        out += "  n" + std::to_string(v) + " [label=\"" + t.vertex_name(v) + "\", fillcolor=\"" +
               color[t.stage_of(v)] + "\"];\n";
    }
    for (int v = 0; v < t.vertex_count(); ++v)
        for (int i = 0; i < t.child_count(v); ++i)
            out += "  n" + std::to_string(v) + " -> n" + std::to_string(t.child(v, i)) +
                   " [label=\"" + std::to_string(t.child_value(v, i)) + "\"];\n";
    out += "}\n";
    return out;
}

std::vector<Poly> interpolating_all(const StagedTree& t) {
    std::vector<Poly> tp(t.vertex_count());
    // children always carry larger ids, so reverse id order is bottom-up
    for (int v = t.vertex_count() - 1; v >= 0; --v) {
        if (t.is_leaf(v)) {
            tp[v] = Poly::constant(1);
            continue;
        }
        Poly sum;
        for (int i = 0; i < t.child_count(v); ++i)
            sum += Poly::variable(t.edge_label(v, i)) * tp[t.child(v, i)];
        tp[v] = std::move(sum);
    }
    return tp;
}

namespace {

Poly interp_rec(const StagedTree& t, int v, std::map<int, Poly>& memo) {
    auto it = memo.find(v);
    if (it != memo.end()) return it->second;
    Poly result;
    if (t.is_leaf(v)) {
        result = Poly::constant(1);
    } else {
        for (int i = 0; i < t.child_count(v); ++i)
            result += Poly::variable(t.edge_label(v, i)) * interp_rec(t, t.child(v, i), memo);
    }
    memo.emplace(v, result);
    return result;
}

}  // namespace

Poly interpolating_poly(const StagedTree& t, int v) {
    if (v < 0 || v >= t.vertex_count())
        throw PreconditionError("vertex id " + std::to_string(v) + " out of range");
    std::map<int, Poly> memo;
    return interp_rec(t, v, memo);
}

Poly interpolating_poly(const StagedTree& t, const OutcomePrefix& v) {
    auto vid = t.find_vertex(v);
    if (!vid) throw PreconditionError("prefix " + prefix_to_string(v) + " is not a tree vertex");
    return interpolating_poly(t, *vid);
}

}  // namespace stk
