#ifndef AAM_MOLGRAPH_HPP
#define AAM_MOLGRAPH_HPP

// Extended molecule graphs: atoms plus special vertices for charge, radicals
// and aromatic complexes. Bonds carry an integer weight (electron pairs);
// lone pairs are loops. Every unordered vertex pair has a weight, absent
// pairs weigh zero.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "aam/elements.hpp"
#include "aam/errors.hpp"
#include "aam/isomorphism.hpp"

namespace aam {

enum class LabelKind : std::uint8_t { Atom, Charge, Radical, Aromatic };

struct VertexLabel {
    LabelKind kind = LabelKind::Atom;
    std::uint8_t element = 0; ///< atomic number; 0 for special vertices

    static VertexLabel atom(int z) {
        if (z < 1 || z >= static_cast<int>(element_symbols.size()))
            throw usage_error("atomic number out of range: " + std::to_string(z));
        return {LabelKind::Atom, static_cast<std::uint8_t>(z)};
    }
    static VertexLabel atom(std::string_view symbol) {
        auto z = atomic_number(canonical_symbol(symbol));
        if (!z) throw usage_error("unknown element symbol '" + std::string(symbol) + "'");
        return atom(*z);
    }
    static constexpr VertexLabel charge() { return {LabelKind::Charge, 0}; }
    static constexpr VertexLabel radical() { return {LabelKind::Radical, 0}; }
    static constexpr VertexLabel aromatic() { return {LabelKind::Aromatic, 0}; }

    bool is_atom() const { return kind == LabelKind::Atom; }
    bool is_special() const { return kind != LabelKind::Atom; }

    std::string symbol() const {
        switch (kind) {
        case LabelKind::Atom: return std::string(element_symbols[element]);
        case LabelKind::Charge: return "<charge>";
        case LabelKind::Radical: return "<radical>";
        case LabelKind::Aromatic: return "<aromatic>";
        }
        return "?";
    }

    /// Dense integer code, distinct for distinct labels.
    std::uint32_t code() const { return static_cast<std::uint32_t>(kind) << 8 | element; }

    auto operator<=>(const VertexLabel&) const = default;
};

enum class BondLabel : std::uint8_t { Plain, Aromatic };

struct Edge {
    int u = 0;
    int v = 0;
    int weight = 0;
    BondLabel label = BondLabel::Plain;
};

struct Neighbor {
    int vertex;
    int weight;
    BondLabel label;
};

class MoleculeGraph {
public:
    MoleculeGraph() = default;

    /// Validates every structural invariant; throws usage_error on violation.
    /// Zero-weight edges are dropped.
    MoleculeGraph(std::vector<VertexLabel> labels, std::vector<Edge> edges)
        : labels_(std::move(labels)) {
        const int n = size();
        weights_.assign(static_cast<std::size_t>(n) * n, 0);
        bond_labels_.assign(static_cast<std::size_t>(n) * n, BondLabel::Plain);
        adjacency_.assign(n, {});
        loops_.assign(n, 0);

        for (int v = 0; v < n; ++v) {
            switch (labels_[v].kind) {
            case LabelKind::Charge:
                if (charge_) throw usage_error("more than one charge vertex");
                charge_ = v;
                break;
            case LabelKind::Radical:
                if (radical_) throw usage_error("more than one radical vertex");
                radical_ = v;
                break;
            case LabelKind::Aromatic: aromatic_.push_back(v); break;
            case LabelKind::Atom: break;
            }
        }

        for (Edge e : edges) {
            if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
                throw usage_error("edge endpoint out of range");
            if (e.weight == 0) continue;
            if (e.u > e.v) std::swap(e.u, e.v);
            check_edge(e);
            auto& slot = weights_[index(e.u, e.v)];
            if (slot != 0) throw usage_error("duplicate edge");
            slot = e.weight;
            weights_[index(e.v, e.u)] = e.weight;
            bond_labels_[index(e.u, e.v)] = bond_labels_[index(e.v, e.u)] = e.label;
            if (e.u == e.v) {
                loops_[e.u] = e.weight;
            } else {
                adjacency_[e.u].push_back({e.v, e.weight, e.label});
                adjacency_[e.v].push_back({e.u, e.weight, e.label});
            }
            edges_.push_back(e);
        }
        for (auto& adj : adjacency_)
            std::sort(adj.begin(), adj.end(),
                      [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
        std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
            return std::tie(a.u, a.v) < std::tie(b.u, b.v);
        });
    }

    int size() const { return static_cast<int>(labels_.size()); }
    const VertexLabel& label(int v) const { return labels_.at(v); }
    std::span<const VertexLabel> labels() const { return labels_; }

    /// w(e) over all unordered pairs, zero for non-edges.
    int weight(int u, int v) const { return weights_[index(u, v)]; }
    BondLabel bond_label(int u, int v) const { return bond_labels_[index(u, v)]; }
    int loop(int v) const { return loops_[v]; }

    /// Non-loop neighbours sorted by vertex index.
    std::span<const Neighbor> neighbors(int v) const { return adjacency_[v]; }
    /// Stored edges with u <= v, loops included, sorted.
    const std::vector<Edge>& edges() const { return edges_; }

    std::optional<int> charge_vertex() const { return charge_; }
    std::optional<int> radical_vertex() const { return radical_; }
    const std::vector<int>& aromatic_vertices() const { return aromatic_; }

    std::size_t atom_count() const {
        return static_cast<std::size_t>(
            std::count_if(labels_.begin(), labels_.end(), [](const VertexLabel& l) { return l.is_atom(); }));
    }

    /// Sum of incident weights; loops are counted twice.
    int weighted_degree(int v) const {
        if (v < 0 || v >= size()) throw usage_error("vertex index out of range: " + std::to_string(v));
        int d = 2 * loops_[v];
        for (const auto& nb : adjacency_[v]) d += nb.weight;
        return d;
    }

    /// Sum of charge-edge weights (net charge of the graph).
    int total_charge() const { return charge_ ? weighted_degree(*charge_) : 0; }
    int total_radicals() const { return radical_ ? weighted_degree(*radical_) : 0; }

    /// Charge on atom v (weight of its edge to the charge vertex).
    int atom_charge(int v) const { return charge_ ? weight(v, *charge_) : 0; }
    int atom_radicals(int v) const { return radical_ ? weight(v, *radical_) : 0; }

private:
    std::size_t index(int u, int v) const { return static_cast<std::size_t>(u) * size() + v; }

    void check_edge(const Edge& e) const {
        const auto& a = labels_[e.u];
        const auto& b = labels_[e.v];
        if (e.u == e.v) {
            if (a.kind == LabelKind::Charge || a.kind == LabelKind::Radical)
                throw usage_error("charge and radical vertices carry no loops");
            if (e.weight < 1) throw usage_error("loop weight must be positive");
            if (e.label != BondLabel::Plain) throw usage_error("loops cannot be aromatic bonds");
            return;
        }
        if (a.is_special() && b.is_special()) throw usage_error("edge joins two special vertices");
        const auto special = a.is_special() ? a.kind : b.kind;
        if (a.is_atom() && b.is_atom()) {
            if (e.weight < 1 || e.weight > 3) throw usage_error("bond weight must be 1, 2 or 3");
            if (e.label == BondLabel::Aromatic && e.weight != 1)
                throw usage_error("aromatic bonds have weight 1");
            return;
        }
        if (e.label != BondLabel::Plain) throw usage_error("special-vertex edges are not aromatic bonds");
        if (special != LabelKind::Charge && e.weight < 1)
            throw usage_error("radical and aromatic edge weights must be positive");
    }

    std::vector<VertexLabel> labels_;
    std::vector<int> weights_;
    std::vector<BondLabel> bond_labels_;
    std::vector<std::vector<Neighbor>> adjacency_;
    std::vector<int> loops_;
    std::vector<Edge> edges_;
    std::optional<int> charge_, radical_;
    std::vector<int> aromatic_;
};

/// Weight view over every unordered vertex pair of a graph.
class EdgeUniverse {
public:
    explicit EdgeUniverse(const MoleculeGraph& g) : g_(&g) {}
    int operator()(int u, int v) const { return g_->weight(u, v); }
    int size() const { return g_->size(); }

    template <class F>
    void for_each_pair(F&& f) const {
        for (int u = 0; u < g_->size(); ++u)
            for (int v = u; v < g_->size(); ++v) f(u, v, g_->weight(u, v));
    }

private:
    const MoleculeGraph* g_;
};

inline int weighted_degree(const MoleculeGraph& g, int v) { return g.weighted_degree(v); }

struct UnionResult {
    MoleculeGraph graph;
    /// provenance[k][local] = vertex of input k in the union.
    std::vector<std::vector<int>> provenance;
};

/// Disjoint union; charge vertices of all inputs merge into one (likewise
/// radical vertices), placed after all other vertices.
inline UnionResult disjoint_union(std::span<const MoleculeGraph> graphs) {
    if (graphs.empty()) throw usage_error("disjoint_union of an empty list");
    UnionResult out;
    std::vector<VertexLabel> labels;
    bool any_charge = false, any_radical = false;
    for (const auto& g : graphs) {
        std::vector<int> local(g.size(), -1);
        for (int v = 0; v < g.size(); ++v) {
            const auto k = g.label(v).kind;
            if (k == LabelKind::Charge) { any_charge = true; continue; }
            if (k == LabelKind::Radical) { any_radical = true; continue; }
            local[v] = static_cast<int>(labels.size());
            labels.push_back(g.label(v));
        }
        out.provenance.push_back(std::move(local));
    }
    const int charge = any_charge ? static_cast<int>(labels.size()) : -1;
    if (any_charge) labels.push_back(VertexLabel::charge());
    const int radical = any_radical ? static_cast<int>(labels.size()) : -1;
    if (any_radical) labels.push_back(VertexLabel::radical());

    std::vector<Edge> edges;
    for (std::size_t k = 0; k < graphs.size(); ++k) {
        const auto& g = graphs[k];
        auto& local = out.provenance[k];
        if (g.charge_vertex()) local[*g.charge_vertex()] = charge;
        if (g.radical_vertex()) local[*g.radical_vertex()] = radical;
        for (const auto& e : g.edges()) edges.push_back({local[e.u], local[e.v], e.weight, e.label});
    }
    // Merged special vertices may now see the same atom twice only if an input
    // listed it twice, which the MoleculeGraph constructor already rejects.
    out.graph = MoleculeGraph(std::move(labels), std::move(edges));
    return out;
}

inline UnionResult disjoint_union(std::initializer_list<MoleculeGraph> graphs) {
    std::vector<MoleculeGraph> v(graphs);
    return disjoint_union(std::span<const MoleculeGraph>(v));
}

inline std::int64_t bond_code(int weight, BondLabel label) {
    return static_cast<std::int64_t>(weight) * 4 + static_cast<std::int64_t>(label);
}

/// Colour = label and lone-pair loop; edge label = (weight, bond label).
inline LabeledGraph to_labeled_graph(const MoleculeGraph& g) {
    LabeledGraph lg(g.size());
    for (int v = 0; v < g.size(); ++v)
        lg.set_color(v, hash_combine(g.label(v).code(), static_cast<std::uint64_t>(g.loop(v))));
    for (const auto& e : g.edges())
        if (e.u != e.v) lg.set_edge(e.u, e.v, bond_code(e.weight, e.label));
    return lg;
}

/// Bijection preserving vertex labels, bond labels and weights, if any.
inline std::optional<std::vector<int>> are_isomorphic(const MoleculeGraph& a, const MoleculeGraph& b) {
    if (a.size() != b.size() || a.edges().size() != b.edges().size()) return std::nullopt;
    return find_isomorphism(to_labeled_graph(a), to_labeled_graph(b));
}

} // namespace aam

#endif
