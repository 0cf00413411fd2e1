#ifndef AAM_INSTANCE_HPP
#define AAM_INSTANCE_HPP

// A balanced reaction as a pair of equally sized molecule graphs G1 (educts)
// and G2 (products), each the disjoint union of its side's molecules.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "aam/chemio/reaction_io.hpp"
#include "aam/errors.hpp"
#include "aam/molgraph.hpp"

namespace aam {

/// Where a vertex of G1 or G2 came from. `molecule` and `copy` are -1 for the
/// merged charge/radical vertices and for padding vertices.
struct VertexOrigin {
    int molecule = -1;
    int copy = -1;
    int local = -1;
};

struct ReactionInstance {
    MoleculeGraph g1;
    MoleculeGraph g2;
    std::vector<VertexOrigin> origin1;
    std::vector<VertexOrigin> origin2;

    int size() const { return g1.size(); }
};

namespace detail {

struct Side {
    MoleculeGraph graph;
    std::vector<VertexOrigin> origin;
};

inline Side expand_side(const std::vector<chemio::MoleculeEntry>& entries) {
    std::vector<MoleculeGraph> copies;
    std::vector<std::pair<int, int>> source;
    for (int m = 0; m < static_cast<int>(entries.size()); ++m)
        for (int c = 0; c < entries[m].count; ++c) {
            copies.push_back(entries[m].graph);
            source.emplace_back(m, c);
        }
    auto u = disjoint_union(std::span<const MoleculeGraph>(copies));
    Side side{std::move(u.graph), {}};
    side.origin.assign(side.graph.size(), VertexOrigin{});
    for (std::size_t k = 0; k < copies.size(); ++k)
        for (int local = 0; local < copies[k].size(); ++local) {
            const int v = u.provenance[k][local];
            if (copies[k].label(local).kind == LabelKind::Charge || copies[k].label(local).kind == LabelKind::Radical)
                continue;
            side.origin[v] = {source[k].first, source[k].second, local};
        }
    return side;
}

inline void check_balance(const MoleculeGraph& a, const MoleculeGraph& b) {
    std::map<VertexLabel, int> la, lb;
    for (int v = 0; v < a.size(); ++v)
        if (a.label(v).is_atom()) ++la[a.label(v)];
    for (int v = 0; v < b.size(); ++v)
        if (b.label(v).is_atom()) ++lb[b.label(v)];
    if (la != lb) throw unbalanced_error("educt and product atoms differ");
    if (a.total_charge() != b.total_charge())
        throw unbalanced_error("total charge differs: " + std::to_string(a.total_charge()) + " vs " +
                               std::to_string(b.total_charge()));
    if (a.total_radicals() != b.total_radicals())
        throw unbalanced_error("radical count differs: " + std::to_string(a.total_radicals()) + " vs " +
                               std::to_string(b.total_radicals()));
}

// Appends isolated special vertices and aromatic loops; `aromatic_degree`
// is the common weighted degree all aromatic vertices are raised to.
inline MoleculeGraph pad(const MoleculeGraph& g, std::vector<VertexOrigin>& origin, bool add_charge,
                         bool add_radical, int add_aromatic, int aromatic_degree) {
    std::vector<VertexLabel> labels(g.labels().begin(), g.labels().end());
    std::vector<Edge> edges(g.edges().begin(), g.edges().end());
    auto append = [&](VertexLabel l) {
        labels.push_back(l);
        origin.push_back({});
    };
    if (add_charge) append(VertexLabel::charge());
    if (add_radical) append(VertexLabel::radical());
    for (int k = 0; k < add_aromatic; ++k) append(VertexLabel::aromatic());
    for (int v = 0; v < static_cast<int>(labels.size()); ++v) {
        if (labels[v].kind != LabelKind::Aromatic) continue;
        const int degree = v < g.size() ? g.weighted_degree(v) : 0;
        const int loop = (aromatic_degree - degree) / 2;
        if (loop <= 0) continue;
        const int existing = v < g.size() ? g.loop(v) : 0;
        if (existing) {
            auto it = std::find_if(edges.begin(), edges.end(), [&](const Edge& e) { return e.u == v && e.v == v; });
            it->weight += loop;
        } else {
            edges.push_back({v, v, loop});
        }
    }
    return MoleculeGraph(std::move(labels), std::move(edges));
}

} // namespace detail

/// Builds the instance from two already assembled sides. Missing charge and
/// radical vertices are added as isolated vertices; both sides get the same
/// number of aromatic vertices, each padded with a loop so that all share one
/// weighted degree. Throws unbalanced_error.
inline ReactionInstance make_instance(const MoleculeGraph& g1, const MoleculeGraph& g2,
                                      std::vector<VertexOrigin> origin1 = {},
                                      std::vector<VertexOrigin> origin2 = {}) {
    detail::check_balance(g1, g2);
    if (origin1.empty()) {
        origin1.resize(g1.size());
        for (int v = 0; v < g1.size(); ++v) origin1[v] = {0, 0, v};
    }
    if (origin2.empty()) {
        origin2.resize(g2.size());
        for (int v = 0; v < g2.size(); ++v) origin2[v] = {0, 0, v};
    }
    const int ar1 = static_cast<int>(g1.aromatic_vertices().size());
    const int ar2 = static_cast<int>(g2.aromatic_vertices().size());
    int degree = 0;
    for (int v : g1.aromatic_vertices()) degree = std::max(degree, g1.weighted_degree(v));
    for (int v : g2.aromatic_vertices()) degree = std::max(degree, g2.weighted_degree(v));
    if (degree % 2 != 0) ++degree;
    ReactionInstance inst;
    inst.g1 = detail::pad(g1, origin1, !g1.charge_vertex() && g2.charge_vertex(),
                          !g1.radical_vertex() && g2.radical_vertex(), std::max(0, ar2 - ar1), degree);
    inst.g2 = detail::pad(g2, origin2, !g2.charge_vertex() && g1.charge_vertex(),
                          !g2.radical_vertex() && g1.radical_vertex(), std::max(0, ar1 - ar2), degree);
    inst.origin1 = std::move(origin1);
    inst.origin2 = std::move(origin2);
    return inst;
}

/// Expands multiplicities and builds the instance. Throws unbalanced_error.
inline ReactionInstance make_instance(const chemio::ReactionDocument& doc) {
    auto s1 = detail::expand_side(doc.educts);
    auto s2 = detail::expand_side(doc.products);
    return make_instance(s1.graph, s2.graph, std::move(s1.origin), std::move(s2.origin));
}

} // namespace aam

#endif
