#ifndef AAM_CHEMIO_MOLECULE_BUILDER_HPP
#define AAM_CHEMIO_MOLECULE_BUILDER_HPP

// Turns an atom/bond table into an extended molecule graph: lone pairs become
// loops, charges and radicals hang off their special vertices, and each
// aromatic complex gets one special vertex whose edge weights are the
// per-atom pi-electron contributions.

#include <numeric>
#include <optional>
#include <vector>

#include "aam/elements.hpp"
#include "aam/errors.hpp"
#include "aam/molgraph.hpp"

namespace aam::chemio {

struct AtomDesc {
    int element = 6;
    int charge = 0;
    std::optional<int> radicals;
    std::optional<int> lone_pairs;
    bool aromatic = false;
};

struct BondDesc {
    int a = 0;
    int b = 0;
    int order = 1;
    bool aromatic = false;
};

namespace detail {

class DisjointSets {
public:
    explicit DisjointSets(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    int find(int x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<int> parent_;
};

// Pi electrons an aromatic atom donates, given its non-bonding electron count.
inline int pi_contribution(int free_electrons) {
    if (free_electrons <= 0) return 0;
    return free_electrons % 2 == 1 ? 1 : 2;
}

} // namespace detail

/// Builds the graph. `aromatic_groups` lists atom sets forming aromatic
/// complexes; sets sharing atoms are merged. Atom vertices keep their table
/// order, followed by aromatic, charge and radical vertices.
inline MoleculeGraph build_molecule(const std::vector<AtomDesc>& atoms, const std::vector<BondDesc>& bonds,
                                    const std::vector<std::vector<int>>& aromatic_groups) {
    const int n = static_cast<int>(atoms.size());
    std::vector<int> sigma(n, 0);
    for (const auto& b : bonds) {
        if (b.a < 0 || b.b < 0 || b.a >= n || b.b >= n) throw schema_error("bond references unknown atom");
        if (b.a == b.b) throw schema_error("bond from an atom to itself");
        if (b.aromatic && b.order != 1) throw schema_error("aromatic bonds must have order 1");
        if (b.order < 1 || b.order > 3) throw schema_error("bond order must be 1, 2 or 3");
        sigma[b.a] += b.order;
        sigma[b.b] += b.order;
    }

    detail::DisjointSets complexes(n);
    std::vector<char> in_complex(n, 0);
    for (const auto& group : aromatic_groups) {
        for (int a : group) {
            if (a < 0 || a >= n) throw schema_error("aromatic ring references unknown atom");
            in_complex[a] = 1;
            complexes.unite(group.front(), a);
        }
    }

    std::vector<int> pi(n, 0), radicals(n, 0), lone_pairs(n, 0);
    for (int i = 0; i < n; ++i) {
        const auto& a = atoms[i];
        const auto valence = group_valence_electrons(a.element);
        if (!valence) {
            // No valence data: only what the caller states explicitly.
            lone_pairs[i] = a.lone_pairs.value_or(0);
            radicals[i] = a.radicals.value_or(0);
            if (lone_pairs[i] < 0 || radicals[i] < 0) throw valence_error("negative electron count", i);
            continue;
        }
        const int free = *valence - a.charge - sigma[i];
        if (in_complex[i]) {
            pi[i] = a.lone_pairs ? free - 2 * *a.lone_pairs - a.radicals.value_or(0)
                                 : detail::pi_contribution(free);
            if (pi[i] < 0) throw valence_error("negative pi-electron count", i);
        }
        const int rest = free - pi[i];
        if (a.lone_pairs) {
            lone_pairs[i] = *a.lone_pairs;
            radicals[i] = a.radicals.value_or(rest - 2 * lone_pairs[i]);
        } else {
            radicals[i] = a.radicals.value_or(rest % 2 != 0 ? 1 : 0);
            if ((rest - radicals[i]) % 2 != 0) throw valence_error("odd non-bonding electron count", i);
            lone_pairs[i] = (rest - radicals[i]) / 2;
        }
        if (lone_pairs[i] < 0 || radicals[i] < 0)
            throw valence_error("valence exceeded: negative lone-pair count", i);
    }

    std::vector<VertexLabel> labels;
    labels.reserve(n + 2);
    for (const auto& a : atoms) labels.push_back(VertexLabel::atom(a.element));

    std::vector<Edge> edges;
    for (const auto& b : bonds)
        edges.push_back({b.a, b.b, b.order, b.aromatic ? BondLabel::Aromatic : BondLabel::Plain});
    for (int i = 0; i < n; ++i)
        if (lone_pairs[i] > 0) edges.push_back({i, i, lone_pairs[i]});

    std::vector<int> complex_vertex(n, -1);
    for (int i = 0; i < n; ++i) {
        if (!in_complex[i]) continue;
        const int root = complexes.find(i);
        if (complex_vertex[root] < 0) {
            complex_vertex[root] = static_cast<int>(labels.size());
            labels.push_back(VertexLabel::aromatic());
        }
        if (pi[i] > 0) edges.push_back({i, complex_vertex[root], pi[i]});
    }
    if (std::any_of(atoms.begin(), atoms.end(), [](const AtomDesc& a) { return a.charge != 0; })) {
        const int c = static_cast<int>(labels.size());
        labels.push_back(VertexLabel::charge());
        for (int i = 0; i < n; ++i)
            if (atoms[i].charge != 0) edges.push_back({i, c, atoms[i].charge});
    }
    if (std::any_of(radicals.begin(), radicals.end(), [](int r) { return r != 0; })) {
        const int r = static_cast<int>(labels.size());
        labels.push_back(VertexLabel::radical());
        for (int i = 0; i < n; ++i)
            if (radicals[i] != 0) edges.push_back({i, r, radicals[i]});
    }
    return MoleculeGraph(std::move(labels), std::move(edges));
}

} // namespace aam::chemio

#endif
