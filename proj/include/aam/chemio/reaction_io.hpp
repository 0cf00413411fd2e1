#ifndef AAM_CHEMIO_REACTION_IO_HPP
#define AAM_CHEMIO_REACTION_IO_HPP

// Reaction documents in JSON: molecules are SMILES-subset strings or explicit
// atom/bond lists. Serialization always writes explicit lists.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "aam/chemio/molecule_builder.hpp"
#include "aam/chemio/smiles.hpp"
#include "aam/errors.hpp"
#include "aam/molgraph.hpp"

namespace aam::chemio {

struct MoleculeEntry {
    MoleculeGraph graph;
    int count = 1;
};

struct ReactionDocument {
    std::optional<std::string> id;
    std::vector<MoleculeEntry> educts;
    std::vector<MoleculeEntry> products;
    /// Set by the parser; solvers re-check.
    bool balanced = false;
};

namespace detail {

using nlohmann::json;

inline int get_int(const json& j, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) throw schema_error(std::string("'") + key + "' must be an integer");
    return j[key].get<int>();
}

inline std::optional<int> get_optional_int(const json& j, const char* key) {
    if (!j.contains(key)) return std::nullopt;
    return get_int(j, key, 0);
}

inline void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const char* where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw schema_error(std::string("unknown key '") + it.key() + "' in " + where);
}

inline MoleculeGraph explicit_molecule(const json& spec) {
    if (!spec["atoms"].is_array()) throw schema_error("'atoms' must be an array");
    std::vector<AtomDesc> atoms;
    for (const auto& a : spec["atoms"]) {
        if (!a.is_object()) throw schema_error("atom entries must be objects");
        check_keys(a, {"element", "charge", "radicals", "lonePairs"}, "atom");
        if (!a.contains("element") || !a["element"].is_string()) throw schema_error("atom needs an 'element' string");
        auto z = atomic_number(canonical_symbol(a["element"].get<std::string>()));
        if (!z) throw schema_error("unknown element '" + a["element"].get<std::string>() + "'");
        AtomDesc d;
        d.element = *z;
        d.charge = get_int(a, "charge", 0);
        d.radicals = get_optional_int(a, "radicals");
        d.lone_pairs = get_optional_int(a, "lonePairs");
        if (d.radicals && *d.radicals < 0) throw schema_error("'radicals' must be nonnegative");
        if (d.lone_pairs && *d.lone_pairs < 0) throw schema_error("'lonePairs' must be nonnegative");
        atoms.push_back(d);
    }
    if (atoms.empty()) throw schema_error("molecule has no atoms");
    std::vector<BondDesc> bonds;
    if (spec.contains("bonds")) {
        if (!spec["bonds"].is_array()) throw schema_error("'bonds' must be an array");
        for (const auto& b : spec["bonds"]) {
            if (!b.is_object()) throw schema_error("bond entries must be objects");
            check_keys(b, {"a", "b", "order", "aromatic"}, "bond");
            if (!b.contains("a") || !b.contains("b") || !b.contains("order"))
                throw schema_error("bond needs 'a', 'b' and 'order'");
            BondDesc d{get_int(b, "a", 0), get_int(b, "b", 0), get_int(b, "order", 1), false};
            if (b.contains("aromatic")) {
                if (!b["aromatic"].is_boolean()) throw schema_error("'aromatic' must be a boolean");
                d.aromatic = b["aromatic"].get<bool>();
            }
            bonds.push_back(d);
        }
    }
    std::vector<std::vector<int>> rings;
    if (spec.contains("aromaticRings")) {
        if (!spec["aromaticRings"].is_array()) throw schema_error("'aromaticRings' must be an array");
        for (const auto& r : spec["aromaticRings"]) {
            if (!r.is_array() || r.empty()) throw schema_error("aromatic rings must be nonempty index arrays");
            std::vector<int> ring;
            for (const auto& x : r) {
                if (!x.is_number_integer()) throw schema_error("aromatic ring entries must be integers");
                ring.push_back(x.get<int>());
            }
            rings.push_back(std::move(ring));
        }
    }
    return build_molecule(atoms, bonds, rings);
}

inline MoleculeEntry parse_molspec(const json& spec) {
    if (!spec.is_object()) throw schema_error("molecule entries must be objects");
    MoleculeEntry entry;
    entry.count = get_int(spec, "count", 1);
    if (entry.count < 1) throw schema_error("'count' must be at least 1");
    const bool has_smiles = spec.contains("smiles");
    const bool has_atoms = spec.contains("atoms");
    if (has_smiles == has_atoms) throw schema_error("molecule needs exactly one of 'smiles' or 'atoms'");
    if (has_smiles) {
        check_keys(spec, {"smiles", "count"}, "molecule");
        if (!spec["smiles"].is_string()) throw schema_error("'smiles' must be a string");
        entry.graph = parse_smiles_subset(spec["smiles"].get<std::string>());
    } else {
        check_keys(spec, {"atoms", "bonds", "aromaticRings", "count"}, "molecule");
        entry.graph = explicit_molecule(spec);
    }
    return entry;
}

inline std::vector<MoleculeEntry> parse_side(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array()) throw schema_error(std::string("'") + key + "' must be an array");
    if (j[key].empty()) throw schema_error(std::string("'") + key + "' must not be empty");
    std::vector<MoleculeEntry> side;
    for (const auto& m : j[key]) side.push_back(parse_molspec(m));
    return side;
}

struct SideTotals {
    std::map<VertexLabel, long> labels;
    long charge = 0;
    long radicals = 0;
};

inline SideTotals side_totals(const std::vector<MoleculeEntry>& side) {
    SideTotals t;
    for (const auto& m : side) {
        for (int v = 0; v < m.graph.size(); ++v)
            if (m.graph.label(v).is_atom()) t.labels[m.graph.label(v)] += m.count;
        t.charge += static_cast<long>(m.graph.total_charge()) * m.count;
        t.radicals += static_cast<long>(m.graph.total_radicals()) * m.count;
    }
    return t;
}

} // namespace detail

/// Equal atom multisets, total charge and total radical count on both sides.
inline bool is_balanced(const ReactionDocument& doc) {
    const auto a = detail::side_totals(doc.educts);
    const auto b = detail::side_totals(doc.products);
    return a.labels == b.labels && a.charge == b.charge && a.radicals == b.radicals;
}

/// Throws schema_error, parse_error or valence_error. Unbalanced documents
/// parse; `balanced` reports the check.
inline ReactionDocument parse_reaction_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("invalid JSON: ") + e.what(), e.byte);
    }
    if (!j.is_object()) throw schema_error("reaction document must be a JSON object");
    detail::check_keys(j, {"id", "educts", "products"}, "reaction");
    ReactionDocument doc;
    if (j.contains("id")) {
        if (!j["id"].is_string()) throw schema_error("'id' must be a string");
        doc.id = j["id"].get<std::string>();
    }
    doc.educts = detail::parse_side(j, "educts");
    doc.products = detail::parse_side(j, "products");
    doc.balanced = is_balanced(doc);
    return doc;
}

/// Explicit-list form of one molecule; re-parsing yields an isomorphic graph.
inline nlohmann::json molecule_to_json(const MoleculeGraph& g, int count = 1) {
    using nlohmann::json;
    std::vector<int> atom_index(g.size(), -1);
    json atoms = json::array();
    for (int v = 0; v < g.size(); ++v) {
        if (!g.label(v).is_atom()) continue;
        atom_index[v] = static_cast<int>(atoms.size());
        json a{{"element", g.label(v).symbol()}, {"lonePairs", g.loop(v)}};
        if (int c = g.atom_charge(v)) a["charge"] = c;
        a["radicals"] = g.atom_radicals(v);
        atoms.push_back(std::move(a));
    }
    json bonds = json::array();
    for (const auto& e : g.edges()) {
        if (e.u == e.v || atom_index[e.u] < 0 || atom_index[e.v] < 0) continue;
        json b{{"a", atom_index[e.u]}, {"b", atom_index[e.v]}, {"order", e.weight}};
        if (e.label == BondLabel::Aromatic) b["aromatic"] = true;
        bonds.push_back(std::move(b));
    }
    json out{{"atoms", std::move(atoms)}, {"bonds", std::move(bonds)}};
    if (!g.aromatic_vertices().empty()) {
        json rings = json::array();
        for (int r : g.aromatic_vertices()) {
            json ring = json::array();
            for (const auto& nb : g.neighbors(r)) ring.push_back(atom_index[nb.vertex]);
            rings.push_back(std::move(ring));
        }
        out["aromaticRings"] = std::move(rings);
    }
    if (count != 1) out["count"] = count;
    return out;
}

inline std::string serialize_reaction(const ReactionDocument& doc) {
    using nlohmann::json;
    json j = json::object();
    if (doc.id) j["id"] = *doc.id;
    auto side = [](const std::vector<MoleculeEntry>& entries) {
        json arr = json::array();
        for (const auto& m : entries) arr.push_back(molecule_to_json(m.graph, m.count));
        return arr;
    };
    j["educts"] = side(doc.educts);
    j["products"] = side(doc.products);
    return j.dump(2);
}

} // namespace aam::chemio

#endif
