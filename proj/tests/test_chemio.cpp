#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <sstream>

#include "aam/chemio/reaction_io.hpp"
#include "aam/chemio/smiles.hpp"
#include "aam/elements.hpp"

using namespace aam;
using chemio::parse_reaction_json;
using chemio::parse_smiles_subset;

namespace {

int count_label(const MoleculeGraph& g, VertexLabel l) {
    int c = 0;
    for (int v = 0; v < g.size(); ++v) c += g.label(v) == l;
    return c;
}

int hydrogens_on(const MoleculeGraph& g, int v) {
    int h = 0;
    for (const auto& nb : g.neighbors(v)) h += g.label(nb.vertex) == VertexLabel::atom(1);
    return h;
}

// Every atom's weighted degree equals its group-valence electron count.
void expect_valence_invariant(const MoleculeGraph& g) {
    for (int v = 0; v < g.size(); ++v) {
        if (!g.label(v).is_atom()) continue;
        auto val = group_valence_electrons(g.label(v).element);
        ASSERT_TRUE(val);
        EXPECT_EQ(g.weighted_degree(v), *val) << "vertex " << v;
    }
}

} // namespace

TEST(Smiles, Pyruvate) {
    auto g = parse_smiles_subset("CC(=O)C(=O)[O-]");
    EXPECT_EQ(g.atom_count(), 9u);
    EXPECT_EQ(count_label(g, VertexLabel::atom("C")), 3);
    EXPECT_EQ(count_label(g, VertexLabel::atom("O")), 3);
    EXPECT_EQ(count_label(g, VertexLabel::atom("H")), 3);
    EXPECT_EQ(hydrogens_on(g, 0), 3);
    EXPECT_EQ(g.loop(2), 2); // ketone O
    EXPECT_EQ(g.loop(4), 2); // carbonyl O of the carboxylate
    EXPECT_EQ(g.loop(5), 3); // charged O
    ASSERT_TRUE(g.charge_vertex());
    EXPECT_EQ(g.neighbors(*g.charge_vertex()).size(), 1u);
    EXPECT_EQ(g.weight(5, *g.charge_vertex()), -1);
    EXPECT_EQ(g.total_charge(), -1);
    expect_valence_invariant(g);
}

TEST(Smiles, Water) {
    auto g = parse_smiles_subset("O");
    EXPECT_EQ(g.size(), 3);
    EXPECT_EQ(count_label(g, VertexLabel::atom("H")), 2);
    EXPECT_EQ(g.loop(0), 2);
}

TEST(Smiles, Proton) {
    auto g = parse_smiles_subset("[H+]");
    EXPECT_EQ(g.size(), 2);
    EXPECT_EQ(g.loop(0), 0);
    ASSERT_TRUE(g.charge_vertex());
    EXPECT_EQ(g.weight(0, *g.charge_vertex()), 1);
}

TEST(Smiles, ChargedNitrogenAndHydrogenCount) {
    auto g = parse_smiles_subset("[NH4+]");
    EXPECT_EQ(hydrogens_on(g, 0), 4);
    EXPECT_EQ(g.loop(0), 0);
    expect_valence_invariant(g);
}

TEST(Smiles, RingClosuresAndBranches) {
    auto g = parse_smiles_subset("C1CC(C)CCC1");
    EXPECT_EQ(count_label(g, VertexLabel::atom("C")), 7);
    EXPECT_EQ(count_label(g, VertexLabel::atom("H")), 14);
    auto big = parse_smiles_subset("C%12CCCCC%12");
    EXPECT_EQ(count_label(big, VertexLabel::atom("H")), 12);
    auto ring_double = parse_smiles_subset("C=1CCCCC1");
    EXPECT_EQ(ring_double.weight(0, 5), 2);
    expect_valence_invariant(ring_double);
}

TEST(Smiles, TripleBondAndHalogens) {
    auto g = parse_smiles_subset("C#CCl");
    EXPECT_EQ(g.weight(0, 1), 3);
    EXPECT_EQ(g.label(2), VertexLabel::atom("Cl"));
    EXPECT_EQ(g.loop(2), 3);
    auto br = parse_smiles_subset("BrCI");
    EXPECT_EQ(br.label(0), VertexLabel::atom("Br"));
    EXPECT_EQ(br.label(2), VertexLabel::atom("I"));
    expect_valence_invariant(br);
}

TEST(Smiles, HigherValencesForPAndS) {
    auto sulfate = parse_smiles_subset("OS(=O)(=O)O");
    EXPECT_EQ(count_label(sulfate, VertexLabel::atom("H")), 2);
    EXPECT_EQ(sulfate.loop(1), 0);
    expect_valence_invariant(sulfate);
    auto phosphate = parse_smiles_subset("OP(=O)(O)O");
    EXPECT_EQ(count_label(phosphate, VertexLabel::atom("H")), 3);
    expect_valence_invariant(phosphate);
}

TEST(Smiles, BenzeneHasOneAromaticVertex) {
    auto g = parse_smiles_subset("c1ccccc1");
    ASSERT_EQ(g.aromatic_vertices().size(), 1u);
    const int ar = g.aromatic_vertices()[0];
    EXPECT_EQ(g.neighbors(ar).size(), 6u);
    EXPECT_EQ(g.weighted_degree(ar), 6);
    EXPECT_EQ(count_label(g, VertexLabel::atom("H")), 6);
    EXPECT_EQ(g.bond_label(0, 1), BondLabel::Aromatic);
    EXPECT_EQ(g.weight(0, 1), 1);
    expect_valence_invariant(g);
}

TEST(Smiles, HeteroaromaticRingsCarrySixPiElectrons) {
    for (const char* s : {"c1ccncc1", "c1cc[nH]c1", "c1ccoc1", "c1ccsc1"}) {
        auto g = parse_smiles_subset(s);
        ASSERT_EQ(g.aromatic_vertices().size(), 1u) << s;
        EXPECT_EQ(g.weighted_degree(g.aromatic_vertices()[0]), 6) << s;
        expect_valence_invariant(g);
    }
    auto pyridine = parse_smiles_subset("c1ccncc1");
    EXPECT_EQ(pyridine.loop(3), 1);
}

TEST(Smiles, FusedRingsShareOneComplex) {
    auto naphthalene = parse_smiles_subset("c1ccc2ccccc2c1");
    ASSERT_EQ(naphthalene.aromatic_vertices().size(), 1u);
    EXPECT_EQ(naphthalene.weighted_degree(naphthalene.aromatic_vertices()[0]), 10);
    auto biphenyl = parse_smiles_subset("c1ccccc1-c1ccccc1");
    EXPECT_EQ(biphenyl.aromatic_vertices().size(), 2u);
    EXPECT_EQ(biphenyl.bond_label(5, 6), BondLabel::Plain);
}

TEST(Smiles, RadicalFromOddElectronCount) {
    auto methyl = parse_smiles_subset("[CH3]");
    ASSERT_TRUE(methyl.radical_vertex());
    EXPECT_EQ(methyl.total_radicals(), 1);
}

TEST(Smiles, SyntaxErrorsReportOffset) {
    try {
        parse_smiles_subset("CC(C");
        FAIL();
    } catch (const parse_error& e) {
        EXPECT_EQ(e.offset(), 4u);
    }
    try {
        parse_smiles_subset("CCX");
        FAIL();
    } catch (const parse_error& e) {
        EXPECT_EQ(e.offset(), 2u);
    }
    EXPECT_THROW(parse_smiles_subset(""), parse_error);
    EXPECT_THROW(parse_smiles_subset("C1CC"), parse_error);
    EXPECT_THROW(parse_smiles_subset("C)"), parse_error);
    EXPECT_THROW(parse_smiles_subset("C="), parse_error);
    EXPECT_THROW(parse_smiles_subset("[C"), parse_error);
    EXPECT_THROW(parse_smiles_subset("Cc(C)C"), parse_error);
}

TEST(Smiles, UnsupportedFeaturesAreRejected) {
    for (const char* s : {"[13C]", "C[C@H](O)N", "F/C=C/F", "*C", "C.C", "[CH3:1]C", "C$C"})
        EXPECT_THROW(parse_smiles_subset(s), unsupported_feature) << s;
}

TEST(Smiles, ValenceViolationReportsAtom) {
    try {
        parse_smiles_subset("[B](C)(C)(C)C");
        FAIL();
    } catch (const valence_error& e) {
        EXPECT_EQ(e.atom(), 0u);
    }
    EXPECT_THROW(parse_smiles_subset("C(C)(C)(C)(C)C"), valence_error);
}

TEST(ReactionJson, DielsAlderIsBalanced) {
    auto doc = parse_reaction_json(
        R"({"educts":[{"smiles":"C=C"},{"smiles":"C=CC=C"}],"products":[{"smiles":"C1=CCCCC1"}]})");
    EXPECT_TRUE(doc.balanced);
    EXPECT_EQ(doc.educts.size(), 2u);
    EXPECT_EQ(doc.products.size(), 1u);
}

TEST(ReactionJson, SchemaViolations) {
    EXPECT_THROW(parse_reaction_json(R"({"educts":[],"products":[{"smiles":"C"}]})"), schema_error);
    EXPECT_THROW(parse_reaction_json(R"({"products":[{"smiles":"C"}]})"), schema_error);
    EXPECT_THROW(parse_reaction_json(R"({"educts":[{"smiles":"C","count":0}],"products":[{"smiles":"C"}]})"),
                 schema_error);
    EXPECT_THROW(parse_reaction_json(R"({"educts":[{"smile":"C"}],"products":[{"smiles":"C"}]})"), schema_error);
    EXPECT_THROW(parse_reaction_json(R"({"educts":[{"atoms":[{"element":"Qq"}]}],"products":[{"smiles":"C"}]})"),
                 schema_error);
    EXPECT_THROW(parse_reaction_json("[1,2"), parse_error);
}

TEST(ReactionJson, UnbalancedParsesButIsFlagged) {
    auto doc = parse_reaction_json(R"({"educts":[{"smiles":"CC"}],"products":[{"smiles":"C"}]})");
    EXPECT_FALSE(doc.balanced);
    auto charged = parse_reaction_json(R"({"educts":[{"smiles":"[NH4+]"}],"products":[{"smiles":"N"},{"smiles":"[H]"}]})");
    EXPECT_FALSE(charged.balanced);
}

TEST(ReactionJson, CountsExpandMultiplicity) {
    auto doc = parse_reaction_json(
        R"({"educts":[{"smiles":"[H][H]","count":2},{"smiles":"O=O"}],"products":[{"smiles":"O","count":2}]})");
    EXPECT_TRUE(doc.balanced);
    EXPECT_EQ(doc.educts[0].count, 2);
}

TEST(ReactionJson, ExplicitLonePairsAreVerbatim) {
    auto doc = parse_reaction_json(R"({"educts":[{"atoms":[{"element":"O","lonePairs":1},{"element":"H"}],
        "bonds":[{"a":0,"b":1,"order":1}]}],"products":[{"smiles":"[H]"}]})");
    const auto& g = doc.educts[0].graph;
    EXPECT_EQ(g.loop(0), 1);
    ASSERT_TRUE(g.radical_vertex());
    EXPECT_EQ(g.atom_radicals(0), 3);
}

TEST(ReactionJson, ExplicitListsGetNoImplicitHydrogens) {
    auto doc = parse_reaction_json(R"({"educts":[{"atoms":[{"element":"C"},{"element":"C"}],
        "bonds":[{"a":0,"b":1,"order":3}]}],"products":[{"smiles":"[C]#[C]"}]})");
    EXPECT_EQ(doc.educts[0].graph.atom_count(), 2u);
    EXPECT_TRUE(doc.balanced);
}

TEST(ReactionJson, ExplicitAromaticRing) {
    auto doc = parse_reaction_json(R"({"educts":[{"atoms":[{"element":"C"},{"element":"C"},{"element":"C"},
        {"element":"C"},{"element":"C"},{"element":"C"},{"element":"H"},{"element":"H"},{"element":"H"},
        {"element":"H"},{"element":"H"},{"element":"H"}],
        "bonds":[{"a":0,"b":1,"order":1,"aromatic":true},{"a":1,"b":2,"order":1,"aromatic":true},
        {"a":2,"b":3,"order":1,"aromatic":true},{"a":3,"b":4,"order":1,"aromatic":true},
        {"a":4,"b":5,"order":1,"aromatic":true},{"a":5,"b":0,"order":1,"aromatic":true},
        {"a":0,"b":6,"order":1},{"a":1,"b":7,"order":1},{"a":2,"b":8,"order":1},{"a":3,"b":9,"order":1},
        {"a":4,"b":10,"order":1},{"a":5,"b":11,"order":1}],
        "aromaticRings":[[0,1,2,3,4,5]]}],"products":[{"smiles":"c1ccccc1"}]})");
    EXPECT_TRUE(are_isomorphic(doc.educts[0].graph, doc.products[0].graph).has_value());
}

TEST(ReactionJson, RoundTripIsIsomorphic) {
    const char* docs[] = {
        R"({"id":"da","educts":[{"smiles":"C=C"},{"smiles":"C=CC=C"}],"products":[{"smiles":"C1=CCCCC1"}]})",
        R"({"educts":[{"smiles":"CC(=O)C(=O)[O-]"},{"smiles":"[H+]"}],"products":[{"smiles":"CC(=O)C(=O)O"}]})",
        R"({"educts":[{"smiles":"c1ccncc1","count":2},{"smiles":"[CH3]"}],"products":[{"smiles":"c1cc[nH]c1"}]})",
        R"({"educts":[{"smiles":"C"}],"products":[{"smiles":"C"}]})"};
    for (const char* text : docs) {
        auto a = parse_reaction_json(text);
        auto b = parse_reaction_json(chemio::serialize_reaction(a));
        EXPECT_EQ(a.id, b.id);
        EXPECT_EQ(a.balanced, b.balanced);
        ASSERT_EQ(a.educts.size(), b.educts.size());
        ASSERT_EQ(a.products.size(), b.products.size());
        for (std::size_t i = 0; i < a.educts.size(); ++i) {
            EXPECT_TRUE(are_isomorphic(a.educts[i].graph, b.educts[i].graph)) << text;
            EXPECT_EQ(a.educts[i].count, b.educts[i].count);
        }
        for (std::size_t i = 0; i < a.products.size(); ++i)
            EXPECT_TRUE(are_isomorphic(a.products[i].graph, b.products[i].graph)) << text;
    }
}

TEST(ReactionJson, SingleAtomSerializesMinimally) {
    auto doc = parse_reaction_json(R"({"educts":[{"smiles":"[He]"}],"products":[{"smiles":"[He]"}]})");
    auto text = chemio::serialize_reaction(doc);
    auto j = nlohmann::json::parse(text);
    EXPECT_EQ(j["educts"][0]["atoms"].size(), 1u);
    EXPECT_TRUE(j["educts"][0]["bonds"].empty());
}

TEST(ReactionJson, DataFilesRoundTrip) {
    for (const char* name : {"diels_alder.json", "stork.json", "esterification.json"}) {
        std::ifstream in(std::string(AAM_DATA_DIR) + "/" + name);
        ASSERT_TRUE(in) << name;
        std::stringstream ss;
        ss << in.rdbuf();
        auto a = parse_reaction_json(ss.str());
        EXPECT_TRUE(a.balanced) << name;
        auto b = parse_reaction_json(chemio::serialize_reaction(a));
        for (std::size_t i = 0; i < a.educts.size(); ++i)
            EXPECT_TRUE(are_isomorphic(a.educts[i].graph, b.educts[i].graph)) << name;
    }
}
