#include <gtest/gtest.h>

#include "aam/chemio/smiles.hpp"
#include "aam/molgraph.hpp"
#include "support/reference_instances.hpp"

using namespace aam;

namespace {

MoleculeGraph carboxylate_oxygen() {
    // O(0) - C(1), two lone pairs on O, charge -1 on O.
    return MoleculeGraph({VertexLabel::atom("O"), VertexLabel::atom("C"), VertexLabel::charge()},
                         {{0, 1, 1}, {0, 0, 2}, {0, 2, -1}});
}

} // namespace

TEST(WeightedDegree, ChargedOxygenCountsLoopTwiceAndChargeEdge) {
    EXPECT_EQ(weighted_degree(carboxylate_oxygen(), 0), 4);
}

TEST(WeightedDegree, IsolatedVertexIsZero) {
    MoleculeGraph g({VertexLabel::atom("C")}, {});
    EXPECT_EQ(weighted_degree(g, 0), 0);
}

TEST(WeightedDegree, MethylCarbonOfPyruvate) {
    auto g = chemio::parse_smiles_subset("CC(=O)C(=O)[O-]");
    EXPECT_EQ(weighted_degree(g, 0), 4);
}

TEST(WeightedDegree, OutOfRangeIsUsageError) {
    MoleculeGraph g({VertexLabel::atom("C")}, {});
    EXPECT_THROW(weighted_degree(g, 1), usage_error);
    EXPECT_THROW(weighted_degree(g, -1), usage_error);
}

TEST(MoleculeGraph, EdgeUniverseIsZeroOffEdges) {
    auto g = carboxylate_oxygen();
    EdgeUniverse w(g);
    EXPECT_EQ(w(0, 1), 1);
    EXPECT_EQ(w(1, 0), 1);
    EXPECT_EQ(w(1, 2), 0);
    EXPECT_EQ(w(1, 1), 0);
    EXPECT_EQ(w(0, 0), 2);
    int negatives = 0;
    w.for_each_pair([&](int u, int v, int weight) {
        if (weight < 0) {
            ++negatives;
            EXPECT_TRUE(g.label(u).kind == LabelKind::Charge || g.label(v).kind == LabelKind::Charge);
        }
    });
    EXPECT_EQ(negatives, 1);
}

TEST(MoleculeGraph, RejectsInvalidStructures) {
    const auto C = VertexLabel::atom("C");
    EXPECT_THROW(MoleculeGraph({C, C}, {{0, 1, 4}}), usage_error);
    EXPECT_THROW(MoleculeGraph({C, C}, {{0, 1, 2, BondLabel::Aromatic}}), usage_error);
    EXPECT_THROW(MoleculeGraph({C, VertexLabel::charge(), VertexLabel::radical()}, {{1, 2, 1}}), usage_error);
    EXPECT_THROW(MoleculeGraph({C, VertexLabel::charge(), VertexLabel::charge()}, {}), usage_error);
    EXPECT_THROW(MoleculeGraph({C, VertexLabel::charge()}, {{1, 1, 1}}), usage_error);
    EXPECT_THROW(MoleculeGraph({C, VertexLabel::radical()}, {{0, 1, -1}}), usage_error);
    EXPECT_THROW(MoleculeGraph({C, VertexLabel::aromatic()}, {{0, 1, -1}}), usage_error);
    EXPECT_THROW(MoleculeGraph({C, C}, {{0, 1, 1}, {1, 0, 1}}), usage_error);
    EXPECT_THROW(MoleculeGraph({C}, {{0, 0, -1}}), usage_error);
    EXPECT_NO_THROW(MoleculeGraph({C, VertexLabel::charge()}, {{0, 1, 2}}));
}

TEST(MoleculeGraph, LabelsNormaliseCapitalisation) {
    EXPECT_EQ(VertexLabel::atom("cl"), VertexLabel::atom("Cl"));
    EXPECT_EQ(VertexLabel::atom("CL").symbol(), "Cl");
    EXPECT_THROW(VertexLabel::atom("Xx"), usage_error);
    EXPECT_NE(VertexLabel::charge(), VertexLabel::radical());
    EXPECT_NE(VertexLabel::aromatic().code(), VertexLabel::atom(1).code());
}

TEST(DisjointUnion, SingleGraphIsIdentity) {
    auto g = chemio::parse_smiles_subset("CCO");
    auto u = disjoint_union({g});
    EXPECT_TRUE(are_isomorphic(g, u.graph).has_value());
    for (int v = 0; v < g.size(); ++v) EXPECT_EQ(u.provenance[0][v], v);
}

TEST(DisjointUnion, TwoSingleAtoms) {
    MoleculeGraph a({VertexLabel::atom("C")}, {}), b({VertexLabel::atom("N")}, {});
    auto u = disjoint_union({a, b});
    EXPECT_EQ(u.graph.size(), 2);
    EXPECT_TRUE(u.graph.edges().empty());
}

TEST(DisjointUnion, MergesChargeVertices) {
    auto acetate = chemio::parse_smiles_subset("CC(=O)[O-]");
    auto ammonium = chemio::parse_smiles_subset("[NH4+]");
    auto u = disjoint_union({acetate, ammonium});
    int charges = 0;
    for (int v = 0; v < u.graph.size(); ++v) charges += u.graph.label(v).kind == LabelKind::Charge;
    EXPECT_EQ(charges, 1);
    ASSERT_TRUE(u.graph.charge_vertex());
    EXPECT_EQ(u.graph.neighbors(*u.graph.charge_vertex()).size(), 2u);
    EXPECT_EQ(u.graph.total_charge(), 0);
    EXPECT_EQ(u.provenance[0][*acetate.charge_vertex()], *u.graph.charge_vertex());
    EXPECT_EQ(u.provenance[1][*ammonium.charge_vertex()], *u.graph.charge_vertex());
}

TEST(DisjointUnion, PreservesDegreeSumAndLabels) {
    auto a = chemio::parse_smiles_subset("CC(=O)C(=O)[O-]");
    auto b = chemio::parse_smiles_subset("c1ccncc1");
    auto u = disjoint_union({a, b});
    int before = 0, after = 0;
    for (const auto* g : {&a, &b})
        for (int v = 0; v < g->size(); ++v) before += g->weighted_degree(v);
    for (int v = 0; v < u.graph.size(); ++v) after += u.graph.weighted_degree(v);
    EXPECT_EQ(before, after);
    EXPECT_EQ(u.graph.atom_count(), a.atom_count() + b.atom_count());
}

TEST(Isomorphism, GraphWithItself) {
    auto g = chemio::parse_smiles_subset("CC(=O)C(=O)[O-]");
    auto iso = are_isomorphic(g, g);
    ASSERT_TRUE(iso);
    for (int v = 0; v < g.size(); ++v) EXPECT_EQ(g.label(v), g.label((*iso)[v]));
}

TEST(Isomorphism, RotatedKekuleBenzene) {
    std::vector<Edge> e1, e2;
    for (int i = 0; i < 6; ++i) {
        e1.push_back({i, (i + 1) % 6, i % 2 == 0 ? 2 : 1});
        e2.push_back({(i + 1) % 6, (i + 2) % 6, i % 2 == 0 ? 2 : 1});
    }
    auto a = fixtures::carbon_graph(6, e1);
    auto b = fixtures::carbon_graph(6, e2);
    auto iso = are_isomorphic(a, b);
    ASSERT_TRUE(iso);
    for (const auto& e : a.edges()) EXPECT_EQ(b.weight((*iso)[e.u], (*iso)[e.v]), e.weight);
}

TEST(Isomorphism, EthanolIsNotDimethylEther) {
    auto ethanol = chemio::parse_smiles_subset("CCO");
    auto ether = chemio::parse_smiles_subset("COC");
    EXPECT_FALSE(are_isomorphic(ethanol, ether).has_value());
}

TEST(Isomorphism, WeightedDegreeIsInvariant) {
    auto a = chemio::parse_smiles_subset("OC(=O)C1=CC=CC=C1");
    auto b = chemio::parse_smiles_subset("C1=CC=C(C=C1)C(O)=O");
    auto iso = are_isomorphic(a, b);
    ASSERT_TRUE(iso);
    for (int v = 0; v < a.size(); ++v) EXPECT_EQ(a.weighted_degree(v), b.weighted_degree((*iso)[v]));
}

TEST(Isomorphism, InvariantHashAgreesOnIsomorphs) {
    auto a = chemio::parse_smiles_subset("CC(C)CO");
    auto b = chemio::parse_smiles_subset("OCC(C)C");
    EXPECT_EQ(invariant_hash(to_labeled_graph(a)), invariant_hash(to_labeled_graph(b)));
}
