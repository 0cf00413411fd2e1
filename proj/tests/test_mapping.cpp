#include <gtest/gtest.h>

#include <random>

#include "aam/chemio/reaction_io.hpp"
#include "aam/mapping.hpp"
#include "support/reference_instances.hpp"
#include "support/random_instances.hpp"

using namespace aam;
using namespace aam::fixtures;

namespace {

std::vector<int> identity(int n) {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i;
    return v;
}

ReactionInstance from_smiles(const char* left, const char* right) {
    return make_instance(chemio::parse_smiles_subset(left), chemio::parse_smiles_subset(right));
}

// Carbon indices of the full Diels-Alder instance in textbook order 1..6.
struct DaFull {
    ReactionInstance inst = diels_alder_full();
    std::vector<int> fig_g1 = {9, 0, 1, 6, 7, 8};
    std::vector<int> fig_g2 = {0, 1, 2, 3, 4, 5};

    std::vector<int> partial() const {
        std::vector<int> p(inst.size(), -1);
        const int image[] = {3, 4, 5, 6, 1, 2};
        for (int k = 0; k < 6; ++k) p[fig_g1[k]] = fig_g2[image[k] - 1];
        return p;
    }
    PathWeights weights() const {
        auto p = partial();
        PathWeights w;
        for (int a : fig_g1)
            for (int b : fig_g1)
                if (a < b) {
                    const int d = inst.g2.weight(p[a], p[b]) - inst.g1.weight(a, b);
                    if (d) w[VertexPair(a, b)] = d;
                }
        return w;
    }
};

} // namespace

TEST(Instance, RejectsUnbalancedSides) {
    EXPECT_THROW(from_smiles("CCO", "CC=O"), unbalanced_error);
    EXPECT_THROW(from_smiles("[NH4+]", "N"), unbalanced_error);
    EXPECT_THROW(from_smiles("[CH3]", "C"), unbalanced_error);
}

TEST(Instance, PadsSpecialVertices) {
    auto inst = from_smiles("C[N+](C)(C)CC(=O)[O-]", "CN(C)CC(=O)OC");
    EXPECT_EQ(inst.g1.size(), inst.g2.size());
    ASSERT_TRUE(inst.g2.charge_vertex());
    EXPECT_TRUE(inst.g2.neighbors(*inst.g2.charge_vertex()).empty());
    auto ar = from_smiles("c1ccccc1", "C1=CC=CC=C1");
    ASSERT_EQ(ar.g2.aromatic_vertices().size(), 1u);
    EXPECT_EQ(ar.g2.weighted_degree(ar.g2.aromatic_vertices()[0]), 6);
}

TEST(Instance, ProvenanceFollowsDocument) {
    auto doc = chemio::parse_reaction_json(
        R"({"educts":[{"smiles":"[H][H]","count":2},{"smiles":"O=O"}],"products":[{"smiles":"O","count":2}]})");
    auto inst = make_instance(doc);
    EXPECT_EQ(inst.origin1[0].molecule, 0);
    EXPECT_EQ(inst.origin1[2].copy, 1);
    EXPECT_EQ(inst.origin1[4].molecule, 1);
    EXPECT_EQ(inst.origin2[3].copy, 1);
    EXPECT_EQ(inst.origin2[3].local, 0);
}

TEST(Cost, IdentityOnIdenticalGraphsIsZero) {
    auto inst = from_smiles("CC(=O)C(=O)[O-]", "CC(=O)C(=O)[O-]");
    EXPECT_EQ(cost(inst, identity(inst.size())), 0);
}

TEST(Cost, DielsAlderReferenceMapCostsSix) {
    auto inst = diels_alder_skeleton();
    EXPECT_EQ(cost(inst, diels_alder_reference_map()), 6);
}

TEST(Cost, SingleEdgeOffByTwo) {
    auto a = carbon_graph(2, {{0, 1, 1}});
    auto b = carbon_graph(2, {{0, 1, 3}});
    auto inst = make_instance(a, b);
    EXPECT_EQ(cost(inst, identity(2)), 2);
}

TEST(Cost, RejectsInvalidMaps) {
    auto inst = from_smiles("CO", "CO");
    EXPECT_THROW(cost(inst, std::vector<int>{0, 0, 1, 2, 3, 4}), usage_error);
    EXPECT_THROW(cost(inst, std::vector<int>{1, 0, 2, 3, 4, 5}), usage_error);
    EXPECT_THROW(cost(inst, std::vector<int>{0, 1}), usage_error);
}

TEST(TransitionState, IdentityIsEmpty) {
    auto inst = from_smiles("CCO", "CCO");
    EXPECT_TRUE(transition_state(inst, identity(inst.size())).empty());
}

TEST(TransitionState, DielsAlderIsAlternatingSixCycle) {
    auto inst = diels_alder_skeleton();
    auto ts = transition_state(inst, diels_alder_reference_map());
    ASSERT_EQ(ts.edges().size(), 6u);
    EXPECT_EQ(ts.total(), 6);
    EXPECT_FALSE(ts.zero_flux_violation());
    EXPECT_TRUE(ts.connected());
    // Reference edges in 0-based numbering: 1-2 +, 2=3 -, 3-4 +, 4=5 -, 5-6 +, 6=1 -.
    EXPECT_EQ(ts.delta(0, 1), +1);
    EXPECT_EQ(ts.delta(1, 2), -1);
    EXPECT_EQ(ts.delta(2, 3), +1);
    EXPECT_EQ(ts.delta(3, 4), -1);
    EXPECT_EQ(ts.delta(4, 5), +1);
    EXPECT_EQ(ts.delta(5, 0), -1);
    for (int v = 0; v < 6; ++v) EXPECT_EQ(ts.abs_degree(v), 2);
}

TEST(TransitionState, CostEqualsTotalOnRandomMaps) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 50; ++t) {
        auto inst = random_instance(rng);
        auto psi = are_isomorphic(inst.g1, inst.g1);
        ASSERT_TRUE(psi);
        // Random label-preserving bijection.
        std::vector<int> map(inst.size(), -1);
        std::vector<char> used(inst.size(), 0);
        for (int v = 0; v < inst.size(); ++v) {
            std::vector<int> options;
            for (int p = 0; p < inst.size(); ++p)
                if (!used[p] && inst.g2.label(p) == inst.g1.label(v)) options.push_back(p);
            ASSERT_FALSE(options.empty());
            map[v] = options[std::uniform_int_distribution<int>(0, static_cast<int>(options.size()) - 1)(rng)];
            used[map[v]] = 1;
        }
        auto ts = transition_state(inst, map);
        EXPECT_EQ(ts.total(), cost(inst, map));
        EXPECT_FALSE(ts.zero_flux_violation());
        for (int v : ts.vertices()) EXPECT_EQ(ts.abs_degree(v) % 2, 0);
        auto dec = decompose_cycles(ts);
        EXPECT_EQ(dec.reconstruct(), ts);
        for (const auto& c : dec.cycles) EXPECT_TRUE(c.alternates());
    }
}

TEST(Decompose, EmptyTransitionState) {
    EXPECT_TRUE(decompose_cycles(TransitionState{}).cycles.empty());
}

TEST(Decompose, DielsAlderIsOneSixCycle) {
    auto inst = diels_alder_skeleton();
    auto dec = decompose_cycles(transition_state(inst, diels_alder_reference_map()));
    ASSERT_EQ(dec.cycles.size(), 1u);
    EXPECT_EQ(dec.cycles[0].length(), 6u);
    EXPECT_TRUE(dec.cycles[0].elementary());
    EXPECT_TRUE(dec.cycles[0].alternates());
    EXPECT_EQ(dec.cycles[0].vertices[0], 0);
    EXPECT_EQ(dec.cycles[0].signs[0], +1);
}

TEST(Decompose, TwoDisjointFourCycles) {
    TransitionState ts({{0, 1, 1}, {1, 2, -1}, {2, 3, 1}, {3, 0, -1},
                        {4, 5, 1}, {5, 6, -1}, {6, 7, 1}, {7, 4, -1}});
    auto dec = decompose_cycles(ts);
    ASSERT_EQ(dec.cycles.size(), 2u);
    EXPECT_EQ(dec.reconstruct(), ts);
    for (const auto& c : dec.cycles) {
        EXPECT_EQ(c.length(), 4u);
        EXPECT_TRUE(c.alternates());
        EXPECT_TRUE(c.elementary());
    }
}

TEST(Decompose, SharedVertexFigureEight) {
    // Two 4-cycles through vertex 0.
    TransitionState ts({{0, 1, 1}, {1, 2, -1}, {2, 3, 1}, {3, 0, -1},
                        {0, 4, 1}, {4, 5, -1}, {5, 6, 1}, {6, 0, -1}});
    auto dec = decompose_cycles(ts);
    EXPECT_EQ(dec.reconstruct(), ts);
    EXPECT_EQ(dec.cycles.size(), 2u);
    for (const auto& c : dec.cycles) EXPECT_TRUE(c.elementary());
}

TEST(Decompose, LoopsAndMultiUnitEdges) {
    // Single to triple bond fed by two lone pairs: loops -1 on both ends.
    TransitionState ts({{0, 1, 2}, {0, 0, -1}, {1, 1, -1}});
    auto dec = decompose_cycles(ts);
    EXPECT_EQ(dec.reconstruct(), ts);
    for (const auto& c : dec.cycles) EXPECT_TRUE(c.alternates());
}

TEST(Decompose, ZeroFluxViolationNamesVertex) {
    TransitionState ts({{0, 1, 1}, {1, 2, -1}});
    try {
        decompose_cycles(ts);
        FAIL();
    } catch (const zero_flux_error& e) {
        EXPECT_EQ(e.vertex(), 0);
    }
}

TEST(Equivalence, IdentityPairsHaveEqualComponents) {
    auto inst = from_smiles("CC=O", "CC=O");
    auto g = equivalence_graph(inst, identity(inst.size()));
    for (int u = 0; u < g.size(); ++u)
        for (int v : g.neighbors(u)) {
            const auto l = g.edge(u, v);
            EXPECT_EQ(l >> 32, l & 0xffffffff);
        }
}

TEST(Equivalence, AutomorphismOfEductsGivesEquivalentMap) {
    auto inst = diels_alder_skeleton();
    auto psi = diels_alder_reference_map();
    // Reversal of butadiene (0,3)(4,5) and of ethene (1,2).
    const int beta[] = {3, 2, 1, 0, 5, 4};
    std::vector<int> phi(6);
    for (int v = 0; v < 6; ++v) phi[v] = psi[beta[v]];
    EXPECT_TRUE(equivalent(inst, psi, phi));
    EXPECT_TRUE(equivalent(inst, phi, psi));
    EXPECT_TRUE(equivalent(inst, psi, psi));
}

TEST(Equivalence, DifferentTransitionStatesAreNotEquivalent) {
    auto inst = diels_alder_skeleton();
    EXPECT_FALSE(equivalent(inst, diels_alder_reference_map(), identity(6)));
    // Distinct optimal classes found by the oracle are pairwise inequivalent.
    std::mt19937_64 rng(11);
    int checked = 0;
    while (checked < 5) {
        auto r = random_instance(rng, {.max_vertices = 8});
        auto bf = brute_force_min_cost(r);
        if (bf.classes.size() < 2) continue;
        ++checked;
        for (std::size_t a = 0; a < bf.classes.size(); ++a)
            for (std::size_t b = a + 1; b < bf.classes.size(); ++b)
                EXPECT_FALSE(equivalent(r, bf.classes[a], bf.classes[b]));
    }
}

TEST(Equivalence, ClassSetDeduplicates) {
    auto inst = diels_alder_skeleton();
    EquivalenceClassSet set(inst);
    EXPECT_TRUE(set.insert(diels_alder_reference_map()));
    std::vector<int> phi = {diels_alder_reference_map()[3], diels_alder_reference_map()[2], diels_alder_reference_map()[1],
                            diels_alder_reference_map()[0], diels_alder_reference_map()[5], diels_alder_reference_map()[4]};
    EXPECT_FALSE(set.insert(phi));
    EXPECT_TRUE(set.insert(identity(6)));
    EXPECT_EQ(set.size(), 2u);
}

TEST(Complete, EmptyPartialOnIsomorphicGraphs) {
    auto inst = from_smiles("CC(=O)O", "OC(C)=O");
    auto m = complete_partial(inst, std::vector<int>(inst.size(), -1), {});
    ASSERT_TRUE(m);
    EXPECT_EQ(cost(inst, *m), 0);
}

TEST(Complete, DielsAlderCandidateCompletesWithHydrogens) {
    DaFull da;
    auto result = complete_partial_diagnosed(da.inst, da.partial(), da.weights());
    ASSERT_TRUE(result.map) << result.diagnostic;
    EXPECT_EQ(da.inst.size(), 16);
    EXPECT_EQ(cost(da.inst, *result.map), 6);
    auto p = da.partial();
    for (int v = 0; v < da.inst.size(); ++v)
        if (p[v] >= 0) EXPECT_EQ((*result.map)[v], p[v]);
    auto ts = transition_state(da.inst, *result.map);
    for (const auto& [e, w] : da.weights()) EXPECT_EQ(ts.delta(e.u, e.v), w);
}

TEST(Complete, WeightMismatchIsDiagnosed) {
    DaFull da;
    auto w = da.weights();
    w.begin()->second = -w.begin()->second;
    auto result = complete_partial_diagnosed(da.inst, da.partial(), w);
    EXPECT_FALSE(result.map);
    EXPECT_NE(result.diagnostic.find("weight mismatch"), std::string::npos);
}

TEST(Complete, NonIsomorphicResidualIsAbsent) {
    // Same candidate, but the product carries an extra double bond elsewhere.
    auto doc = chemio::parse_reaction_json(
        R"({"educts":[{"smiles":"C=C"},{"smiles":"C=CC=C"},{"smiles":"CC"}],
            "products":[{"smiles":"C1=CCCCC1"},{"smiles":"C=C"},{"smiles":"[H][H]"}]})");
    auto inst = make_instance(doc);
    DaFull da;
    std::vector<int> partial(inst.size(), -1);
    auto p = da.partial();
    for (int v = 0; v < 16; ++v) partial[v] = p[v];
    EXPECT_FALSE(complete_partial(inst, partial, da.weights()));
}

TEST(BruteForce, IdenticalThreeAtoms) {
    auto inst = make_instance(carbon_graph(3, {{0, 1, 1}, {1, 2, 2}}), carbon_graph(3, {{0, 1, 2}, {1, 2, 1}}));
    auto r = brute_force_min_cost(inst);
    EXPECT_EQ(r.min_cost, 0);
    EXPECT_EQ(r.classes.size(), 1u);
}

TEST(BruteForce, HydrogenPlusOxygenAtom) {
    auto doc = chemio::parse_reaction_json(
        R"({"educts":[{"smiles":"[H][H]"},{"smiles":"[O]"}],"products":[{"smiles":"O"}]})");
    auto inst = make_instance(doc);
    auto r = brute_force_min_cost(inst);
    // Break H-H, form two O-H bonds, one lone pair of O is used: 1 + 2 + 1.
    EXPECT_EQ(r.min_cost, 4);
    EXPECT_EQ(r.optimal_maps, 2u);
    EXPECT_EQ(r.classes.size(), 1u);
}

TEST(BruteForce, DielsAlderSkeleton) {
    auto inst = diels_alder_skeleton();
    auto r = brute_force_min_cost(inst);
    EXPECT_EQ(r.min_cost, 6);
    EquivalenceClassSet set(inst);
    for (const auto& m : r.classes) set.insert(m);
    EXPECT_TRUE(set.contains(diels_alder_reference_map()));
}

TEST(BruteForce, RefusesLargeInstances) {
    auto inst = diels_alder_full();
    EXPECT_THROW(brute_force_min_cost(inst), usage_error);
}
