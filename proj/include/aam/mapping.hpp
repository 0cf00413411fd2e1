#ifndef AAM_MAPPING_HPP
#define AAM_MAPPING_HPP

// Atom-atom mappings: cost, transition state, alternating-cycle
// decomposition, equivalence of mappings, completion of partial mappings,
// and an exhaustive reference solver.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "aam/errors.hpp"
#include "aam/instance.hpp"
#include "aam/isomorphism.hpp"
#include "aam/molgraph.hpp"

namespace aam {

/// psi[v] = image in G2 of vertex v of G1.
using AtomMap = std::vector<int>;

/// Unordered vertex pair with u <= v; u == v is a loop.
struct VertexPair {
    int u = 0;
    int v = 0;
    VertexPair() = default;
    VertexPair(int a, int b) : u(std::min(a, b)), v(std::max(a, b)) {}
    auto operator<=>(const VertexPair&) const = default;
};

/// Throws usage_error unless psi is a label-preserving bijection V1 -> V2.
inline void validate_map(const ReactionInstance& inst, std::span<const int> psi) {
    const int n = inst.g1.size();
    if (inst.g2.size() != n) throw usage_error("graphs differ in size");
    if (static_cast<int>(psi.size()) != n) throw usage_error("map has wrong length");
    std::vector<char> hit(n, 0);
    for (int v = 0; v < n; ++v) {
        const int p = psi[v];
        if (p < 0 || p >= n || hit[p]) throw usage_error("map is not a bijection");
        hit[p] = 1;
        if (inst.g1.label(v) != inst.g2.label(p))
            throw usage_error("map does not preserve the label of vertex " + std::to_string(v));
    }
}

inline AtomMap inverse_map(std::span<const int> psi) {
    AtomMap inv(psi.size(), -1);
    for (std::size_t v = 0; v < psi.size(); ++v) inv[psi[v]] = static_cast<int>(v);
    return inv;
}

namespace detail {

// Calls f(u, v, w1, w2) once for each pair with w1 != 0 or w2 != 0, where
// w2 is the weight of the image pair.
template <class F>
void for_each_supported_pair(const ReactionInstance& inst, std::span<const int> psi, const AtomMap& inv, F&& f) {
    for (const auto& e : inst.g1.edges()) f(e.u, e.v, e.weight, inst.g2.weight(psi[e.u], psi[e.v]));
    for (const auto& e : inst.g2.edges()) {
        const int a = inv[e.u], b = inv[e.v];
        if (inst.g1.weight(a, b) == 0) f(std::min(a, b), std::max(a, b), 0, e.weight);
    }
}

} // namespace detail

/// Sum over all vertex pairs of |w2(psi e) - w1(e)|.
inline int cost(const ReactionInstance& inst, std::span<const int> psi) {
    validate_map(inst, psi);
    const auto inv = inverse_map(psi);
    int c = 0;
    detail::for_each_supported_pair(inst, psi, inv, [&](int, int, int w1, int w2) { c += std::abs(w2 - w1); });
    return c;
}

struct TsEdge {
    int u = 0;
    int v = 0;
    int delta = 0; ///< w2(psi e) - w1(e), never zero
};

/// Edges of G1 (as vertex pairs) whose weight changes under a mapping.
class TransitionState {
public:
    TransitionState() = default;
    explicit TransitionState(std::vector<TsEdge> edges) : edges_(std::move(edges)) {
        std::erase_if(edges_, [](const TsEdge& e) { return e.delta == 0; });
        for (auto& e : edges_)
            if (e.u > e.v) std::swap(e.u, e.v);
        std::sort(edges_.begin(), edges_.end(),
                  [](const TsEdge& a, const TsEdge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    }

    const std::vector<TsEdge>& edges() const { return edges_; }
    bool empty() const { return edges_.empty(); }

    int delta(int u, int v) const {
        const VertexPair key(u, v);
        auto it = std::lower_bound(edges_.begin(), edges_.end(), key, [](const TsEdge& e, const VertexPair& k) {
            return std::tie(e.u, e.v) < std::tie(k.u, k.v);
        });
        return it != edges_.end() && it->u == key.u && it->v == key.v ? it->delta : 0;
    }

    /// Sum of |delta|.
    int total() const {
        int t = 0;
        for (const auto& e : edges_) t += std::abs(e.delta);
        return t;
    }

    /// Endpoints of changed edges, ascending.
    std::vector<int> vertices() const {
        std::vector<int> vs;
        for (const auto& e : edges_) {
            vs.push_back(e.u);
            vs.push_back(e.v);
        }
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        return vs;
    }

    /// Signed sum of incident changes, loops twice.
    int flux(int v) const { return incident_sum(v, false); }
    /// Sum of incident |changes|, loops twice.
    int abs_degree(int v) const { return incident_sum(v, true); }

    /// First vertex with nonzero flux, if any.
    std::optional<int> zero_flux_violation() const {
        for (int v : vertices())
            if (flux(v) != 0) return v;
        return std::nullopt;
    }

    /// True if the changed edges form one connected component.
    bool connected() const {
        const auto vs = vertices();
        if (vs.size() <= 1) return true;
        std::map<int, int> parent;
        for (int v : vs) parent[v] = v;
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& e : edges_) parent[find(e.u)] = find(e.v);
        const int root = find(vs.front());
        return std::all_of(vs.begin(), vs.end(), [&](int v) { return find(v) == root; });
    }

    bool operator==(const TransitionState& o) const {
        return std::equal(edges_.begin(), edges_.end(), o.edges_.begin(), o.edges_.end(),
                          [](const TsEdge& a, const TsEdge& b) {
                              return a.u == b.u && a.v == b.v && a.delta == b.delta;
                          });
    }

private:
    int incident_sum(int v, bool absolute) const {
        int s = 0;
        for (const auto& e : edges_) {
            if (e.u != v && e.v != v) continue;
            const int d = absolute ? std::abs(e.delta) : e.delta;
            s += e.u == e.v ? 2 * d : d;
        }
        return s;
    }

    std::vector<TsEdge> edges_;
};

inline TransitionState transition_state(const ReactionInstance& inst, std::span<const int> psi) {
    validate_map(inst, psi);
    const auto inv = inverse_map(psi);
    std::vector<TsEdge> edges;
    detail::for_each_supported_pair(inst, psi, inv, [&](int u, int v, int w1, int w2) {
        if (w1 != w2) edges.push_back({u, v, w2 - w1});
    });
    return TransitionState(std::move(edges));
}

/// Closed walk v0 v1 ... v(L-1) (back to v0); step k joins v_k and
/// v_(k+1 mod L) with sign signs[k] in {+1,-1}.
struct AlternatingCycle {
    std::vector<int> vertices;
    std::vector<int> signs;

    std::size_t length() const { return vertices.size(); }
    bool elementary() const {
        auto vs = vertices;
        std::sort(vs.begin(), vs.end());
        return std::adjacent_find(vs.begin(), vs.end()) == vs.end();
    }
    bool alternates() const {
        const std::size_t n = signs.size();
        if (n == 0 || n % 2 != 0 || vertices.size() != n) return false;
        for (std::size_t k = 0; k < n; ++k)
            if (std::abs(signs[k]) != 1 || signs[k] != -signs[(k + 1) % n]) return false;
        return true;
    }
};

struct CycleDecomposition {
    std::vector<AlternatingCycle> cycles;

    /// Signed per-pair sums over all cycles.
    TransitionState reconstruct() const {
        std::map<VertexPair, int> sum;
        for (const auto& c : cycles)
            for (std::size_t k = 0; k < c.length(); ++k)
                sum[VertexPair(c.vertices[k], c.vertices[(k + 1) % c.length()])] += c.signs[k];
        std::vector<TsEdge> edges;
        for (const auto& [key, d] : sum) edges.push_back({key.u, key.v, d});
        return TransitionState(std::move(edges));
    }
};

class zero_flux_error : public usage_error {
public:
    explicit zero_flux_error(int vertex)
        : usage_error("zero-flux violated at vertex " + std::to_string(vertex)), vertex_(vertex) {}
    int vertex() const noexcept { return vertex_; }

private:
    int vertex_;
};

namespace detail {

// Splits a closed alternating walk at repeated vertices an even number of
// steps apart; each piece is again a closed alternating walk.
inline void split_walk(AlternatingCycle walk, std::vector<AlternatingCycle>& out) {
    const std::size_t n = walk.length();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 2; j < n; j += 2) {
            if (walk.vertices[i] != walk.vertices[j]) continue;
            AlternatingCycle inner, outer;
            inner.vertices.assign(walk.vertices.begin() + i, walk.vertices.begin() + j);
            inner.signs.assign(walk.signs.begin() + i, walk.signs.begin() + j);
            outer.vertices.assign(walk.vertices.begin(), walk.vertices.begin() + i);
            outer.vertices.insert(outer.vertices.end(), walk.vertices.begin() + j, walk.vertices.end());
            outer.signs.assign(walk.signs.begin(), walk.signs.begin() + i);
            outer.signs.insert(outer.signs.end(), walk.signs.begin() + j, walk.signs.end());
            split_walk(std::move(outer), out);
            split_walk(std::move(inner), out);
            return;
        }
    out.push_back(std::move(walk));
}

} // namespace detail

/// Peels closed alternating walks off the transition state (lowest start
/// vertex, positive first step, lowest admissible neighbour), then splits
/// each walk at evenly spaced repeated vertices. Walks whose only repeats are
/// an odd number of steps apart stay whole. Throws zero_flux_error.
inline CycleDecomposition decompose_cycles(const TransitionState& ts) {
    if (auto bad = ts.zero_flux_violation()) throw zero_flux_error(*bad);
    std::map<int, std::map<int, int>> w; // symmetric residual weights
    for (const auto& e : ts.edges()) {
        w[e.u][e.v] = e.delta;
        w[e.v][e.u] = e.delta;
    }
    auto take = [&](int a, int b, int sign) {
        w[a][b] -= sign;
        if (a != b) w[b][a] -= sign;
        if (w[a][b] == 0) {
            w[a].erase(b);
            if (a != b) w[b].erase(a);
        }
    };
    CycleDecomposition out;
    for (;;) {
        int start = -1;
        for (auto& [v, nbrs] : w) {
            if (std::any_of(nbrs.begin(), nbrs.end(), [](const auto& kv) { return kv.second > 0; })) {
                start = v;
                break;
            }
        }
        if (start < 0) break;
        AlternatingCycle walk;
        int cur = start, sign = +1;
        do {
            int next = -1;
            for (const auto& [u, d] : w[cur])
                if ((sign > 0 && d > 0) || (sign < 0 && d < 0)) {
                    next = u;
                    break;
                }
            if (next < 0) throw zero_flux_error(cur);
            walk.vertices.push_back(cur);
            walk.signs.push_back(sign);
            take(cur, next, sign);
            cur = next;
            sign = -sign;
        } while (!(cur == start && sign > 0));
        detail::split_walk(std::move(walk), out.cycles);
    }
    return out;
}

/// Overlay of G1 and psi^-1(G2): colour = (label, loop in G1, loop of the
/// image in G2), edge label = (w1, w2) on every pair where either is nonzero.
inline LabeledGraph equivalence_graph(const ReactionInstance& inst, std::span<const int> psi) {
    validate_map(inst, psi);
    const int n = inst.g1.size();
    LabeledGraph g(n);
    for (int v = 0; v < n; ++v) {
        std::uint64_t c = hash_combine(inst.g1.label(v).code(), static_cast<std::uint64_t>(inst.g1.loop(v)));
        g.set_color(v, hash_combine(c, static_cast<std::uint64_t>(inst.g2.loop(psi[v]))));
    }
    const auto inv = inverse_map(psi);
    detail::for_each_supported_pair(inst, psi, inv, [&](int u, int v, int w1, int w2) {
        if (u == v) return;
        // Both weights fit in 32 bits; offset keeps the pair label nonzero.
        const auto pack = (static_cast<std::int64_t>(w1) + (1 << 20)) << 32 |
                          static_cast<std::uint32_t>(w2 + (1 << 20));
        g.set_edge(u, v, pack);
    });
    return g;
}

inline bool equivalent(const ReactionInstance& inst, std::span<const int> psi, std::span<const int> phi) {
    return find_isomorphism(equivalence_graph(inst, psi), equivalence_graph(inst, phi)).has_value();
}

/// One representative map per equivalence class, in insertion order.
class EquivalenceClassSet {
public:
    explicit EquivalenceClassSet(const ReactionInstance& inst) : inst_(&inst) {}

    /// Adds psi unless an equivalent map is already stored; returns true if added.
    bool insert(const AtomMap& psi) {
        auto g = equivalence_graph(*inst_, psi);
        const auto h = invariant_hash(g);
        auto& bucket = buckets_[h];
        for (std::size_t idx : bucket)
            if (find_isomorphism(graphs_[idx], g)) return false;
        bucket.push_back(reps_.size());
        reps_.push_back(psi);
        graphs_.push_back(std::move(g));
        return true;
    }

    bool contains(const AtomMap& psi) const {
        auto g = equivalence_graph(*inst_, psi);
        auto it = buckets_.find(invariant_hash(g));
        if (it == buckets_.end()) return false;
        for (std::size_t idx : it->second)
            if (find_isomorphism(graphs_[idx], g)) return true;
        return false;
    }

    const std::vector<AtomMap>& representatives() const { return reps_; }
    std::size_t size() const { return reps_.size(); }

private:
    const ReactionInstance* inst_;
    std::vector<AtomMap> reps_;
    std::vector<LabeledGraph> graphs_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

/// True if both map lists describe the same set of equivalence classes.
inline bool same_classes(const ReactionInstance& inst, const std::vector<AtomMap>& a, const std::vector<AtomMap>& b) {
    EquivalenceClassSet sa(inst), sb(inst);
    for (const auto& m : a) sa.insert(m);
    for (const auto& m : b) sb.insert(m);
    if (sa.size() != sb.size()) return false;
    return std::all_of(sb.representatives().begin(), sb.representatives().end(),
                       [&](const AtomMap& m) { return sa.contains(m); });
}

/// Weight changes accumulated along candidate paths, keyed by G1 vertex pair.
using PathWeights = std::map<VertexPair, int>;

struct CompletionResult {
    std::optional<AtomMap> map;
    std::string diagnostic; ///< reason for failure, empty on success
};

/// Extends an injective partial map (-1 = unmapped) to a full mapping whose
/// transition state is exactly `path_weights`, or reports why none exists.
inline CompletionResult complete_partial_diagnosed(const ReactionInstance& inst, std::span<const int> partial,
                                                   const PathWeights& path_weights) {
    const int n = inst.g1.size();
    if (static_cast<int>(partial.size()) != n || inst.g2.size() != n) throw usage_error("partial map has wrong length");
    std::vector<char> used(n, 0);
    for (int v = 0; v < n; ++v) {
        const int p = partial[v];
        if (p < 0) continue;
        if (p >= n || used[p]) throw usage_error("partial map is not injective");
        used[p] = 1;
        if (inst.g1.label(v) != inst.g2.label(p)) return {std::nullopt, "partial map violates labels"};
    }
    LabeledGraph a = to_labeled_graph(inst.g1), b = to_labeled_graph(inst.g2);
    std::vector<int> loop1(n), loop2(n);
    for (int v = 0; v < n; ++v) {
        loop1[v] = inst.g1.loop(v);
        loop2[v] = inst.g2.loop(v);
    }
    for (const auto& [e, wp] : path_weights) {
        if (wp == 0) continue;
        const int p = partial[e.u], q = partial[e.v];
        if (p < 0 || q < 0) throw usage_error("path weight on an unmapped vertex");
        const int w1 = inst.g1.weight(e.u, e.v), w2 = inst.g2.weight(p, q);
        if (wp != w2 - w1)
            return {std::nullopt, "weight mismatch on {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                      "}: path " + std::to_string(wp) + ", graphs " + std::to_string(w2 - w1)};
        if (e.u == e.v) {
            loop1[e.u] = 0;
            loop2[p] = 0;
        } else {
            a.set_edge(e.u, e.v, 0);
            b.set_edge(p, q, 0);
        }
    }
    // Unique colours pin mapped pairs; all others keep label and loop.
    for (int v = 0; v < n; ++v) {
        a.set_color(v, hash_combine(inst.g1.label(v).code(), static_cast<std::uint64_t>(loop1[v])));
        b.set_color(v, hash_combine(inst.g2.label(v).code(), static_cast<std::uint64_t>(loop2[v])));
    }
    for (int v = 0; v < n; ++v) {
        if (partial[v] < 0) continue;
        const auto pin = hash_combine(0x70696eULL, static_cast<std::uint64_t>(v));
        a.set_color(v, pin);
        b.set_color(partial[v], pin);
    }
    auto iso = find_isomorphism(a, b);
    if (!iso) return {std::nullopt, "residual graphs are not isomorphic"};
    return {std::move(*iso), {}};
}

inline std::optional<AtomMap> complete_partial(const ReactionInstance& inst, std::span<const int> partial,
                                               const PathWeights& path_weights) {
    return complete_partial_diagnosed(inst, partial, path_weights).map;
}

struct BruteForceResult {
    int min_cost = 0;
    std::vector<AtomMap> classes;   ///< one optimal map per equivalence class
    std::uint64_t optimal_maps = 0; ///< optimal bijections before class reduction
};

/// Enumerates every label-preserving bijection (per-label permutations, with
/// pruning of branches already costlier than the best) and returns the
/// minimum cost with one map per optimal class. Refuses n > limit.
inline BruteForceResult brute_force_min_cost(const ReactionInstance& inst, int limit = 12) {
    const int n = inst.g1.size();
    if (n > limit)
        throw usage_error("instance has " + std::to_string(n) + " vertices, exhaustive bound is " + std::to_string(limit));
    std::map<VertexLabel, int> balance;
    for (int v = 0; v < n; ++v) ++balance[inst.g1.label(v)];
    for (int v = 0; v < n; ++v) --balance[inst.g2.label(v)];
    for (const auto& [l, c] : balance)
        if (c != 0) throw unbalanced_error("vertex labels differ between sides");

    AtomMap psi(n, -1);
    std::vector<char> used(n, 0);
    int best = std::numeric_limits<int>::max();
    std::vector<AtomMap> optimal;
    std::uint64_t optimal_count = 0;

    // Cost of the pairs {u, v} with u <= v that become fully mapped at v.
    auto increment = [&](int v) {
        int c = 0;
        for (int u = 0; u <= v; ++u) c += std::abs(inst.g2.weight(psi[u], psi[v]) - inst.g1.weight(u, v));
        return c;
    };
    auto rec = [&](auto&& self, int v, int acc) -> void {
        if (acc > best) return;
        if (v == n) {
            if (acc < best) {
                best = acc;
                optimal.clear();
                optimal_count = 0;
            }
            ++optimal_count;
            optimal.push_back(psi);
            return;
        }
        for (int p = 0; p < n; ++p) {
            if (used[p] || inst.g2.label(p) != inst.g1.label(v)) continue;
            psi[v] = p;
            used[p] = 1;
            self(self, v + 1, acc + increment(v));
            used[p] = 0;
            psi[v] = -1;
        }
    };
    rec(rec, 0, 0);

    BruteForceResult r;
    r.min_cost = best;
    r.optimal_maps = optimal_count;
    EquivalenceClassSet classes(inst);
    for (const auto& m : optimal) classes.insert(m);
    r.classes = classes.representatives();
    return r;
}

} // namespace aam

#endif
