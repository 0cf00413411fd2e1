#ifndef AAM_ISOMORPHISM_HPP
#define AAM_ISOMORPHISM_HPP

// Label- and edge-label-preserving graph isomorphism for small, sparse graphs.
//
// Vertices are first partitioned by colour refinement run jointly over both
// graphs, so a candidate pair must agree on its stable colour; the remaining
// ambiguity is resolved by a VF2-style backtracking search over a static
// connectivity-first vertex order.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace aam {

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) {
    return mix64(seed ^ (mix64(v) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

/// Undirected graph with vertex colours and nonzero edge labels. Loops are
/// expected to be folded into the vertex colour by the caller.
class LabeledGraph {
public:
    explicit LabeledGraph(int n = 0)
        : n_(n), color_(static_cast<std::size_t>(n), 0), adj_(static_cast<std::size_t>(n) * n, 0),
          nbrs_(static_cast<std::size_t>(n)) {}

    int size() const { return n_; }
    std::uint64_t color(int v) const { return color_[v]; }
    void set_color(int v, std::uint64_t c) { color_[v] = c; }

    std::int64_t edge(int u, int v) const { return adj_[static_cast<std::size_t>(u) * n_ + v]; }
    const std::vector<int>& neighbors(int v) const { return nbrs_[v]; }

    /// Sets the label of {u,v}; label 0 removes the edge.
    void set_edge(int u, int v, std::int64_t label) {
        if (u == v) return;
        std::int64_t& slot = adj_[static_cast<std::size_t>(u) * n_ + v];
        if ((slot == 0) != (label == 0)) {
            if (label != 0) {
                nbrs_[u].push_back(v);
                nbrs_[v].push_back(u);
            } else {
                std::erase(nbrs_[u], v);
                std::erase(nbrs_[v], u);
            }
        }
        slot = label;
        adj_[static_cast<std::size_t>(v) * n_ + u] = label;
    }

private:
    int n_;
    std::vector<std::uint64_t> color_;
    std::vector<std::int64_t> adj_;
    std::vector<std::vector<int>> nbrs_;
};

namespace detail {

// Stable colouring of a and b computed in one shared colour space.
// Returns false if the colour histograms already differ.
inline bool refine_jointly(const LabeledGraph& a, const LabeledGraph& b, std::vector<int>& ca,
                           std::vector<int>& cb) {
    const int n = a.size();
    std::map<std::uint64_t, int> initial;
    for (int v = 0; v < n; ++v) initial.emplace(a.color(v), 0);
    for (int v = 0; v < n; ++v) initial.emplace(b.color(v), 0);
    int next = 0;
    for (auto& [key, id] : initial) id = next++;
    ca.assign(n, 0);
    cb.assign(n, 0);
    for (int v = 0; v < n; ++v) {
        ca[v] = initial[a.color(v)];
        cb[v] = initial[b.color(v)];
    }
    int classes = next;
    for (;;) {
        std::vector<int> hist(classes, 0);
        for (int v = 0; v < n; ++v) ++hist[ca[v]];
        for (int v = 0; v < n; ++v) --hist[cb[v]];
        if (std::any_of(hist.begin(), hist.end(), [](int h) { return h != 0; })) return false;

        std::map<std::vector<std::int64_t>, int> ids;
        auto signature = [](const LabeledGraph& g, const std::vector<int>& c, int v) {
            std::vector<std::int64_t> sig;
            sig.reserve(1 + 2 * g.neighbors(v).size());
            std::vector<std::pair<std::int64_t, std::int64_t>> parts;
            for (int u : g.neighbors(v)) parts.emplace_back(g.edge(v, u), c[u]);
            std::sort(parts.begin(), parts.end());
            sig.push_back(c[v]);
            for (auto& [l, cu] : parts) {
                sig.push_back(l);
                sig.push_back(cu);
            }
            return sig;
        };
        std::vector<std::vector<std::int64_t>> sa(n), sb(n);
        for (int v = 0; v < n; ++v) {
            sa[v] = signature(a, ca, v);
            sb[v] = signature(b, cb, v);
            ids.emplace(sa[v], 0);
            ids.emplace(sb[v], 0);
        }
        int fresh = 0;
        for (auto& [key, id] : ids) id = fresh++;
        for (int v = 0; v < n; ++v) {
            ca[v] = ids[sa[v]];
            cb[v] = ids[sb[v]];
        }
        if (fresh == classes) break;
        classes = fresh;
    }
    std::vector<int> hist(classes, 0);
    for (int v = 0; v < n; ++v) ++hist[ca[v]];
    for (int v = 0; v < n; ++v) --hist[cb[v]];
    return std::all_of(hist.begin(), hist.end(), [](int h) { return h == 0; });
}

class Matcher {
public:
    Matcher(const LabeledGraph& a, const LabeledGraph& b, std::vector<int> ca, std::vector<int> cb)
        : a_(a), b_(b), ca_(std::move(ca)), cb_(std::move(cb)) {
        const int n = a.size();
        int max_color = 0;
        for (int c : ca_) max_color = std::max(max_color, c);
        std::vector<int> class_size(max_color + 1, 0);
        for (int c : ca_) ++class_size[c];

        // Connectivity-first order, smallest colour class breaks ties.
        std::vector<char> placed(n, 0);
        std::vector<int> links(n, 0);
        order_.reserve(n);
        for (int step = 0; step < n; ++step) {
            int best = -1;
            for (int v = 0; v < n; ++v) {
                if (placed[v]) continue;
                if (best < 0 || links[v] > links[best] ||
                    (links[v] == links[best] && class_size[ca_[v]] < class_size[ca_[best]]))
                    best = v;
            }
            placed[best] = 1;
            order_.push_back(best);
            for (int u : a.neighbors(best)) ++links[u];
        }
        std::vector<int> pos(n);
        for (int i = 0; i < n; ++i) pos[order_[i]] = i;
        earlier_.resize(n);
        for (int i = 0; i < n; ++i)
            for (int u : a.neighbors(order_[i]))
                if (pos[u] < i) earlier_[i].push_back(u);
        map_.assign(n, -1);
        used_.assign(n, 0);
        by_color_.assign(max_color + 1, {});
        for (int v = 0; v < n; ++v)
            if (cb_[v] <= max_color) by_color_[cb_[v]].push_back(v);
    }

    std::optional<std::vector<int>> run() {
        if (extend(0)) return map_;
        return std::nullopt;
    }

private:
    bool feasible(int depth, int av, int bv) const {
        int mapped_nbrs = 0;
        for (int u : b_.neighbors(bv))
            if (mapped_back(u)) ++mapped_nbrs;
        if (mapped_nbrs != static_cast<int>(earlier_[depth].size())) return false;
        for (int u : earlier_[depth])
            if (b_.edge(bv, map_[u]) != a_.edge(av, u)) return false;
        return true;
    }

    bool mapped_back(int bv) const { return used_[bv] != 0; }

    bool extend(int depth) {
        if (depth == a_.size()) return true;
        const int av = order_[depth];
        for (int bv : by_color_[ca_[av]]) {
            if (used_[bv] || !feasible(depth, av, bv)) continue;
            map_[av] = bv;
            used_[bv] = 1;
            if (extend(depth + 1)) return true;
            used_[bv] = 0;
            map_[av] = -1;
        }
        return false;
    }

    const LabeledGraph& a_;
    const LabeledGraph& b_;
    std::vector<int> ca_, cb_;
    std::vector<int> order_;
    std::vector<std::vector<int>> earlier_;
    std::vector<std::vector<int>> by_color_;
    std::vector<int> map_;
    std::vector<char> used_;
};

} // namespace detail

/// Returns map[a-vertex] = b-vertex preserving colours and edge labels, or nothing.
inline std::optional<std::vector<int>> find_isomorphism(const LabeledGraph& a, const LabeledGraph& b) {
    if (a.size() != b.size()) return std::nullopt;
    std::vector<int> ca, cb;
    if (!detail::refine_jointly(a, b, ca, cb)) return std::nullopt;
    return detail::Matcher(a, b, std::move(ca), std::move(cb)).run();
}

/// Isomorphism-invariant hash (three rounds of hashed colour refinement).
inline std::uint64_t invariant_hash(const LabeledGraph& g) {
    const int n = g.size();
    std::vector<std::uint64_t> c(n);
    for (int v = 0; v < n; ++v) c[v] = mix64(g.color(v));
    for (int round = 0; round < 3; ++round) {
        std::vector<std::uint64_t> next(n);
        for (int v = 0; v < n; ++v) {
            std::vector<std::uint64_t> parts;
            for (int u : g.neighbors(v))
                parts.push_back(hash_combine(static_cast<std::uint64_t>(g.edge(v, u)), c[u]));
            std::sort(parts.begin(), parts.end());
            std::uint64_t h = c[v];
            for (auto p : parts) h = hash_combine(h, p);
            next[v] = h;
        }
        c.swap(next);
    }
    std::sort(c.begin(), c.end());
    std::uint64_t h = mix64(static_cast<std::uint64_t>(n));
    for (auto x : c) h = hash_combine(h, x);
    return h;
}

} // namespace aam

#endif
