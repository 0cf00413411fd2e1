#ifndef AAM_ALTCYC_HPP
#define AAM_ALTCYC_HPP

// Search-tree solver enumerating optimal atom-atom mappings by growing
// alternating paths of weight changes (the transition state) directly.
//
// Every zero-flux transition state peels into closed alternating walks, each
// started at the lowest remaining vertex with a positive step and closed at
// the first return to its start after a negative step. The general search
// enumerates exactly such walk sequences (seeds nondecreasing, every vertex of
// a walk at least its seed), so it is complete for zero-flux transition
// states. Each candidate (partial map plus accumulated weights) is completed
// once by isomorphism and completions are reduced to equivalence classes.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "aam/errors.hpp"
#include "aam/instance.hpp"
#include "aam/mapping.hpp"
#include "aam/molgraph.hpp"

namespace aam {

/// Alternating walks over G1 vertices; walk k visits paths[k][0], paths[k][1], ...
/// and its steps carry signs +1, -1, +1, ... from the first step on.
struct MechanismTrace {
    std::vector<std::vector<int>> paths;

    struct Step {
        int u, v, sign;
    };
    /// Steps of each path in order.
    std::vector<std::vector<Step>> steps() const {
        std::vector<std::vector<Step>> out;
        for (const auto& p : paths) {
            std::vector<Step> s;
            int sign = +1;
            for (std::size_t k = 0; k + 1 < p.size(); ++k, sign = -sign) s.push_back({p[k], p[k + 1], sign});
            out.push_back(std::move(s));
        }
        return out;
    }
    std::size_t total_steps() const {
        std::size_t t = 0;
        for (const auto& p : paths) t += p.empty() ? 0 : p.size() - 1;
        return t;
    }
};

/// Signed occurrences of edge {u,v} along all paths, each path's signs
/// alternating from +1 at its first step.
inline int weight_along_path(VertexPair edge, const std::vector<std::vector<int>>& paths) {
    int w = 0;
    for (const auto& p : paths) {
        int sign = +1;
        for (std::size_t k = 0; k + 1 < p.size(); ++k, sign = -sign)
            if (VertexPair(p[k], p[k + 1]) == edge) w += sign;
    }
    return w;
}

/// All nonzero accumulated weights of a trace.
inline PathWeights replay(const MechanismTrace& trace) {
    PathWeights w;
    for (const auto& path : trace.steps())
        for (const auto& s : path) w[VertexPair(s.u, s.v)] += s.sign;
    std::erase_if(w, [](const auto& kv) { return kv.second == 0; });
    return w;
}

struct Candidate {
    std::vector<int> partial; ///< -1 for vertices not on any path
    PathWeights weights;
    MechanismTrace trace;
};

/// Limits shared by one solve; exceeding either aborts with a timeout.
struct SearchBudget {
    std::optional<std::chrono::steady_clock::time_point> deadline;
    std::optional<std::uint64_t> node_limit;
};

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t candidates = 0;
    bool aborted = false;
};

namespace detail {

class AltCycSearch {
public:
    using Callback = std::function<bool(const Candidate&)>;

    AltCycSearch(const ReactionInstance& inst, bool elementary, SearchBudget budget)
        : g1_(inst.g1), g2_(inst.g2), n_(inst.g1.size()), elementary_(elementary), budget_(budget) {
        if (g2_.size() != n_) throw unbalanced_error("sides differ in vertex count");
        precompute_lower_bounds();
        precompute_twins();
        for (int v = 0; v < n_; ++v) {
            by_label1_[g1_.label(v)].push_back(v);
            by_label2_[g2_.label(v)].push_back(v);
        }
        for (const auto& [l, vs] : by_label1_)
            if (by_label2_[l].size() != vs.size()) throw unbalanced_error("vertex labels differ between sides");
    }

    /// Streams every candidate with exactly k unit steps; returns false if aborted.
    bool run(int k, const Callback& cb, SearchStats& stats) {
        if (k < 0 || k % 2 != 0) throw usage_error("search length must be even and nonnegative");
        cb_ = &cb;
        stats_ = &stats;
        stop_ = false;
        reset();
        k_rem_ = k;
        if (!premap_specials()) return true;
        if (!feasible()) return true;
        if (k == 0) {
            if (D_ == 0) emit();
        } else {
            next_path(0);
        }
        return !stats.aborted;
    }

private:
    // ---- precomputation -------------------------------------------------

    void precompute_lower_bounds() {
        auto profile = [](const MoleculeGraph& g, int v) {
            std::map<VertexLabel, std::vector<int>> by;
            for (const auto& nb : g.neighbors(v)) by[g.label(nb.vertex)].push_back(nb.weight);
            return by;
        };
        std::vector<std::map<VertexLabel, std::vector<int>>> p1(n_), p2(n_);
        for (int v = 0; v < n_; ++v) {
            p1[v] = profile(g1_, v);
            p2[v] = profile(g2_, v);
        }
        lb_.assign(static_cast<std::size_t>(n_) * n_, 0);
        for (int i = 0; i < n_; ++i)
            for (int p = 0; p < n_; ++p) {
                if (g1_.label(i) != g2_.label(p)) continue;
                int bound = 2 * std::abs(g1_.loop(i) - g2_.loop(p));
                auto classes = p1[i];
                for (const auto& [l, ws] : p2[p]) classes.try_emplace(l);
                for (const auto& [l, ws1] : classes) {
                    std::vector<int> a = ws1;
                    std::vector<int> b;
                    if (auto it = p2[p].find(l); it != p2[p].end()) b = it->second;
                    const std::size_t len = std::max(a.size(), b.size());
                    a.resize(len, 0);
                    b.resize(len, 0);
                    std::sort(a.begin(), a.end());
                    std::sort(b.begin(), b.end());
                    for (std::size_t t = 0; t < len; ++t) bound += std::abs(a[t] - b[t]);
                }
                lb_[idx(i, p)] = bound;
            }
        min_lb_.assign(n_, 0);
        for (int i = 0; i < n_; ++i) {
            int best = -1;
            for (int p = 0; p < n_; ++p)
                if (g1_.label(i) == g2_.label(p) && (best < 0 || lb_[idx(i, p)] < best)) best = lb_[idx(i, p)];
            min_lb_[i] = std::max(best, 0);
        }
    }

    // Twins in G2: same label and loop, identical weights to all other vertices.
    void precompute_twins() {
        twins_before_.assign(n_, {});
        for (int p = 0; p < n_; ++p)
            for (int q = 0; q < p; ++q) {
                if (g2_.label(p) != g2_.label(q) || g2_.loop(p) != g2_.loop(q)) continue;
                bool same = true;
                for (int x = 0; x < n_ && same; ++x)
                    if (x != p && x != q && g2_.weight(p, x) != g2_.weight(q, x)) same = false;
                if (same) twins_before_[p].push_back(q);
            }
    }

    // ---- state ----------------------------------------------------------

    std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a) * n_ + b; }

    void reset() {
        psi_.assign(n_, -1);
        inv_.assign(n_, -1);
        wp_.assign(static_cast<std::size_t>(n_) * n_, 0);
        steps_at_.assign(n_, 0);
        D_ = 0;
        excess_ = 0;
        unmapped_lb_ = 0;
        for (int v : min_lb_) unmapped_lb_ += v;
        paths_.clear();
        seen_.clear();
    }

    bool premap_specials() {
        for (auto [v1, v2] : {std::pair{g1_.charge_vertex(), g2_.charge_vertex()},
                              std::pair{g1_.radical_vertex(), g2_.radical_vertex()}}) {
            if (v1.has_value() != v2.has_value()) throw unbalanced_error("special vertices differ between sides");
            if (v1) map_vertex(*v1, *v2);
        }
        return true;
    }

    int target(int a, int b) const { return g2_.weight(psi_[a], psi_[b]) - g1_.weight(a, b); }

    int excess_of(int v) const { return std::max(0, lb_[idx(v, psi_[v])] - steps_at_[v]); }

    // Maps i -> p; returns the increase of D for undo.
    int map_vertex(int i, int p) {
        psi_[i] = p;
        inv_[p] = i;
        int d = std::abs(g2_.loop(p) - g1_.loop(i));
        for (const auto& nb : g1_.neighbors(i))
            if (psi_[nb.vertex] >= 0) d += std::abs(g2_.weight(p, psi_[nb.vertex]) - nb.weight);
        for (const auto& nb : g2_.neighbors(p)) {
            const int j = inv_[nb.vertex];
            if (j >= 0 && g1_.weight(i, j) == 0) d += std::abs(nb.weight);
        }
        D_ += d;
        excess_ += excess_of(i);
        unmapped_lb_ -= min_lb_[i];
        return d;
    }

    void unmap_vertex(int i, int d) {
        excess_ -= excess_of(i);
        unmapped_lb_ += min_lb_[i];
        D_ -= d;
        inv_[psi_[i]] = -1;
        psi_[i] = -1;
    }

    void apply_step(int a, int b, int sign) {
        const int t = target(a, b);
        int& w = wp_[idx(a, b)];
        D_ -= std::abs(t - w);
        excess_ -= excess_of(a);
        if (a != b) excess_ -= excess_of(b);
        w += sign;
        if (a != b) wp_[idx(b, a)] = w;
        if (a == b) steps_at_[a] += 2;
        else {
            ++steps_at_[a];
            ++steps_at_[b];
        }
        D_ += std::abs(t - w);
        excess_ += excess_of(a);
        if (a != b) excess_ += excess_of(b);
    }

    void undo_step(int a, int b, int sign) {
        const int t = target(a, b);
        int& w = wp_[idx(a, b)];
        D_ -= std::abs(t - w);
        excess_ -= excess_of(a);
        if (a != b) excess_ -= excess_of(b);
        w -= sign;
        if (a != b) wp_[idx(b, a)] = w;
        if (a == b) steps_at_[a] -= 2;
        else {
            --steps_at_[a];
            --steps_at_[b];
        }
        D_ += std::abs(t - w);
        excess_ += excess_of(a);
        if (a != b) excess_ += excess_of(b);
    }

    // Each remaining step changes one pair by one and adds two to the
    // |delta|-degree sum; every vertex ends with |delta|-degree >= its bound.
    bool feasible() const { return D_ <= k_rem_ && excess_ + unmapped_lb_ <= 2 * k_rem_; }

    bool twin_representative(int p) const {
        for (int q : twins_before_[p])
            if (inv_[q] < 0) return false;
        return true;
    }

    bool tick() {
        ++stats_->nodes;
        if (budget_.node_limit && stats_->nodes > *budget_.node_limit) stats_->aborted = true;
        if (budget_.deadline && (stats_->nodes & 1023) == 0 && std::chrono::steady_clock::now() > *budget_.deadline)
            stats_->aborted = true;
        return !stats_->aborted && !stop_;
    }

    void emit() {
        std::vector<int> key(psi_.begin(), psi_.end());
        for (int a = 0; a < n_; ++a)
            for (int b = a; b < n_; ++b)
                if (int w = wp_[idx(a, b)]) {
                    key.push_back(a);
                    key.push_back(b);
                    key.push_back(w);
                }
        if (!seen_.insert(std::move(key)).second) return;
        Candidate c;
        c.partial = psi_;
        for (int a = 0; a < n_; ++a)
            for (int b = a; b < n_; ++b)
                if (int w = wp_[idx(a, b)]) c.weights[VertexPair(a, b)] = w;
        c.trace.paths = paths_;
        ++stats_->candidates;
        if (!(*cb_)(c)) stop_ = true;
    }

    // ---- search -----------------------------------------------------------

    // Starts a new walk at a seed >= min_seed, or emits when no steps remain.
    void next_path(int min_seed) {
        if (!tick()) return;
        if (k_rem_ == 0) {
            if (D_ == 0) emit();
            return;
        }
        if (k_rem_ < 4 || (elementary_ && !paths_.empty())) return;
        for (int s = min_seed; s < n_ && !stop_ && !stats_->aborted; ++s) {
            if (psi_[s] >= 0) {
                if (elementary_ && !is_premapped(s)) continue;
                start_path(s);
                continue;
            }
            for (int p : by_label2_.at(g1_.label(s))) {
                if (inv_[p] >= 0 || !twin_representative(p)) continue;
                const int d = map_vertex(s, p);
                if (feasible()) start_path(s);
                unmap_vertex(s, d);
                if (stop_ || stats_->aborted) break;
            }
        }
    }

    bool is_premapped(int v) const {
        const auto k = g1_.label(v).kind;
        return k == LabelKind::Charge || k == LabelKind::Radical;
    }

    void start_path(int s) {
        paths_.push_back({s});
        extend(s, s, +1);
        paths_.pop_back();
    }

    // Tries to take one step h -> i with sign `sign`; p is i's image.
    void step(int s, int h, int i, int sign) {
        apply_step(h, i, sign);
        --k_rem_;
        if (feasible()) {
            paths_.back().push_back(i);
            if (sign < 0 && i == s) next_path(s);
            else extend(s, i, -sign);
            paths_.back().pop_back();
        }
        ++k_rem_;
        undo_step(h, i, sign);
    }

    void step_new(int s, int h, int i, int p, int sign) {
        const int d = map_vertex(i, p);
        if (feasible()) step(s, h, i, sign);
        unmap_vertex(i, d);
    }

    bool on_path(int v) const {
        const auto& p = paths_.back();
        return std::find(p.begin(), p.end(), v) != p.end();
    }

    bool admissible(int w1, int wp, int w2, int sign) const {
        if (elementary_) return wp == 0 && w1 + sign == w2;
        return sign > 0 ? (wp >= 0 && w1 + wp + 1 <= w2) : (wp <= 0 && w1 + wp - 1 >= w2);
    }

    // Whether an already mapped vertex j may be the next vertex of the walk.
    bool may_revisit(int s, int j) const {
        if (!elementary_) return j >= s;
        if (j == s) return k_rem_ == 1;
        return k_rem_ > 1 && j > s && is_premapped(j) && !on_path(j);
    }

    bool halted() const { return stop_ || stats_->aborted; }

    // Moves cover every pair whose weight is nonzero on at least one side;
    // pairs that are zero on both sides never admit a step.
    void extend(int s, int h, int sign) {
        if (!tick() || k_rem_ == 0) return;
        if (elementary_ && k_rem_ == 1 && sign > 0) return;
        const int ph = psi_[h];
        if (!elementary_ && admissible(g1_.loop(h), wp_[idx(h, h)], g2_.loop(ph), sign)) step(s, h, h, sign);
        if (elementary_ && k_rem_ == 1) {
            if (admissible(g1_.weight(h, s), wp_[idx(h, s)], g2_.weight(ph, psi_[s]), sign)) step(s, h, s, sign);
            return;
        }
        for (const auto& nb : g2_.neighbors(ph)) {
            if (halted()) return;
            const int q = nb.vertex;
            if (const int j = inv_[q]; j >= 0) {
                if (may_revisit(s, j) && admissible(g1_.weight(h, j), wp_[idx(h, j)], nb.weight, sign))
                    step(s, h, j, sign);
                continue;
            }
            if (!twin_representative(q)) continue;
            for (int i : by_label1_.at(g2_.label(q))) {
                if (i <= s || psi_[i] >= 0 || !admissible(g1_.weight(h, i), 0, nb.weight, sign)) continue;
                step_new(s, h, i, q, sign);
                if (halted()) return;
            }
        }
        for (const auto& nb : g1_.neighbors(h)) {
            if (halted()) return;
            const int j = nb.vertex;
            if (psi_[j] >= 0) {
                if (g2_.weight(ph, psi_[j]) == 0 && may_revisit(s, j) &&
                    admissible(nb.weight, wp_[idx(h, j)], 0, sign))
                    step(s, h, j, sign);
                continue;
            }
            if (j <= s || !admissible(nb.weight, 0, 0, sign)) continue;
            for (int p : by_label2_.at(g1_.label(j))) {
                if (inv_[p] >= 0 || g2_.weight(ph, p) != 0 || !twin_representative(p)) continue;
                step_new(s, h, j, p, sign);
                if (halted()) return;
            }
        }
    }

    const MoleculeGraph& g1_;
    const MoleculeGraph& g2_;
    int n_;
    bool elementary_;
    SearchBudget budget_;

    std::vector<int> lb_;     // |delta|-degree lower bound of i when mapped to p
    std::vector<int> min_lb_; // minimum of lb_ over compatible p
    std::vector<std::vector<int>> twins_before_;
    std::map<VertexLabel, std::vector<int>> by_label1_, by_label2_;

    std::vector<int> psi_, inv_, wp_, steps_at_;
    int D_ = 0;      // sum over mapped pairs of |target - accumulated|
    int excess_ = 0; // sum over mapped vertices of max(0, LB - steps)
    int unmapped_lb_ = 0;
    int k_rem_ = 0;
    std::vector<std::vector<int>> paths_;
    std::set<std::vector<int>> seen_;
    const Callback* cb_ = nullptr;
    SearchStats* stats_ = nullptr;
    bool stop_ = false;
};

} // namespace detail

/// Candidates whose transition state is one elementary alternating cycle of
/// length k. The callback returns false to stop. Returns false on timeout.
inline bool search_elementary(const ReactionInstance& inst, int k, const std::function<bool(const Candidate&)>& cb,
                              SearchBudget budget = {}, SearchStats* stats = nullptr) {
    if (k % 2 != 0) throw usage_error("k must be even");
    SearchStats local;
    return detail::AltCycSearch(inst, true, budget).run(k, cb, stats ? *stats : local);
}

/// Candidates for every zero-flux transition state with k unit changes:
/// vertex revisits and several closed walks allowed.
inline bool search_general(const ReactionInstance& inst, int k, const std::function<bool(const Candidate&)>& cb,
                           SearchBudget budget = {}, SearchStats* stats = nullptr) {
    if (k % 2 != 0) throw usage_error("k must be even");
    SearchStats local;
    return detail::AltCycSearch(inst, false, budget).run(k, cb, stats ? *stats : local);
}

struct SolveOptions {
    int max_cost = 10;
    bool connected_only = false;
    bool elementary_only = false;
    std::optional<std::chrono::milliseconds> time_budget;
    std::optional<std::uint64_t> node_budget;
};

enum class SolveOutcome { Optimal, Exhausted, Timeout };

inline const char* to_string(SolveOutcome o) {
    switch (o) {
    case SolveOutcome::Optimal: return "optimal";
    case SolveOutcome::Exhausted: return "exhausted";
    case SolveOutcome::Timeout: return "timeout";
    }
    return "?";
}

struct MappingSolution {
    AtomMap map;
    MechanismTrace trace;
};

struct Solution {
    SolveOutcome outcome = SolveOutcome::Exhausted;
    std::optional<int> min_cost;
    std::vector<MappingSolution> maps; ///< one per equivalence class
    std::uint64_t nodes = 0;
    std::uint64_t candidates = 0;
    std::uint64_t completions = 0;
    int last_bound = -1; ///< largest cost bound fully searched
};

/// Iterative deepening over the cost bound 0, 2, 4, ... max_cost; stops at the
/// first bound with a completed mapping and returns all its classes.
inline Solution solve(const ReactionInstance& inst, const SolveOptions& opt = {}) {
    Solution sol;
    SearchBudget budget;
    if (opt.time_budget) budget.deadline = std::chrono::steady_clock::now() + *opt.time_budget;
    budget.node_limit = opt.node_budget;

    detail::AltCycSearch search(inst, opt.elementary_only, budget);
    SearchStats stats;
    for (int bound = 0; bound <= opt.max_cost; bound += 2) {
        EquivalenceClassSet classes(inst);
        std::vector<MappingSolution> found;
        const bool complete = search.run(bound, [&](const Candidate& c) {
            auto m = complete_partial(inst, c.partial, c.weights);
            ++sol.completions;
            if (!m) return true;
            if (opt.connected_only && !transition_state(inst, *m).connected()) return true;
            if (classes.insert(*m)) found.push_back({std::move(*m), c.trace});
            return true;
        }, stats);
        sol.nodes = stats.nodes;
        sol.candidates = stats.candidates;
        if (!complete) {
            sol.outcome = SolveOutcome::Timeout;
            sol.maps = std::move(found);
            return sol;
        }
        sol.last_bound = bound;
        if (!found.empty()) {
            sol.outcome = SolveOutcome::Optimal;
            sol.min_cost = bound;
            sol.maps = std::move(found);
            return sol;
        }
    }
    sol.outcome = SolveOutcome::Exhausted;
    return sol;
}

} // namespace aam

#endif
