#ifndef AAM_ILP_SOLVER_HPP
#define AAM_ILP_SOLVER_HPP

// Exact branch and bound for assignment-structured integer programs.
//
// Supported structure (both build_ilp2 and build_ilp4 qualify):
//  - every binary variable lies in at least one assignment group, an equality
//    row over binaries with unit coefficients and right-hand side 1;
//  - a "bound row" holds at most one general integer variable and bounds it in
//    terms of binaries; rows without general integers are side constraints on
//    binaries (exclusion cuts);
//  - an equality row with two or more general integers is a "link row"; each
//    general integer lies in at most one link row, either as a slack (unit
//    coefficient, no upper bound) or as a bounded variable that its bound rows
//    pin once all binaries are fixed;
//  - objective coefficients are nonnegative and bounded link variables are free.
// Branching fixes one binary per assignment group (smallest open group first).
// The bound combines the weakest implied lower bounds of all general integers
// with the slack each link row needs at least.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "aam/errors.hpp"
#include "aam/ilp_model.hpp"
#include "aam/mapping.hpp"

namespace aam {

enum class IlpStatus { Optimal, Infeasible, Incomplete };

inline const char* to_string(IlpStatus s) {
    switch (s) {
    case IlpStatus::Optimal: return "optimal";
    case IlpStatus::Infeasible: return "infeasible";
    case IlpStatus::Incomplete: return "incomplete";
    }
    return "?";
}

struct IlpOptions {
    std::optional<std::chrono::milliseconds> time_limit;
    bool enumerate = false; ///< collect every optimal assignment (no-good cuts on binaries)
    /// Accept the first solution with objective <= this value.
    std::optional<std::int64_t> target;
};

struct IlpSolution {
    std::int64_t objective = 0;
    std::vector<std::int64_t> values;
};

struct IlpResult {
    IlpStatus status = IlpStatus::Infeasible;
    std::vector<IlpSolution> solutions; ///< best first; all optima when enumerating
    std::uint64_t nodes = 0;
    std::optional<std::int64_t> objective() const {
        if (solutions.empty()) return std::nullopt;
        return solutions.front().objective;
    }
};

namespace detail {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}
inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

class BranchAndBound {
public:
    BranchAndBound(const IlpModel& model, const IlpOptions& opt) : model_(model), opt_(opt) {
        if (opt.time_limit) deadline_ = std::chrono::steady_clock::now() + *opt.time_limit;
        analyse();
    }

    IlpResult run() {
        IlpResult result;
        fixed_.assign(nv_, -1);
        search(result);
        result.nodes = nodes_;
        if (aborted_) result.status = IlpStatus::Incomplete;
        else result.status = result.solutions.empty() ? IlpStatus::Infeasible : IlpStatus::Optimal;
        return result;
    }

private:
    struct BoundRow {
        int row;
        int z;                 // general integer, or -1
        std::int64_t a = 0;    // its coefficient
    };

    void analyse() {
        nv_ = static_cast<int>(model_.variables.size());
        for (const auto& v : model_.variables)
            if (v.objective < 0) throw usage_error("internal solver needs nonnegative objective coefficients");
        is_binary_.assign(nv_, false);
        for (int v = 0; v < nv_; ++v) is_binary_[v] = model_.variables[v].kind == VarKind::Binary;
        groups_of_.assign(nv_, {});
        bound_rows_of_.assign(nv_, {});
        link_of_.assign(nv_, -1);
        for (int r = 0; r < static_cast<int>(model_.constraints.size()); ++r) {
            const auto& c = model_.constraints[r];
            std::vector<int> ints;
            bool unit_binaries = c.sense == Sense::Equal && c.rhs == 1 && !c.terms.empty();
            for (const auto& t : c.terms) {
                if (!is_binary_[t.var]) ints.push_back(t.var);
                if (!is_binary_[t.var] || t.coef != 1) unit_binaries = false;
            }
            if (unit_binaries) {
                for (const auto& t : c.terms) groups_of_[t.var].push_back(static_cast<int>(groups_.size()));
                groups_.push_back(r);
            } else if (ints.size() <= 1) {
                BoundRow b{r, ints.empty() ? -1 : ints[0]};
                for (const auto& t : c.terms)
                    if (t.var == b.z) b.a = t.coef;
                if (b.z >= 0) bound_rows_of_[b.z].push_back(static_cast<int>(bounds_.size()));
                else side_rows_.push_back(r);
                bounds_.push_back(b);
            } else {
                if (c.sense != Sense::Equal) throw usage_error("row '" + c.name + "' couples several integers by an inequality");
                for (int z : ints) {
                    if (link_of_[z] >= 0) throw usage_error("variable '" + model_.variables[z].name + "' lies in two link rows");
                    link_of_[z] = static_cast<int>(links_.size());
                }
                links_.push_back(r);
            }
        }
        for (int v = 0; v < nv_; ++v)
            if (is_binary_[v] && groups_of_[v].empty())
                throw usage_error("binary '" + model_.variables[v].name + "' lies in no assignment group");
        // Classify link members.
        has_upper_.assign(nv_, false);
        for (int v = 0; v < nv_; ++v)
            for (int b : bound_rows_of_[v]) {
                const auto& c = model_.constraints[bounds_[b].row];
                const bool upper = c.sense == Sense::Equal || (c.sense == Sense::LessEqual) == (bounds_[b].a > 0);
                if (upper) has_upper_[v] = true;
            }
        for (int l : links_)
            for (const auto& t : model_.constraints[l].terms) {
                if (is_binary_[t.var]) continue;
                if (has_upper_[t.var]) {
                    if (model_.variables[t.var].objective != 0)
                        throw usage_error("bounded link variable '" + model_.variables[t.var].name + "' has a cost");
                } else if (t.coef != 1 && t.coef != -1) {
                    throw usage_error("slack '" + model_.variables[t.var].name + "' needs a unit coefficient");
                }
            }
    }

    // Weakest bounds on general integer z implied by its bound rows.
    std::pair<std::int64_t, std::int64_t> bounds_of(int z) const {
        std::int64_t lo = 0, hi = kInf;
        for (int b : bound_rows_of_[z]) {
            const auto& br = bounds_[b];
            const auto& c = model_.constraints[br.row];
            // a z (sense) rhs - sum_binaries; range of the binary part.
            std::int64_t fixed = 0, free_pos = 0, free_neg = 0;
            for (const auto& t : c.terms) {
                if (t.var == z) continue;
                if (fixed_[t.var] >= 0) fixed += t.coef * fixed_[t.var];
                else if (t.coef > 0) free_pos += t.coef;
                else free_neg += t.coef;
            }
            const std::int64_t rest_min = c.rhs - fixed - free_pos; // smallest possible rhs - sum
            const std::int64_t rest_max = c.rhs - fixed - free_neg;
            const bool ge = c.sense == Sense::GreaterEqual, le = c.sense == Sense::LessEqual;
            // a z >= rest (weakest: rest_min); a z <= rest (weakest: rest_max)
            if (ge || c.sense == Sense::Equal) {
                if (br.a > 0) lo = std::max(lo, ceil_div(rest_min, br.a));
                else hi = std::min(hi, floor_div(rest_min, br.a));
            }
            if (le || c.sense == Sense::Equal) {
                if (br.a > 0) hi = std::min(hi, floor_div(rest_max, br.a));
                else lo = std::max(lo, ceil_div(rest_max, br.a));
            }
        }
        if (model_.variables[z].kind == VarKind::Binary) hi = std::min<std::int64_t>(hi, 1);
        return {lo, hi};
    }

    bool side_rows_feasible() const {
        for (int r : side_rows_) {
            const auto& c = model_.constraints[r];
            std::int64_t lo = 0, hi = 0;
            for (const auto& t : c.terms) {
                if (fixed_[t.var] >= 0) {
                    lo += t.coef * fixed_[t.var];
                    hi += t.coef * fixed_[t.var];
                } else if (t.coef > 0) hi += t.coef;
                else lo += t.coef;
            }
            if (c.sense != Sense::GreaterEqual && lo > c.rhs) return false;
            if (c.sense != Sense::LessEqual && hi < c.rhs) return false;
        }
        return true;
    }

    // Lower bound of the objective under the current fixings; with all
    // binaries fixed it is exact and `values` receives an optimal completion.
    std::int64_t evaluate(std::vector<std::int64_t>* values) {
        std::int64_t total = 0;
        lo_.assign(nv_, 0);
        hi_.assign(nv_, kInf);
        for (int v = 0; v < nv_; ++v) {
            if (is_binary_[v]) {
                lo_[v] = fixed_[v] >= 0 ? fixed_[v] : 0;
                hi_[v] = fixed_[v] >= 0 ? fixed_[v] : 1;
                if (fixed_[v] == 1) total += model_.variables[v].objective;
                continue;
            }
            auto [lo, hi] = bounds_of(v);
            if (lo > hi) return kInf;
            lo_[v] = lo;
            hi_[v] = hi;
            if (link_of_[v] < 0) total += model_.variables[v].objective * lo;
        }
        if (values) *values = lo_;
        for (int l : links_) {
            const auto& c = model_.constraints[l];
            std::int64_t base = 0, t_lo = 0, t_hi = 0;
            std::int64_t cost_pos = kInf, cost_neg = kInf;
            int var_pos = -1, var_neg = -1;
            for (const auto& t : c.terms) {
                const int v = t.var;
                const bool slack = !is_binary_[v] && !has_upper_[v];
                if (slack) {
                    base += t.coef * lo_[v];
                    total += model_.variables[v].objective * lo_[v];
                    const auto cost = model_.variables[v].objective;
                    if (t.coef > 0 && cost < cost_pos) cost_pos = cost, var_pos = v;
                    if (t.coef < 0 && cost < cost_neg) cost_neg = cost, var_neg = v;
                } else {
                    const auto a = t.coef * lo_[v], b = t.coef * hi_[v];
                    t_lo += std::min(a, b);
                    t_hi += std::max(a, b);
                }
            }
            // base + t + e_pos - e_neg = rhs with t in [t_lo, t_hi].
            const std::int64_t need_lo = c.rhs - base - t_hi, need_hi = c.rhs - base - t_lo;
            std::int64_t gap = 0;
            if (need_lo > 0) gap = need_lo;
            else if (need_hi < 0) gap = need_hi;
            if (gap > 0) {
                if (var_pos < 0) return kInf;
                total += gap * cost_pos;
            } else if (gap < 0) {
                if (var_neg < 0) return kInf;
                total += -gap * cost_neg;
            }
            if (values) {
                if (t_lo != t_hi) throw usage_error("link row '" + c.name + "' is not pinned by the binaries");
                if (gap > 0) (*values)[var_pos] += gap;
                if (gap < 0) (*values)[var_neg] += -gap;
            }
        }
        return total;
    }

    bool timed_out() {
        if (aborted_) return true;
        if (deadline_ && (nodes_ & 255) == 0 && std::chrono::steady_clock::now() > *deadline_) aborted_ = true;
        return aborted_;
    }

    std::int64_t cutoff(const IlpResult& result) const {
        if (opt_.target) return *opt_.target;
        if (result.solutions.empty()) return kInf;
        // Strictly better, or equal when collecting every optimum.
        return opt_.enumerate ? result.solutions.front().objective : result.solutions.front().objective - 1;
    }

    bool done(const IlpResult& result) const { return opt_.target && !result.solutions.empty(); }

    void search(IlpResult& result) {
        ++nodes_;
        if (timed_out() || done(result)) return;
        if (!side_rows_feasible()) return;
        const std::int64_t bound = evaluate(nullptr);
        if (bound >= kInf || bound > cutoff(result)) return;
        // Smallest open group.
        int best_group = -1;
        std::size_t best_size = std::numeric_limits<std::size_t>::max();
        for (int g = 0; g < static_cast<int>(groups_.size()); ++g) {
            std::size_t open = 0;
            bool satisfied = false;
            for (const auto& t : model_.constraints[groups_[g]].terms) {
                if (fixed_[t.var] == 1) satisfied = true;
                if (fixed_[t.var] < 0) ++open;
            }
            if (satisfied) continue;
            if (open == 0) return;
            if (open < best_size) best_size = open, best_group = g;
        }
        if (best_group < 0) {
            std::vector<std::int64_t> values;
            const std::int64_t obj = evaluate(&values);
            if (obj > cutoff(result)) return;
            if (auto bad = model_.violation(values)) throw std::logic_error("internal solver produced violation of " + *bad);
            if (!opt_.enumerate && !opt_.target) result.solutions.clear();
            if (opt_.enumerate && !result.solutions.empty() && obj < result.solutions.front().objective)
                result.solutions.clear();
            result.solutions.push_back({obj, std::move(values)});
            return;
        }
        for (const auto& t : model_.constraints[groups_[best_group]].terms) {
            if (fixed_[t.var] >= 0) continue;
            std::vector<int> trail;
            fixed_[t.var] = 1;
            trail.push_back(t.var);
            for (int g : groups_of_[t.var])
                for (const auto& u : model_.constraints[groups_[g]].terms)
                    if (fixed_[u.var] < 0) {
                        fixed_[u.var] = 0;
                        trail.push_back(u.var);
                    }
            search(result);
            for (int v : trail) fixed_[v] = -1;
            if (aborted_ || done(result)) return;
        }
    }

    const IlpModel& model_;
    IlpOptions opt_;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    int nv_ = 0;
    std::vector<bool> is_binary_, has_upper_;
    std::vector<int> groups_;                    // row index per assignment group
    std::vector<std::vector<int>> groups_of_;    // groups containing a binary
    std::vector<BoundRow> bounds_;
    std::vector<std::vector<int>> bound_rows_of_;
    std::vector<int> side_rows_;
    std::vector<int> links_;
    std::vector<int> link_of_;
    std::vector<int> fixed_;
    std::vector<std::int64_t> lo_, hi_;
    std::uint64_t nodes_ = 0;
    bool aborted_ = false;
};

} // namespace detail

/// Optimal solution(s) of an assignment-structured model.
inline IlpResult solve_exact(const IlpModel& model, const IlpOptions& options = {}) {
    return detail::BranchAndBound(model, options).run();
}

struct EnumerationResult {
    IlpStatus status = IlpStatus::Infeasible;
    std::optional<std::int64_t> objective;
    std::vector<AtomMap> raw;     ///< optimum per round, before class reduction
    std::vector<AtomMap> classes; ///< one map per equivalence class
    std::uint64_t nodes = 0;
};

/// All nonequivalent optimal maps: after each optimum psi, the transition-state
/// vertex set S is excluded by sum_{i in S} m_{i,psi(i)} <= |S| - 1 and the
/// model is re-solved at the optimal objective.
inline EnumerationResult enumerate_optima(const ReactionInstance& inst, IlpModel model, const IlpOptions& options = {}) {
    EnumerationResult out;
    std::optional<std::chrono::steady_clock::time_point> deadline;
    if (options.time_limit) deadline = std::chrono::steady_clock::now() + *options.time_limit;
    auto remaining = [&]() -> std::optional<std::chrono::milliseconds> {
        if (!deadline) return std::nullopt;
        return std::max(std::chrono::milliseconds(0),
                        std::chrono::duration_cast<std::chrono::milliseconds>(*deadline - std::chrono::steady_clock::now()));
    };
    auto first = solve_exact(model, {.time_limit = remaining()});
    out.nodes += first.nodes;
    out.status = first.status;
    if (first.solutions.empty()) return out;
    out.objective = first.objective();
    std::vector<std::vector<int>> var_of(model.n1, std::vector<int>(model.n2, -1));
    for (const auto& a : model.assignment) var_of[a.i][a.p] = a.var;
    EquivalenceClassSet classes(inst);
    auto current = first.solutions.front();
    for (int round = 0;; ++round) {
        const AtomMap psi = decode(model, current.values);
        out.raw.push_back(psi);
        classes.insert(psi);
        const auto ts = transition_state(inst, psi);
        const auto S = ts.vertices();
        if (S.empty()) break;
        std::vector<Term> cut;
        for (int i : S) cut.push_back({var_of[i][psi[i]], 1});
        model.add_constraint("cut_" + std::to_string(round), cut, Sense::LessEqual, static_cast<std::int64_t>(S.size()) - 1);
        auto next = solve_exact(model, {.time_limit = remaining(), .target = *out.objective});
        out.nodes += next.nodes;
        if (next.status == IlpStatus::Incomplete) {
            out.status = IlpStatus::Incomplete;
            break;
        }
        if (next.solutions.empty()) break;
        current = next.solutions.front();
    }
    out.classes = classes.representatives();
    return out;
}

} // namespace aam

#endif
