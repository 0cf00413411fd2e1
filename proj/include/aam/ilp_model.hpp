#ifndef AAM_ILP_MODEL_HPP
#define AAM_ILP_MODEL_HPP

// Integer linear programs for minimum-cost atom-atom mapping.
//
// ILP2 (quadratic-assignment linearization after Kaufmann and Broeckx):
//   m_i_p    binary, atom i of G1 mapped to atom p of G2 (compatible labels only)
//   cp_i_p   total increase of bond weights at i when i -> p
//   cm_i_p   total decrease of bond weights at i when i -> p
//   assign_v1_i:  sum_p m_i_p = 1          assign_v2_p:  sum_i m_i_p = 1
//   balance_i:    sum_p cp_i_p - sum_p cm_i_p = 0
//   bigp_i_p:     cp_i_p >= (m_i_p - 1) M + 2 max(0, loop2(p) - loop1(i)) m_i_p
//                          + sum_{j != i, q != p} max(0, w2(p,q) - w1(i,j)) m_j_q
//   bigm_i_p:     the same with the roles of w1 and w2 exchanged
//   minimize sum cp + sum cm   (= 2 cost: every pair is seen from both ends,
//                               loops count twice)
//
// ILP4 (direct product linearization):
//   y_i_j_p_q  = m_i_p * m_j_q for i < j, p != q
//   dp_i_j, dm_i_j   positive and negative part of the weight change on {i,j}
//   diff_i_j:  sum_{p,q} w2(p,q) y_i_j_p_q - dp_i_j + dm_i_j = w1(i,j)
//   diff_i_i:  sum_p loop2(p) m_i_p - dp_i_i + dm_i_i = loop1(i)
//   minimize sum dp + sum dm   (= cost)

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "aam/errors.hpp"
#include "aam/instance.hpp"
#include "aam/mapping.hpp"

namespace aam {

enum class VarKind { Binary, Integer };
enum class Sense { LessEqual, GreaterEqual, Equal };

struct Variable {
    std::string name;
    VarKind kind = VarKind::Binary;
    std::int64_t objective = 0;
    bool operator==(const Variable&) const = default;
};

struct Term {
    int var;
    std::int64_t coef;
    bool operator==(const Term&) const = default;
};

struct Constraint {
    std::string name;
    std::vector<Term> terms;
    Sense sense = Sense::Equal;
    std::int64_t rhs = 0;
    bool operator==(const Constraint&) const = default;
};

/// Mapping variable m_i_p.
struct AssignmentVar {
    int var, i, p;
    bool operator==(const AssignmentVar&) const = default;
};

struct ModelStatistics {
    std::size_t variables = 0, binaries = 0, integers = 0, rows = 0, nonzeros = 0;
};

struct IlpModel {
    std::string name;
    std::vector<Variable> variables;
    std::vector<Constraint> constraints;
    std::vector<AssignmentVar> assignment;
    int n1 = 0, n2 = 0;

    int add_variable(std::string var_name, VarKind kind, std::int64_t objective = 0) {
        variables.push_back({std::move(var_name), kind, objective});
        return static_cast<int>(variables.size()) - 1;
    }
    void add_constraint(std::string row_name, std::vector<Term> terms, Sense sense, std::int64_t rhs) {
        std::erase_if(terms, [](const Term& t) { return t.coef == 0; });
        constraints.push_back({std::move(row_name), std::move(terms), sense, rhs});
    }

    /// Rebuilds the assignment table from the m_i_p naming scheme.
    void index_assignment() {
        assignment.clear();
        n1 = n2 = 0;
        for (int v = 0; v < static_cast<int>(variables.size()); ++v) {
            int i, p;
            char tail;
            if (std::sscanf(variables[v].name.c_str(), "m_%d_%d%c", &i, &p, &tail) == 2) {
                assignment.push_back({v, i, p});
                n1 = std::max(n1, i + 1);
                n2 = std::max(n2, p + 1);
            }
        }
    }

    ModelStatistics statistics() const {
        ModelStatistics s;
        s.variables = variables.size();
        for (const auto& v : variables) (v.kind == VarKind::Binary ? s.binaries : s.integers)++;
        s.rows = constraints.size();
        for (const auto& c : constraints) s.nonzeros += c.terms.size();
        return s;
    }

    /// Objective value of a full assignment.
    std::int64_t objective_value(const std::vector<std::int64_t>& x) const {
        std::int64_t z = 0;
        for (std::size_t v = 0; v < variables.size(); ++v) z += variables[v].objective * x[v];
        return z;
    }

    /// Name of the first violated row or bound, if any.
    std::optional<std::string> violation(const std::vector<std::int64_t>& x) const {
        if (x.size() != variables.size()) return "size";
        for (std::size_t v = 0; v < variables.size(); ++v) {
            if (x[v] < 0) return variables[v].name;
            if (variables[v].kind == VarKind::Binary && x[v] > 1) return variables[v].name;
        }
        for (const auto& c : constraints) {
            std::int64_t lhs = 0;
            for (const auto& t : c.terms) lhs += t.coef * x[t.var];
            const bool ok = c.sense == Sense::Equal ? lhs == c.rhs
                            : c.sense == Sense::LessEqual ? lhs <= c.rhs
                                                          : lhs >= c.rhs;
            if (!ok) return c.name;
        }
        return std::nullopt;
    }

    bool operator==(const IlpModel& o) const {
        return variables == o.variables && constraints == o.constraints && assignment == o.assignment &&
               n1 == o.n1 && n2 == o.n2;
    }
};

namespace detail {

inline void require_balanced(const ReactionInstance& inst) {
    if (inst.g1.size() != inst.g2.size()) throw unbalanced_error("sides differ in vertex count");
    std::map<VertexLabel, int> count;
    for (int v = 0; v < inst.g1.size(); ++v) ++count[inst.g1.label(v)];
    for (int v = 0; v < inst.g2.size(); ++v) --count[inst.g2.label(v)];
    for (const auto& [l, c] : count)
        if (c != 0) throw unbalanced_error("vertex labels differ between sides");
}

inline std::string var_name(const char* prefix, std::initializer_list<int> idx) {
    std::string s = prefix;
    for (int k : idx) s += "_" + std::to_string(k);
    return s;
}

// Adds m_i_p for every compatible pair and both assignment row families.
inline std::vector<std::vector<int>> add_assignment(IlpModel& model, const ReactionInstance& inst) {
    const int n = inst.g1.size();
    model.n1 = model.n2 = n;
    std::vector<std::vector<int>> m(n, std::vector<int>(n, -1));
    for (int i = 0; i < n; ++i)
        for (int p = 0; p < n; ++p)
            if (inst.g1.label(i) == inst.g2.label(p)) {
                m[i][p] = model.add_variable(var_name("m", {i, p}), VarKind::Binary);
                model.assignment.push_back({m[i][p], i, p});
            }
    for (int i = 0; i < n; ++i) {
        std::vector<Term> row;
        for (int p = 0; p < n; ++p)
            if (m[i][p] >= 0) row.push_back({m[i][p], 1});
        model.add_constraint(var_name("assign_v1", {i}), row, Sense::Equal, 1);
    }
    for (int p = 0; p < n; ++p) {
        std::vector<Term> row;
        for (int i = 0; i < n; ++i)
            if (m[i][p] >= 0) row.push_back({m[i][p], 1});
        model.add_constraint(var_name("assign_v2", {p}), row, Sense::Equal, 1);
    }
    return m;
}

} // namespace detail

/// Big-M used by build_ilp2: the largest weighted degree, raised where
/// negative charge edges let a row's change sum exceed it.
inline std::int64_t ilp2_big_m(const ReactionInstance& inst) {
    const int n = inst.g1.size();
    std::int64_t M = 0;
    for (int v = 0; v < n; ++v) M = std::max<std::int64_t>({M, inst.g1.weighted_degree(v), inst.g2.weighted_degree(v)});
    for (int i = 0; i < n; ++i)
        for (int p = 0; p < n; ++p) {
            if (inst.g1.label(i) != inst.g2.label(p)) continue;
            std::int64_t up = 2 * std::abs(inst.g2.loop(p) - inst.g1.loop(i)), down = up;
            for (int q = 0; q < n; ++q) {
                if (q == p) continue;
                std::int64_t best_up = 0, best_down = 0;
                for (int j = 0; j < n; ++j) {
                    if (j == i || inst.g1.label(j) != inst.g2.label(q)) continue;
                    const int d = inst.g2.weight(p, q) - inst.g1.weight(i, j);
                    best_up = std::max<std::int64_t>(best_up, d);
                    best_down = std::max<std::int64_t>(best_down, -d);
                }
                up += best_up;
                down += best_down;
            }
            M = std::max({M, up, down});
        }
    return M;
}

inline IlpModel build_ilp2(const ReactionInstance& inst) {
    detail::require_balanced(inst);
    const auto& g1 = inst.g1;
    const auto& g2 = inst.g2;
    const int n = g1.size();
    IlpModel model;
    model.name = "ilp2";
    const auto m = detail::add_assignment(model, inst);
    std::vector<std::vector<int>> cp(n, std::vector<int>(n, -1)), cm = cp;
    for (const auto& a : model.assignment) {
        cp[a.i][a.p] = model.add_variable(detail::var_name("cp", {a.i, a.p}), VarKind::Integer, 1);
        cm[a.i][a.p] = model.add_variable(detail::var_name("cm", {a.i, a.p}), VarKind::Integer, 1);
    }
    for (int i = 0; i < n; ++i) {
        std::vector<Term> row;
        for (int p = 0; p < n; ++p)
            if (m[i][p] >= 0) row.push_back({cp[i][p], 1});
        for (int p = 0; p < n; ++p)
            if (m[i][p] >= 0) row.push_back({cm[i][p], -1});
        model.add_constraint(detail::var_name("balance", {i}), row, Sense::Equal, 0);
    }
    const std::int64_t M = ilp2_big_m(inst);
    const auto pairs = model.assignment;
    for (int sign : {+1, -1}) {
        for (const auto& a : pairs) {
            // c - (M + loop) m_ip - sum coef m_jq >= -M
            std::vector<Term> row{{sign > 0 ? cp[a.i][a.p] : cm[a.i][a.p], 1}};
            const int loop = 2 * std::max(0, sign * (g2.loop(a.p) - g1.loop(a.i)));
            row.push_back({a.var, -(M + loop)});
            for (const auto& b : pairs) {
                if (b.i == a.i || b.p == a.p) continue;
                const int coef = std::max(0, sign * (g2.weight(a.p, b.p) - g1.weight(a.i, b.i)));
                if (coef) row.push_back({b.var, -coef});
            }
            model.add_constraint(detail::var_name(sign > 0 ? "bigp" : "bigm", {a.i, a.p}), row, Sense::GreaterEqual, -M);
        }
    }
    return model;
}

inline IlpModel build_ilp4(const ReactionInstance& inst) {
    detail::require_balanced(inst);
    const auto& g1 = inst.g1;
    const auto& g2 = inst.g2;
    const int n = g1.size();
    IlpModel model;
    model.name = "ilp4";
    const auto m = detail::add_assignment(model, inst);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const int dp = model.add_variable(detail::var_name("dp", {i, j}), VarKind::Integer, 1);
            const int dm = model.add_variable(detail::var_name("dm", {i, j}), VarKind::Integer, 1);
            std::vector<Term> diff;
            if (i == j) {
                for (int p = 0; p < n; ++p)
                    if (m[i][p] >= 0) diff.push_back({m[i][p], g2.loop(p)});
            } else {
                for (int p = 0; p < n; ++p)
                    for (int q = 0; q < n; ++q) {
                        if (p == q || m[i][p] < 0 || m[j][q] < 0) continue;
                        const int y = model.add_variable(detail::var_name("y", {i, j, p, q}), VarKind::Integer);
                        const auto tag = detail::var_name("", {i, j, p, q});
                        model.add_constraint("yi" + tag, {{y, 1}, {m[i][p], -1}}, Sense::LessEqual, 0);
                        model.add_constraint("yj" + tag, {{y, 1}, {m[j][q], -1}}, Sense::LessEqual, 0);
                        model.add_constraint("yij" + tag, {{y, 1}, {m[i][p], -1}, {m[j][q], -1}}, Sense::GreaterEqual, -1);
                        if (g2.weight(p, q)) diff.push_back({y, g2.weight(p, q)});
                    }
            }
            diff.push_back({dp, -1});
            diff.push_back({dm, 1});
            model.add_constraint(detail::var_name("diff", {i, j}), diff, Sense::Equal, g1.weight(i, j));
        }
    return model;
}

/// The atom map selected by the m variables of a solution.
inline AtomMap decode(const IlpModel& model, const std::vector<std::int64_t>& x) {
    AtomMap psi(model.n1, -1);
    for (const auto& a : model.assignment)
        if (x.at(a.var) == 1) {
            if (psi[a.i] != -1) throw usage_error("solution maps an atom twice");
            psi[a.i] = a.p;
        }
    for (int v : psi)
        if (v < 0) throw usage_error("solution leaves an atom unmapped");
    return psi;
}

} // namespace aam

#endif
