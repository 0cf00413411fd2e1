#ifndef AAM_NETCOMP_HPP
#define AAM_NETCOMP_HPP

// Network completion: atom/charge histograms, the 2-to-2 candidate generator,
// transition-state-length filtering and dataset statistics.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "aam/altcyc.hpp"
#include "aam/chemio/reaction_io.hpp"
#include "aam/errors.hpp"
#include "aam/instance.hpp"
#include "aam/molgraph.hpp"

namespace aam {

struct AtomHistogram {
    std::map<std::string, int> counts; ///< element symbol -> count, zero entries absent
    int charge = 0;
    int radicals = 0;

    bool empty() const { return counts.empty() && charge == 0 && radicals == 0; }

    AtomHistogram& operator+=(const AtomHistogram& o) {
        for (const auto& [el, c] : o.counts) counts[el] += c;
        charge += o.charge;
        radicals += o.radicals;
        return *this;
    }
    friend AtomHistogram operator+(AtomHistogram a, const AtomHistogram& b) { return a += b; }

    /// Lexicographic over the (symbol, count) sequence, then charge, then radicals.
    auto operator<=>(const AtomHistogram&) const = default;
    bool operator==(const AtomHistogram&) const = default;
};

inline AtomHistogram histogram(const MoleculeGraph& g) {
    AtomHistogram h;
    for (int v = 0; v < g.size(); ++v)
        if (g.label(v).is_atom()) ++h.counts[g.label(v).symbol()];
    h.charge = g.total_charge();
    h.radicals = g.total_radicals();
    return h;
}

/// Hill order (C, H, then alphabetical; alphabetical throughout without C),
/// followed by the net charge such as "+", "2-".
inline std::string formula(const AtomHistogram& h) {
    std::ostringstream out;
    auto put = [&](const std::string& el, int c) {
        out << el;
        if (c != 1) out << c;
    };
    const bool carbon = h.counts.contains("C");
    if (carbon) {
        put("C", h.counts.at("C"));
        if (h.counts.contains("H")) put("H", h.counts.at("H"));
    }
    for (const auto& [el, c] : h.counts)
        if (!carbon || (el != "C" && el != "H")) put(el, c);
    if (h.charge != 0) {
        const int mag = h.charge < 0 ? -h.charge : h.charge;
        if (mag != 1) out << mag;
        out << (h.charge < 0 ? '-' : '+');
    }
    if (h.radicals != 0) out << " r" << h.radicals;
    return out.str();
}

/// Two sides of a candidate reaction; each side is a sorted multiset of one or
/// two molecule indices.
struct CandidatePair {
    std::vector<int> left;
    std::vector<int> right;
    AtomHistogram histogram;

    bool operator==(const CandidatePair&) const = default;
};

struct GenerateOptions {
    /// Drop candidates whose sides share a molecule; the reduced reaction is
    /// emitted on its own.
    bool cancel_spectators = false;
};

struct GenerateStats {
    std::uint64_t sums = 0;        ///< pair-sums sorted
    std::uint64_t comparisons = 0; ///< histogram comparisons in sort and scan
};

/// Streams all unordered pairs of distinct nonempty <=2-multisets with equal
/// histograms, found by sorting the pair-sums of h(M) with the zero histogram
/// adjoined. Order: by histogram, then by multiset index order. The callback
/// returns false to stop.
template <class F>
void for_each_2to2(const std::vector<MoleculeGraph>& molecules, const GenerateOptions& opt, F&& emit,
                   GenerateStats* stats = nullptr) {
    const int n = static_cast<int>(molecules.size());
    std::vector<AtomHistogram> h;
    h.reserve(n + 1);
    for (const auto& m : molecules) h.push_back(histogram(m));
    h.emplace_back(); // index n is the zero histogram

    struct Sum {
        AtomHistogram hist;
        std::vector<int> members;
    };
    std::vector<Sum> sums;
    sums.reserve(static_cast<std::size_t>(n) * (n + 1) / 2 + n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b <= n; ++b) {
            Sum s{h[a] + h[b], {a}};
            if (b < n) s.members.push_back(b);
            sums.push_back(std::move(s));
        }

    std::uint64_t comparisons = 0;
    std::sort(sums.begin(), sums.end(), [&](const Sum& x, const Sum& y) {
        ++comparisons;
        if (auto c = x.hist <=> y.hist; c != 0) return c < 0;
        return x.members < y.members;
    });

    bool more = true;
    for (std::size_t lo = 0; lo < sums.size() && more;) {
        std::size_t hi = lo + 1;
        while (hi < sums.size() && (++comparisons, sums[hi].hist == sums[lo].hist)) ++hi;
        for (std::size_t a = lo; a < hi && more; ++a)
            for (std::size_t b = a + 1; b < hi && more; ++b) {
                const auto& l = sums[a].members;
                const auto& r = sums[b].members;
                if (opt.cancel_spectators &&
                    std::any_of(l.begin(), l.end(), [&](int x) { return std::find(r.begin(), r.end(), x) != r.end(); }))
                    continue;
                more = emit(CandidatePair{l, r, sums[a].hist});
            }
        lo = hi;
    }
    if (stats) {
        stats->sums += sums.size();
        stats->comparisons += comparisons;
    }
}

inline std::vector<CandidatePair> generate_2to2(const std::vector<MoleculeGraph>& molecules,
                                                const GenerateOptions& opt = {}, GenerateStats* stats = nullptr) {
    std::vector<CandidatePair> out;
    for_each_2to2(molecules, opt, [&](CandidatePair c) {
        out.push_back(std::move(c));
        return true;
    }, stats);
    return out;
}

/// Reaction document with the candidate's left side as educts.
inline chemio::ReactionDocument candidate_document(const std::vector<MoleculeGraph>& molecules,
                                                   const CandidatePair& c) {
    auto side = [&](const std::vector<int>& ids) {
        std::vector<chemio::MoleculeEntry> entries;
        if (ids.size() == 2 && ids[0] == ids[1]) return std::vector<chemio::MoleculeEntry>{{molecules.at(ids[0]), 2}};
        for (int id : ids) entries.push_back({molecules.at(id), 1});
        return entries;
    };
    chemio::ReactionDocument doc;
    doc.educts = side(c.left);
    doc.products = side(c.right);
    doc.balanced = chemio::is_balanced(doc);
    return doc;
}

enum class FilterStatus { Pass, Fail, Timeout };

inline const char* to_string(FilterStatus s) {
    switch (s) {
    case FilterStatus::Pass: return "pass";
    case FilterStatus::Fail: return "fail";
    case FilterStatus::Timeout: return "timeout";
    }
    return "?";
}

struct FilterOptions {
    int k_max = 8;
    bool connected_only = false;
    bool elementary_only = false;
    std::optional<std::chrono::milliseconds> time_budget; ///< per candidate
    std::optional<std::uint64_t> node_budget;             ///< per candidate
    int jobs = 1;
};

struct FilterRecord {
    CandidatePair candidate;
    FilterStatus status = FilterStatus::Fail;
    std::optional<int> min_cost;
    std::optional<int> classes;
};

inline FilterRecord filter_one(const std::vector<MoleculeGraph>& molecules, const CandidatePair& c,
                               const FilterOptions& opt) {
    FilterRecord rec{c, FilterStatus::Fail, std::nullopt, std::nullopt};
    const auto inst = make_instance(candidate_document(molecules, c));
    SolveOptions so;
    so.max_cost = opt.k_max;
    so.connected_only = opt.connected_only;
    so.elementary_only = opt.elementary_only;
    so.time_budget = opt.time_budget;
    so.node_budget = opt.node_budget;
    const auto sol = solve(inst, so);
    switch (sol.outcome) {
    case SolveOutcome::Optimal:
        rec.status = FilterStatus::Pass;
        rec.min_cost = sol.min_cost;
        rec.classes = static_cast<int>(sol.maps.size());
        break;
    case SolveOutcome::Exhausted: rec.status = FilterStatus::Fail; break;
    case SolveOutcome::Timeout: rec.status = FilterStatus::Timeout; break;
    }
    return rec;
}

/// Solves every candidate with cost bound k_max; results keep input order.
inline std::vector<FilterRecord> filter_by_ts_length(const std::vector<MoleculeGraph>& molecules,
                                                     const std::vector<CandidatePair>& candidates,
                                                     const FilterOptions& opt) {
    if (opt.k_max < 0 || opt.k_max % 2 != 0) throw usage_error("k_max must be a nonnegative even integer");
    std::vector<FilterRecord> out(candidates.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next++) < candidates.size();) out[k] = filter_one(molecules, candidates[k], opt);
    };
    const int jobs = std::max(1, std::min<int>(opt.jobs, static_cast<int>(candidates.size())));
    if (jobs == 1) {
        worker();
        return out;
    }
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

/// Number of passing candidates per minimum transition-state length.
inline std::map<int, int> pass_counts_by_length(const std::vector<FilterRecord>& records) {
    std::map<int, int> out;
    for (const auto& r : records)
        if (r.status == FilterStatus::Pass) ++out[*r.min_cost];
    return out;
}

/// "a, b, and c reactions with transition states of length 4, 6, and 8".
inline std::string describe_pass_counts(const std::map<int, int>& counts) {
    std::vector<std::pair<int, int>> items;
    for (const auto& [len, cnt] : counts)
        if (len > 0) items.emplace_back(len, cnt);
    if (items.empty()) return "no reactions passed";
    auto join = [&](auto field) {
        std::string s;
        for (std::size_t k = 0; k < items.size(); ++k) {
            if (k) s += items.size() == 2 ? " and " : (k + 1 == items.size() ? ", and " : ", ");
            s += std::to_string(field(items[k]));
        }
        return s;
    };
    return join([](auto p) { return p.second; }) + " reactions with transition states of length " +
           join([](auto p) { return p.first; });
}

inline nlohmann::json candidate_record_json(const FilterRecord& r) {
    nlohmann::json j{{"leftIds", r.candidate.left},
                     {"rightIds", r.candidate.right},
                     {"formula", formula(r.candidate.histogram)},
                     {"status", to_string(r.status)}};
    if (r.min_cost) j["minCost"] = *r.min_cost;
    if (r.classes) j["classes"] = *r.classes;
    return j;
}

/// Unfiltered candidate; status is absent.
inline nlohmann::json candidate_record_json(const CandidatePair& c) {
    return {{"leftIds", c.left}, {"rightIds", c.right}, {"formula", formula(c.histogram)}};
}

struct ReactionSides {
    std::vector<int> left;
    std::vector<int> right;
};

struct DatasetReport {
    std::size_t molecules = 0;
    std::size_t reactions = 0;
    std::map<int, int> isomer_set_sizes; ///< set size -> number of sets
    std::map<int, int> participation;    ///< reactions per molecule -> number of molecules
    std::vector<std::vector<int>> isomer_sets;
};

/// Isomer sets group molecules with equal formula (including charge).
/// Participation counts each reaction once per molecule.
inline DatasetReport dataset_stats(const std::vector<MoleculeGraph>& molecules,
                                   const std::vector<ReactionSides>& reactions) {
    DatasetReport rep;
    rep.molecules = molecules.size();
    rep.reactions = reactions.size();
    std::map<AtomHistogram, std::vector<int>> groups;
    for (int m = 0; m < static_cast<int>(molecules.size()); ++m) groups[histogram(molecules[m])].push_back(m);
    for (auto& [h, ids] : groups) {
        ++rep.isomer_set_sizes[static_cast<int>(ids.size())];
        rep.isomer_sets.push_back(std::move(ids));
    }
    std::vector<int> freq(molecules.size(), 0);
    for (const auto& r : reactions) {
        std::vector<int> ids = r.left;
        ids.insert(ids.end(), r.right.begin(), r.right.end());
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (int id : ids) {
            if (id < 0 || id >= static_cast<int>(molecules.size()))
                throw usage_error("reaction refers to unknown molecule " + std::to_string(id));
            ++freq[id];
        }
    }
    for (int f : freq) ++rep.participation[f];
    return rep;
}

inline std::string to_csv(const DatasetReport& rep) {
    std::ostringstream out;
    out << "distribution,value,count\n";
    for (const auto& [size, cnt] : rep.isomer_set_sizes) out << "isomer_set_size," << size << ',' << cnt << '\n';
    for (const auto& [f, cnt] : rep.participation) out << "participation," << f << ',' << cnt << '\n';
    return out.str();
}

/// Molecule pool document: {"molecules": [molecule, ...]} with the molecule
/// forms accepted in reaction documents ("count" is not allowed), and an
/// optional "reactions": [{"left": [ids], "right": [ids]}].
struct MoleculePool {
    std::vector<MoleculeGraph> molecules;
    std::vector<ReactionSides> reactions;
};

inline MoleculePool parse_pool_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("invalid JSON: ") + e.what(), e.byte);
    }
    if (!j.is_object()) throw schema_error("pool document must be a JSON object");
    chemio::detail::check_keys(j, {"id", "molecules", "reactions"}, "pool");
    if (!j.contains("molecules") || !j["molecules"].is_array()) throw schema_error("'molecules' must be an array");
    MoleculePool pool;
    for (const auto& m : j["molecules"]) {
        if (m.is_object() && m.contains("count")) throw schema_error("'count' is not allowed in a pool");
        pool.molecules.push_back(chemio::detail::parse_molspec(m).graph);
    }
    if (j.contains("reactions")) {
        if (!j["reactions"].is_array()) throw schema_error("'reactions' must be an array");
        for (const auto& r : j["reactions"]) {
            if (!r.is_object()) throw schema_error("reaction entries must be objects");
            chemio::detail::check_keys(r, {"left", "right"}, "pool reaction");
            ReactionSides s;
            for (const char* key : {"left", "right"}) {
                if (!r.contains(key) || !r[key].is_array()) throw schema_error(std::string("'") + key + "' must be an array");
                for (const auto& id : r[key]) {
                    if (!id.is_number_integer()) throw schema_error("molecule ids must be integers");
                    const int v = id.get<int>();
                    if (v < 0 || v >= static_cast<int>(pool.molecules.size()))
                        throw schema_error("molecule id " + std::to_string(v) + " out of range");
                    (key[0] == 'l' ? s.left : s.right).push_back(v);
                }
            }
            pool.reactions.push_back(std::move(s));
        }
    }
    return pool;
}

/// Keeps the first molecule of every isomorphism class; returns the kept
/// indices into the input.
inline std::vector<int> deduplicate(std::vector<MoleculeGraph>& molecules) {
    std::vector<MoleculeGraph> kept;
    std::vector<int> index;
    for (int m = 0; m < static_cast<int>(molecules.size()); ++m) {
        bool dup = false;
        const auto hm = histogram(molecules[m]);
        for (const auto& k : kept)
            if (histogram(k) == hm && are_isomorphic(k, molecules[m])) {
                dup = true;
                break;
            }
        if (!dup) {
            kept.push_back(molecules[m]);
            index.push_back(m);
        }
    }
    molecules = std::move(kept);
    return index;
}

} // namespace aam

#endif
