// Command-line front end: map, candidates, stats, export-lp.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aam/aam.hpp"

namespace {

using nlohmann::json;
using namespace aam;

enum Exit : int {
    Ok = 0,
    Usage = 1,
    ParseFailure = 2,
    Unbalanced = 3,
    BoundExhausted = 4,
    TimedOut = 5,
};

struct RunConfig {
    std::string subcommand;
    std::string input;
    std::string solver = "altcyc";
    std::string model = "ilp2";
    std::optional<std::string> format;
    int max_cost = 10;
    bool connected = false;
    bool elementary = false;
    std::optional<int> timeout_ms;
    std::optional<std::uint64_t> node_budget;
    int jobs = 1;
    std::uint64_t seed = 0;
    std::optional<std::size_t> sample;
    int k_max = 8;
    bool no_filter = false;
    bool cancel_spectators = false;
    std::string output;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream s;
        s << std::cin.rdbuf();
        return s.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot read '" + path + "'", 0);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw UsageError("cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

// Fails before any work on combinations that have no meaning.
void validate(const RunConfig& c) {
    auto fmt = [&](std::initializer_list<const char*> allowed) {
        if (!c.format) return;
        if (std::find(allowed.begin(), allowed.end(), *c.format) == allowed.end())
            throw UsageError("--format " + *c.format + " is not available for '" + c.subcommand + "'");
    };
    if (c.max_cost < 0 || c.max_cost % 2 != 0) throw UsageError("--max-cost must be a nonnegative even integer");
    if (c.k_max < 0 || c.k_max % 2 != 0) throw UsageError("--k-max must be a nonnegative even integer");
    if (c.jobs < 1) throw UsageError("--jobs must be at least 1");
    if (c.subcommand == "map") {
        if (c.solver == "export-lp") {
            fmt({"lp"});
        } else {
            fmt({"json", "text", "mechanism"});
            if (c.format == "mechanism" && c.solver != "altcyc")
                throw UsageError("--format mechanism needs --solver altcyc");
        }
        if (c.solver != "altcyc" && (c.connected || c.elementary || c.node_budget))
            throw UsageError("--connected, --elementary and --node-budget need --solver altcyc");
    } else if (c.subcommand == "export-lp") {
        fmt({"lp"});
        if (c.solver != "altcyc" && c.solver != "export-lp") throw UsageError("export-lp takes no --solver");
    } else if (c.subcommand == "candidates") {
        fmt({"json", "text"});
        if (c.solver != "altcyc") throw UsageError("candidates filters with --solver altcyc only");
    } else if (c.subcommand == "stats") {
        fmt({"json", "text"});
    }
}

json vertex_json(const ReactionInstance& inst, int side, int v) {
    const auto& g = side == 0 ? inst.g1 : inst.g2;
    const auto& o = (side == 0 ? inst.origin1 : inst.origin2)[v];
    json j{{"index", v}, {"label", g.label(v).symbol()}};
    if (o.molecule >= 0) {
        j["molecule"] = o.molecule;
        j["copy"] = o.copy;
        j["atom"] = o.local;
    } else {
        j["molecule"] = nullptr;
        j["copy"] = nullptr;
        j["atom"] = nullptr;
    }
    return j;
}

// "C[e0.3]": educt molecule 0, atom 3; "#c" marks copy c of a multiplied molecule.
std::string vertex_text(const ReactionInstance& inst, int side, int v) {
    const auto& g = side == 0 ? inst.g1 : inst.g2;
    const auto& o = (side == 0 ? inst.origin1 : inst.origin2)[v];
    std::string s = g.label(v).symbol();
    if (o.molecule < 0) return s;
    s += "[";
    s += side == 0 ? "e" : "p";
    s += std::to_string(o.molecule);
    if (o.copy > 0) s += "#" + std::to_string(o.copy);
    s += "." + std::to_string(o.local) + "]";
    return s;
}

struct MapClass {
    AtomMap map;
    std::optional<MechanismTrace> trace;
};

struct MapReport {
    std::string solver;
    std::string status;
    std::optional<int> min_cost;
    int last_bound = -1;
    std::uint64_t nodes = 0;
    std::vector<MapClass> classes;
};

json class_json(const ReactionInstance& inst, const MapClass& c) {
    const auto ts = transition_state(inst, c.map);
    json edges = json::array();
    for (const auto& e : ts.edges()) edges.push_back({{"u", e.u}, {"v", e.v}, {"delta", e.delta}});
    json cycles = json::array();
    for (const auto& cyc : decompose_cycles(ts).cycles)
        cycles.push_back({{"vertices", cyc.vertices}, {"signs", cyc.signs}, {"elementary", cyc.elementary()}});
    json j{{"map", c.map},
           {"cost", cost(inst, c.map)},
           {"connected", ts.connected()},
           {"transitionState", std::move(edges)},
           {"cycles", std::move(cycles)}};
    if (c.trace) {
        json paths = json::array();
        for (const auto& path : c.trace->steps()) {
            json steps = json::array();
            for (const auto& s : path) steps.push_back({{"u", s.u}, {"v", s.v}, {"sign", s.sign}});
            paths.push_back(std::move(steps));
        }
        j["mechanism"] = std::move(paths);
    }
    return j;
}

void write_mechanism(std::ostream& out, const ReactionInstance& inst, const MechanismTrace& trace,
                     const std::string& indent) {
    std::map<VertexPair, int> current;
    int panel = 0;
    for (const auto& path : trace.steps()) {
        out << indent << "path " << ++panel << "\n";
        int n = 0;
        for (const auto& s : path) {
            const VertexPair key(s.u, s.v);
            auto it = current.find(key);
            const int before = it != current.end() ? it->second : inst.g1.weight(s.u, s.v);
            const int after = before + s.sign;
            current[key] = after;
            out << indent << "  " << ++n << ". " << (s.sign > 0 ? "+ " : "- ") << vertex_text(inst, 0, s.u) << ' '
                << vertex_text(inst, 0, s.v) << "  " << before << " -> " << after << "\n";
        }
    }
}

void write_map_text(std::ostream& out, const ReactionInstance& inst, const chemio::ReactionDocument& doc,
                    const MapReport& r) {
    if (doc.id) out << "reaction: " << *doc.id << "\n";
    out << "solver: " << r.solver << "\n";
    out << "status: " << r.status << "\n";
    out << "min cost: " << (r.min_cost ? std::to_string(*r.min_cost) : "none") << "\n";
    out << "classes: " << r.classes.size() << "\n";
    int k = 0;
    for (const auto& c : r.classes) {
        out << "\nclass " << ++k << "\n  map:\n";
        for (int v = 0; v < inst.size(); ++v)
            out << "    " << vertex_text(inst, 0, v) << " -> " << vertex_text(inst, 1, c.map[v]) << "\n";
        const auto ts = transition_state(inst, c.map);
        out << "  transition state (" << (ts.connected() ? "connected" : "disconnected") << "):\n";
        for (const auto& e : ts.edges())
            out << "    " << vertex_text(inst, 0, e.u) << ' ' << vertex_text(inst, 0, e.v) << ' '
                << (e.delta > 0 ? "+" : "") << e.delta << "\n";
        out << "  cycles:\n";
        for (const auto& cyc : decompose_cycles(ts).cycles) {
            out << "    (" << cyc.length() << (cyc.elementary() ? ", elementary" : "") << ")";
            for (std::size_t s = 0; s < cyc.length(); ++s)
                out << ' ' << vertex_text(inst, 0, cyc.vertices[s]) << ' ' << (cyc.signs[s] > 0 ? '+' : '-');
            out << "\n";
        }
        if (c.trace) {
            out << "  mechanism:\n";
            write_mechanism(out, inst, *c.trace, "    ");
        }
    }
}

MapReport run_altcyc(const ReactionInstance& inst, const RunConfig& c) {
    SolveOptions opt;
    opt.max_cost = c.max_cost;
    opt.connected_only = c.connected;
    opt.elementary_only = c.elementary;
    if (c.timeout_ms) opt.time_budget = std::chrono::milliseconds(*c.timeout_ms);
    opt.node_budget = c.node_budget;
    const auto sol = solve(inst, opt);
    MapReport r{"altcyc", to_string(sol.outcome), sol.min_cost, sol.last_bound, sol.nodes, {}};
    if (sol.outcome == SolveOutcome::Optimal)
        for (const auto& m : sol.maps) r.classes.push_back({m.map, m.trace});
    return r;
}

IlpModel build_model(const ReactionInstance& inst, const std::string& model) {
    if (model == "ilp2") return build_ilp2(inst);
    if (model == "ilp4") return build_ilp4(inst);
    throw UsageError("--model must be ilp2 or ilp4");
}

MapReport run_ilp(const ReactionInstance& inst, const RunConfig& c) {
    IlpOptions opt;
    if (c.timeout_ms) opt.time_limit = std::chrono::milliseconds(*c.timeout_ms);
    const auto e = enumerate_optima(inst, build_model(inst, c.model), opt);
    MapReport r{"ilp-internal/" + c.model, "exhausted", std::nullopt, -1, e.nodes, {}};
    if (e.status == IlpStatus::Incomplete) {
        r.status = "timeout";
        return r;
    }
    if (e.status != IlpStatus::Optimal) return r;
    const int min_cost = static_cast<int>(*e.objective / (c.model == "ilp2" ? 2 : 1));
    if (min_cost > c.max_cost) return r;
    r.status = "optimal";
    r.min_cost = min_cost;
    r.last_bound = min_cost;
    for (const auto& m : e.classes) r.classes.push_back({m, std::nullopt});
    return r;
}

int write_lp(const ReactionInstance& inst, const RunConfig& c) {
    Output out(c.output);
    out.stream() << export_lp(build_model(inst, c.model));
    return Ok;
}

chemio::ReactionDocument load_reaction(const RunConfig& c, ReactionInstance& inst) {
    auto doc = chemio::parse_reaction_json(read_input(c.input));
    inst = make_instance(doc);
    return doc;
}

int cmd_map(const RunConfig& c) {
    ReactionInstance inst;
    const auto doc = load_reaction(c, inst);
    if (c.solver == "export-lp") return write_lp(inst, c);
    const auto r = c.solver == "altcyc" ? run_altcyc(inst, c) : run_ilp(inst, c);
    Output out(c.output);
    const auto format = c.format.value_or("json");
    if (format == "json") {
        json vertices{{"educts", json::array()}, {"products", json::array()}};
        for (int v = 0; v < inst.size(); ++v) {
            vertices["educts"].push_back(vertex_json(inst, 0, v));
            vertices["products"].push_back(vertex_json(inst, 1, v));
        }
        json classes = json::array();
        for (const auto& cl : r.classes) classes.push_back(class_json(inst, cl));
        json j{{"id", doc.id ? json(*doc.id) : json(nullptr)},
               {"solver", r.solver},
               {"status", r.status},
               {"minCost", r.min_cost ? json(*r.min_cost) : json(nullptr)},
               {"lastBound", r.last_bound},
               {"nodes", r.nodes},
               {"vertices", std::move(vertices)},
               {"classes", std::move(classes)}};
        out.stream() << j.dump(2) << "\n";
    } else if (format == "text") {
        write_map_text(out.stream(), inst, doc, r);
    } else {
        int k = 0;
        for (const auto& cl : r.classes) {
            out.stream() << "class " << ++k << " (cost " << cost(inst, cl.map) << ")\n";
            write_mechanism(out.stream(), inst, *cl.trace, "  ");
        }
    }
    if (r.status == "timeout") return TimedOut;
    if (r.status == "exhausted") return BoundExhausted;
    return Ok;
}

int cmd_export_lp(const RunConfig& c) {
    ReactionInstance inst;
    load_reaction(c, inst);
    return write_lp(inst, c);
}

int cmd_candidates(const RunConfig& c) {
    auto pool = parse_pool_json(read_input(c.input));
    const auto original = deduplicate(pool.molecules);
    // Seeded reservoir sample over the deterministic candidate stream.
    std::vector<CandidatePair> picked;
    std::vector<std::uint64_t> order;
    std::mt19937_64 rng(c.seed);
    std::uint64_t seen = 0;
    GenerateStats gstats;
    for_each_2to2(pool.molecules, {.cancel_spectators = c.cancel_spectators}, [&](CandidatePair p) {
        const auto idx = seen++;
        if (!c.sample || picked.size() < *c.sample) {
            picked.push_back(std::move(p));
            order.push_back(idx);
        } else {
            const auto r = std::uniform_int_distribution<std::uint64_t>(0, idx)(rng);
            if (r < *c.sample) {
                picked[r] = std::move(p);
                order[r] = idx;
            }
        }
        return true;
    }, &gstats);
    if (c.sample) {
        std::vector<std::size_t> perm(picked.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return order[a] < order[b]; });
        std::vector<CandidatePair> sorted;
        for (auto k : perm) sorted.push_back(std::move(picked[k]));
        picked = std::move(sorted);
    }
    // Filtering works on the deduplicated pool; output refers to input positions.
    auto to_input = [&](CandidatePair p) {
        for (auto& id : p.left) id = original[id];
        for (auto& id : p.right) id = original[id];
        return p;
    };
    Output out(c.output);
    const bool text = c.format.value_or("json") == "text";
    std::vector<FilterRecord> records;
    if (c.no_filter) {
        for (const auto& local : picked) {
            const auto p = to_input(local);
            if (text) out.stream() << formula(p.histogram) << "  " << json(p.left).dump() << " -> " << json(p.right).dump() << "\n";
            else out.stream() << candidate_record_json(p).dump() << "\n";
        }
    } else {
        FilterOptions fo;
        fo.k_max = c.k_max;
        fo.connected_only = c.connected;
        fo.elementary_only = c.elementary;
        fo.time_budget = std::chrono::milliseconds(c.timeout_ms.value_or(1000));
        fo.node_budget = c.node_budget;
        fo.jobs = c.jobs;
        records = filter_by_ts_length(pool.molecules, picked, fo);
        for (std::size_t k = 0; k < records.size(); ++k) {
            records[k].candidate = to_input(picked[k]);
            const auto& r = records[k];
            if (text) {
                out.stream() << formula(r.candidate.histogram) << "  " << json(r.candidate.left).dump() << " -> "
                             << json(r.candidate.right).dump() << "  " << to_string(r.status);
                if (r.min_cost) out.stream() << "  cost " << *r.min_cost << "  classes " << *r.classes;
                out.stream() << "\n";
            } else {
                out.stream() << candidate_record_json(r).dump() << "\n";
            }
        }
    }
    std::size_t pass = 0, fail = 0, timeout = 0;
    for (const auto& r : records)
        (r.status == FilterStatus::Pass ? pass : r.status == FilterStatus::Fail ? fail : timeout)++;
    std::cerr << "molecules " << pool.molecules.size() << ", candidates " << seen << ", emitted " << picked.size()
              << ", comparisons " << gstats.comparisons << "\n";
    if (!c.no_filter) {
        std::cerr << "pass " << pass << ", fail " << fail << ", timeout " << timeout << "\n";
        std::cerr << describe_pass_counts(pass_counts_by_length(records)) << "\n";
    }
    return Ok;
}

int cmd_stats(const RunConfig& c) {
    const auto pool = parse_pool_json(read_input(c.input));
    const auto rep = dataset_stats(pool.molecules, pool.reactions);
    Output out(c.output);
    if (c.format.value_or("text") == "text") {
        out.stream() << to_csv(rep);
        return Ok;
    }
    json sizes = json::array(), part = json::array();
    for (const auto& [s, n] : rep.isomer_set_sizes) sizes.push_back({{"size", s}, {"count", n}});
    for (const auto& [f, n] : rep.participation) part.push_back({{"reactions", f}, {"count", n}});
    out.stream() << json{{"molecules", rep.molecules},
                         {"reactions", rep.reactions},
                         {"isomerSetSizes", std::move(sizes)},
                         {"participation", std::move(part)}}
                        .dump(2)
                 << "\n";
    return Ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Atom-atom mapping by minimal chemical distance"};
    app.require_subcommand(1);
    RunConfig c;
    auto shared = [&](CLI::App* sub, bool solver_flags) {
        sub->add_option("input", c.input, "input JSON file ('-' for stdin)")->required();
        sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "text", "lp", "mechanism"}));
        sub->add_option("-o,--output", c.output, "output file (default stdout)");
        sub->add_option("--seed", c.seed, "seed for all randomness")->capture_default_str();
        sub->add_option("--jobs", c.jobs, "parallel workers across independent instances")->capture_default_str();
        if (!solver_flags) return;
        sub->add_option("--solver", c.solver, "altcyc | ilp-internal | export-lp")
            ->check(CLI::IsMember({"altcyc", "ilp-internal", "export-lp"}))
            ->capture_default_str();
        sub->add_option("--model", c.model, "ILP formulation: ilp2 | ilp4")
            ->check(CLI::IsMember({"ilp2", "ilp4"}))
            ->capture_default_str();
        sub->add_option("--max-cost", c.max_cost, "largest transition-state size searched")->capture_default_str();
        sub->add_flag("--connected", c.connected, "accept only connected transition states");
        sub->add_flag("--elementary", c.elementary, "search elementary alternating cycles only");
        sub->add_option("--timeout-ms", c.timeout_ms, "time budget per instance");
        sub->add_option("--node-budget", c.node_budget, "search-node budget per instance");
    };
    auto* map = app.add_subcommand("map", "optimal atom maps of one reaction");
    shared(map, true);
    auto* cand = app.add_subcommand("candidates", "2-to-2 candidate reactions of a molecule pool");
    shared(cand, true);
    cand->add_option("--k-max", c.k_max, "transition-state length bound of the filter")->capture_default_str();
    cand->add_option("--sample", c.sample, "seeded random sample of this many candidates");
    cand->add_flag("--no-filter", c.no_filter, "emit candidates without solving them");
    cand->add_flag("--cancel-spectators", c.cancel_spectators, "drop candidates sharing a molecule across sides");
    auto* stats = app.add_subcommand("stats", "isomer-set and participation distributions of a pool");
    shared(stats, false);
    auto* lp = app.add_subcommand("export-lp", "write the ILP model of a reaction");
    shared(lp, false);
    lp->add_option("--model", c.model, "ilp2 | ilp4")->check(CLI::IsMember({"ilp2", "ilp4"}))->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Ok : Usage;
    }
    c.subcommand = app.get_subcommands().front()->get_name();
    try {
        validate(c);
        if (c.subcommand == "map") return cmd_map(c);
        if (c.subcommand == "candidates") return cmd_candidates(c);
        if (c.subcommand == "stats") return cmd_stats(c);
        return cmd_export_lp(c);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    } catch (const unbalanced_error& e) {
        std::cerr << "unbalanced: " << e.what() << "\n";
        return Unbalanced;
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return ParseFailure;
    } catch (const schema_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return ParseFailure;
    } catch (const valence_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return ParseFailure;
    }
}
