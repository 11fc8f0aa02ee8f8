// Command-line front end: mine assertions, instrument circuits, and run the
// fault-injection experiments.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qam/analyzer.hpp"
#include "qam/benchmarks.hpp"
#include "qam/faults.hpp"
#include "qam/instrument.hpp"
#include "qam/miner.hpp"
#include "qam/qasm.hpp"
#include "qam/version.hpp"

namespace {

struct CommonArgs {
    std::string builtin;
    std::string qasm_path;
    std::uint64_t seed = 1;
    std::uint64_t shots = 8192;
    std::uint32_t iterations = 0;  // 0: cover the whole input space when small
    double alpha = qam::kDefaultAlpha;
    std::uint32_t budget = 8;
    bool exhaustive = false;
    unsigned jobs = 1;
    std::string out;
    std::string simon_secret = "101";
    std::string grover_marked = "10101";
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_mining) {
    cmd->add_option("--builtin", args.builtin, "builtin circuit name (ghz<n>, qft<n>, adder4, "
                                               "teleport3, simon6, grover5, shor5)");
    cmd->add_option("--qasm", args.qasm_path, "path to an OpenQASM 2.0 file");
    cmd->add_option("--seed", args.seed, "master seed");
    cmd->add_option("--budget", args.budget, "placeholder budget for static analysis");
    cmd->add_option("--jobs", args.jobs, "worker threads");
    cmd->add_option("--out", args.out, "output path (or report prefix)");
    cmd->add_option("--secret", args.simon_secret, "simon6 secret bitstring");
    cmd->add_option("--marked", args.grover_marked, "grover5 marked bitstring");
    if (with_mining) {
        cmd->add_option("--shots", args.shots, "shots per sampled distribution");
        cmd->add_option("--iterations", args.iterations,
                        "random inputs per placeholder (0: every input when <= 12 qubits)");
        cmd->add_option("--alpha", args.alpha, "significance level");
        cmd->add_flag("--exhaustive", args.exhaustive, "test every input bitstring");
    }
    cmd->set_config("--config");
}

qam::BuiltinCircuit load_circuit(const CommonArgs& args) {
    if (args.builtin.empty() == args.qasm_path.empty()) {
        throw qam::Error("pass exactly one of --builtin or --qasm");
    }
    if (!args.builtin.empty()) {
        qam::BuiltinOptions opts;
        opts.simon_secret = args.simon_secret;
        opts.grover_marked = args.grover_marked;
        return qam::builtin_circuits(args.builtin, opts);
    }
    if (!std::filesystem::exists(args.qasm_path)) {
        std::cerr << "error: no such file: " << args.qasm_path << "\n";
        std::exit(2);
    }
    qam::BuiltinCircuit b;
    b.circuit = qam::parse_qasm_file(args.qasm_path);
    b.hooks = qam::PrepHooks::defaults();
    return b;
}

qam::MiningConfig mining_config(const CommonArgs& args, std::uint32_t n_qubits) {
    qam::MiningConfig cfg;
    cfg.iterations = args.iterations;
    if (cfg.iterations == 0) {
        cfg.iterations = n_qubits <= 12 ? std::max<std::uint32_t>(16, 1u << n_qubits) : 64;
    }
    cfg.shots = args.shots;
    cfg.alpha = args.alpha;
    cfg.seed = {args.seed, 0};
    cfg.input_mode = args.exhaustive ? qam::InputMode::ExhaustiveBitstrings
                                     : qam::InputMode::RandomBitstrings;
    cfg.jobs = args.jobs;
    return cfg;
}

std::vector<std::uint32_t> parse_grid(const std::string& text) {
    std::vector<std::uint32_t> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) grid.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    }
    if (grid.empty()) throw qam::Error("empty grid: '" + text + "'");
    return grid;
}

int cmd_mine(const CommonArgs& args) {
    const qam::BuiltinCircuit bench = load_circuit(args);
    const auto placeholders =
        qam::static_analysis(bench.circuit, args.budget, {args.seed, 0});
    const qam::MiningResult mined =
        qam::mine_detailed(bench.circuit, placeholders, mining_config(args, bench.circuit.n_qubits), bench.hooks);

    qam::Catalog catalog;
    catalog.circuit_name = bench.circuit.name;
    catalog.n_qubits = bench.circuit.n_qubits;
    catalog.seed = {args.seed, 0};
    catalog.shots = args.shots;
    catalog.alpha = args.alpha;
    catalog.records = mined.records;
    const std::string out = args.out.empty() ? "catalog.json" : args.out;
    qam::write_catalog(out, catalog);

    std::size_t classical = 0, uniform = 0, cat = 0, recs[3] = {0, 0, 0};
    for (const auto& rec : mined.records) {
        ++recs[static_cast<int>(rec.kind)];
        switch (rec.kind) {
            case qam::TemplateKind::Classical: classical += rec.predicate.size(); break;
            case qam::TemplateKind::UniformSuperposition: uniform += rec.inputs.size(); break;
            case qam::TemplateKind::CatEntangled: cat += rec.inputs.size(); break;
        }
    }
    std::printf("placeholders: %zu\n", placeholders.size());
    std::printf("classical: %zu assertions in %zu record(s)\n", classical, recs[0]);
    std::printf("uniform:   %zu assertions in %zu record(s)\n", uniform, recs[1]);
    std::printf("cat:       %zu assertions in %zu record(s)\n", cat, recs[2]);
    std::printf("catalog written to %s\n", out.c_str());
    return 0;
}

struct InstrumentArgs {
    std::string catalog_path;
    std::string select;
    std::uint32_t select_random = 0;
    std::string strategy = "auto";
    std::string map_path;
};

int cmd_instrument(const CommonArgs& args, const InstrumentArgs& iargs) {
    const qam::BuiltinCircuit bench = load_circuit(args);
    if (!std::filesystem::exists(iargs.catalog_path)) {
        std::cerr << "error: no such file: " << iargs.catalog_path << "\n";
        std::exit(2);
    }
    const qam::Catalog catalog = qam::read_catalog(iargs.catalog_path);

    std::vector<qam::AssertionRecord> records;
    if (!iargs.select.empty()) {
        std::stringstream ss(iargs.select);
        std::string id;
        while (std::getline(ss, id, ',')) {
            const auto it = std::find_if(catalog.records.begin(), catalog.records.end(),
                                         [&id](const auto& r) { return r.id == id; });
            if (it == catalog.records.end()) {
                throw qam::Error("catalog has no record with id '" + id + "'");
            }
            records.push_back(*it);
        }
    } else if (iargs.select_random > 0) {
        if (iargs.select_random > catalog.records.size()) {
            throw qam::InsufficientAssertions("catalog holds only " +
                                              std::to_string(catalog.records.size()) +
                                              " records");
        }
        // Seeded draw, skipping records that would claim an already-taken
        // cut with intersecting qubits.
        auto conflicts = [](const qam::AssertionRecord& a, const qam::AssertionRecord& b) {
            if (a.placeholder.position != b.placeholder.position) return false;
            for (std::uint32_t q : a.placeholder.qubits) {
                for (std::uint32_t p : b.placeholder.qubits) {
                    if (p == q) return true;
                }
            }
            return false;
        };
        std::vector<std::size_t> order(catalog.records.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        qam::RngStream rng(qam::RngSeed{args.seed, qam::fnv1a("select-records")});
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[rng.uniform_below(i)]);
        }
        std::vector<std::size_t> chosen;
        for (std::size_t i : order) {
            if (chosen.size() == iargs.select_random) break;
            bool clash = false;
            for (std::size_t j : chosen) {
                clash |= conflicts(catalog.records[i], catalog.records[j]);
            }
            if (!clash) chosen.push_back(i);
        }
        if (chosen.size() < iargs.select_random) {
            throw qam::InsufficientAssertions("catalog has no conflict-free selection of " +
                                              std::to_string(iargs.select_random) + " records");
        }
        std::sort(chosen.begin(), chosen.end());
        for (std::size_t i : chosen) records.push_back(catalog.records[i]);
    } else {
        records = catalog.records;
    }

    std::map<std::string, qam::Strategy> overrides;
    if (iargs.strategy != "auto") {
        const qam::Strategy s = qam::strategy_from_string(iargs.strategy);
        for (const auto& rec : records) overrides[rec.id] = s;
    }

    const qam::InstrumentedCircuit ic =
        qam::instrument(bench.circuit, records, overrides, bench.hooks);
    const std::string out = args.out.empty() ? "instrumented.qasm" : args.out;
    {
        std::ofstream f(out);
        if (!f) throw qam::Error("cannot write " + out);
        f << qam::emit_qasm(ic.circuit);
    }

    nlohmann::json map;
    map["circuit"] = bench.circuit.name;
    for (const auto& rec : records) {
        nlohmann::json entry;
        entry["strategy"] = qam::to_string(ic.strategy_used.at(rec.id));
        entry["clbits"] = ic.assertion_clbits.at(rec.id);
        if (auto it = ic.ancilla_qubits.find(rec.id); it != ic.ancilla_qubits.end()) {
            entry["ancillas"] = it->second;
        }
        map["assertions"][rec.id] = std::move(entry);
    }
    const std::string map_out = iargs.map_path.empty() ? out + ".map.json" : iargs.map_path;
    {
        std::ofstream f(map_out);
        if (!f) throw qam::Error("cannot write " + map_out);
        f << map.dump(2) << "\n";
    }

    std::printf("selected %zu record(s)\n", records.size());
    std::printf("qubits: %u -> %u, clbits: %u -> %u, gates: %zu -> %zu\n",
                bench.circuit.n_qubits, ic.circuit.n_qubits, bench.circuit.n_clbits,
                ic.circuit.n_clbits, bench.circuit.gates.size(), ic.circuit.gates.size());
    std::printf("instrumented circuit written to %s (map: %s)\n", out.c_str(), map_out.c_str());
    return 0;
}

struct ExperimentArgs {
    std::string kind;
    std::string grid = "1,2,4,8,12,16,20,32,64";
    std::string k_values = "1,3,7,15";
    std::uint32_t assertions = 5;
    std::uint32_t bugs = 10;
    std::uint32_t evasive = 0;
    std::uint32_t repetitions = 10;
};

int cmd_experiment(const CommonArgs& args, const ExperimentArgs& eargs) {
    const qam::BuiltinCircuit bench = load_circuit(args);
    const auto placeholders =
        qam::static_analysis(bench.circuit, args.budget, {args.seed, 0});
    qam::MiningConfig cfg = mining_config(args, bench.circuit.n_qubits);

    qam::ExperimentReport report;
    if (eargs.kind == "mining-curve") {
        report = qam::experiment_mining_curve(bench.circuit, placeholders, cfg,
                                              parse_grid(eargs.grid), bench.hooks);
    } else {
        const qam::MiningResult mined =
            qam::mine_detailed(bench.circuit, placeholders, cfg, bench.hooks);
        if (eargs.kind == "coverage") {
            qam::CoverageOptions opts;
            opts.n_assertions = eargs.assertions;
            opts.n_bugs = eargs.bugs;
            opts.vector_grid = parse_grid(eargs.grid);
            opts.shots = args.shots;
            opts.evasive_bugs = eargs.evasive;
            opts.jobs = args.jobs;
            report = qam::experiment_error_coverage(bench.circuit, mined, {args.seed, 0}, opts,
                                                    bench.hooks);
        } else if (eargs.kind == "tradeoff") {
            qam::TradeoffOptions opts;
            opts.assertion_grid = parse_grid(eargs.k_values);
            opts.repetitions = eargs.repetitions;
            opts.shots = args.shots;
            opts.jobs = args.jobs;
            report = qam::experiment_tradeoff(bench.circuit, mined, {args.seed, 0}, opts,
                                              bench.hooks);
        } else {
            throw qam::Error("unknown experiment kind '" + eargs.kind +
                             "' (expected mining-curve, coverage, or tradeoff)");
        }
    }

    const std::string prefix = args.out.empty() ? "report-" + eargs.kind : args.out;
    report.write(prefix);
    for (const qam::ReportRow& row : report.rows) {
        std::printf("%s %s x=%g y=%g\n", row.experiment.c_str(), row.detail.c_str(), row.x,
                    row.y);
    }
    std::printf("report written to %s.csv and %s.json\n", prefix.c_str(), prefix.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum assertion mining and fault-injection toolkit"};
    app.set_version_flag("--version", qam::kVersion);
    app.require_subcommand(1);

    CommonArgs mine_args;
    CLI::App* mine = app.add_subcommand("mine", "mine assertions from a circuit");
    add_common(mine, mine_args, true);

    CommonArgs inst_common;
    InstrumentArgs inst_args;
    CLI::App* inst = app.add_subcommand("instrument", "insert mined assertions into a circuit");
    add_common(inst, inst_common, false);
    inst->add_option("--catalog", inst_args.catalog_path, "assertion catalog")->required();
    inst->add_option("--select", inst_args.select, "comma-separated record ids");
    inst->add_option("--random", inst_args.select_random, "select this many records at random");
    inst->add_option("--strategy", inst_args.strategy,
                     "auto | ancilla-copy | measure-restart | projection");
    inst->add_option("--map", inst_args.map_path, "where to write the clbit map");

    CommonArgs exp_common;
    ExperimentArgs exp_args;
    CLI::App* exp = app.add_subcommand("experiment", "run a seeded experiment");
    exp->add_option("kind", exp_args.kind, "mining-curve | coverage | tradeoff")->required();
    add_common(exp, exp_common, true);
    exp->add_option("--grid", exp_args.grid, "x-axis grid (comma separated)");
    exp->add_option("--k", exp_args.k_values, "assertion counts for tradeoff");
    exp->add_option("--assertions", exp_args.assertions, "assertions to select");
    exp->add_option("--bugs", exp_args.bugs, "bugs to inject");
    exp->add_option("--evasive", exp_args.evasive, "append this many evasive bugs");
    exp->add_option("--reps", exp_args.repetitions, "repetitions per grid point");

    try {
        app.parse(argc, argv);
        if (mine->parsed()) return cmd_mine(mine_args);
        if (inst->parsed()) return cmd_instrument(inst_common, inst_args);
        if (exp->parsed()) return cmd_experiment(exp_common, exp_args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const qam::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
