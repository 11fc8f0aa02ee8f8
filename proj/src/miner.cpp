#include "qam/miner.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qam/statevector.hpp"
#include "qam/utils.hpp"
#include "qam/version.hpp"

namespace qam {

PrepHooks PrepHooks::defaults() {
    PrepHooks hooks;
    hooks.classical = [](const std::string& input) {
        std::vector<GateOp> prep;
        for (std::size_t i = 0; i < input.size(); ++i) {
            if (input[i] == '1') prep.push_back(gate::x(static_cast<std::uint32_t>(i)));
        }
        return prep;
    };
    return hooks;
}

std::vector<GateOp> PrepHooks::classical_prep(const std::string& input) const {
    if (classical) return classical(input);
    return PrepHooks::defaults().classical(input);
}

bool AssertionRecord::covers(const std::string& input) const {
    if (kind == TemplateKind::Classical) return predicate.count(input) > 0;
    return std::find(inputs.begin(), inputs.end(), input) != inputs.end();
}

std::size_t AssertionRecord::instance_count() const {
    return kind == TemplateKind::Classical ? predicate.size() : inputs.size();
}

std::string random_input(std::uint32_t n, RngSeed seed) {
    if (n < 1) throw DomainError("input width must be >= 1");
    RngStream rng(seed);
    std::string bits(n, '0');
    for (std::uint32_t i = 0; i < n; ++i) bits[i] = rng.bernoulli(0.5) ? '1' : '0';
    return bits;
}

Circuit instrument_placeholder(const Circuit& c, const Placeholder& p) {
    if (p.position > c.gates.size()) {
        throw IndexOutOfRange("placeholder position " + std::to_string(p.position) +
                              " past end of circuit");
    }
    Circuit sqc;
    sqc.name = c.name;
    sqc.n_qubits = c.n_qubits;
    sqc.n_clbits = c.n_clbits + static_cast<std::uint32_t>(p.qubits.size());
    sqc.gates.assign(c.gates.begin(), c.gates.begin() + p.position);

    std::vector<std::uint32_t> targets = p.qubits;
    std::sort(targets.begin(), targets.end());
    std::uint32_t clbit = c.n_clbits;
    for (std::uint32_t q : targets) sqc.gates.push_back(gate::measure(q, clbit++));
    validate(sqc);
    return sqc;
}

std::vector<std::uint32_t> placeholder_clbits(const Circuit& c, const Placeholder& p) {
    std::vector<std::uint32_t> clbits(p.qubits.size());
    for (std::size_t i = 0; i < clbits.size(); ++i) {
        clbits[i] = c.n_clbits + static_cast<std::uint32_t>(i);
    }
    return clbits;
}

namespace {

Circuit with_prep(const Circuit& c, const std::vector<GateOp>& prep) {
    Circuit out = c;
    out.gates.insert(out.gates.begin(), prep.begin(), prep.end());
    return out;
}

struct InputDraw {
    std::string bits;
    std::uint32_t first_iteration;
};

std::vector<InputDraw> inputs_for(const Circuit& c, const Placeholder& p, const MiningConfig& cfg,
                                  bool exhaustive) {
    std::vector<InputDraw> draws;
    if (exhaustive) {
        const std::uint64_t total = std::uint64_t{1} << c.n_qubits;
        for (std::uint64_t i = 0; i < total; ++i) {
            draws.push_back({index_to_bits(i, c.n_qubits), static_cast<std::uint32_t>(i)});
        }
        return draws;
    }
    std::set<std::string> seen;
    RngStream base(cfg.seed);
    for (std::uint32_t iter = 0; iter < cfg.iterations; ++iter) {
        RngStream draw = base.substream("input").substream(fnv1a(p.id)).substream(iter);
        std::string bits(c.n_qubits, '0');
        for (std::uint32_t b = 0; b < c.n_qubits; ++b) {
            bits[b] = draw.bernoulli(0.5) ? '1' : '0';
        }
        if (seen.insert(bits).second) draws.push_back({bits, iter});
    }
    return draws;
}

struct Observation {
    std::optional<ChiSquareResult> classical;
    std::optional<ChiSquareResult> uniform;
    std::optional<ChiSquareResult> cat;
};

}  // namespace

MiningResult mine_detailed(const Circuit& c, const std::vector<Placeholder>& placeholders,
                           const MiningConfig& cfg, const PrepHooks& hooks) {
    if (cfg.iterations < 1) throw DomainError("iterations must be >= 1");
    if (cfg.shots < kMinimumShots) {
        throw InsufficientShots("mining shots below the minimum of " +
                                std::to_string(kMinimumShots));
    }

    const bool exhaustive =
        cfg.input_mode == InputMode::ExhaustiveBitstrings ||
        (cfg.auto_exhaustive && c.n_qubits <= 12 &&
         (std::uint64_t{1} << c.n_qubits) <= cfg.iterations);

    struct Task {
        std::size_t placeholder_index;
        std::string input;
        std::uint32_t first_iteration;
    };
    std::vector<Task> tasks;
    std::vector<Circuit> sqcs;
    sqcs.reserve(placeholders.size());
    for (std::size_t pi = 0; pi < placeholders.size(); ++pi) {
        sqcs.push_back(instrument_placeholder(c, placeholders[pi]));
        for (const InputDraw& draw : inputs_for(c, placeholders[pi], cfg, exhaustive)) {
            tasks.push_back({pi, draw.bits, draw.first_iteration});
        }
    }

    const RngStream base(cfg.seed);
    std::vector<std::vector<MinedInstance>> per_task(tasks.size());

    parallel_for(tasks.size(), cfg.jobs, [&](std::size_t ti) {
        const Task& task = tasks[ti];
        const Placeholder& ph = placeholders[task.placeholder_index];
        const Circuit& sqc = sqcs[task.placeholder_index];
        const std::string zeros(c.n_qubits, '0');
        const std::vector<std::uint32_t> assert_clbits = placeholder_clbits(c, ph);
        const std::size_t k = ph.qubits.size();

        auto sampled_marginal = [&](const std::vector<GateOp>& prep, std::uint64_t salt) {
            RngStream stream = base.substream("mine")
                                   .substream(fnv1a(ph.id))
                                   .substream(fnv1a(task.input))
                                   .substream(salt);
            OutcomeDistribution full =
                sample(with_prep(sqc, prep), zeros, cfg.shots, RngSeed{stream.next_u64(), 0});
            return full.marginal(full.positions_of(assert_clbits));
        };

        Observation obs;
        OutcomeDistribution classical_dist =
            sampled_marginal(hooks.classical_prep(task.input), 0);
        obs.classical = test_classical(classical_dist);

        OutcomeDistribution property_dist = classical_dist;
        if (hooks.superposition) {
            property_dist = sampled_marginal((*hooks.superposition)(task.input), 1);
        }
        obs.uniform = test_uniform(property_dist);
        if (k >= 2) obs.cat = test_cat(property_dist);

        std::vector<MinedInstance>& out = per_task[ti];
        auto emit = [&](TemplateKind kind, const ChiSquareResult& ev, const std::string& outcome) {
            out.push_back({task.placeholder_index, task.input, kind, outcome, ev,
                           task.first_iteration});
        };

        const bool classical_passes = obs.classical->passes(cfg.alpha);
        const bool cat_passes = obs.cat && obs.cat->passes(cfg.alpha);
        const bool uniform_passes = obs.uniform->passes(cfg.alpha);
        if (hooks.superposition) {
            // Separate preparations make the classical claim independent of
            // the superposition claims; within the latter, cat wins ties.
            if (classical_passes) emit(TemplateKind::Classical, *obs.classical, *obs.classical->mode);
            if (cat_passes) {
                emit(TemplateKind::CatEntangled, *obs.cat, "");
            } else if (uniform_passes) {
                emit(TemplateKind::UniformSuperposition, *obs.uniform, "");
            }
        } else {
            // One distribution, one verdict: classical > cat > uniform.
            if (classical_passes) {
                emit(TemplateKind::Classical, *obs.classical, *obs.classical->mode);
            } else if (cat_passes) {
                emit(TemplateKind::CatEntangled, *obs.cat, "");
            } else if (uniform_passes) {
                emit(TemplateKind::UniformSuperposition, *obs.uniform, "");
            }
        }
    });

    MiningResult result;
    result.placeholders = placeholders;
    result.exhaustive = exhaustive;
    for (auto& chunk : per_task) {
        for (MinedInstance& inst : chunk) result.instances.push_back(std::move(inst));
    }

    // Aggregate instances into one record per (placeholder, kind).
    std::map<std::pair<std::size_t, TemplateKind>, AssertionRecord> records;
    for (const MinedInstance& inst : result.instances) {
        auto key = std::make_pair(inst.placeholder_index, inst.kind);
        AssertionRecord& rec = records[key];
        rec.kind = inst.kind;
        rec.placeholder = placeholders[inst.placeholder_index];
        rec.shots = cfg.shots;
        rec.alpha = cfg.alpha;
        if (inst.kind == TemplateKind::Classical) {
            rec.predicate[inst.input] = inst.outcome;
        } else {
            rec.inputs.push_back(inst.input);
        }
        rec.evidence.emplace_back(inst.input, inst.evidence);
    }
    for (auto& [key, rec] : records) {
        std::sort(rec.inputs.begin(), rec.inputs.end());
        std::sort(rec.evidence.begin(), rec.evidence.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        rec.id = "a" + std::to_string(result.records.size());
        result.records.push_back(std::move(rec));
    }
    return result;
}

std::vector<AssertionRecord> mine(const Circuit& c, const std::vector<Placeholder>& placeholders,
                                  const MiningConfig& cfg, const PrepHooks& hooks) {
    return mine_detailed(c, placeholders, cfg, hooks).records;
}

namespace {

using nlohmann::json;

json result_to_json(const ChiSquareResult& r) {
    json j{{"statistic", r.statistic},
           {"dof", r.dof},
           {"p_value", r.p_value},
           {"pooled_bins", r.pooled_bins}};
    if (r.mode) j["mode"] = *r.mode;
    return j;
}

ChiSquareResult result_from_json(const json& j) {
    ChiSquareResult r;
    r.statistic = j.at("statistic").get<double>();
    r.dof = j.at("dof").get<std::uint32_t>();
    r.p_value = j.at("p_value").get<double>();
    r.pooled_bins = j.value("pooled_bins", 0u);
    if (j.contains("mode")) r.mode = j.at("mode").get<std::string>();
    return r;
}

json record_to_json(const AssertionRecord& rec) {
    json j;
    j["id"] = rec.id;
    j["kind"] = to_string(rec.kind);
    j["placeholder"] = {{"id", rec.placeholder.id},
                        {"position", rec.placeholder.position},
                        {"qubits", rec.placeholder.qubits},
                        {"hint", to_string(rec.placeholder.hint)},
                        {"provenance", rec.placeholder.provenance}};
    if (rec.kind == TemplateKind::Classical) {
        j["predicate"] = rec.predicate;
    } else {
        j["inputs"] = rec.inputs;
    }
    json evidence = json::array();
    for (const auto& [input, result] : rec.evidence) {
        json e = result_to_json(result);
        e["input"] = input;
        evidence.push_back(std::move(e));
    }
    j["evidence"] = std::move(evidence);
    j["shots"] = rec.shots;
    j["alpha"] = rec.alpha;
    return j;
}

AssertionRecord record_from_json(const json& j) {
    AssertionRecord rec;
    rec.id = j.at("id").get<std::string>();
    rec.kind = template_kind_from_string(j.at("kind").get<std::string>());
    const json& ph = j.at("placeholder");
    rec.placeholder.id = ph.at("id").get<std::string>();
    rec.placeholder.position = ph.at("position").get<std::uint32_t>();
    rec.placeholder.qubits = ph.at("qubits").get<std::vector<std::uint32_t>>();
    rec.placeholder.hint = hint_from_string(ph.at("hint").get<std::string>());
    rec.placeholder.provenance = ph.value("provenance", std::string{});
    if (j.contains("predicate")) {
        rec.predicate = j.at("predicate").get<std::map<std::string, std::string>>();
    }
    if (j.contains("inputs")) {
        rec.inputs = j.at("inputs").get<std::vector<std::string>>();
    }
    if (j.contains("evidence")) {
        for (const json& e : j.at("evidence")) {
            rec.evidence.emplace_back(e.at("input").get<std::string>(), result_from_json(e));
        }
    }
    rec.shots = j.value("shots", std::uint64_t{0});
    rec.alpha = j.value("alpha", kDefaultAlpha);
    return rec;
}

}  // namespace

std::string catalog_to_json(const Catalog& catalog) {
    json j;
    j["tool"] = "qam";
    j["version"] = kVersion;
    j["circuit"] = {{"name", catalog.circuit_name}, {"n_qubits", catalog.n_qubits}};
    j["seed"] = {{"master", catalog.seed.master_seed}, {"stream", catalog.seed.stream_index}};
    j["shots"] = catalog.shots;
    j["alpha"] = catalog.alpha;
    json records = json::array();
    for (const AssertionRecord& rec : catalog.records) records.push_back(record_to_json(rec));
    j["assertions"] = std::move(records);
    return j.dump(2) + "\n";
}

Catalog catalog_from_json(const std::string& text) {
    const json j = json::parse(text);
    Catalog catalog;
    catalog.circuit_name = j.at("circuit").value("name", std::string{});
    catalog.n_qubits = j.at("circuit").value("n_qubits", 0u);
    if (j.contains("seed")) {
        catalog.seed.master_seed = j.at("seed").value("master", std::uint64_t{0});
        catalog.seed.stream_index = j.at("seed").value("stream", std::uint64_t{0});
    }
    catalog.shots = j.value("shots", std::uint64_t{0});
    catalog.alpha = j.value("alpha", kDefaultAlpha);
    for (const json& r : j.at("assertions")) catalog.records.push_back(record_from_json(r));
    return catalog;
}

void write_catalog(const std::string& path, const Catalog& catalog) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write catalog: " + path);
    out << catalog_to_json(catalog);
}

Catalog read_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read catalog: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return catalog_from_json(buf.str());
}

}  // namespace qam
