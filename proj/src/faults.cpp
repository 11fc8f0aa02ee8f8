#include "qam/faults.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qam/statevector.hpp"
#include "qam/utils.hpp"

namespace qam {

const char* to_string(MutationKind kind) {
    switch (kind) {
        case MutationKind::GateSubstitute: return "substitute";
        case MutationKind::GateInsert: return "insert";
        case MutationKind::GateDelete: return "delete";
        case MutationKind::RandomRotation: return "rotation";
    }
    return "?";
}

namespace {

std::string gate_text(const GateOp& g) {
    std::string s = traits(g.kind).qasm_name;
    if (!g.params.empty()) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "(%.17g)", g.params[0]);
        s += buf;
    }
    s += ' ';
    for (std::size_t i = 0; i < g.qubits.size(); ++i) {
        if (i > 0) s += ',';
        s += std::to_string(g.qubits[i]);
    }
    return s;
}

}  // namespace

std::string Mutation::describe() const {
    std::string s = std::string(to_string(kind)) + "@" + std::to_string(position);
    switch (kind) {
        case MutationKind::GateSubstitute:
            s += ": " + gate_text(original) + " -> " + gate_text(replacement);
            break;
        case MutationKind::GateDelete:
            s += ": " + gate_text(original);
            break;
        case MutationKind::GateInsert:
        case MutationKind::RandomRotation:
            s += ": " + gate_text(replacement);
            break;
    }
    return s;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

const std::vector<GateKind> kOneQubitPool = {GateKind::H, GateKind::X,   GateKind::Y,
                                             GateKind::Z, GateKind::S,   GateKind::Sdg,
                                             GateKind::T, GateKind::Tdg};
const std::vector<GateKind> kRotationPool = {GateKind::RX, GateKind::RY, GateKind::RZ};
const std::vector<GateKind> kTwoQubitPool = {GateKind::Swap, GateKind::CX, GateKind::CZ};

std::vector<std::size_t> unitary_positions(const Circuit& c) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        if (traits(c.gates[i].kind).unitary) out.push_back(i);
    }
    return out;
}

std::vector<std::uint32_t> draw_distinct_qubits(RngStream& rng, std::uint32_t n_qubits,
                                                std::uint32_t count) {
    std::set<std::uint32_t> qs;
    while (qs.size() < count) {
        qs.insert(static_cast<std::uint32_t>(rng.uniform_below(n_qubits)));
    }
    std::vector<std::uint32_t> out(qs.begin(), qs.end());
    // Random order, not sorted order: control/target roles should vary.
    for (std::size_t i = out.size(); i > 1; --i) {
        std::swap(out[i - 1], out[rng.uniform_below(i)]);
    }
    return out;
}

std::optional<Mutation> draw_mutation(const Circuit& c, RngStream rng) {
    const MutationKind kind = static_cast<MutationKind>(rng.uniform_below(4));
    Mutation m;
    m.kind = kind;
    switch (kind) {
        case MutationKind::GateSubstitute: {
            const auto targets = unitary_positions(c);
            if (targets.empty()) return std::nullopt;
            const std::size_t pos = targets[rng.uniform_below(targets.size())];
            const GateOp& g = c.gates[pos];
            std::vector<GateKind> pool;
            if (g.qubits.size() == 1 && g.params.empty()) {
                pool = kOneQubitPool;
            } else if (g.qubits.size() == 1) {
                pool = kRotationPool;
            } else if (g.qubits.size() == 2) {
                pool = kTwoQubitPool;
            } else {
                return std::nullopt;  // ccx has no arity-compatible alternative
            }
            pool.erase(std::remove(pool.begin(), pool.end(), g.kind), pool.end());
            GateOp repl = g;
            repl.kind = pool[rng.uniform_below(pool.size())];
            m.position = static_cast<std::uint32_t>(pos);
            m.original = g;
            m.replacement = std::move(repl);
            return m;
        }
        case MutationKind::GateDelete: {
            const auto targets = unitary_positions(c);
            if (targets.empty() || c.gates.size() <= 1) return std::nullopt;
            const std::size_t pos = targets[rng.uniform_below(targets.size())];
            m.position = static_cast<std::uint32_t>(pos);
            m.original = c.gates[pos];
            return m;
        }
        case MutationKind::GateInsert: {
            std::vector<GateKind> pool = kOneQubitPool;
            if (c.n_qubits >= 2) {
                pool.insert(pool.end(), kTwoQubitPool.begin(), kTwoQubitPool.end());
            }
            const GateKind k = pool[rng.uniform_below(pool.size())];
            const std::uint32_t arity = traits(k).qubit_arity;
            GateOp g{k, draw_distinct_qubits(rng, c.n_qubits, arity), {}, {}, {}};
            m.position = static_cast<std::uint32_t>(rng.uniform_below(c.gates.size() + 1));
            m.replacement = std::move(g);
            return m;
        }
        case MutationKind::RandomRotation: {
            const GateKind axis = kRotationPool[rng.uniform_below(3)];
            const double angle = rng.uniform_real(0.1, kPi);
            GateOp g{axis,
                     {static_cast<std::uint32_t>(rng.uniform_below(c.n_qubits))},
                     {},
                     {angle},
                     {}};
            m.position = static_cast<std::uint32_t>(rng.uniform_below(c.gates.size() + 1));
            m.replacement = std::move(g);
            return m;
        }
    }
    return std::nullopt;
}

Mutation draw_valid_mutation(const Circuit& c, RngStream base) {
    for (std::uint64_t attempt = 0; attempt < 256; ++attempt) {
        if (auto m = draw_mutation(c, base.substream(attempt))) return *m;
    }
    throw Error("could not draw a valid mutation");
}

Circuit apply_one(const Circuit& c, const Mutation& m) {
    Circuit out = c;
    switch (m.kind) {
        case MutationKind::GateSubstitute:
            out.gates.at(m.position) = m.replacement;
            break;
        case MutationKind::GateDelete:
            out.gates.erase(out.gates.begin() + m.position);
            break;
        case MutationKind::GateInsert:
        case MutationKind::RandomRotation:
            out.gates.insert(out.gates.begin() + m.position, m.replacement);
            break;
    }
    validate(out);
    return out;
}

}  // namespace

std::pair<Circuit, std::vector<Mutation>> inject(const Circuit& c, std::uint32_t count,
                                                 RngSeed seed) {
    if (c.gates.empty()) throw EmptyCircuit("cannot inject bugs into an empty circuit");
    if (count < 1) throw DomainError("bug count must be >= 1");
    Circuit current = c;
    std::vector<Mutation> log;
    const RngStream base = RngStream(seed).substream("inject");
    for (std::uint32_t b = 0; b < count; ++b) {
        Mutation m = draw_valid_mutation(current, base.substream(b));
        current = apply_one(current, m);
        log.push_back(std::move(m));
    }
    return {std::move(current), std::move(log)};
}

Circuit apply_mutations(const Circuit& c, const std::vector<Mutation>& log) {
    Circuit current = c;
    for (const Mutation& m : log) current = apply_one(current, m);
    return current;
}

std::uint32_t map_position(const std::vector<Mutation>& log, std::uint32_t position) {
    std::uint32_t pos = position;
    for (const Mutation& m : log) {
        switch (m.kind) {
            case MutationKind::GateInsert:
            case MutationKind::RandomRotation:
                if (m.position < pos) ++pos;
                break;
            case MutationKind::GateDelete:
                if (m.position < pos) --pos;
                break;
            case MutationKind::GateSubstitute:
                break;
        }
    }
    return pos;
}

namespace {

std::string fmt_num(double v) {
    if (v == std::floor(v) && std::fabs(v) < 1e15) {
        return std::to_string(static_cast<long long>(v));
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string ExperimentReport::csv() const {
    std::string out = "experiment,x,y,seed,detail\n";
    for (const ReportRow& row : rows) {
        out += row.experiment + ',' + fmt_num(row.x) + ',' + fmt_num(row.y) + ',' +
               std::to_string(row.seed) + ',' + row.detail + '\n';
    }
    return out;
}

void ExperimentReport::write(const std::string& prefix) const {
    {
        std::ofstream out(prefix + ".csv");
        if (!out) throw Error("cannot write report: " + prefix + ".csv");
        out << csv();
    }
    std::ofstream side(prefix + ".json");
    if (!side) throw Error("cannot write report: " + prefix + ".json");
    side << sidecar_json;
}

namespace {

using nlohmann::json;

Circuit with_prep(const Circuit& c, const std::vector<GateOp>& prep) {
    Circuit out = c;
    out.gates.insert(out.gates.begin(), prep.begin(), prep.end());
    return out;
}

json config_json(const std::map<std::string, std::string>& config) {
    json j = json::object();
    for (const auto& [k, v] : config) j[k] = v;
    return j;
}

std::string instance_label(const MiningResult& mined, const MinedInstance& inst) {
    return mined.placeholders[inst.placeholder_index].id + "/" + to_string(inst.kind) + "/" +
           inst.input;
}

}  // namespace

AssertionRecord make_instance_record(const MiningResult& mined, const MinedInstance& instance,
                                     std::uint32_t position) {
    AssertionRecord rec;
    rec.id = instance_label(mined, instance);
    rec.kind = instance.kind;
    rec.placeholder = mined.placeholders[instance.placeholder_index];
    rec.placeholder.position = position;
    if (instance.kind == TemplateKind::Classical) {
        rec.predicate[instance.input] = instance.outcome;
    } else {
        rec.inputs.push_back(instance.input);
    }
    rec.evidence.emplace_back(instance.input, instance.evidence);
    rec.shots = 0;
    rec.alpha = kDefaultAlpha;
    return rec;
}

double exact_check_probability(const Circuit& target, const AssertionRecord& record,
                               const PrepHooks& hooks) {
    InstrumentedCircuit ic = instrument(target, {record}, {}, hooks);
    const std::string input = record.kind == TemplateKind::Classical
                                  ? record.predicate.begin()->first
                                  : record.inputs.front();
    std::vector<GateOp> prep;
    if (record.kind != TemplateKind::Classical && hooks.superposition) {
        prep = (*hooks.superposition)(input);
    } else {
        prep = hooks.classical_prep(input);
    }
    const std::string zeros(ic.circuit.n_qubits, '0');
    const auto dist = exact_clbit_distribution(with_prep(ic.circuit, prep), zeros);

    const std::vector<std::uint32_t>& clbits = ic.assertion_clbits.at(record.id);
    // Clbit c sits at key position = rank of c among all measured clbits.
    std::vector<std::uint32_t> measured;
    for (const GateOp& g : ic.circuit.gates) {
        if (g.kind == GateKind::Measure) measured.push_back(g.clbits[0]);
    }
    std::sort(measured.begin(), measured.end());
    std::vector<std::size_t> positions;
    for (std::uint32_t c : clbits) {
        positions.push_back(static_cast<std::size_t>(
            std::lower_bound(measured.begin(), measured.end(), c) - measured.begin()));
    }

    std::string expected;
    if (ic.strategy_used.at(record.id) == Strategy::Projection) {
        expected.assign(clbits.size(), '0');
    } else if (record.kind == TemplateKind::Classical) {
        expected = record.predicate.begin()->second;
    } else {
        throw StrategyMismatch("exact check supports projection or classical records");
    }

    double p = 0.0;
    for (const auto& [key, w] : dist) {
        bool match = true;
        for (std::size_t i = 0; i < positions.size() && match; ++i) {
            match = key.at(positions[i]) == expected[i];
        }
        if (match) p += w;
    }
    return p;
}

namespace {

constexpr double kSoundThreshold = 0.999;
constexpr double kRevealThreshold = 0.9;

struct InstancePool {
    std::vector<std::size_t> indices;  // into mined.instances
};

// Assertions usable by the experiment harnesses: the cut must lie after at
// least one gate (a cut at position 0 can never witness a mutation) and the
// runtime check must pass exactly on the clean circuit.
InstancePool build_pool(const Circuit& c, const MiningResult& mined, const PrepHooks& hooks) {
    InstancePool pool;
    for (std::size_t i = 0; i < mined.instances.size(); ++i) {
        const MinedInstance& inst = mined.instances[i];
        const Placeholder& ph = mined.placeholders[inst.placeholder_index];
        if (ph.position == 0) continue;
        AssertionRecord rec = make_instance_record(mined, inst, ph.position);
        if (exact_check_probability(c, rec, hooks) >= kSoundThreshold) {
            pool.indices.push_back(i);
        }
    }
    return pool;
}

bool reveals(const Circuit& original, const std::vector<Mutation>& log, const Circuit& mutated,
             const MiningResult& mined, const MinedInstance& inst, const PrepHooks& hooks) {
    (void)original;
    const Placeholder& ph = mined.placeholders[inst.placeholder_index];
    const std::uint32_t mapped = map_position(log, ph.position);
    AssertionRecord rec = make_instance_record(mined, inst, mapped);
    return exact_check_probability(mutated, rec, hooks) <= kRevealThreshold;
}

bool conflicting(const MiningResult& mined, const MinedInstance& a, const MinedInstance& b) {
    if (a.input != b.input) return false;
    const Placeholder& pa = mined.placeholders[a.placeholder_index];
    const Placeholder& pb = mined.placeholders[b.placeholder_index];
    if (pa.position != pb.position) return false;
    std::set<std::uint32_t> qs(pa.qubits.begin(), pa.qubits.end());
    for (std::uint32_t q : pb.qubits) {
        if (qs.count(q)) return true;
    }
    return false;
}

std::vector<std::size_t> select_instances(const MiningResult& mined, const InstancePool& pool,
                                          std::uint32_t n, RngStream rng) {
    std::vector<std::size_t> chosen;
    std::set<std::size_t> used;
    std::uint64_t attempts = 0;
    while (chosen.size() < n) {
        if (++attempts > 1000 + 50ULL * n) {
            throw InsufficientAssertions("could not select " + std::to_string(n) +
                                         " conflict-free assertions");
        }
        const std::size_t pick = pool.indices[rng.uniform_below(pool.indices.size())];
        if (used.count(pick)) continue;
        bool clash = false;
        for (std::size_t other : chosen) {
            clash |= conflicting(mined, mined.instances[pick], mined.instances[other]);
        }
        if (clash) continue;
        used.insert(pick);
        chosen.push_back(pick);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

// Test vectors for coverage sweeps: seeded permutation sweeps of the input
// space, reshuffled on exhaustion, so small designs exhaust every input.
class VectorSweep {
public:
    VectorSweep(std::uint32_t n_qubits, RngStream rng)
        : n_qubits_(n_qubits), rng_(std::move(rng)) {
        if (n_qubits_ <= 12) order_.resize(std::size_t{1} << n_qubits_);
    }

    std::string next() {
        if (order_.empty()) {
            return index_to_bits(rng_.uniform_below(std::uint64_t{1} << n_qubits_), n_qubits_);
        }
        if (cursor_ == 0) shuffle();
        const std::uint64_t v = order_[cursor_];
        cursor_ = (cursor_ + 1) % order_.size();
        return index_to_bits(v, n_qubits_);
    }

private:
    void shuffle() {
        std::iota(order_.begin(), order_.end(), 0);
        for (std::size_t i = order_.size(); i > 1; --i) {
            std::swap(order_[i - 1], order_[rng_.uniform_below(i)]);
        }
    }

    std::uint32_t n_qubits_;
    RngStream rng_;
    std::vector<std::uint64_t> order_;
    std::size_t cursor_ = 0;
};

// Evaluates the selected instances that cover `input` on the mutated circuit,
// one instrumented run per assertion; true when any verdict fails. Separate
// runs keep assertions from disturbing each other and avoid cut collisions
// introduced by position-shifting mutations.
bool any_assertion_fires(const Circuit& mutated, const std::vector<Mutation>& log,
                         const MiningResult& mined, const std::vector<std::size_t>& selected,
                         const std::string& input, std::uint64_t shots, RngSeed seed,
                         const PrepHooks& hooks) {
    for (std::size_t si = 0; si < selected.size(); ++si) {
        const MinedInstance& inst = mined.instances[selected[si]];
        if (inst.input != input) continue;
        const Placeholder& ph = mined.placeholders[inst.placeholder_index];
        const AssertionRecord rec =
            make_instance_record(mined, inst, map_position(log, ph.position));
        InstrumentedCircuit ic = instrument(mutated, {rec}, {}, hooks);
        const auto verdicts =
            evaluate(ic, input, shots,
                     RngSeed{seed.master_seed, hash_combine(seed.stream_index, si)});
        if (!verdicts.front().holds) return true;
    }
    return false;
}

Mutation evasive_mutation(const Circuit& c) {
    // A trailing RZ changes phases only, after every cut: no measurement
    // statistic anywhere in the instrumented circuit can see it.
    Mutation m;
    m.kind = MutationKind::RandomRotation;
    m.position = static_cast<std::uint32_t>(c.gates.size());
    m.replacement = gate::rz(kPi / 4.0, 0);
    return m;
}

}  // namespace

ExperimentReport experiment_mining_curve(const Circuit& c,
                                         const std::vector<Placeholder>& placeholders,
                                         MiningConfig cfg,
                                         const std::vector<std::uint32_t>& iteration_grid,
                                         const PrepHooks& hooks) {
    if (iteration_grid.empty()) throw DomainError("iteration grid must be non-empty");
    std::vector<std::uint32_t> grid = iteration_grid;
    std::sort(grid.begin(), grid.end());
    if (!std::is_sorted(iteration_grid.begin(), iteration_grid.end())) {
        throw DomainError("iteration grid must be increasing");
    }

    cfg.iterations = grid.back();
    cfg.input_mode = InputMode::RandomBitstrings;
    cfg.auto_exhaustive = false;
    const MiningResult mined = mine_detailed(c, placeholders, cfg, hooks);

    ExperimentReport report;
    report.kind = "mining-curve";
    report.config = {{"circuit", c.name},
                     {"seed", std::to_string(cfg.seed.master_seed)},
                     {"shots", std::to_string(cfg.shots)},
                     {"alpha", fmt_num(cfg.alpha)},
                     {"iterations", std::to_string(cfg.iterations)}};

    const TemplateKind kinds[] = {TemplateKind::Classical, TemplateKind::UniformSuperposition,
                                  TemplateKind::CatEntangled};
    for (std::uint32_t budget : grid) {
        for (TemplateKind kind : kinds) {
            std::map<std::string, std::uint64_t> per_placeholder;
            std::uint64_t total = 0;
            for (const MinedInstance& inst : mined.instances) {
                if (inst.kind != kind || inst.first_iteration >= budget) continue;
                ++per_placeholder[mined.placeholders[inst.placeholder_index].id];
                ++total;
            }
            for (const auto& [ph_id, count] : per_placeholder) {
                report.rows.push_back({"mining-curve", static_cast<double>(budget),
                                       static_cast<double>(count), cfg.seed.master_seed,
                                       ph_id + ":" + to_string(kind)});
            }
            report.rows.push_back({"mining-curve", static_cast<double>(budget),
                                   static_cast<double>(total), cfg.seed.master_seed,
                                   std::string("total:") + to_string(kind)});
        }
    }

    json side;
    side["kind"] = report.kind;
    side["config"] = config_json(report.config);
    json inst_list = json::array();
    for (const MinedInstance& inst : mined.instances) {
        inst_list.push_back({{"label", instance_label(mined, inst)},
                             {"first_iteration", inst.first_iteration}});
    }
    side["instances"] = std::move(inst_list);
    report.sidecar_json = side.dump(2) + "\n";
    return report;
}

ExperimentReport experiment_error_coverage(const Circuit& c, const MiningResult& mined,
                                           RngSeed seed, const CoverageOptions& opts,
                                           const PrepHooks& hooks) {
    const InstancePool pool = build_pool(c, mined, hooks);
    if (pool.indices.size() < opts.n_assertions) {
        throw InsufficientAssertions("need " + std::to_string(opts.n_assertions) +
                                     " usable assertions, have " +
                                     std::to_string(pool.indices.size()));
    }
    if (opts.evasive_bugs > opts.n_bugs) throw DomainError("more evasive bugs than bugs");

    const RngStream base(seed);
    const std::vector<std::size_t> selected =
        select_instances(mined, pool, opts.n_assertions, base.substream("select"));

    const std::uint32_t n_real = opts.n_bugs - opts.evasive_bugs;
    std::vector<std::pair<Circuit, std::vector<Mutation>>> bugs(opts.n_bugs);
    std::vector<std::optional<std::uint32_t>> first_detect(opts.n_bugs);
    const std::uint32_t cap =
        *std::max_element(opts.vector_grid.begin(), opts.vector_grid.end());

    parallel_for(opts.n_bugs, opts.jobs, [&](std::size_t j) {
        const RngStream bug_stream = base.substream("bug").substream(j);
        if (j < n_real) {
            // Redraw until the bug is visible to at least one selected
            // assertion; an invisible bug would make coverage unreachable.
            bool found = false;
            for (std::uint64_t attempt = 0; attempt < 500 && !found; ++attempt) {
                auto [mutated, log] =
                    inject(c, 1, RngSeed{seed.master_seed,
                                         hash_combine(hash_combine(fnv1a("bug-draw"), j),
                                                      attempt)});
                for (std::size_t idx : selected) {
                    if (reveals(c, log, mutated, mined, mined.instances[idx], hooks)) {
                        bugs[j] = {std::move(mutated), std::move(log)};
                        found = true;
                        break;
                    }
                }
            }
            if (!found) throw Error("no visible mutation found for bug " + std::to_string(j));
        } else {
            const Mutation m = evasive_mutation(c);
            bugs[j] = {apply_one(c, m), {m}};
        }

        VectorSweep sweep(c.n_qubits, bug_stream.substream("sweep"));
        for (std::uint32_t t = 1; t <= cap; ++t) {
            const std::string v = sweep.next();
            if (any_assertion_fires(bugs[j].first, bugs[j].second, mined, selected, v, opts.shots,
                                    RngSeed{seed.master_seed,
                                            hash_combine(hash_combine(fnv1a("eval"), j), t)},
                                    hooks)) {
                first_detect[j] = t;
                break;
            }
        }
    });

    ExperimentReport report;
    report.kind = "coverage";
    report.config = {{"circuit", c.name},
                     {"seed", std::to_string(seed.master_seed)},
                     {"shots", std::to_string(opts.shots)},
                     {"assertions", std::to_string(opts.n_assertions)},
                     {"bugs", std::to_string(opts.n_bugs)},
                     {"evasive", std::to_string(opts.evasive_bugs)}};
    for (std::uint32_t t : opts.vector_grid) {
        std::uint32_t covered = 0;
        for (const auto& fd : first_detect) {
            if (fd && *fd <= t) ++covered;
        }
        report.rows.push_back({"coverage", static_cast<double>(t),
                               static_cast<double>(covered) / static_cast<double>(opts.n_bugs),
                               seed.master_seed, "fraction"});
    }

    json side;
    side["kind"] = report.kind;
    side["config"] = config_json(report.config);
    json sel = json::array();
    for (std::size_t idx : selected) sel.push_back(instance_label(mined, mined.instances[idx]));
    side["selected"] = std::move(sel);
    json bug_list = json::array();
    for (std::size_t j = 0; j < opts.n_bugs; ++j) {
        json b;
        b["id"] = "bug" + std::to_string(j);
        b["mutations"] = json::array();
        for (const Mutation& m : bugs[j].second) b["mutations"].push_back(m.describe());
        if (first_detect[j]) {
            b["first_detect"] = *first_detect[j];
        } else {
            b["first_detect"] = nullptr;
        }
        bug_list.push_back(std::move(b));
    }
    side["bugs"] = std::move(bug_list);
    report.sidecar_json = side.dump(2) + "\n";
    return report;
}

ExperimentReport experiment_tradeoff(const Circuit& c, const MiningResult& mined, RngSeed seed,
                                     const TradeoffOptions& opts, const PrepHooks& hooks) {
    if (opts.assertion_grid.empty()) throw DomainError("assertion grid must be non-empty");
    const InstancePool pool = build_pool(c, mined, hooks);
    if (pool.indices.empty()) throw InsufficientAssertions("no usable assertions were mined");
    const std::uint32_t max_k =
        *std::max_element(opts.assertion_grid.begin(), opts.assertion_grid.end());
    const std::uint64_t cap = 10ULL * (std::uint64_t{1} << c.n_qubits);

    const RngStream base(seed);

    // Pin the bug and the assertions that can see it.
    Circuit mutated;
    std::vector<Mutation> log;
    std::vector<std::size_t> revealing;
    bool undetectable = false;
    auto collect_revealing = [&](const Circuit& mut, const std::vector<Mutation>& l) {
        std::vector<std::size_t> out;
        for (std::size_t idx : pool.indices) {
            if (reveals(c, l, mut, mined, mined.instances[idx], hooks)) out.push_back(idx);
        }
        return out;
    };
    auto distinct_inputs = [&](const std::vector<std::size_t>& idxs) {
        std::set<std::string> inputs;
        for (std::size_t i : idxs) inputs.insert(mined.instances[i].input);
        return inputs;
    };

    if (opts.bug) {
        log = {*opts.bug};
        mutated = apply_one(c, *opts.bug);
        revealing = collect_revealing(mutated, log);
        undetectable = revealing.empty();
    } else {
        // Prefer a mutation visible at max_k distinct inputs; otherwise fall
        // back to the widest-reaching candidate seen.
        std::size_t best_width = 0;
        for (std::uint64_t attempt = 0; attempt < 500; ++attempt) {
            auto [cand, cand_log] =
                inject(c, 1, RngSeed{seed.master_seed, hash_combine(fnv1a("bug"), attempt)});
            auto rev = collect_revealing(cand, cand_log);
            const std::size_t width = distinct_inputs(rev).size();
            if (width > best_width) {
                best_width = width;
                mutated = std::move(cand);
                log = std::move(cand_log);
                revealing = std::move(rev);
            }
            if (best_width >= max_k) break;
        }
        if (best_width == 0) {
            throw UndetectableBug("every seeded mutation is invisible to the mined assertions");
        }
    }

    // Group revealing instances by input; each drawn assertion covers one
    // distinct input, so k assertions give a per-vector hit rate of k / 2^n.
    std::map<std::string, std::size_t> by_input;
    for (std::size_t idx : revealing) {
        by_input.emplace(mined.instances[idx].input, idx);
    }
    std::vector<std::pair<std::string, std::size_t>> input_pool(by_input.begin(), by_input.end());

    ExperimentReport report;
    report.kind = "tradeoff";
    report.config = {{"circuit", c.name},
                     {"seed", std::to_string(seed.master_seed)},
                     {"shots", std::to_string(opts.shots)},
                     {"repetitions", std::to_string(opts.repetitions)},
                     {"bug", log.empty() ? std::string("none") : log.front().describe()},
                     {"cap", std::to_string(cap)}};

    json side;
    side["kind"] = report.kind;
    side["config"] = config_json(report.config);
    side["undetectable"] = undetectable;
    json runs = json::array();

    struct Cell {
        std::vector<double> detections;
    };
    std::vector<Cell> cells(opts.assertion_grid.size());

    for (std::size_t gi = 0; gi < opts.assertion_grid.size(); ++gi) {
        const std::uint32_t k = opts.assertion_grid[gi];
        for (std::uint32_t rep = 0; rep < opts.repetitions; ++rep) {
            if (undetectable) {
                cells[gi].detections.push_back(static_cast<double>(cap));
                continue;
            }
            RngStream draw = base.substream("draw").substream(k).substream(rep);
            std::vector<std::pair<std::string, std::size_t>> shuffled = input_pool;
            for (std::size_t i = shuffled.size(); i > 1; --i) {
                std::swap(shuffled[i - 1], shuffled[draw.uniform_below(i)]);
            }
            const std::size_t take = std::min<std::size_t>(k, shuffled.size());
            std::map<std::string, std::size_t> chosen(shuffled.begin(),
                                                      shuffled.begin() + take);

            RngStream vec = base.substream("vec").substream(k).substream(rep);
            double detected_at = static_cast<double>(cap);
            for (std::uint64_t t = 1; t <= cap; ++t) {
                const std::string v = index_to_bits(
                    vec.uniform_below(std::uint64_t{1} << c.n_qubits), c.n_qubits);
                const auto it = chosen.find(v);
                if (it == chosen.end()) continue;
                const MinedInstance& inst = mined.instances[it->second];
                const Placeholder& ph = mined.placeholders[inst.placeholder_index];
                AssertionRecord rec =
                    make_instance_record(mined, inst, map_position(log, ph.position));
                InstrumentedCircuit ic = instrument(mutated, {rec}, {}, hooks);
                const auto verdicts = evaluate(
                    ic, v, opts.shots,
                    RngSeed{seed.master_seed,
                            hash_combine(hash_combine(hash_combine(fnv1a("eval"), k), rep), t)});
                if (!verdicts.front().holds) {
                    detected_at = static_cast<double>(t);
                    break;
                }
            }
            cells[gi].detections.push_back(detected_at);
            runs.push_back({{"k", k}, {"rep", rep}, {"detected_at", detected_at}});
        }
    }

    for (std::size_t gi = 0; gi < opts.assertion_grid.size(); ++gi) {
        std::vector<double> vals = cells[gi].detections;
        std::sort(vals.begin(), vals.end());
        const std::size_t n = vals.size();
        const double median = (vals[(n - 1) / 2] + vals[n / 2]) / 2.0;
        report.rows.push_back({"tradeoff", static_cast<double>(opts.assertion_grid[gi]), median,
                               seed.master_seed, "median"});
        report.rows.push_back({"tradeoff", static_cast<double>(opts.assertion_grid[gi]),
                               vals.front(), seed.master_seed, "min"});
    }

    side["runs"] = std::move(runs);
    report.sidecar_json = side.dump(2) + "\n";
    return report;
}

}  // namespace qam
