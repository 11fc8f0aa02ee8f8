#include "qam/instrument.hpp"

#include <algorithm>
#include <set>

namespace qam {

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::AncillaCopy: return "ancilla-copy";
        case Strategy::MeasureRestart: return "measure-restart";
        case Strategy::Projection: return "projection";
    }
    return "?";
}

Strategy strategy_from_string(const std::string& name) {
    if (name == "ancilla-copy") return Strategy::AncillaCopy;
    if (name == "measure-restart") return Strategy::MeasureRestart;
    if (name == "projection") return Strategy::Projection;
    throw DomainError("unknown strategy '" + name + "'");
}

Strategy choose_strategy(const AssertionRecord& record) {
    return record.kind == TemplateKind::Classical ? Strategy::AncillaCopy : Strategy::Projection;
}

std::pair<std::vector<GateOp>, std::vector<GateOp>> build_projection(
    TemplateKind kind, std::uint32_t k, const std::string& classical_target) {
    std::vector<GateOp> p;
    switch (kind) {
        case TemplateKind::CatEntangled: {
            if (k < 2) throw TooFewQubits("cat projection needs at least 2 qubits");
            for (std::uint32_t i = 1; i < k; ++i) p.push_back(gate::cx(0, i));
            p.push_back(gate::h(0));
            break;
        }
        case TemplateKind::UniformSuperposition: {
            if (k < 1) throw TooFewQubits("uniform projection needs at least 1 qubit");
            for (std::uint32_t i = 0; i < k; ++i) p.push_back(gate::h(i));
            break;
        }
        case TemplateKind::Classical: {
            if (k < 1) throw TooFewQubits("classical projection needs at least 1 qubit");
            if (classical_target.size() != k || !is_bitstring(classical_target)) {
                throw DomainError("classical projection needs a target bitstring of length " +
                                  std::to_string(k));
            }
            for (std::uint32_t i = 0; i < k; ++i) {
                if (classical_target[i] == '1') p.push_back(gate::x(i));
            }
            break;
        }
    }
    // All gates involved are self-inverse, so the inverse is the reversal.
    std::vector<GateOp> p_inv(p.rbegin(), p.rend());
    return {std::move(p), std::move(p_inv)};
}

namespace {

std::vector<GateOp> remap(const std::vector<GateOp>& local_gates,
                          const std::vector<std::uint32_t>& qubits) {
    std::vector<GateOp> out;
    out.reserve(local_gates.size());
    for (GateOp g : local_gates) {
        for (std::uint32_t& q : g.qubits) q = qubits[q];
        out.push_back(std::move(g));
    }
    return out;
}

struct Block {
    std::uint32_t position;
    std::uint32_t order_key;  // min qubit, for same-position ordering
    std::vector<GateOp> gates;
};

}  // namespace

InstrumentedCircuit instrument(const Circuit& c, const std::vector<AssertionRecord>& records,
                               const std::map<std::string, Strategy>& overrides,
                               const PrepHooks& hooks) {
    for (const AssertionRecord& rec : records) {
        if (rec.placeholder.position > c.gates.size()) {
            throw IndexOutOfRange("record " + rec.id + " references position " +
                                  std::to_string(rec.placeholder.position) +
                                  " past end of circuit");
        }
        for (std::uint32_t q : rec.placeholder.qubits) {
            if (q >= c.n_qubits) {
                throw IndexOutOfRange("record " + rec.id + " references qubit " +
                                      std::to_string(q));
            }
        }
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
        for (std::size_t j = i + 1; j < records.size(); ++j) {
            if (records[i].placeholder.position != records[j].placeholder.position) continue;
            std::set<std::uint32_t> qs(records[i].placeholder.qubits.begin(),
                                       records[i].placeholder.qubits.end());
            for (std::uint32_t q : records[j].placeholder.qubits) {
                if (qs.count(q)) {
                    throw OverlapConflict("records " + records[i].id + " and " + records[j].id +
                                          " share cut " +
                                          std::to_string(records[i].placeholder.position) +
                                          " and qubit " + std::to_string(q));
                }
            }
        }
    }

    InstrumentedCircuit ic;
    ic.source = c;
    ic.records = records;
    ic.hooks = hooks;

    std::uint32_t next_qubit = c.n_qubits;
    std::uint32_t next_clbit = c.n_clbits;

    // Resolve strategies first; ancilla copies fall back to measure-restart
    // once the qubit budget is gone.
    std::vector<Strategy> strategies(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const AssertionRecord& rec = records[i];
        Strategy strat = choose_strategy(rec);
        if (auto it = overrides.find(rec.id); it != overrides.end()) strat = it->second;
        if (strat == Strategy::AncillaCopy && rec.kind != TemplateKind::Classical) {
            throw StrategyMismatch("ancilla copy would disturb the superposed state asserted by " +
                                   rec.id);
        }
        if (strat == Strategy::Projection && rec.kind == TemplateKind::Classical &&
            rec.predicate.size() > 1) {
            throw StrategyMismatch("projection target for " + rec.id +
                                   " depends on the input; use ancilla copy");
        }
        if (strat == Strategy::AncillaCopy &&
            next_qubit + rec.placeholder.qubits.size() > StateVector::kMaxQubits) {
            strat = Strategy::MeasureRestart;
        }
        if (strat == Strategy::AncillaCopy) {
            next_qubit += static_cast<std::uint32_t>(rec.placeholder.qubits.size());
        }
        strategies[i] = strat;
    }
    if (next_qubit > StateVector::kMaxQubits) {
        throw CapacityExceeded("instrumentation needs " + std::to_string(next_qubit) +
                               " qubits; the simulator caps at " +
                               std::to_string(StateVector::kMaxQubits));
    }

    next_qubit = c.n_qubits;
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const AssertionRecord& rec = records[i];
        std::vector<std::uint32_t> data = rec.placeholder.qubits;
        std::sort(data.begin(), data.end());
        const std::uint32_t k = static_cast<std::uint32_t>(data.size());

        Block block;
        block.position = rec.placeholder.position;
        block.order_key = data.front();

        std::vector<std::uint32_t> clbits(k);
        for (std::uint32_t j = 0; j < k; ++j) clbits[j] = next_clbit + j;
        next_clbit += k;

        switch (strategies[i]) {
            case Strategy::AncillaCopy: {
                std::vector<std::uint32_t> ancillas(k);
                for (std::uint32_t j = 0; j < k; ++j) ancillas[j] = next_qubit + j;
                next_qubit += k;
                for (std::uint32_t j = 0; j < k; ++j) {
                    block.gates.push_back(gate::cx(data[j], ancillas[j]));
                }
                for (std::uint32_t j = 0; j < k; ++j) {
                    block.gates.push_back(gate::measure(ancillas[j], clbits[j]));
                }
                ic.ancilla_qubits[rec.id] = ancillas;
                break;
            }
            case Strategy::MeasureRestart: {
                for (std::uint32_t j = 0; j < k; ++j) {
                    block.gates.push_back(gate::measure(data[j], clbits[j]));
                }
                const std::uint32_t boundary = rec.placeholder.position;
                if (!ic.restart_boundary || boundary < *ic.restart_boundary) {
                    ic.restart_boundary = boundary;
                }
                break;
            }
            case Strategy::Projection: {
                std::string target;
                if (rec.kind == TemplateKind::Classical) target = rec.predicate.begin()->second;
                auto [p, p_inv] = build_projection(rec.kind, k, target);
                for (GateOp& g : remap(p, data)) block.gates.push_back(std::move(g));
                for (std::uint32_t j = 0; j < k; ++j) {
                    block.gates.push_back(gate::measure(data[j], clbits[j]));
                }
                for (GateOp& g : remap(p_inv, data)) block.gates.push_back(std::move(g));
                break;
            }
        }
        ic.strategy_used[rec.id] = strategies[i];
        ic.assertion_clbits[rec.id] = clbits;
        blocks.push_back(std::move(block));
    }

    std::stable_sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) {
        if (a.position != b.position) return a.position < b.position;
        return a.order_key < b.order_key;
    });

    Circuit out;
    out.name = c.name;
    out.n_qubits = next_qubit;
    out.n_clbits = next_clbit;
    std::size_t bi = 0;
    for (std::size_t i = 0; i <= c.gates.size(); ++i) {
        while (bi < blocks.size() && blocks[bi].position == i) {
            for (const GateOp& g : blocks[bi].gates) out.gates.push_back(g);
            ++bi;
        }
        if (i < c.gates.size()) out.gates.push_back(c.gates[i]);
    }
    validate(out);
    ic.circuit = std::move(out);
    return ic;
}

namespace {

Circuit with_prep(const Circuit& c, const std::vector<GateOp>& prep) {
    Circuit out = c;
    out.gates.insert(out.gates.begin(), prep.begin(), prep.end());
    return out;
}

AssertionVerdict judge(const AssertionRecord& rec, Strategy strat,
                       const std::vector<std::uint32_t>& clbits,
                       const OutcomeDistribution& run, const std::string& input, double alpha) {
    AssertionVerdict v;
    v.id = rec.id;
    if (!rec.covers(input)) {
        v.vacuous = true;
        v.holds = true;
        v.note = "input not covered; holds vacuously";
        return v;
    }
    OutcomeDistribution marg = run.marginal(run.positions_of(clbits));
    const double shots = static_cast<double>(marg.shots);

    auto fraction_of = [&marg, shots](const std::string& key) {
        const auto it = marg.counts.find(key);
        return it == marg.counts.end() ? 0.0 : static_cast<double>(it->second) / shots;
    };

    if (strat == Strategy::Projection) {
        const std::string zeros(clbits.size(), '0');
        const double frac = fraction_of(zeros);
        v.holds = frac >= 1.0 - kAlphaRuntime;
        v.note = "projection all-zeros fraction " + std::to_string(frac);
    } else if (rec.kind == TemplateKind::Classical) {
        const std::string& expected = rec.predicate.at(input);
        const double frac = fraction_of(expected);
        v.holds = frac >= 1.0 - kAlphaRuntime;
        v.note = "expected " + expected + " observed with fraction " + std::to_string(frac);
    } else {
        ChiSquareResult r = rec.kind == TemplateKind::UniformSuperposition ? test_uniform(marg)
                                                                           : test_cat(marg);
        v.holds = r.passes(alpha);
        v.detail = r;
    }
    v.observed = std::move(marg);
    return v;
}

}  // namespace

std::vector<AssertionVerdict> evaluate(const InstrumentedCircuit& ic, const std::string& input,
                                       std::uint64_t shots, RngSeed seed) {
    if (input.size() != ic.source.n_qubits || !is_bitstring(input)) {
        throw DomainError("input must be a bitstring of length " +
                          std::to_string(ic.source.n_qubits));
    }

    const bool split_preps =
        ic.hooks.superposition &&
        std::any_of(ic.records.begin(), ic.records.end(),
                    [](const AssertionRecord& r) { return r.kind != TemplateKind::Classical; }) &&
        std::any_of(ic.records.begin(), ic.records.end(),
                    [](const AssertionRecord& r) { return r.kind == TemplateKind::Classical; });

    const std::string zeros(ic.circuit.n_qubits, '0');
    std::map<std::string, AssertionVerdict> verdicts;

    auto run_group = [&](const std::vector<const AssertionRecord*>& group, bool superposition,
                         std::uint64_t salt) {
        if (group.empty()) return;
        std::vector<GateOp> prep = superposition ? (*ic.hooks.superposition)(input)
                                                 : ic.hooks.classical_prep(input);
        const InstrumentedCircuit* target = &ic;
        InstrumentedCircuit rebuilt;
        if (split_preps) {
            std::vector<AssertionRecord> subset;
            for (const AssertionRecord* rec : group) subset.push_back(*rec);
            std::map<std::string, Strategy> strategies;
            for (const AssertionRecord* rec : group) {
                strategies[rec->id] = ic.strategy_used.at(rec->id);
            }
            rebuilt = instrument(ic.source, subset, strategies, ic.hooks);
            target = &rebuilt;
        }
        const std::string padded = zeros.substr(0, target->circuit.n_qubits);
        OutcomeDistribution run = sample(with_prep(target->circuit, prep), padded, shots,
                                         RngSeed{seed.master_seed,
                                                 hash_combine(seed.stream_index, salt)});
        for (const AssertionRecord* rec : group) {
            verdicts[rec->id] = judge(*rec, target->strategy_used.at(rec->id),
                                      target->assertion_clbits.at(rec->id), run, input,
                                      rec->alpha);
        }
    };

    std::vector<const AssertionRecord*> classical_group;
    std::vector<const AssertionRecord*> property_group;
    for (const AssertionRecord& rec : ic.records) {
        if (ic.hooks.superposition && rec.kind != TemplateKind::Classical) {
            property_group.push_back(&rec);
        } else {
            classical_group.push_back(&rec);
        }
    }
    run_group(classical_group, false, 0);
    run_group(property_group, true, 1);

    std::vector<AssertionVerdict> out;
    out.reserve(ic.records.size());
    for (const AssertionRecord& rec : ic.records) out.push_back(std::move(verdicts.at(rec.id)));
    return out;
}

}  // namespace qam
