#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qam/miner.hpp"

namespace qam {

enum class Strategy {
    AncillaCopy,
    MeasureRestart,
    Projection,
};

const char* to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

/// Picks the default implementation for a record: computational-basis copy
/// for classical assertions (non-destructive on classical states), projection
/// for uniform and cat assertions.
Strategy choose_strategy(const AssertionRecord& record);

/// Basis change P mapping the ideal template state on k qubits to |0...0>,
/// plus its gate-wise inverse. Gates use local qubit indices 0..k-1.
/// `classical_target` supplies |b> for the Classical kind.
std::pair<std::vector<GateOp>, std::vector<GateOp>> build_projection(
    TemplateKind kind, std::uint32_t k, const std::string& classical_target = "");

struct InstrumentedCircuit {
    Circuit circuit;
    Circuit source;  // circuit before instrumentation
    std::vector<AssertionRecord> records;
    std::map<std::string, Strategy> strategy_used;
    std::map<std::string, std::vector<std::uint32_t>> assertion_clbits;
    std::map<std::string, std::vector<std::uint32_t>> ancilla_qubits;
    // Gates at or past this index follow a measure-and-restart assertion and
    // are not authoritative for downstream results.
    std::optional<std::uint32_t> restart_boundary;
    PrepHooks hooks;
};

/// Inserts every record's check at its placeholder position. Records must sit
/// at distinct positions or on disjoint qubit sets. Ancilla qubits and
/// assertion clbits are appended after the original registers.
InstrumentedCircuit instrument(const Circuit& c, const std::vector<AssertionRecord>& records,
                               const std::map<std::string, Strategy>& overrides = {},
                               const PrepHooks& hooks = PrepHooks::defaults());

struct AssertionVerdict {
    std::string id;
    bool holds = true;
    bool vacuous = false;  // input not covered by the record's predicate
    OutcomeDistribution observed;
    std::optional<ChiSquareResult> detail;
    std::string note;
};

/// Fraction threshold for deterministic runtime checks (ancilla-copy outcome
/// match and projection all-zeros): holds iff the expected outcome carries at
/// least 1 - kAlphaRuntime of the shots.
inline constexpr double kAlphaRuntime = 0.01;

/// Samples the instrumented circuit on `input` and judges every record.
/// Records whose predicate does not cover the input hold vacuously. When the
/// hooks carry a superposition preparation, classical records are judged
/// under the default preparation and uniform/cat records under the
/// superposition one (separately instrumented runs, mirroring mining).
std::vector<AssertionVerdict> evaluate(const InstrumentedCircuit& ic, const std::string& input,
                                       std::uint64_t shots, RngSeed seed);

}  // namespace qam
