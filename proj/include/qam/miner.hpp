#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qam/analyzer.hpp"
#include "qam/circuit.hpp"
#include "qam/rng.hpp"
#include "qam/stats.hpp"

namespace qam {

/// Gates that encode an input bitstring at the front of a circuit. The
/// default is X on every 1-bit. Benchmarks may register a superposition
/// variant (e.g. H instead of X on designated qubits); when present, the
/// classical test is evaluated on the default preparation and the
/// uniform/cat tests on the superposition preparation.
struct PrepHooks {
    using PrepFn = std::function<std::vector<GateOp>(const std::string&)>;

    PrepFn classical;
    std::optional<PrepFn> superposition;

    static PrepHooks defaults();
    std::vector<GateOp> classical_prep(const std::string& input) const;
};

enum class InputMode {
    RandomBitstrings,
    ExhaustiveBitstrings,
};

struct MiningConfig {
    std::uint32_t iterations = 16;
    std::uint64_t shots = 8192;
    double alpha = kDefaultAlpha;
    RngSeed seed{};
    InputMode input_mode = InputMode::RandomBitstrings;
    // Random mode upgrades to exhaustive when every input fits in the
    // iteration budget (n <= 12 and I >= 2^n); the curve experiment disables
    // this to keep per-iteration accounting.
    bool auto_exhaustive = true;
    unsigned jobs = 1;
};

/// A mined assertion: one template kind at one placeholder, holding one
/// predicate entry per input it was confirmed on.
struct AssertionRecord {
    std::string id;
    TemplateKind kind = TemplateKind::Classical;
    Placeholder placeholder;
    std::map<std::string, std::string> predicate;  // Classical: input -> outcome
    std::vector<std::string> inputs;               // Uniform/Cat: confirmed inputs
    std::vector<std::pair<std::string, ChiSquareResult>> evidence;  // per input
    std::uint64_t shots = 0;
    double alpha = kDefaultAlpha;

    bool covers(const std::string& input) const;
    std::size_t instance_count() const;
};

/// Uniformly random bitstring of length n, fully determined by the seed.
std::string random_input(std::uint32_t n, RngSeed seed);

/// The sub-circuit mined for a placeholder: the prefix of `c` up to the cut
/// with a measurement of each placeholder qubit into a fresh clbit.
Circuit instrument_placeholder(const Circuit& c, const Placeholder& p);

/// Clbits holding the placeholder measurements in instrument_placeholder's
/// output (appended after the original clbits, one per placeholder qubit).
std::vector<std::uint32_t> placeholder_clbits(const Circuit& c, const Placeholder& p);

std::vector<AssertionRecord> mine(const Circuit& c, const std::vector<Placeholder>& placeholders,
                                  const MiningConfig& cfg,
                                  const PrepHooks& hooks = PrepHooks::defaults());

/// One confirmed (placeholder, input, kind) triple; the unit in which the
/// experiments count and select assertions.
struct MinedInstance {
    std::size_t placeholder_index = 0;
    std::string input;
    TemplateKind kind = TemplateKind::Classical;
    std::string outcome;  // Classical only
    ChiSquareResult evidence;
    std::uint32_t first_iteration = 0;  // iteration at which the input first appeared
};

struct MiningResult {
    std::vector<AssertionRecord> records;
    std::vector<MinedInstance> instances;
    std::vector<Placeholder> placeholders;
    bool exhaustive = false;
};

MiningResult mine_detailed(const Circuit& c, const std::vector<Placeholder>& placeholders,
                           const MiningConfig& cfg,
                           const PrepHooks& hooks = PrepHooks::defaults());

/// Assertion catalog document (JSON on disk; unknown fields are ignored on
/// read so the schema can grow).
struct Catalog {
    std::string circuit_name;
    std::uint32_t n_qubits = 0;
    RngSeed seed{};
    std::uint64_t shots = 0;
    double alpha = kDefaultAlpha;
    std::vector<AssertionRecord> records;
};

std::string catalog_to_json(const Catalog& catalog);
Catalog catalog_from_json(const std::string& text);
void write_catalog(const std::string& path, const Catalog& catalog);
Catalog read_catalog(const std::string& path);

}  // namespace qam
