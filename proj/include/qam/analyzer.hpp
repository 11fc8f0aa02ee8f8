#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qam/circuit.hpp"
#include "qam/rng.hpp"

namespace qam {

enum class PlaceholderHint {
    ClassicalBlock,
    HadamardLayer,
    EntanglingBlock,
    RandomCut,
    BarrierHint,
};

const char* to_string(PlaceholderHint hint);
PlaceholderHint hint_from_string(const std::string& name);

/// A candidate assertion site: the cut lies before gate index `position` and
/// covers the listed qubits.
struct Placeholder {
    std::string id;
    std::uint32_t position = 0;
    std::vector<std::uint32_t> qubits;
    PlaceholderHint hint = PlaceholderHint::RandomCut;
    std::string provenance;
};

/// Proposes placeholders: deterministic pattern matches first (classical
/// prefixes, Hadamard layers, H-rooted CX fan-out chains, barriers), then
/// seeded random cuts ranked by score_cut until `budget` placeholders exist.
/// Output is deduplicated and sorted by (position, qubits).
std::vector<Placeholder> static_analysis(const Circuit& c, std::uint32_t budget, RngSeed seed);

/// Simulation-based cut quality in [0, 1]: the prefix up to the cut is run on
/// the all-zeros input and the marginal on the placeholder qubits is compared
/// against the three ideal templates; 1 means an exact template match.
double score_cut(const Circuit& c, const Placeholder& p);

}  // namespace qam
