#pragma once

#include <optional>
#include <string>

#include "qam/circuit.hpp"
#include "qam/miner.hpp"

namespace qam {

struct BuiltinOptions {
    std::string simon_secret = "101";   // simon6 hidden bitmask
    std::string grover_marked = "10101";  // grover5 marked item
};

struct BuiltinCircuit {
    Circuit circuit;
    PrepHooks hooks;  // adder4 carries a superposition input hook
};

/// Deterministic benchmark generators. Recognized names: ghz<n>, qft<n>,
/// adder4, teleport3, simon6, grover5, shor5. Throws UnknownBuiltin.
BuiltinCircuit builtin_circuits(const std::string& name, const BuiltinOptions& opts = {});

Circuit ghz_circuit(std::uint32_t n_qubits);
Circuit qft_circuit(std::uint32_t n_qubits);
Circuit adder4_circuit();
Circuit teleport3_circuit();
Circuit simon6_circuit(const std::string& secret);
Circuit grover5_circuit(const std::string& marked);
Circuit shor5_circuit();

/// Reverses a unitary circuit gate-by-gate (each gate replaced by its
/// inverse). Throws NonUnitaryCircuit on measure/reset.
Circuit inverse(const Circuit& c);

}  // namespace qam
