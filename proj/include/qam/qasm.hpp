#pragma once

#include <string>

#include "qam/circuit.hpp"

namespace qam {

/// Parses the supported OpenQASM 2.0 subset: header, qelib include, register
/// declarations, the fixed gate alphabet, measure, reset, and barrier.
/// Registers are flattened to global indices in declaration order.
Circuit parse_qasm(const std::string& text);
Circuit parse_qasm_file(const std::string& path);

/// Emits deterministic QASM text; angles are printed with 17 significant
/// digits so parse_qasm(emit_qasm(c)) reproduces the gate list bit-exactly.
std::string emit_qasm(const Circuit& c);

}  // namespace qam
