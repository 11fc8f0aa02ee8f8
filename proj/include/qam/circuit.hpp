#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qam/errors.hpp"

namespace qam {

enum class GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    RX,
    RY,
    RZ,
    Swap,
    CX,
    CZ,
    CCX,
    Measure,
    Reset,
    Barrier,
};

struct GateTraits {
    const char* qasm_name;
    std::uint32_t qubit_arity;  // 0 means variable (barrier)
    std::uint32_t param_arity;
    bool unitary;
};

const GateTraits& traits(GateKind kind);
GateKind gate_kind_from_name(const std::string& name, SourceSpan span);

/// One operation in program order. `clbits` is populated for Measure only and
/// `params` holds rotation angles in radians.
struct GateOp {
    GateKind kind;
    std::vector<std::uint32_t> qubits;
    std::vector<std::uint32_t> clbits;
    std::vector<double> params;
    SourceSpan span{};

    bool operator==(const GateOp& other) const {
        return kind == other.kind && qubits == other.qubits && clbits == other.clbits &&
               params == other.params;
    }
};

struct RegisterInfo {
    std::string name;
    std::uint32_t size = 0;
    std::uint32_t offset = 0;  // first flat index of this register
};

/// Gate-list IR over flat qubit/clbit indices. The index of a gate in `gates`
/// is its position, which doubles as the cut coordinate used by the analysis
/// passes. Values are immutable by convention: passes build new circuits.
struct Circuit {
    std::uint32_t n_qubits = 0;
    std::uint32_t n_clbits = 0;
    std::vector<GateOp> gates;
    std::string name;
    std::vector<RegisterInfo> qregs;  // declaration-order mapping, for diagnostics
    std::vector<RegisterInfo> cregs;

    bool same_gates(const Circuit& other) const {
        return n_qubits == other.n_qubits && n_clbits == other.n_clbits && gates == other.gates;
    }
};

namespace gate {

GateOp h(std::uint32_t q);
GateOp x(std::uint32_t q);
GateOp y(std::uint32_t q);
GateOp z(std::uint32_t q);
GateOp s(std::uint32_t q);
GateOp sdg(std::uint32_t q);
GateOp t(std::uint32_t q);
GateOp tdg(std::uint32_t q);
GateOp rx(double angle, std::uint32_t q);
GateOp ry(double angle, std::uint32_t q);
GateOp rz(double angle, std::uint32_t q);
GateOp swap(std::uint32_t a, std::uint32_t b);
GateOp cx(std::uint32_t control, std::uint32_t target);
GateOp cz(std::uint32_t a, std::uint32_t b);
GateOp ccx(std::uint32_t c0, std::uint32_t c1, std::uint32_t target);
GateOp measure(std::uint32_t q, std::uint32_t c);
GateOp reset(std::uint32_t q);
GateOp barrier(std::vector<std::uint32_t> qubits);

}  // namespace gate

/// Checks arity, parameter count, index bounds, and qubit distinctness.
/// Throws IndexOutOfRange or DomainError on violation.
void validate(const Circuit& c);
void validate_gate(const GateOp& g, std::uint32_t n_qubits, std::uint32_t n_clbits);

/// Returns a copy of `c` with `ops` spliced in before `position`.
Circuit insert_at(const Circuit& c, std::size_t position, const std::vector<GateOp>& ops);

// Bitstring convention used throughout: character i of a bitstring is the
// value of qubit i (or clbit i), so the leftmost character is the
// least-significant bit of the corresponding basis index.
std::string index_to_bits(std::uint64_t index, std::uint32_t width);
std::uint64_t bits_to_index(const std::string& bits);
bool is_bitstring(const std::string& bits);

}  // namespace qam
