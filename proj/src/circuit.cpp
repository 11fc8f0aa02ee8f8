#include "qam/circuit.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace qam {

namespace {

constexpr std::array<GateTraits, 18> kTraits = {{
    {"h", 1, 0, true},
    {"x", 1, 0, true},
    {"y", 1, 0, true},
    {"z", 1, 0, true},
    {"s", 1, 0, true},
    {"sdg", 1, 0, true},
    {"t", 1, 0, true},
    {"tdg", 1, 0, true},
    {"rx", 1, 1, true},
    {"ry", 1, 1, true},
    {"rz", 1, 1, true},
    {"swap", 2, 0, true},
    {"cx", 2, 0, true},
    {"cz", 2, 0, true},
    {"ccx", 3, 0, true},
    {"measure", 1, 0, false},
    {"reset", 1, 0, false},
    {"barrier", 0, 0, false},
}};

}  // namespace

const GateTraits& traits(GateKind kind) {
    return kTraits[static_cast<std::size_t>(kind)];
}

GateKind gate_kind_from_name(const std::string& name, SourceSpan span) {
    for (std::size_t i = 0; i < kTraits.size(); ++i) {
        if (name == kTraits[i].qasm_name) return static_cast<GateKind>(i);
    }
    throw UnsupportedConstruct("unsupported gate '" + name + "'", span);
}

namespace gate {

namespace {
GateOp make1(GateKind kind, std::uint32_t q) { return GateOp{kind, {q}, {}, {}, {}}; }
}  // namespace

GateOp h(std::uint32_t q) { return make1(GateKind::H, q); }
GateOp x(std::uint32_t q) { return make1(GateKind::X, q); }
GateOp y(std::uint32_t q) { return make1(GateKind::Y, q); }
GateOp z(std::uint32_t q) { return make1(GateKind::Z, q); }
GateOp s(std::uint32_t q) { return make1(GateKind::S, q); }
GateOp sdg(std::uint32_t q) { return make1(GateKind::Sdg, q); }
GateOp t(std::uint32_t q) { return make1(GateKind::T, q); }
GateOp tdg(std::uint32_t q) { return make1(GateKind::Tdg, q); }
GateOp rx(double angle, std::uint32_t q) { return GateOp{GateKind::RX, {q}, {}, {angle}, {}}; }
GateOp ry(double angle, std::uint32_t q) { return GateOp{GateKind::RY, {q}, {}, {angle}, {}}; }
GateOp rz(double angle, std::uint32_t q) { return GateOp{GateKind::RZ, {q}, {}, {angle}, {}}; }
GateOp swap(std::uint32_t a, std::uint32_t b) { return GateOp{GateKind::Swap, {a, b}, {}, {}, {}}; }
GateOp cx(std::uint32_t control, std::uint32_t target) {
    return GateOp{GateKind::CX, {control, target}, {}, {}, {}};
}
GateOp cz(std::uint32_t a, std::uint32_t b) { return GateOp{GateKind::CZ, {a, b}, {}, {}, {}}; }
GateOp ccx(std::uint32_t c0, std::uint32_t c1, std::uint32_t target) {
    return GateOp{GateKind::CCX, {c0, c1, target}, {}, {}, {}};
}
GateOp measure(std::uint32_t q, std::uint32_t c) {
    return GateOp{GateKind::Measure, {q}, {c}, {}, {}};
}
GateOp reset(std::uint32_t q) { return make1(GateKind::Reset, q); }
GateOp barrier(std::vector<std::uint32_t> qubits) {
    return GateOp{GateKind::Barrier, std::move(qubits), {}, {}, {}};
}

}  // namespace gate

void validate_gate(const GateOp& g, std::uint32_t n_qubits, std::uint32_t n_clbits) {
    const GateTraits& tr = traits(g.kind);
    if (tr.qubit_arity != 0 && g.qubits.size() != tr.qubit_arity) {
        throw DomainError(std::string(tr.qasm_name) + " expects " +
                          std::to_string(tr.qubit_arity) + " qubit(s), got " +
                          std::to_string(g.qubits.size()));
    }
    if (g.kind == GateKind::Barrier && g.qubits.empty()) {
        throw DomainError("barrier needs at least one qubit");
    }
    if (g.params.size() != tr.param_arity) {
        throw DomainError(std::string(tr.qasm_name) + " expects " +
                          std::to_string(tr.param_arity) + " parameter(s), got " +
                          std::to_string(g.params.size()));
    }
    for (std::uint32_t q : g.qubits) {
        if (q >= n_qubits) {
            throw IndexOutOfRange("qubit index " + std::to_string(q) + " out of range (have " +
                                      std::to_string(n_qubits) + " qubits)",
                                  g.span);
        }
    }
    std::set<std::uint32_t> distinct(g.qubits.begin(), g.qubits.end());
    if (distinct.size() != g.qubits.size()) {
        throw DomainError(std::string(tr.qasm_name) + " requires pairwise-distinct qubits");
    }
    if (g.kind == GateKind::Measure) {
        if (g.clbits.size() != 1) throw DomainError("measure expects exactly one clbit");
        if (g.clbits[0] >= n_clbits) {
            throw IndexOutOfRange("clbit index " + std::to_string(g.clbits[0]) +
                                      " out of range (have " + std::to_string(n_clbits) +
                                      " clbits)",
                                  g.span);
        }
    } else if (!g.clbits.empty()) {
        throw DomainError(std::string(tr.qasm_name) + " takes no clbits");
    }
}

void validate(const Circuit& c) {
    for (const GateOp& g : c.gates) validate_gate(g, c.n_qubits, c.n_clbits);
}

Circuit insert_at(const Circuit& c, std::size_t position, const std::vector<GateOp>& ops) {
    if (position > c.gates.size()) {
        throw IndexOutOfRange("insert position " + std::to_string(position) +
                              " past end of circuit (" + std::to_string(c.gates.size()) +
                              " gates)");
    }
    for (const GateOp& g : ops) validate_gate(g, c.n_qubits, c.n_clbits);
    Circuit out = c;
    out.gates.insert(out.gates.begin() + static_cast<std::ptrdiff_t>(position), ops.begin(),
                     ops.end());
    return out;
}

std::string index_to_bits(std::uint64_t index, std::uint32_t width) {
    std::string bits(width, '0');
    for (std::uint32_t i = 0; i < width; ++i) {
        if ((index >> i) & 1ULL) bits[i] = '1';
    }
    return bits;
}

std::uint64_t bits_to_index(const std::string& bits) {
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') index |= 1ULL << i;
    }
    return index;
}

bool is_bitstring(const std::string& bits) {
    return std::all_of(bits.begin(), bits.end(), [](char c) { return c == '0' || c == '1'; });
}

}  // namespace qam
