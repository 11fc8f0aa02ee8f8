#include "qam/benchmarks.hpp"

#include <algorithm>
#include <cmath>

namespace qam {

namespace {

constexpr double kPi = 3.14159265358979323846;

void append(Circuit& c, GateOp g) { c.gates.push_back(std::move(g)); }

// Controlled phase in the fixed gate alphabet (exact up to global phase).
void append_cphase(Circuit& c, double theta, std::uint32_t control, std::uint32_t target) {
    append(c, gate::cx(control, target));
    append(c, gate::rz(-theta / 2.0, target));
    append(c, gate::cx(control, target));
    append(c, gate::rz(theta / 2.0, target));
    append(c, gate::rz(theta / 2.0, control));
}

// Phase flip on |11111> over five data qubits using three work qubits.
void append_c4z(Circuit& c, std::uint32_t a0, std::uint32_t a1, std::uint32_t a2) {
    append(c, gate::ccx(0, 1, a0));
    append(c, gate::ccx(2, 3, a1));
    append(c, gate::ccx(a0, a1, a2));
    append(c, gate::cz(a2, 4));
    append(c, gate::ccx(a0, a1, a2));
    append(c, gate::ccx(2, 3, a1));
    append(c, gate::ccx(0, 1, a0));
}

void require_bits(const std::string& bits, std::size_t width, const std::string& what) {
    if (bits.size() != width || !is_bitstring(bits)) {
        throw DomainError(what + " must be a bitstring of length " + std::to_string(width));
    }
}

}  // namespace

Circuit ghz_circuit(std::uint32_t n_qubits) {
    if (n_qubits < 2) throw DomainError("ghz needs at least 2 qubits");
    Circuit c;
    c.name = "ghz" + std::to_string(n_qubits);
    c.n_qubits = n_qubits;
    append(c, gate::h(0));
    for (std::uint32_t q = 0; q + 1 < n_qubits; ++q) append(c, gate::cx(q, q + 1));
    return c;
}

Circuit qft_circuit(std::uint32_t n_qubits) {
    if (n_qubits < 1) throw DomainError("qft needs at least 1 qubit");
    Circuit c;
    c.name = "qft" + std::to_string(n_qubits);
    c.n_qubits = n_qubits;
    for (std::uint32_t j = n_qubits; j-- > 0;) {
        append(c, gate::h(j));
        for (std::uint32_t m = j; m-- > 0;) {
            const double theta = kPi / static_cast<double>(std::uint64_t{1} << (j - m));
            append_cphase(c, theta, m, j);
        }
    }
    for (std::uint32_t i = 0; i < n_qubits / 2; ++i) {
        append(c, gate::swap(i, n_qubits - 1 - i));
    }
    return c;
}

Circuit adder4_circuit() {
    // Two-bit ripple adder: (q2,q3) += (q0,q1) mod 4, with q0/q2 the low
    // bits. The barrier marks the addend register as an assertion site.
    Circuit c;
    c.name = "adder4";
    c.n_qubits = 4;
    append(c, gate::barrier({0, 1}));
    append(c, gate::ccx(0, 2, 3));
    append(c, gate::cx(0, 2));
    append(c, gate::cx(1, 3));
    return c;
}

Circuit teleport3_circuit() {
    // Deferred-measurement teleportation of q0 onto q2; the corrections are
    // coherent (CX/CZ) since the gate alphabet has no classical control.
    Circuit c;
    c.name = "teleport3";
    c.n_qubits = 3;
    append(c, gate::h(1));
    append(c, gate::cx(1, 2));
    append(c, gate::cx(0, 1));
    append(c, gate::h(0));
    append(c, gate::cx(1, 2));
    append(c, gate::cz(0, 2));
    return c;
}

Circuit simon6_circuit(const std::string& secret) {
    require_bits(secret, 3, "simon secret");
    Circuit c;
    c.name = "simon6";
    c.n_qubits = 6;
    for (std::uint32_t q = 0; q < 3; ++q) append(c, gate::h(q));
    for (std::uint32_t q = 0; q < 3; ++q) append(c, gate::cx(q, 3 + q));
    const std::size_t pivot = secret.find('1');
    if (pivot != std::string::npos) {
        for (std::uint32_t j = 0; j < 3; ++j) {
            if (secret[j] == '1') {
                append(c, gate::cx(static_cast<std::uint32_t>(pivot), 3 + j));
            }
        }
    }
    for (std::uint32_t q = 0; q < 3; ++q) append(c, gate::h(q));
    return c;
}

Circuit grover5_circuit(const std::string& marked) {
    require_bits(marked, 5, "grover marked item");
    Circuit c;
    c.name = "grover5";
    c.n_qubits = 8;  // 5 data qubits + 3 work qubits for the 5-control phase
    for (std::uint32_t q = 0; q < 5; ++q) append(c, gate::h(q));

    auto mask = [&c, &marked](bool invert_zeros) {
        for (std::uint32_t q = 0; q < 5; ++q) {
            if ((marked[q] == '0') == invert_zeros) append(c, gate::x(q));
        }
    };
    // Oracle: phase flip on |marked>.
    mask(true);
    append_c4z(c, 5, 6, 7);
    mask(true);
    // Diffusion about the mean.
    for (std::uint32_t q = 0; q < 5; ++q) append(c, gate::h(q));
    for (std::uint32_t q = 0; q < 5; ++q) append(c, gate::x(q));
    append_c4z(c, 5, 6, 7);
    for (std::uint32_t q = 0; q < 5; ++q) append(c, gate::x(q));
    for (std::uint32_t q = 0; q < 5; ++q) append(c, gate::h(q));
    return c;
}

Circuit shor5_circuit() {
    // Fixed compiled order finding for N=15, a=11 (period 2). The work
    // register tracks the subgroup {1, 11} in two qubits, so the controlled
    // multiplication collapses to a CX fan-out; counting ends with an
    // inverse Fourier transform. Shipped verbatim in assets/shor5.qasm.
    Circuit c;
    c.name = "shor5";
    c.n_qubits = 5;
    for (std::uint32_t q = 0; q < 3; ++q) append(c, gate::h(q));
    append(c, gate::cx(0, 3));
    append(c, gate::cx(0, 4));
    Circuit iqft = inverse(qft_circuit(3));
    for (const GateOp& g : iqft.gates) append(c, g);
    return c;
}

Circuit inverse(const Circuit& c) {
    Circuit out;
    out.name = c.name.empty() ? "" : c.name + "_inv";
    out.n_qubits = c.n_qubits;
    out.n_clbits = c.n_clbits;
    for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
        GateOp g = *it;
        switch (g.kind) {
            case GateKind::S: g.kind = GateKind::Sdg; break;
            case GateKind::Sdg: g.kind = GateKind::S; break;
            case GateKind::T: g.kind = GateKind::Tdg; break;
            case GateKind::Tdg: g.kind = GateKind::T; break;
            case GateKind::RX:
            case GateKind::RY:
            case GateKind::RZ: g.params[0] = -g.params[0]; break;
            case GateKind::Measure:
            case GateKind::Reset:
                throw NonUnitaryCircuit("cannot invert measure/reset");
            default: break;  // self-inverse
        }
        out.gates.push_back(std::move(g));
    }
    return out;
}

BuiltinCircuit builtin_circuits(const std::string& name, const BuiltinOptions& opts) {
    BuiltinCircuit b;
    b.hooks = PrepHooks::defaults();
    if (name == "adder4") {
        b.circuit = adder4_circuit();
        // Superposition inputs for the addend register: a 1 becomes H
        // instead of X on the first two qubits.
        b.hooks.superposition = [](const std::string& input) {
            std::vector<GateOp> prep;
            for (std::size_t i = 0; i < input.size(); ++i) {
                if (input[i] != '1') continue;
                if (i < 2) {
                    prep.push_back(gate::h(static_cast<std::uint32_t>(i)));
                } else {
                    prep.push_back(gate::x(static_cast<std::uint32_t>(i)));
                }
            }
            return prep;
        };
        return b;
    }
    if (name == "teleport3") {
        b.circuit = teleport3_circuit();
        return b;
    }
    if (name == "simon6") {
        b.circuit = simon6_circuit(opts.simon_secret);
        return b;
    }
    if (name == "grover5") {
        b.circuit = grover5_circuit(opts.grover_marked);
        return b;
    }
    if (name == "shor5") {
        b.circuit = shor5_circuit();
        return b;
    }
    auto numbered = [&name](const std::string& prefix) -> std::optional<std::uint32_t> {
        if (name.rfind(prefix, 0) != 0) return std::nullopt;
        const std::string digits = name.substr(prefix.size());
        if (digits.empty() ||
            !std::all_of(digits.begin(), digits.end(),
                         [](char ch) { return ch >= '0' && ch <= '9'; })) {
            return std::nullopt;
        }
        return static_cast<std::uint32_t>(std::stoul(digits));
    };
    if (auto n = numbered("ghz")) {
        b.circuit = ghz_circuit(*n);
        return b;
    }
    if (auto n = numbered("qft")) {
        b.circuit = qft_circuit(*n);
        return b;
    }
    throw UnknownBuiltin("unknown builtin circuit '" + name + "'");
}

}  // namespace qam
