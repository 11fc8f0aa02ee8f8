#include "qam/statevector.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace qam {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr cplx kI{0.0, 1.0};

struct GateMatrix {
    std::uint32_t k = 0;  // qubit count
    std::array<cplx, 64> m{};  // row-major, dim = 2^k

    cplx at(std::size_t row, std::size_t col) const { return m[row * (1u << k) + col]; }
    void set(std::size_t row, std::size_t col, cplx v) { m[row * (1u << k) + col] = v; }
};

GateMatrix matrix_for(const GateOp& g) {
    GateMatrix gm;
    auto eye = [&gm](std::uint32_t k) {
        gm.k = k;
        for (std::size_t i = 0; i < (1u << k); ++i) gm.set(i, i, 1.0);
    };
    const double half = g.params.empty() ? 0.0 : g.params[0] / 2.0;
    const double c = std::cos(half);
    const double s = std::sin(half);
    switch (g.kind) {
        case GateKind::H: {
            const double r = 1.0 / std::sqrt(2.0);
            gm.k = 1;
            gm.set(0, 0, r);
            gm.set(0, 1, r);
            gm.set(1, 0, r);
            gm.set(1, 1, -r);
            break;
        }
        case GateKind::X:
            gm.k = 1;
            gm.set(0, 1, 1.0);
            gm.set(1, 0, 1.0);
            break;
        case GateKind::Y:
            gm.k = 1;
            gm.set(0, 1, -kI);
            gm.set(1, 0, kI);
            break;
        case GateKind::Z:
            eye(1);
            gm.set(1, 1, -1.0);
            break;
        case GateKind::S:
            eye(1);
            gm.set(1, 1, kI);
            break;
        case GateKind::Sdg:
            eye(1);
            gm.set(1, 1, -kI);
            break;
        case GateKind::T:
            eye(1);
            gm.set(1, 1, std::exp(kI * (kPi / 4.0)));
            break;
        case GateKind::Tdg:
            eye(1);
            gm.set(1, 1, std::exp(-kI * (kPi / 4.0)));
            break;
        case GateKind::RX:
            gm.k = 1;
            gm.set(0, 0, c);
            gm.set(0, 1, -kI * s);
            gm.set(1, 0, -kI * s);
            gm.set(1, 1, c);
            break;
        case GateKind::RY:
            gm.k = 1;
            gm.set(0, 0, c);
            gm.set(0, 1, -s);
            gm.set(1, 0, s);
            gm.set(1, 1, c);
            break;
        case GateKind::RZ:
            gm.k = 1;
            gm.set(0, 0, std::exp(-kI * half));
            gm.set(1, 1, std::exp(kI * half));
            break;
        case GateKind::Swap:
            // local index: bit0 = qubits[0], bit1 = qubits[1]
            gm.k = 2;
            gm.set(0, 0, 1.0);
            gm.set(1, 2, 1.0);
            gm.set(2, 1, 1.0);
            gm.set(3, 3, 1.0);
            break;
        case GateKind::CX:
            // qubits = [control, target]
            gm.k = 2;
            gm.set(0, 0, 1.0);
            gm.set(2, 2, 1.0);
            gm.set(3, 1, 1.0);
            gm.set(1, 3, 1.0);
            break;
        case GateKind::CZ:
            eye(2);
            gm.set(3, 3, -1.0);
            break;
        case GateKind::CCX:
            // qubits = [control0, control1, target]; flips bit2 when bits 0,1 set
            eye(3);
            gm.set(3, 3, 0.0);
            gm.set(7, 7, 0.0);
            gm.set(3, 7, 1.0);
            gm.set(7, 3, 1.0);
            break;
        default:
            throw NonUnitaryCircuit("gate has no unitary matrix");
    }
    return gm;
}

}  // namespace

StateVector::StateVector(std::uint32_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits > kMaxQubits) {
        throw CapacityExceeded("requested " + std::to_string(n_qubits) +
                               " qubits; the dense simulator caps at " +
                               std::to_string(kMaxQubits));
    }
    amps_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector StateVector::basis(std::uint32_t n_qubits, std::uint64_t index) {
    StateVector sv(n_qubits);
    sv.amps_[0] = 0.0;
    sv.amps_[index] = 1.0;
    return sv;
}

double StateVector::norm() const {
    double total = 0.0;
    for (const cplx& a : amps_) total += std::norm(a);
    return std::sqrt(total);
}

void StateVector::apply(const GateOp& g) {
    if (g.kind == GateKind::Barrier) return;
    if (g.kind == GateKind::Measure || g.kind == GateKind::Reset) {
        throw NonUnitaryCircuit("measure/reset cannot be applied as a unitary");
    }
    GateMatrix gm = matrix_for(g);
    apply_matrix(g.qubits.data(), gm.k, gm.m.data());
}

void StateVector::apply_matrix(const std::uint32_t* qubits, std::uint32_t k, const cplx* m) {
    const std::size_t dim = std::size_t{1} << k;
    std::array<std::uint32_t, 3> sorted{};
    for (std::uint32_t i = 0; i < k; ++i) sorted[i] = qubits[i];
    std::sort(sorted.begin(), sorted.begin() + k);

    std::array<std::uint64_t, 8> offsets{};
    for (std::size_t local = 0; local < dim; ++local) {
        std::uint64_t off = 0;
        for (std::uint32_t j = 0; j < k; ++j) {
            if ((local >> j) & 1u) off |= std::uint64_t{1} << qubits[j];
        }
        offsets[local] = off;
    }

    const std::uint64_t groups = std::uint64_t{1} << (n_qubits_ - k);
    std::array<cplx, 8> in{};
    std::array<cplx, 8> out{};
    for (std::uint64_t g = 0; g < groups; ++g) {
        // Spread g's bits across the non-target positions.
        std::uint64_t base = g;
        for (std::uint32_t j = 0; j < k; ++j) {
            const std::uint64_t mask = (std::uint64_t{1} << sorted[j]) - 1;
            base = (base & mask) | ((base & ~mask) << 1);
        }
        for (std::size_t l = 0; l < dim; ++l) in[l] = amps_[base | offsets[l]];
        for (std::size_t row = 0; row < dim; ++row) {
            cplx acc{0.0, 0.0};
            for (std::size_t col = 0; col < dim; ++col) acc += m[row * dim + col] * in[col];
            out[row] = acc;
        }
        for (std::size_t l = 0; l < dim; ++l) amps_[base | offsets[l]] = out[l];
    }
}

double StateVector::prob_one(std::uint32_t qubit) const {
    const std::uint64_t mask = std::uint64_t{1} << qubit;
    double p = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (i & mask) p += std::norm(amps_[i]);
    }
    return p;
}

void StateVector::collapse(std::uint32_t qubit, bool outcome) {
    const std::uint64_t mask = std::uint64_t{1} << qubit;
    double kept = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        const bool one = (i & mask) != 0;
        if (one == outcome) {
            kept += std::norm(amps_[i]);
        } else {
            amps_[i] = 0.0;
        }
    }
    if (kept < kCollapseEps) {
        throw ZeroNormCollapse("collapse onto a branch with probability " + std::to_string(kept));
    }
    const double scale = 1.0 / std::sqrt(kept);
    for (cplx& a : amps_) a *= scale;
}

OutcomeDistribution OutcomeDistribution::marginal(const std::vector<std::size_t>& positions) const {
    OutcomeDistribution out;
    out.shots = shots;
    for (std::size_t p : positions) {
        out.measured_qubits.push_back(measured_qubits.at(p));
        out.clbits.push_back(clbits.at(p));
    }
    for (const auto& [key, n] : counts) {
        std::string sub;
        sub.reserve(positions.size());
        for (std::size_t p : positions) sub += key.at(p);
        out.counts[sub] += n;
    }
    return out;
}

std::vector<std::size_t> OutcomeDistribution::positions_of(
    const std::vector<std::uint32_t>& clbit_subset) const {
    std::vector<std::size_t> positions;
    for (std::uint32_t c : clbit_subset) {
        auto it = std::find(clbits.begin(), clbits.end(), c);
        if (it == clbits.end()) {
            throw DomainError("clbit " + std::to_string(c) + " was not measured");
        }
        positions.push_back(static_cast<std::size_t>(it - clbits.begin()));
    }
    return positions;
}

StateVector run_statevector(const Circuit& c, const std::string& input) {
    if (input.size() != c.n_qubits || !is_bitstring(input)) {
        throw DomainError("input must be a bitstring of length " + std::to_string(c.n_qubits));
    }
    for (const GateOp& g : c.gates) {
        if (g.kind == GateKind::Measure || g.kind == GateKind::Reset) {
            throw NonUnitaryCircuit("circuit contains measure/reset; use sample()");
        }
    }
    StateVector sv = StateVector::basis(c.n_qubits, bits_to_index(input));
    for (const GateOp& g : c.gates) sv.apply(g);
    return sv;
}

std::vector<double> reduced_probabilities(const StateVector& sv,
                                          const std::vector<std::uint32_t>& qubits) {
    std::set<std::uint32_t> distinct(qubits.begin(), qubits.end());
    if (distinct.size() != qubits.size()) throw DomainError("qubit subset must be distinct");
    for (std::uint32_t q : qubits) {
        if (q >= sv.n_qubits()) {
            throw IndexOutOfRange("qubit " + std::to_string(q) + " out of range");
        }
    }
    std::vector<double> probs(std::size_t{1} << qubits.size(), 0.0);
    const auto amps = sv.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double w = std::norm(amps[i]);
        if (w == 0.0) continue;
        std::size_t local = 0;
        for (std::size_t j = 0; j < qubits.size(); ++j) {
            if ((i >> qubits[j]) & 1u) local |= std::size_t{1} << j;
        }
        probs[local] += w;
    }
    return probs;
}

namespace {

struct MeasureLayout {
    std::vector<std::uint32_t> clbits;          // sorted written clbits
    std::vector<std::uint32_t> qubits_by_clbit;  // parallel to clbits
    std::vector<std::size_t> key_pos;            // clbit index -> key position
};

MeasureLayout measure_layout(const Circuit& c) {
    std::map<std::uint32_t, std::uint32_t> writes;  // clbit -> qubit
    for (const GateOp& g : c.gates) {
        if (g.kind != GateKind::Measure) continue;
        auto [it, inserted] = writes.emplace(g.clbits[0], g.qubits[0]);
        if (!inserted) {
            throw ClbitCollision("clbit " + std::to_string(g.clbits[0]) +
                                 " is written by more than one measure");
        }
    }
    MeasureLayout layout;
    layout.key_pos.assign(c.n_clbits, 0);
    for (const auto& [clbit, qubit] : writes) {
        layout.key_pos[clbit] = layout.clbits.size();
        layout.clbits.push_back(clbit);
        layout.qubits_by_clbit.push_back(qubit);
    }
    return layout;
}

// Trajectory engine. Rather than evolving each shot separately, the shot
// budget is split at every measurement by per-shot Bernoulli draws and each
// realized branch is simulated once; this samples the same distribution with
// statevector work proportional to the number of realized branches.
template <typename Visit>
void walk_branches(const Circuit& c, StateVector sv, std::size_t gate_index, std::uint64_t shots,
                   std::string key, const MeasureLayout& layout, RngStream& rng, Visit&& visit) {
    for (std::size_t i = gate_index; i < c.gates.size(); ++i) {
        const GateOp& g = c.gates[i];
        if (g.kind == GateKind::Barrier) continue;
        if (g.kind != GateKind::Measure && g.kind != GateKind::Reset) {
            sv.apply(g);
            continue;
        }
        const std::uint32_t q = g.qubits[0];
        const double p1 = sv.prob_one(q);
        std::uint64_t ones = 0;
        if (p1 < StateVector::kCollapseEps) {
            ones = 0;
        } else if (p1 > 1.0 - StateVector::kCollapseEps) {
            ones = shots;
        } else {
            for (std::uint64_t s = 0; s < shots; ++s) {
                if (rng.next_double() < p1) ++ones;
            }
        }
        const std::uint64_t zeros = shots - ones;
        for (int outcome = 0; outcome <= 1; ++outcome) {
            const std::uint64_t branch_shots = outcome == 0 ? zeros : ones;
            if (branch_shots == 0) continue;
            const bool last = (outcome == 1) || ones == 0;
            StateVector branch = last ? std::move(sv) : sv;
            branch.collapse(q, outcome == 1);
            std::string branch_key = key;
            if (g.kind == GateKind::Measure) {
                branch_key[layout.key_pos[g.clbits[0]]] = outcome ? '1' : '0';
            } else if (outcome == 1) {
                branch.apply(gate::x(q));
            }
            walk_branches(c, std::move(branch), i + 1, branch_shots, std::move(branch_key), layout,
                          rng, visit);
            if (last) return;
        }
        return;
    }
    visit(std::move(sv), shots, std::move(key));
}

// Exact counterpart: weights instead of shots, no RNG, prunes dust branches.
template <typename Visit>
void walk_exact(const Circuit& c, StateVector sv, std::size_t gate_index, std::size_t end_index,
                double weight, std::string key, const MeasureLayout& layout, Visit&& visit) {
    for (std::size_t i = gate_index; i < end_index; ++i) {
        const GateOp& g = c.gates[i];
        if (g.kind == GateKind::Barrier) continue;
        if (g.kind != GateKind::Measure && g.kind != GateKind::Reset) {
            sv.apply(g);
            continue;
        }
        const std::uint32_t q = g.qubits[0];
        const double p1 = sv.prob_one(q);
        for (int outcome = 0; outcome <= 1; ++outcome) {
            const double p = outcome == 0 ? 1.0 - p1 : p1;
            if (p < StateVector::kCollapseEps) continue;
            const bool last = outcome == 1 || p1 < StateVector::kCollapseEps;
            StateVector branch = last ? std::move(sv) : sv;
            branch.collapse(q, outcome == 1);
            std::string branch_key = key;
            if (g.kind == GateKind::Measure) {
                branch_key[layout.key_pos[g.clbits[0]]] = outcome ? '1' : '0';
            } else if (outcome == 1) {
                branch.apply(gate::x(q));
            }
            walk_exact(c, std::move(branch), i + 1, end_index, weight * p, std::move(branch_key),
                       layout, visit);
            if (last) return;
        }
        return;
    }
    visit(std::move(sv), weight, std::move(key));
}

}  // namespace

OutcomeDistribution sample(const Circuit& c, const std::string& input, std::uint64_t shots,
                           RngSeed seed) {
    if (shots == 0) throw DomainError("shots must be >= 1");
    if (input.size() != c.n_qubits || !is_bitstring(input)) {
        throw DomainError("input must be a bitstring of length " + std::to_string(c.n_qubits));
    }
    MeasureLayout layout = measure_layout(c);

    OutcomeDistribution dist;
    dist.measured_qubits = layout.qubits_by_clbit;
    dist.clbits = layout.clbits;
    dist.shots = shots;

    RngStream rng(seed);
    StateVector sv = StateVector::basis(c.n_qubits, bits_to_index(input));
    std::string key(layout.clbits.size(), '0');
    walk_branches(c, std::move(sv), 0, shots, std::move(key), layout, rng,
                  [&dist](StateVector&&, std::uint64_t n, std::string&& k) {
                      dist.counts[k] += n;
                  });
    return dist;
}

std::map<std::string, double> exact_clbit_distribution(const Circuit& c,
                                                       const std::string& input) {
    if (input.size() != c.n_qubits || !is_bitstring(input)) {
        throw DomainError("input must be a bitstring of length " + std::to_string(c.n_qubits));
    }
    MeasureLayout layout = measure_layout(c);
    std::map<std::string, double> dist;
    StateVector sv = StateVector::basis(c.n_qubits, bits_to_index(input));
    std::string key(layout.clbits.size(), '0');
    walk_exact(c, std::move(sv), 0, c.gates.size(), 1.0, std::move(key), layout,
               [&dist](StateVector&&, double w, std::string&& k) { dist[k] += w; });
    return dist;
}

std::vector<double> exact_cut_marginal(const Circuit& c, std::size_t position,
                                       const std::vector<std::uint32_t>& qubits,
                                       const std::string& input) {
    if (position > c.gates.size()) throw IndexOutOfRange("cut position past end of circuit");
    MeasureLayout layout = measure_layout(c);
    std::vector<double> probs(std::size_t{1} << qubits.size(), 0.0);
    StateVector sv = StateVector::basis(c.n_qubits, bits_to_index(input));
    std::string key(layout.clbits.size(), '0');
    walk_exact(c, std::move(sv), 0, position, 1.0, std::move(key), layout,
               [&](StateVector&& state, double w, std::string&&) {
                   std::vector<double> part = reduced_probabilities(state, qubits);
                   for (std::size_t i = 0; i < probs.size(); ++i) probs[i] += w * part[i];
               });
    return probs;
}

}  // namespace qam
