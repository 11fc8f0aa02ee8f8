#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qam/circuit.hpp"
#include "qam/rng.hpp"

namespace qam {

using cplx = std::complex<double>;

/// Dense 2^n amplitude vector, little-endian: qubit 0 is the least
/// significant bit of a basis index.
class StateVector {
public:
    static constexpr std::uint32_t kMaxQubits = 24;
    static constexpr double kCollapseEps = 1e-12;

    explicit StateVector(std::uint32_t n_qubits);
    static StateVector basis(std::uint32_t n_qubits, std::uint64_t index);

    std::uint32_t n_qubits() const { return n_qubits_; }
    std::size_t dimension() const { return amps_.size(); }
    std::span<const cplx> amplitudes() const { return amps_; }
    cplx amplitude(std::uint64_t index) const { return amps_[index]; }

    double norm() const;

    /// Applies one unitary gate in place. Barrier is a no-op; Measure/Reset
    /// are rejected with NonUnitaryCircuit.
    void apply(const GateOp& g);

    /// Probability of reading 1 on `qubit`.
    double prob_one(std::uint32_t qubit) const;

    /// Projects onto `qubit` == outcome and renormalizes. Throws
    /// ZeroNormCollapse when the branch carries less than kCollapseEps of the
    /// probability mass.
    void collapse(std::uint32_t qubit, bool outcome);

private:
    void apply_matrix(const std::uint32_t* qubits, std::uint32_t k, const cplx* m);

    std::uint32_t n_qubits_;
    std::vector<cplx> amps_;
};

/// Shot counts over measured bitstrings. Key character j is the value written
/// to the j-th measured clbit (ordered by clbit index); measured_qubits[j] is
/// the qubit that was measured into it.
struct OutcomeDistribution {
    std::vector<std::uint32_t> measured_qubits;
    std::vector<std::uint32_t> clbits;
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t shots = 0;

    /// Restricts keys to the given character positions (in the given order).
    OutcomeDistribution marginal(const std::vector<std::size_t>& positions) const;

    /// Positions of the given clbits within this distribution's keys.
    std::vector<std::size_t> positions_of(const std::vector<std::uint32_t>& clbit_subset) const;
};

/// Runs a measurement-free circuit on basis state |input> and returns the
/// final state.
StateVector run_statevector(const Circuit& c, const std::string& input);

/// Exact marginal Born probabilities over the listed qubits (index order:
/// qubits[0] is the least significant bit of the outcome index).
std::vector<double> reduced_probabilities(const StateVector& sv,
                                          const std::vector<std::uint32_t>& qubits);

/// Samples `shots` executions of `c` starting from basis |input>. Mid-circuit
/// measurements collapse and renormalize per trajectory; identical arguments
/// produce identical counts. Outcome branches below kCollapseEps probability
/// are treated as impossible.
OutcomeDistribution sample(const Circuit& c, const std::string& input, std::uint64_t shots,
                           RngSeed seed);

/// Exact (probability-weighted) distribution over the measured clbits; the
/// deterministic counterpart of sample() used by analyses and oracles.
std::map<std::string, double> exact_clbit_distribution(const Circuit& c,
                                                       const std::string& input);

/// Exact marginal over `qubits` of the state at gate index `position`,
/// averaging over any measurement branches in the prefix.
std::vector<double> exact_cut_marginal(const Circuit& c, std::size_t position,
                                       const std::vector<std::uint32_t>& qubits,
                                       const std::string& input);

}  // namespace qam
