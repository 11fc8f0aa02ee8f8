// Test-only reference implementations, kept independent of the library's
// simulation and statistics code paths.
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "qam/circuit.hpp"

namespace oracle {

using cplx = std::complex<double>;
using Matrix = std::vector<std::vector<cplx>>;

/// Full 2^n x 2^n unitary for one gate, built by Kronecker-style embedding of
/// independently written gate constants.
Matrix gate_matrix(const qam::GateOp& g, std::uint32_t n_qubits);

/// Dense product of the whole circuit applied to |input>.
std::vector<cplx> apply_circuit_dense(const qam::Circuit& c, std::uint64_t input_index);

/// Diagonal of the partial trace of |psi><psi| over the complement of
/// `qubits`, i.e. the marginal outcome distribution.
std::vector<double> partial_trace_probabilities(const std::vector<cplx>& amps,
                                                const std::vector<std::uint32_t>& qubits,
                                                std::uint32_t n_qubits);

/// Upper-tail chi-squared probability by adaptive Simpson quadrature of the
/// density (absolute tolerance ~1e-12).
double chisq_upper_tail_quadrature(double statistic, std::uint32_t dof);

/// Uniformly random unitary circuit over the library's gate alphabet.
qam::Circuit random_circuit(std::uint32_t n_qubits, std::size_t n_gates, std::mt19937_64& rng);

double total_variation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace oracle
