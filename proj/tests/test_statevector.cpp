#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qam/benchmarks.hpp"
#include "qam/qasm.hpp"
#include "qam/statevector.hpp"

using namespace qam;

namespace {

Circuit make(std::uint32_t n_qubits, std::vector<GateOp> gates, std::uint32_t n_clbits = 0) {
    Circuit c;
    c.n_qubits = n_qubits;
    c.n_clbits = n_clbits;
    c.gates = std::move(gates);
    return c;
}

}  // namespace

TEST(RunStatevector, HadamardOnZero) {
    StateVector sv = run_statevector(make(1, {gate::h(0)}), "0");
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(sv.amplitude(0).real(), r, 1e-12);
    EXPECT_NEAR(sv.amplitude(1).real(), r, 1e-12);
}

TEST(RunStatevector, GhzThreeCatState) {
    StateVector sv = run_statevector(ghz_circuit(3), "000");
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(sv.amplitude(0)), r, 1e-12);
    EXPECT_NEAR(std::abs(sv.amplitude(7)), r, 1e-12);
    for (std::uint64_t i = 1; i < 7; ++i) EXPECT_NEAR(std::abs(sv.amplitude(i)), 0.0, 1e-12);
    EXPECT_NEAR(sv.norm(), 1.0, 1e-9);
}

TEST(RunStatevector, BasisPreparation) {
    StateVector sv = run_statevector(make(3, {}), "011");
    EXPECT_NEAR(std::abs(sv.amplitude(6)), 1.0, 1e-12);
}

TEST(RunStatevector, RejectsMeasure) {
    EXPECT_THROW(run_statevector(make(1, {gate::measure(0, 0)}, 1), "0"), NonUnitaryCircuit);
    EXPECT_THROW(run_statevector(make(1, {gate::reset(0)}), "0"), NonUnitaryCircuit);
}

TEST(RunStatevector, CapacityBound) {
    EXPECT_THROW(StateVector sv(25), CapacityExceeded);
}

TEST(RunStatevector, QftMagnitudesUniformAndMatchesDft) {
    std::mt19937_64 rng(7);
    Circuit qft = qft_circuit(7);
    const std::uint64_t input = rng() % 128;
    StateVector sv = run_statevector(qft, index_to_bits(input, 7));
    for (std::uint64_t k = 0; k < 128; ++k) {
        EXPECT_NEAR(std::abs(sv.amplitude(k)), 1.0 / std::sqrt(128.0), 1e-9);
    }
    // Against the DFT matrix row, up to the global phase left over by the
    // controlled-phase decomposition: QFT|x> = sum_k e^{2 pi i x k / N} |k> / sqrt(N).
    const double pi = 3.14159265358979323846;
    const std::complex<double> phase = sv.amplitude(0) / std::abs(sv.amplitude(0));
    for (std::uint64_t k = 0; k < 128; ++k) {
        const std::complex<double> expected =
            phase * std::polar(1.0 / std::sqrt(128.0),
                               2.0 * pi * static_cast<double>(input * k % 128) / 128.0);
        EXPECT_NEAR(std::abs(sv.amplitude(k) - expected), 0.0, 1e-9) << "k=" << k;
    }
}

TEST(RunStatevector, MatchesDenseOracleOnRandomCircuits) {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 200; ++trial) {
        const std::uint32_t n = 1 + rng() % 5;
        Circuit c = oracle::random_circuit(n, 12, rng);
        const std::uint64_t input = rng() % (1u << n);
        StateVector sv = run_statevector(c, index_to_bits(input, n));
        const auto expected = oracle::apply_circuit_dense(c, input);
        for (std::size_t i = 0; i < expected.size(); ++i) {
            ASSERT_NEAR(std::abs(sv.amplitude(i) - expected[i]), 0.0, 1e-10);
        }
    }
}

TEST(RunStatevector, NormPreservedGateByGate) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        Circuit c = oracle::random_circuit(6, 14, rng);
        StateVector sv = StateVector::basis(6, rng() % 64);
        for (const GateOp& g : c.gates) {
            sv.apply(g);
            ASSERT_NEAR(sv.norm(), 1.0, 1e-9);
        }
    }
}

TEST(ReducedProbabilities, GhzMarginals) {
    StateVector sv = run_statevector(ghz_circuit(3), "000");
    const auto single = reduced_probabilities(sv, {0});
    EXPECT_NEAR(single[0], 0.5, 1e-12);
    EXPECT_NEAR(single[1], 0.5, 1e-12);
    // Bell-table marginal on the first two qubits.
    const auto pair = reduced_probabilities(sv, {0, 1});
    EXPECT_NEAR(pair[0], 0.5, 1e-12);
    EXPECT_NEAR(pair[1], 0.0, 1e-12);
    EXPECT_NEAR(pair[2], 0.0, 1e-12);
    EXPECT_NEAR(pair[3], 0.5, 1e-12);
}

TEST(ReducedProbabilities, MatchesPartialTraceOracle) {
    std::mt19937_64 rng(2718);
    for (int trial = 0; trial < 200; ++trial) {
        const std::uint32_t n = 2 + rng() % 4;  // up to 5
        Circuit c = oracle::random_circuit(n, 15, rng);
        StateVector sv = run_statevector(c, index_to_bits(rng() % (1u << n), n));

        std::vector<std::uint32_t> qubits;
        for (std::uint32_t q = 0; q < n; ++q) {
            if (rng() % 2) qubits.push_back(q);
        }
        if (qubits.empty()) qubits.push_back(0);

        std::vector<cplx> amps(sv.amplitudes().begin(), sv.amplitudes().end());
        const auto expected = oracle::partial_trace_probabilities(amps, qubits, n);
        const auto actual = reduced_probabilities(sv, qubits);
        double sum = 0.0;
        for (std::size_t i = 0; i < expected.size(); ++i) {
            ASSERT_NEAR(actual[i], expected[i], 1e-12);
            sum += actual[i];
        }
        ASSERT_NEAR(sum, 1.0, 1e-9);
    }
}

TEST(Sample, DeterministicFlip) {
    Circuit c = make(1, {gate::x(0), gate::measure(0, 0)}, 1);
    OutcomeDistribution d = sample(c, "0", 4096, {1, 0});
    ASSERT_EQ(d.counts.size(), 1u);
    EXPECT_EQ(d.counts.at("1"), 4096u);
    EXPECT_EQ(d.measured_qubits, std::vector<std::uint32_t>{0});
}

TEST(Sample, HadamardBinomialWithinFiveSigma) {
    Circuit c = make(1, {gate::h(0), gate::measure(0, 0)}, 1);
    const std::uint64_t shots = 8192;
    OutcomeDistribution d = sample(c, "0", shots, {7, 0});
    const double sigma = std::sqrt(shots * 0.25);
    EXPECT_NEAR(static_cast<double>(d.counts.at("0")), 4096.0, 5 * sigma);
    EXPECT_NEAR(static_cast<double>(d.counts.at("1")), 4096.0, 5 * sigma);
    EXPECT_EQ(d.counts.at("0") + d.counts.at("1"), shots);
}

TEST(Sample, GhzOnlyCatOutcomes) {
    Circuit c = ghz_circuit(3);
    c.n_clbits = 3;
    for (std::uint32_t q = 0; q < 3; ++q) c.gates.push_back(gate::measure(q, q));
    OutcomeDistribution d = sample(c, "000", 8192, {42, 0});
    for (const auto& [key, n] : d.counts) {
        EXPECT_TRUE(key == "000" || key == "111") << key;
        EXPECT_GT(n, 0u);
    }
    EXPECT_EQ(d.counts.size(), 2u);
}

TEST(Sample, PureFunctionOfSeed) {
    Circuit c = ghz_circuit(3);
    c.n_clbits = 3;
    for (std::uint32_t q = 0; q < 3; ++q) c.gates.push_back(gate::measure(q, q));
    OutcomeDistribution a = sample(c, "000", 8192, {42, 3});
    OutcomeDistribution b = sample(c, "000", 8192, {42, 3});
    OutcomeDistribution other = sample(c, "000", 8192, {42, 4});
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_NE(a.counts, other.counts);
}

TEST(Sample, MidCircuitMeasurementCollapses) {
    // Measure in the middle of a Bell preparation: outcomes stay correlated.
    Circuit c = make(2, {gate::h(0), gate::measure(0, 0), gate::cx(0, 1), gate::measure(1, 1)},
                     2);
    OutcomeDistribution d = sample(c, "00", 4096, {5, 0});
    for (const auto& [key, n] : d.counts) {
        EXPECT_TRUE(key == "00" || key == "11") << key;
        EXPECT_GT(n, 0u);
    }
}

TEST(Sample, ResetForcesZero) {
    Circuit c = make(1, {gate::h(0), gate::reset(0), gate::measure(0, 0)}, 1);
    OutcomeDistribution d = sample(c, "0", 2048, {11, 0});
    EXPECT_EQ(d.counts.at("0"), 2048u);
}

TEST(Sample, ClbitCollisionDetected) {
    Circuit c = make(2, {gate::measure(0, 0), gate::measure(1, 0)}, 1);
    EXPECT_THROW(sample(c, "00", 512, {0, 0}), ClbitCollision);
}

TEST(Sample, EmpiricalMatchesExactMarginals) {
    // Total-variation distance between sampled frequencies and the exact
    // distribution at 2^13 shots, small fixed seed set.
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        Circuit c = oracle::random_circuit(3, 10, rng);
        c.n_clbits = 3;
        for (std::uint32_t q = 0; q < 3; ++q) c.gates.push_back(gate::measure(q, q));
        OutcomeDistribution d = sample(c, "000", 8192, {static_cast<std::uint64_t>(trial), 0});
        const auto exact = exact_clbit_distribution(c, "000");
        double tv = 0.0;
        for (std::uint64_t i = 0; i < 8; ++i) {
            const std::string key = index_to_bits(i, 3);
            const double freq = d.counts.count(key)
                                    ? static_cast<double>(d.counts.at(key)) / 8192.0
                                    : 0.0;
            const double p = exact.count(key) ? exact.at(key) : 0.0;
            tv += std::fabs(freq - p);
        }
        EXPECT_LE(tv / 2.0, 0.02);
    }
}

TEST(ExactDistribution, MatchesReducedProbabilitiesForTerminalMeasures) {
    std::mt19937_64 rng(64);
    for (int trial = 0; trial < 50; ++trial) {
        Circuit c = oracle::random_circuit(4, 12, rng);
        Circuit measured = c;
        measured.n_clbits = 4;
        for (std::uint32_t q = 0; q < 4; ++q) measured.gates.push_back(gate::measure(q, q));
        const auto dist = exact_clbit_distribution(measured, "0000");
        StateVector sv = run_statevector(c, "0000");
        const auto probs = reduced_probabilities(sv, {0, 1, 2, 3});
        for (std::uint64_t i = 0; i < 16; ++i) {
            const std::string key = index_to_bits(i, 4);
            const double p = dist.count(key) ? dist.at(key) : 0.0;
            ASSERT_NEAR(p, probs[i], 1e-9);
        }
    }
}

TEST(OutcomeDistribution, MarginalRestriction) {
    OutcomeDistribution d;
    d.measured_qubits = {0, 1, 2};
    d.clbits = {0, 1, 2};
    d.shots = 10;
    d.counts = {{"000", 4}, {"010", 3}, {"111", 3}};
    OutcomeDistribution m = d.marginal({0, 2});
    EXPECT_EQ(m.counts.at("00"), 7u);
    EXPECT_EQ(m.counts.at("11"), 3u);
    EXPECT_EQ(m.measured_qubits, (std::vector<std::uint32_t>{0, 2}));
}
