#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "qam/benchmarks.hpp"
#include "qam/qasm.hpp"
#include "qam/statevector.hpp"

using namespace qam;

TEST(Builtins, GhzShape) {
    Circuit c = ghz_circuit(4);
    ASSERT_EQ(c.gates.size(), 4u);  // 1 H + 3 CX
    EXPECT_EQ(c.gates[0], gate::h(0));
    EXPECT_EQ(c.gates[3], gate::cx(2, 3));
}

TEST(Builtins, QftThreeShape) {
    Circuit c = qft_circuit(3);
    int h = 0, swaps = 0, cx = 0;
    for (const GateOp& g : c.gates) {
        h += g.kind == GateKind::H;
        swaps += g.kind == GateKind::Swap;
        cx += g.kind == GateKind::CX;
    }
    EXPECT_EQ(h, 3);
    EXPECT_EQ(swaps, 1);
    EXPECT_EQ(cx, 6);  // three controlled phases, two CX each

    StateVector sv = run_statevector(c, "000");
    for (std::uint64_t k = 0; k < 8; ++k) {
        EXPECT_NEAR(std::abs(sv.amplitude(k)), 1.0 / std::sqrt(8.0), 1e-12);
    }
}

TEST(Builtins, AdderComputesModularSum) {
    Circuit c = adder4_circuit();
    for (std::uint64_t input = 0; input < 16; ++input) {
        StateVector sv = run_statevector(c, index_to_bits(input, 4));
        const std::uint64_t a = input & 3;
        const std::uint64_t b = (input >> 2) & 3;
        const std::uint64_t sum = (a + b) % 4;
        const std::uint64_t expected = a | (sum << 2);
        EXPECT_NEAR(std::abs(sv.amplitude(expected)), 1.0, 1e-12) << "input " << input;
    }
}

TEST(Builtins, AdderHookPrepsFirstTwoQubitsWithH) {
    const BuiltinCircuit bench = builtin_circuits("adder4");
    ASSERT_TRUE(bench.hooks.superposition.has_value());
    const auto prep = (*bench.hooks.superposition)("1101");
    ASSERT_EQ(prep.size(), 3u);
    EXPECT_EQ(prep[0], gate::h(0));
    EXPECT_EQ(prep[1], gate::h(1));
    EXPECT_EQ(prep[2], gate::x(3));
}

TEST(Builtins, TeleportMovesBasisStates) {
    Circuit c = teleport3_circuit();
    for (std::uint64_t bit = 0; bit < 2; ++bit) {
        StateVector sv = run_statevector(c, bit ? "100" : "000");
        const auto probs = reduced_probabilities(sv, {2});
        EXPECT_NEAR(probs[bit], 1.0, 1e-12);
    }
    // An arbitrary superposition also arrives intact: prepend RY.
    Circuit with_message = c;
    with_message.gates.insert(with_message.gates.begin(), gate::ry(0.7, 0));
    StateVector sv = run_statevector(with_message, "000");
    const auto probs = reduced_probabilities(sv, {2});
    EXPECT_NEAR(probs[1], std::sin(0.35) * std::sin(0.35), 1e-12);
}

TEST(Builtins, SimonOracleSatisfiesHiddenShift) {
    for (const std::string secret : {"101", "110", "001"}) {
        Circuit c = simon6_circuit(secret);
        // The oracle section sits between the two H layers.
        Circuit oracle_only = c;
        oracle_only.gates.assign(c.gates.begin() + 3, c.gates.end() - 3);
        const std::uint64_t s = bits_to_index(secret);
        for (std::uint64_t x = 0; x < 8; ++x) {
            StateVector a = run_statevector(oracle_only, index_to_bits(x, 3) + "000");
            StateVector b = run_statevector(oracle_only, index_to_bits(x ^ s, 3) + "000");
            const auto fa = reduced_probabilities(a, {3, 4, 5});
            const auto fb = reduced_probabilities(b, {3, 4, 5});
            for (std::size_t i = 0; i < 8; ++i) ASSERT_NEAR(fa[i], fb[i], 1e-12);
        }
    }
}

TEST(Builtins, SimonMeasurementsOrthogonalToSecret) {
    const std::string secret = "101";
    Circuit c = simon6_circuit(secret);
    c.n_clbits = 3;
    for (std::uint32_t q = 0; q < 3; ++q) c.gates.push_back(gate::measure(q, q));
    OutcomeDistribution d = sample(c, "000000", 4096, {17, 0});
    const std::uint64_t s = bits_to_index(secret);
    for (const auto& [key, n] : d.counts) {
        const std::uint64_t z = bits_to_index(key);
        EXPECT_EQ(__builtin_popcountll(z & s) % 2, 0) << key;
    }
}

TEST(Builtins, GroverBoostsMarkedState) {
    const std::string marked = "10101";
    Circuit c = grover5_circuit(marked);
    StateVector sv = run_statevector(c, std::string(8, '0'));
    const auto probs = reduced_probabilities(sv, {0, 1, 2, 3, 4});
    const double p_marked = probs[bits_to_index(marked)];
    EXPECT_GT(p_marked, 1.0 / 32.0);
    // One Grover iteration on N=32: amplitude sin(3*asin(1/sqrt(32))).
    const double theta = std::asin(1.0 / std::sqrt(32.0));
    EXPECT_NEAR(p_marked, std::pow(std::sin(3 * theta), 2.0), 1e-9);
    // Work qubits are returned to |0>.
    const auto work = reduced_probabilities(sv, {5, 6, 7});
    EXPECT_NEAR(work[0], 1.0, 1e-9);
}

TEST(Builtins, GroverMatchesDenseOracle) {
    const std::string marked = "01110";
    Circuit c = grover5_circuit(marked);
    StateVector sv = run_statevector(c, std::string(8, '0'));
    const auto expected = oracle::apply_circuit_dense(c, 0);
    for (std::size_t i = 0; i < expected.size(); ++i) {
        ASSERT_NEAR(std::abs(sv.amplitude(i) - expected[i]), 0.0, 1e-9);
    }
}

TEST(Builtins, ShorCountingPeaksAtPeriodTwo) {
    Circuit c = shor5_circuit();
    EXPECT_EQ(c.n_qubits, 5u);
    StateVector sv = run_statevector(c, "00000");
    const auto counting = reduced_probabilities(sv, {0, 1, 2});
    // Order 2 phase estimation: mass sits on 0 and 4 only.
    EXPECT_NEAR(counting[0], 0.5, 1e-9);
    EXPECT_NEAR(counting[4], 0.5, 1e-9);
    for (std::size_t i : {1, 2, 3, 5, 6, 7}) EXPECT_NEAR(counting[i], 0.0, 1e-9);
}

TEST(Builtins, ShorAssetMatchesGenerator) {
    std::ifstream in(std::string(QAM_SOURCE_DIR) + "/assets/shor5.qasm");
    ASSERT_TRUE(in.good()) << "assets/shor5.qasm missing";
    std::ostringstream buf;
    buf << in.rdbuf();
    Circuit from_asset = parse_qasm(buf.str());
    EXPECT_TRUE(from_asset.same_gates(shor5_circuit()));
}

TEST(Builtins, NameDispatchAndErrors) {
    EXPECT_EQ(builtin_circuits("ghz5").circuit.n_qubits, 5u);
    EXPECT_EQ(builtin_circuits("qft4").circuit.n_qubits, 4u);
    EXPECT_EQ(builtin_circuits("teleport3").circuit.n_qubits, 3u);
    EXPECT_THROW(builtin_circuits("warp9"), UnknownBuiltin);
    EXPECT_THROW(builtin_circuits("qftx"), UnknownBuiltin);
    BuiltinOptions opts;
    opts.grover_marked = "11";
    EXPECT_THROW(builtin_circuits("grover5", opts), DomainError);
}

TEST(Builtins, InverseUndoesCircuit) {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 50; ++trial) {
        Circuit c = oracle::random_circuit(3, 10, rng);
        Circuit round = c;
        for (const GateOp& g : inverse(c).gates) round.gates.push_back(g);
        StateVector sv = run_statevector(round, "010");
        EXPECT_NEAR(std::abs(sv.amplitude(bits_to_index("010"))), 1.0, 1e-9);
    }
}
