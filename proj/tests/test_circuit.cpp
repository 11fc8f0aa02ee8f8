#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qam/qasm.hpp"

using namespace qam;

TEST(ParseQasm, EmptyProgram) {
    Circuit c = parse_qasm("OPENQASM 2.0; qreg q[1];");
    EXPECT_EQ(c.n_qubits, 1u);
    EXPECT_EQ(c.n_clbits, 0u);
    EXPECT_TRUE(c.gates.empty());
}

TEST(ParseQasm, GateOrderMatchesSource) {
    Circuit c = parse_qasm(
        "OPENQASM 2.0;\n"
        "include \"qelib1.inc\";\n"
        "qreg q[4];\n"
        "h q[0];\n"
        "x q[2];\n"
        "x q[3];\n"
        "cx q[0],q[1];\n");
    ASSERT_EQ(c.gates.size(), 4u);
    EXPECT_EQ(c.gates[0], gate::h(0));
    EXPECT_EQ(c.gates[1], gate::x(2));
    EXPECT_EQ(c.gates[2], gate::x(3));
    EXPECT_EQ(c.gates[3], gate::cx(0, 1));
}

TEST(ParseQasm, GhzThree) {
    Circuit c = parse_qasm(
        "OPENQASM 2.0; qreg q[3];\n"
        "h q[0]; cx q[0],q[1]; cx q[1],q[2];\n");
    EXPECT_EQ(c.n_qubits, 3u);
    ASSERT_EQ(c.gates.size(), 3u);
    EXPECT_EQ(c.gates[2], gate::cx(1, 2));
}

TEST(ParseQasm, RegistersFlattenInDeclarationOrder) {
    Circuit c = parse_qasm(
        "OPENQASM 2.0; qreg a[2]; qreg b[2]; creg m[2];\n"
        "cx a[1],b[0];\n"
        "measure b[1] -> m[0];\n");
    EXPECT_EQ(c.n_qubits, 4u);
    EXPECT_EQ(c.gates[0], gate::cx(1, 2));
    EXPECT_EQ(c.gates[1], gate::measure(3, 0));
}

TEST(ParseQasm, AngleExpressions) {
    Circuit c = parse_qasm(
        "OPENQASM 2.0; qreg q[1];\n"
        "rz(pi/4) q[0]; rx(-pi) q[0]; ry(2*pi/8) q[0]; rz(0.5) q[0]; rz(1e-3) q[0];\n");
    const double pi = 3.14159265358979323846;
    EXPECT_DOUBLE_EQ(c.gates[0].params[0], pi / 4);
    EXPECT_DOUBLE_EQ(c.gates[1].params[0], -pi);
    EXPECT_DOUBLE_EQ(c.gates[2].params[0], 2 * pi / 8);
    EXPECT_DOUBLE_EQ(c.gates[3].params[0], 0.5);
    EXPECT_DOUBLE_EQ(c.gates[4].params[0], 1e-3);
}

TEST(ParseQasm, BroadcastAndBarrier) {
    Circuit c = parse_qasm(
        "OPENQASM 2.0; qreg q[3]; creg c[3];\n"
        "h q;\n"
        "barrier q[0],q[2];\n"
        "barrier;\n"
        "measure q -> c;\n"
        "reset q[1];\n");
    ASSERT_EQ(c.gates.size(), 9u);
    EXPECT_EQ(c.gates[0], gate::h(0));
    EXPECT_EQ(c.gates[2], gate::h(2));
    EXPECT_EQ(c.gates[3], gate::barrier({0, 2}));
    EXPECT_EQ(c.gates[4], gate::barrier({0, 1, 2}));
    EXPECT_EQ(c.gates[5], gate::measure(0, 0));
    EXPECT_EQ(c.gates[8], gate::reset(1));
}

TEST(ParseQasm, RejectsIndexOutOfRange) {
    EXPECT_THROW(parse_qasm("OPENQASM 2.0; qreg q[2]; h q[2];"), IndexOutOfRange);
    EXPECT_THROW(parse_qasm("OPENQASM 2.0; qreg q[2]; creg c[1]; measure q[0] -> c[1];"),
                 IndexOutOfRange);
}

TEST(ParseQasm, RejectsUnsupportedConstructs) {
    EXPECT_THROW(parse_qasm("OPENQASM 2.0; qreg q[1]; u3(0,0,0) q[0];"), UnsupportedConstruct);
    EXPECT_THROW(parse_qasm("OPENQASM 2.0; gate foo a { x a; }"), UnsupportedConstruct);
    EXPECT_THROW(parse_qasm("OPENQASM 2.0; qreg q[1]; creg c[1]; if (c==1) x q[0];"),
                 UnsupportedConstruct);
    EXPECT_THROW(parse_qasm("OPENQASM 3.0; qreg q[1];"), UnsupportedConstruct);
}

TEST(ParseQasm, SyntaxErrorCarriesSpan) {
    try {
        parse_qasm("OPENQASM 2.0;\nqreg q[2];\nh q[0]");
        FAIL() << "expected SyntaxError";
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.span().line, 3);
    }
}

TEST(ParseQasm, RejectsDuplicateGateQubits) {
    EXPECT_THROW(parse_qasm("OPENQASM 2.0; qreg q[2]; cx q[1],q[1];"), DomainError);
}

TEST(EmitQasm, EmptyCircuitHeaderOnly) {
    Circuit c;
    c.n_qubits = 1;
    EXPECT_EQ(emit_qasm(c), "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\n");
}

TEST(EmitQasm, RoundTripGhz) {
    Circuit c = parse_qasm("OPENQASM 2.0; qreg q[3]; h q[0]; cx q[0],q[1]; cx q[1],q[2];");
    Circuit again = parse_qasm(emit_qasm(c));
    EXPECT_TRUE(c.same_gates(again));
}

TEST(EmitQasm, DeterministicBytes) {
    Circuit c = parse_qasm("OPENQASM 2.0; qreg q[2]; rz(pi/3) q[0]; cx q[0],q[1];");
    EXPECT_EQ(emit_qasm(c), emit_qasm(c));
}

TEST(EmitQasm, RoundTripRandomCircuits) {
    std::mt19937_64 rng(20240817);
    for (int trial = 0; trial < 1000; ++trial) {
        Circuit c = oracle::random_circuit(1 + rng() % 5, 1 + rng() % 20, rng);
        Circuit again = parse_qasm(emit_qasm(c));
        ASSERT_TRUE(c.same_gates(again)) << emit_qasm(c);
        // Angles must survive the text round trip bit-exactly.
        for (std::size_t i = 0; i < c.gates.size(); ++i) {
            for (std::size_t p = 0; p < c.gates[i].params.size(); ++p) {
                ASSERT_EQ(c.gates[i].params[p], again.gates[i].params[p]);
            }
        }
    }
}

TEST(InsertAt, SplicesWithoutMutatingInput) {
    Circuit ghz = parse_qasm("OPENQASM 2.0; qreg q[3]; creg c[1]; "
                             "h q[0]; cx q[0],q[1]; cx q[1],q[2];");
    const Circuit before = ghz;
    Circuit out = insert_at(ghz, 1, {gate::measure(0, 0)});
    EXPECT_TRUE(ghz.same_gates(before));
    ASSERT_EQ(out.gates.size(), 4u);
    EXPECT_EQ(out.gates[1], gate::measure(0, 0));
    EXPECT_EQ(out.gates[2], gate::cx(0, 1));
}

TEST(InsertAt, EmptyAndAppendBoundaries) {
    Circuit empty;
    empty.n_qubits = 1;
    Circuit one = insert_at(empty, 0, {gate::h(0)});
    EXPECT_EQ(one.gates.size(), 1u);

    Circuit two = insert_at(one, one.gates.size(), {gate::x(0)});
    EXPECT_EQ(two.gates[1], gate::x(0));

    EXPECT_THROW(insert_at(one, 5, {gate::x(0)}), IndexOutOfRange);
}

TEST(Bitstrings, LittleEndianConvention) {
    EXPECT_EQ(index_to_bits(1, 3), "100");
    EXPECT_EQ(index_to_bits(4, 3), "001");
    EXPECT_EQ(bits_to_index("100"), 1u);
    EXPECT_EQ(bits_to_index("011"), 6u);
}
