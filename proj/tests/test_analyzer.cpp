#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "qam/analyzer.hpp"
#include "qam/benchmarks.hpp"
#include "qam/statevector.hpp"

using namespace qam;

namespace {

Circuit fig_base_circuit() {
    // H q0; X q2; X q3; CX q0,q1 on four qubits.
    Circuit c;
    c.n_qubits = 4;
    c.gates = {gate::h(0), gate::x(2), gate::x(3), gate::cx(0, 1)};
    return c;
}

const Placeholder* find(const std::vector<Placeholder>& phs, PlaceholderHint hint,
                        std::uint32_t position, std::vector<std::uint32_t> qubits) {
    for (const Placeholder& p : phs) {
        if (p.hint == hint && p.position == position && p.qubits == qubits) return &p;
    }
    return nullptr;
}

}  // namespace

TEST(StaticAnalysis, BaseCircuitPatterns) {
    const auto phs = static_analysis(fig_base_circuit(), 3, {1, 0});
    EXPECT_NE(find(phs, PlaceholderHint::ClassicalBlock, 3, {2, 3}), nullptr)
        << "classical block over the X pair, cut after the X gates";
    EXPECT_NE(find(phs, PlaceholderHint::HadamardLayer, 1, {0}), nullptr)
        << "hadamard layer over q0, cut after the H";
    EXPECT_NE(find(phs, PlaceholderHint::EntanglingBlock, 4, {0, 1}), nullptr)
        << "entangling block over the CX fan-out";
}

TEST(StaticAnalysis, GhzEntanglingBlockSpansAllQubits) {
    const auto phs = static_analysis(ghz_circuit(3), 2, {1, 0});
    EXPECT_NE(find(phs, PlaceholderHint::EntanglingBlock, 3, {0, 1, 2}), nullptr);
    // No classical block: the H makes q0 non-classical before any CX.
    for (const Placeholder& p : phs) EXPECT_NE(p.hint, PlaceholderHint::ClassicalBlock);
}

TEST(StaticAnalysis, BarrierYieldsHint) {
    const auto phs = static_analysis(adder4_circuit(), 2, {1, 0});
    EXPECT_NE(find(phs, PlaceholderHint::BarrierHint, 0, {0, 1}), nullptr);
    EXPECT_NE(find(phs, PlaceholderHint::ClassicalBlock, 4, {0, 1, 2, 3}), nullptr);
}

TEST(StaticAnalysis, DeterministicUnderFixedSeed) {
    Circuit c = qft_circuit(4);
    const auto a = static_analysis(c, 10, {99, 0});
    const auto b = static_analysis(c, 10, {99, 0});
    ASSERT_EQ(a.size(), b.size());
    EXPECT_EQ(a.size(), 10u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].id, b[i].id);
        EXPECT_EQ(a[i].position, b[i].position);
        EXPECT_EQ(a[i].qubits, b[i].qubits);
        EXPECT_EQ(a[i].hint, b[i].hint);
    }
    const auto other = static_analysis(c, 10, {100, 0});
    bool any_difference = other.size() != a.size();
    for (std::size_t i = 0; !any_difference && i < a.size(); ++i) {
        any_difference = a[i].position != other[i].position || a[i].qubits != other[i].qubits;
    }
    EXPECT_TRUE(any_difference);
}

TEST(StaticAnalysis, OutputSortedAndDeduplicated) {
    const auto phs = static_analysis(qft_circuit(5), 16, {3, 0});
    std::set<std::pair<std::uint32_t, std::vector<std::uint32_t>>> seen;
    for (std::size_t i = 0; i < phs.size(); ++i) {
        EXPECT_TRUE(seen.insert({phs[i].position, phs[i].qubits}).second);
        if (i > 0) {
            EXPECT_LE(phs[i - 1].position, phs[i].position);
        }
        EXPECT_EQ(phs[i].id, "p" + std::to_string(i));
    }
}

TEST(StaticAnalysis, HintInvariantsHold) {
    const auto phs = static_analysis(qft_circuit(4), 12, {5, 0});
    const Circuit c = qft_circuit(4);
    for (const Placeholder& p : phs) {
        EXPECT_LE(p.position, c.gates.size());
        std::set<std::uint32_t> distinct(p.qubits.begin(), p.qubits.end());
        EXPECT_EQ(distinct.size(), p.qubits.size());
        for (std::uint32_t q : p.qubits) EXPECT_LT(q, c.n_qubits);
        if (p.hint == PlaceholderHint::HadamardLayer) {
            for (std::uint32_t q : p.qubits) {
                // Latest gate on q before the cut must be an H.
                bool found = false;
                for (std::size_t i = p.position; i-- > 0 && !found;) {
                    const GateOp& g = c.gates[i];
                    bool touches = false;
                    for (std::uint32_t gq : g.qubits) touches |= gq == q;
                    if (touches) {
                        EXPECT_EQ(g.kind, GateKind::H);
                        found = true;
                    }
                }
                EXPECT_TRUE(found);
            }
        }
    }
}

TEST(StaticAnalysis, EmptyCircuitRejected) {
    Circuit c;
    c.n_qubits = 2;
    EXPECT_THROW(static_analysis(c, 4, {1, 0}), EmptyCircuit);
}

TEST(ScoreCut, GhzEntanglingCutIsPerfectCat) {
    Placeholder p;
    p.position = 3;
    p.qubits = {0, 1, 2};
    EXPECT_NEAR(score_cut(ghz_circuit(3), p), 1.0, 1e-12);
}

TEST(ScoreCut, PhaseGateInvisibleToUniformTemplate) {
    Circuit c;
    c.n_qubits = 1;
    c.gates = {gate::h(0), gate::t(0)};
    Placeholder p;
    p.position = 2;
    p.qubits = {0};
    EXPECT_NEAR(score_cut(c, p), 1.0, 1e-12);
}

TEST(ScoreCut, MatchesBruteForceMarginal) {
    std::mt19937_64 rng(11);
    Circuit qft = qft_circuit(7);
    for (int trial = 0; trial < 10; ++trial) {
        Placeholder p;
        p.position = static_cast<std::uint32_t>(rng() % (qft.gates.size() + 1));
        std::set<std::uint32_t> subset;
        while (subset.size() < 2) subset.insert(static_cast<std::uint32_t>(rng() % 7));
        p.qubits.assign(subset.begin(), subset.end());

        Circuit prefix = qft;
        prefix.gates.resize(p.position);
        StateVector sv = run_statevector(prefix, "0000000");
        std::vector<cplx> amps(sv.amplitudes().begin(), sv.amplitudes().end());
        const auto marginal = oracle::partial_trace_probabilities(amps, p.qubits, 7);

        const std::vector<double> uniform(4, 0.25);
        std::vector<double> point(4, 0.0);
        std::size_t best = 0;
        for (std::size_t i = 1; i < 4; ++i) {
            if (marginal[i] > marginal[best]) best = i;
        }
        point[best] = 1.0;
        std::vector<double> cat = {0.5, 0.0, 0.0, 0.5};
        const double expected =
            std::max({1.0 - oracle::total_variation(marginal, uniform),
                      1.0 - oracle::total_variation(marginal, point),
                      1.0 - oracle::total_variation(marginal, cat)});
        EXPECT_NEAR(score_cut(qft, p), expected, 1e-9);
    }
}

TEST(ScoreCut, RangeAndTemplateExactness) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        Circuit c = oracle::random_circuit(4, 10, rng);
        Placeholder p;
        p.position = static_cast<std::uint32_t>(rng() % (c.gates.size() + 1));
        p.qubits = {static_cast<std::uint32_t>(rng() % 4)};
        const double s = score_cut(c, p);
        ASSERT_GE(s, 0.0);
        ASSERT_LE(s, 1.0 + 1e-12);
    }
}

TEST(StaticAnalysis, BudgetFilledWithScoredRandomCuts) {
    const auto phs = static_analysis(qft_circuit(7), 12, {7, 0});
    EXPECT_EQ(phs.size(), 12u);
    int random_cuts = 0;
    for (const Placeholder& p : phs) random_cuts += p.hint == PlaceholderHint::RandomCut;
    EXPECT_GT(random_cuts, 0);
    for (const Placeholder& p : phs) {
        if (p.hint == PlaceholderHint::RandomCut) EXPECT_LE(p.qubits.size(), 4u);
    }
}
