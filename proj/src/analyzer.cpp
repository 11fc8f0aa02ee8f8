#include "qam/analyzer.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "qam/statevector.hpp"

namespace qam {

const char* to_string(PlaceholderHint hint) {
    switch (hint) {
        case PlaceholderHint::ClassicalBlock: return "classical-block";
        case PlaceholderHint::HadamardLayer: return "hadamard-layer";
        case PlaceholderHint::EntanglingBlock: return "entangling-block";
        case PlaceholderHint::RandomCut: return "random-cut";
        case PlaceholderHint::BarrierHint: return "barrier-hint";
    }
    return "?";
}

PlaceholderHint hint_from_string(const std::string& name) {
    if (name == "classical-block") return PlaceholderHint::ClassicalBlock;
    if (name == "hadamard-layer") return PlaceholderHint::HadamardLayer;
    if (name == "entangling-block") return PlaceholderHint::EntanglingBlock;
    if (name == "random-cut") return PlaceholderHint::RandomCut;
    if (name == "barrier-hint") return PlaceholderHint::BarrierHint;
    throw DomainError("unknown placeholder hint '" + name + "'");
}

namespace {

bool is_classical_kind(GateKind kind) {
    return kind == GateKind::X || kind == GateKind::CX || kind == GateKind::CCX ||
           kind == GateKind::Swap;
}


// Maximal run of X/CX/CCX/SWAP gates acting only on qubits that are still in
// a basis state. Yields one placeholder cut after the last such gate, over
// the still-classical qubits those gates touched.
void find_classical_block(const Circuit& c, std::vector<Placeholder>& out) {
    std::vector<bool> classical(c.n_qubits, true);
    std::vector<bool> touched(c.n_qubits, false);
    std::size_t last = 0;
    bool any = false;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const GateOp& g = c.gates[i];
        if (g.kind == GateKind::Barrier) continue;
        bool all_classical = is_classical_kind(g.kind);
        if (all_classical) {
            for (std::uint32_t q : g.qubits) all_classical &= classical[q];
        }
        if (all_classical) {
            for (std::uint32_t q : g.qubits) touched[q] = true;
            last = i;
            any = true;
        } else {
            for (std::uint32_t q : g.qubits) classical[q] = false;
        }
    }
    if (!any) return;
    Placeholder p;
    p.position = static_cast<std::uint32_t>(last + 1);
    for (std::uint32_t q = 0; q < c.n_qubits; ++q) {
        if (touched[q] && classical[q]) p.qubits.push_back(q);
    }
    if (p.qubits.empty()) return;
    p.hint = PlaceholderHint::ClassicalBlock;
    p.provenance = "classical prefix ending before gate " + std::to_string(p.position);
    out.push_back(std::move(p));
}

// Each maximal run of consecutive H gates yields a cut right after the run.
void find_hadamard_layers(const Circuit& c, std::vector<Placeholder>& out) {
    std::size_t i = 0;
    while (i < c.gates.size()) {
        if (c.gates[i].kind != GateKind::H) {
            ++i;
            continue;
        }
        std::set<std::uint32_t> qubits;
        std::size_t j = i;
        while (j < c.gates.size() && c.gates[j].kind == GateKind::H) {
            qubits.insert(c.gates[j].qubits[0]);
            ++j;
        }
        Placeholder p;
        p.position = static_cast<std::uint32_t>(j);
        p.qubits.assign(qubits.begin(), qubits.end());
        p.hint = PlaceholderHint::HadamardLayer;
        p.provenance = "h layer at gates " + std::to_string(i) + ".." + std::to_string(j - 1);
        out.push_back(std::move(p));
        i = j;
    }
}

// An H on a root qubit followed by CX/CCX gates whose controls already sit
// inside the reached set; the chain ends at the first other gate touching the
// set. Emitted only when at least one fan-out gate joined.
void find_entangling_blocks(const Circuit& c, std::vector<Placeholder>& out) {
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        if (c.gates[i].kind != GateKind::H) continue;
        std::set<std::uint32_t> reached{c.gates[i].qubits[0]};
        std::size_t chain_end = i;
        bool grew = false;
        for (std::size_t j = i + 1; j < c.gates.size(); ++j) {
            const GateOp& g = c.gates[j];
            if (g.kind == GateKind::Barrier) continue;
            bool touches = false;
            for (std::uint32_t q : g.qubits) touches |= reached.count(q) > 0;
            if (!touches) continue;
            if (g.kind == GateKind::CX || g.kind == GateKind::CCX) {
                const std::size_t n_controls = g.qubits.size() - 1;
                bool controls_in = true;
                for (std::size_t k = 0; k < n_controls; ++k) {
                    controls_in &= reached.count(g.qubits[k]) > 0;
                }
                if (controls_in) {
                    reached.insert(g.qubits.back());
                    chain_end = j;
                    grew = true;
                    continue;
                }
            }
            break;
        }
        if (!grew) continue;
        Placeholder p;
        p.position = static_cast<std::uint32_t>(chain_end + 1);
        p.qubits.assign(reached.begin(), reached.end());
        p.hint = PlaceholderHint::EntanglingBlock;
        p.provenance = "h fan-out rooted at gate " + std::to_string(i);
        out.push_back(std::move(p));
    }
}

void find_barrier_hints(const Circuit& c, std::vector<Placeholder>& out) {
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        if (c.gates[i].kind != GateKind::Barrier) continue;
        Placeholder p;
        p.position = static_cast<std::uint32_t>(i);
        p.qubits = c.gates[i].qubits;
        std::sort(p.qubits.begin(), p.qubits.end());
        p.hint = PlaceholderHint::BarrierHint;
        p.provenance = "barrier at gate " + std::to_string(i);
        out.push_back(std::move(p));
    }
}

std::pair<std::uint32_t, std::vector<std::uint32_t>> cut_key(const Placeholder& p) {
    return {p.position, p.qubits};
}

}  // namespace

double score_cut(const Circuit& c, const Placeholder& p) {
    if (p.position > c.gates.size()) throw IndexOutOfRange("placeholder position out of range");
    const std::string zeros(c.n_qubits, '0');
    const std::vector<double> marginal = exact_cut_marginal(c, p.position, p.qubits, zeros);
    const std::size_t bins = marginal.size();

    double best_point = 0.0;
    for (double v : marginal) best_point = std::max(best_point, v);

    double tv_uniform = 0.0;
    const double u = 1.0 / static_cast<double>(bins);
    for (double v : marginal) tv_uniform += std::abs(v - u);
    const double uniform_score = 1.0 - tv_uniform / 2.0;

    double score = std::max(best_point, uniform_score);
    if (p.qubits.size() >= 2) {
        double tv_cat = std::abs(marginal.front() - 0.5) + std::abs(marginal.back() - 0.5);
        for (std::size_t i = 1; i + 1 < bins; ++i) tv_cat += marginal[i];
        score = std::max(score, 1.0 - tv_cat / 2.0);
    }
    return score;
}

std::vector<Placeholder> static_analysis(const Circuit& c, std::uint32_t budget, RngSeed seed) {
    if (c.gates.empty()) throw EmptyCircuit("static analysis needs a non-empty circuit");
    if (budget < 1) throw DomainError("budget must be >= 1");

    std::vector<Placeholder> found;
    find_classical_block(c, found);
    find_hadamard_layers(c, found);
    find_entangling_blocks(c, found);
    find_barrier_hints(c, found);

    std::set<std::pair<std::uint32_t, std::vector<std::uint32_t>>> seen;
    std::vector<Placeholder> kept;
    for (Placeholder& p : found) {
        if (seen.insert(cut_key(p)).second) kept.push_back(std::move(p));
    }

    if (kept.size() < budget) {
        const std::uint32_t need = budget - static_cast<std::uint32_t>(kept.size());
        const std::uint32_t max_subset =
            std::min<std::uint32_t>(4, std::max<std::uint32_t>(1, c.n_qubits));
        RngStream rng = RngStream(seed).substream("random-cuts");

        std::vector<Placeholder> pool;
        const std::size_t target_pool = static_cast<std::size_t>(need) * 3;
        for (std::size_t attempt = 0; attempt < 64 * target_pool + 64 && pool.size() < target_pool;
             ++attempt) {
            Placeholder p;
            p.position = static_cast<std::uint32_t>(rng.uniform_below(c.gates.size() + 1));
            const std::uint32_t size =
                1 + static_cast<std::uint32_t>(rng.uniform_below(max_subset));
            std::set<std::uint32_t> subset;
            while (subset.size() < size) {
                subset.insert(static_cast<std::uint32_t>(rng.uniform_below(c.n_qubits)));
            }
            p.qubits.assign(subset.begin(), subset.end());
            p.hint = PlaceholderHint::RandomCut;
            p.provenance = "random cut";
            if (seen.insert(cut_key(p)).second) pool.push_back(std::move(p));
        }

        // Rank by cut quality; ties keep the seeded draw order so equal-score
        // candidates stay spread across the circuit.
        std::vector<std::pair<double, std::size_t>> ranked;
        for (std::size_t i = 0; i < pool.size(); ++i) ranked.emplace_back(score_cut(c, pool[i]), i);
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        for (std::size_t i = 0; i < ranked.size() && i < need; ++i) {
            kept.push_back(pool[ranked[i].second]);
        }
    }

    std::sort(kept.begin(), kept.end(),
              [](const Placeholder& a, const Placeholder& b) { return cut_key(a) < cut_key(b); });
    for (std::size_t i = 0; i < kept.size(); ++i) kept[i].id = "p" + std::to_string(i);
    return kept;
}

}  // namespace qam
