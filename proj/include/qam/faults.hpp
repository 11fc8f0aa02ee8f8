#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qam/instrument.hpp"
#include "qam/miner.hpp"

namespace qam {

enum class MutationKind {
    GateSubstitute,
    GateInsert,
    GateDelete,
    RandomRotation,
};

const char* to_string(MutationKind kind);

/// One seeded structural edit. Applying a mutation changes exactly one site
/// of the circuit it was drawn against.
struct Mutation {
    MutationKind kind = MutationKind::GateSubstitute;
    std::uint32_t position = 0;
    GateOp original;     // substitute/delete
    GateOp replacement;  // substitute/insert/rotation

    std::string describe() const;
};

/// Draws `count` mutations (uniform over kinds and valid sites) and applies
/// them in order. Substitutions stay within arity-compatible gates; random
/// rotations insert RX/RY/RZ with an angle in (0.1, pi). Mutations that would
/// leave the circuit empty or have no valid target are redrawn.
std::pair<Circuit, std::vector<Mutation>> inject(const Circuit& c, std::uint32_t count,
                                                 RngSeed seed);

/// Replays a mutation log against `c`.
Circuit apply_mutations(const Circuit& c, const std::vector<Mutation>& log);

/// Where a cut at `position` in the unmutated circuit lands after the log.
std::uint32_t map_position(const std::vector<Mutation>& log, std::uint32_t position);

struct ReportRow {
    std::string experiment;
    double x = 0.0;
    double y = 0.0;
    std::uint64_t seed = 0;
    std::string detail;
};

struct ExperimentReport {
    std::string kind;
    std::map<std::string, std::string> config;  // full echo; replaying it reproduces the report
    std::vector<ReportRow> rows;
    std::string sidecar_json;  // per-run records

    std::string csv() const;
    /// Writes <prefix>.csv and <prefix>.json.
    void write(const std::string& prefix) const;
};

/// Mined-assertion counts per placeholder and kind as the iteration budget
/// grows, derived from one mining run at the largest budget.
ExperimentReport experiment_mining_curve(const Circuit& c,
                                         const std::vector<Placeholder>& placeholders,
                                         MiningConfig cfg,
                                         const std::vector<std::uint32_t>& iteration_grid,
                                         const PrepHooks& hooks = PrepHooks::defaults());

struct CoverageOptions {
    std::uint32_t n_assertions = 5;
    std::uint32_t n_bugs = 10;
    std::vector<std::uint32_t> vector_grid = {1, 2, 4, 8, 12, 16, 20, 32, 64};
    std::uint64_t shots = 8192;
    std::uint32_t evasive_bugs = 0;  // appended bugs constructed to evade every assertion
    unsigned jobs = 1;
};

/// Seeded bug coverage: selects assertions, injects one bug at a time, and
/// sweeps test vectors (a seeded permutation of the input space) until each
/// bug trips an assertion. Reports coverage fraction per vector budget.
ExperimentReport experiment_error_coverage(const Circuit& c, const MiningResult& mined,
                                           RngSeed seed, const CoverageOptions& opts,
                                           const PrepHooks& hooks = PrepHooks::defaults());

struct TradeoffOptions {
    std::vector<std::uint32_t> assertion_grid = {1, 3, 7, 15};
    std::uint32_t repetitions = 10;
    std::uint64_t shots = 8192;
    std::optional<Mutation> bug;  // drawn seeded when absent
    unsigned jobs = 1;
};

/// Detection-latency trade-off: with one bug fixed, draws k assertions and
/// counts random test vectors until one fires; reports the median (and min)
/// over the repetitions for each k. Runs that never detect within 10 * 2^n
/// vectors are recorded at that cap.
ExperimentReport experiment_tradeoff(const Circuit& c, const MiningResult& mined, RngSeed seed,
                                     const TradeoffOptions& opts,
                                     const PrepHooks& hooks = PrepHooks::defaults());

/// Exact probability that the runtime check of a single-instance record
/// passes on `target`. Used to filter experiment pools to assertions whose
/// check is sound on the clean circuit and to decide whether a bug is visible.
double exact_check_probability(const Circuit& target, const AssertionRecord& record,
                               const PrepHooks& hooks);

/// Narrows a mined instance to a one-input record placed at `position`.
AssertionRecord make_instance_record(const MiningResult& mined, const MinedInstance& instance,
                                     std::uint32_t position);

}  // namespace qam
