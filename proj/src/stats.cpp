#include "qam/stats.hpp"

#include <cmath>

namespace qam {

const char* to_string(TemplateKind kind) {
    switch (kind) {
        case TemplateKind::Classical: return "classical";
        case TemplateKind::UniformSuperposition: return "uniform";
        case TemplateKind::CatEntangled: return "cat";
    }
    return "?";
}

TemplateKind template_kind_from_string(const std::string& name) {
    if (name == "classical") return TemplateKind::Classical;
    if (name == "uniform") return TemplateKind::UniformSuperposition;
    if (name == "cat") return TemplateKind::CatEntangled;
    throw DomainError("unknown template kind '" + name + "'");
}

namespace {

// Lower regularized incomplete gamma P(a, x) by power series; valid x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 1000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma Q(a, x) by continued fraction; x >= a+1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double pooled_epsilon(std::uint64_t shots) { return 1.0 / (2.0 * static_cast<double>(shots)); }

void require_shots(const OutcomeDistribution& d) {
    if (d.shots < kMinimumShots) {
        throw InsufficientShots("need at least " + std::to_string(kMinimumShots) +
                                " shots, got " + std::to_string(d.shots));
    }
    std::uint64_t total = 0;
    for (const auto& [key, n] : d.counts) {
        if (key.size() != d.measured_qubits.size()) {
            throw DomainError("outcome key length does not match measured qubit count");
        }
        total += n;
    }
    if (total != d.shots) throw DomainError("counts do not sum to shots");
}

double cell(double observed, double expected) {
    const double diff = observed - expected;
    return diff * diff / expected;
}

}  // namespace

double chisq_pvalue(double statistic, std::uint32_t dof) {
    if (!(statistic >= 0.0) || !std::isfinite(statistic)) {
        throw DomainError("chi-squared statistic must be finite and non-negative");
    }
    if (dof < 1) throw DomainError("dof must be >= 1");
    const double a = static_cast<double>(dof) / 2.0;
    const double x = statistic / 2.0;
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

ChiSquareResult test_classical(const OutcomeDistribution& d) {
    require_shots(d);
    // argmax; ties go to the lexicographically smallest key (map order).
    std::string mode;
    std::uint64_t mode_count = 0;
    for (const auto& [key, n] : d.counts) {
        if (n > mode_count) {
            mode = key;
            mode_count = n;
        }
    }
    if (d.counts.empty()) mode.assign(d.measured_qubits.size(), '0');

    const double shots = static_cast<double>(d.shots);
    const double eps = pooled_epsilon(d.shots);
    ChiSquareResult r;
    r.statistic = cell(static_cast<double>(mode_count), shots * (1.0 - eps)) +
                  cell(static_cast<double>(d.shots - mode_count), shots * eps);
    r.dof = 1;
    r.pooled_bins = 2;
    r.p_value = chisq_pvalue(r.statistic, r.dof);
    r.mode = mode;
    return r;
}

ChiSquareResult test_uniform(const OutcomeDistribution& d) {
    require_shots(d);
    const std::size_t k = d.measured_qubits.size();
    if (k > 16) {
        throw TooManyBins("uniform test over " + std::to_string(k) + " qubits (max 16)");
    }
    const std::uint64_t bins = std::uint64_t{1} << k;
    const double expected = static_cast<double>(d.shots) / static_cast<double>(bins);
    double stat = 0.0;
    for (std::uint64_t i = 0; i < bins; ++i) {
        const std::string key = index_to_bits(i, static_cast<std::uint32_t>(k));
        const auto it = d.counts.find(key);
        const double observed = it == d.counts.end() ? 0.0 : static_cast<double>(it->second);
        stat += cell(observed, expected);
    }
    ChiSquareResult r;
    r.statistic = stat;
    r.dof = static_cast<std::uint32_t>(bins - 1);
    r.pooled_bins = static_cast<std::uint32_t>(bins);
    r.p_value = chisq_pvalue(r.statistic, r.dof);
    return r;
}

ChiSquareResult test_cat(const OutcomeDistribution& d) {
    require_shots(d);
    const std::size_t k = d.measured_qubits.size();
    if (k < 2) throw TooFewQubits("cat test needs at least 2 qubits");

    const std::string zeros(k, '0');
    const std::string ones(k, '1');
    auto count_of = [&d](const std::string& key) -> double {
        const auto it = d.counts.find(key);
        return it == d.counts.end() ? 0.0 : static_cast<double>(it->second);
    };
    const double o_zeros = count_of(zeros);
    const double o_ones = count_of(ones);
    const double o_other = static_cast<double>(d.shots) - o_zeros - o_ones;

    const double shots = static_cast<double>(d.shots);
    const double eps = pooled_epsilon(d.shots);
    const double e_side = shots * (1.0 - eps) / 2.0;

    ChiSquareResult r;
    r.statistic = cell(o_zeros, e_side) + cell(o_ones, e_side) + cell(o_other, shots * eps);
    r.dof = 2;
    r.pooled_bins = 3;
    r.p_value = chisq_pvalue(r.statistic, r.dof);
    return r;
}

}  // namespace qam
