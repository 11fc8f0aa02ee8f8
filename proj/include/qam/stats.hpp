#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qam/statevector.hpp"

namespace qam {

enum class TemplateKind {
    Classical,
    UniformSuperposition,
    CatEntangled,
};

const char* to_string(TemplateKind kind);
TemplateKind template_kind_from_string(const std::string& name);

constexpr double kDefaultAlpha = 0.05;
constexpr std::uint64_t kMinimumShots = 256;

struct ChiSquareResult {
    double statistic = 0.0;
    std::uint32_t dof = 1;
    double p_value = 1.0;
    std::uint32_t pooled_bins = 0;
    std::optional<std::string> mode;  // Classical only

    bool passes(double alpha = kDefaultAlpha) const { return p_value >= alpha; }
};

/// Upper-tail probability of the chi-squared distribution with `dof` degrees
/// of freedom, computed through the regularized incomplete gamma function
/// (series below a+1, continued fraction above). Absolute error <= 1e-10.
double chisq_pvalue(double statistic, std::uint32_t dof);

/// Tests `d` against a point-mass template at the most frequent outcome; all
/// other outcomes are pooled into one bin with pseudo-probability 1/(2*shots).
ChiSquareResult test_classical(const OutcomeDistribution& d);

/// Tests `d` against the uniform distribution over all 2^k outcomes.
ChiSquareResult test_uniform(const OutcomeDistribution& d);

/// Tests `d` against the k-qubit cat template: probability (1-eps)/2 on the
/// all-zeros and all-ones outcomes, everything else pooled.
ChiSquareResult test_cat(const OutcomeDistribution& d);

}  // namespace qam
