#pragma once

#include <cstddef>
#include <span>

namespace calex {

struct AucSummary {
    double mean = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::size_t n_estimates = 0;
    double level = 0.95;
};

// Mann-Whitney AUC with ties counted half, computed from midranks in
// O(n log n). The exhaustive pair-count definition lives in the test oracle.
double auc(std::span<const int> labels, std::span<const double> scores);

// Mean of the estimates plus an empirical percentile interval at
// (1-level)/2 and 1-(1-level)/2, linearly interpolated.
AucSummary auc_ci(std::span<const double> estimates, double level = 0.95);

double brier(std::span<const int> labels, std::span<const double> probs);

// Linearly interpolated quantile of sorted values, q in [0,1].
double quantile_sorted(std::span<const double> sorted, double q);

}  // namespace calex
