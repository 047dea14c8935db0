#include "calex/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "calex/error.hpp"

namespace calex {

double auc(std::span<const int> labels, std::span<const double> scores) {
    if (labels.size() != scores.size())
        throw Error(ErrorKind::LengthMismatch, std::to_string(labels.size()) + " labels vs " +
                                                   std::to_string(scores.size()) + " scores");
    const std::size_t n = labels.size();
    std::size_t n_pos = 0;
    for (int y : labels) n_pos += static_cast<std::size_t>(y);
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw Error(ErrorKind::OneClassOnly, "auc needs both classes");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // midranks over tie groups; rank sum of positives gives the U statistic
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // (i+1 + j) / 2
        for (std::size_t k = i; k < j; ++k)
            if (labels[order[k]] == 1) pos_rank_sum += midrank;
        i = j;
    }
    const double n1 = static_cast<double>(n_pos);
    const double n0 = static_cast<double>(n_neg);
    return (pos_rank_sum - n1 * (n1 + 1.0) / 2.0) / (n1 * n0);
}

double quantile_sorted(std::span<const double> sorted, double q) {
    const std::size_t m = sorted.size();
    if (m == 1) return sorted[0];
    const double pos = q * static_cast<double>(m - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, m - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

AucSummary auc_ci(std::span<const double> estimates, double level) {
    if (estimates.size() < 2)
        throw Error(ErrorKind::TooFewEstimates, std::to_string(estimates.size()));

    std::vector<double> sorted(estimates.begin(), estimates.end());
    std::sort(sorted.begin(), sorted.end());

    AucSummary out;
    out.level = level;
    out.n_estimates = estimates.size();
    double total = 0.0;
    for (double v : estimates) total += v;
    out.mean = total / static_cast<double>(estimates.size());
    const double alpha = (1.0 - level) / 2.0;
    out.ci_lo = quantile_sorted(sorted, alpha);
    out.ci_hi = quantile_sorted(sorted, 1.0 - alpha);
    return out;
}

double brier(std::span<const int> labels, std::span<const double> probs) {
    if (labels.empty()) throw Error(ErrorKind::Empty, "brier on empty input");
    if (labels.size() != probs.size())
        throw Error(ErrorKind::LengthMismatch, std::to_string(labels.size()) + " labels vs " +
                                                   std::to_string(probs.size()) + " probs");
    double acc = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double d = probs[i] - static_cast<double>(labels[i]);
        acc += d * d;
    }
    return acc / static_cast<double>(labels.size());
}

}  // namespace calex
