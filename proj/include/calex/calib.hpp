#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace calex {

// Monotone map from raw to calibrated probability:
// p -> sigmoid(a + b * logit(p)); strictly increasing iff b > 0.
struct Recalibrator {
    enum class Kind { identity, logit_linear };
    Kind kind = Kind::identity;
    double intercept = 0.0;  // a
    double slope = 1.0;      // b
};

struct CalibrationCurve {
    std::vector<double> grid;
    std::vector<double> smoothed_observed;
    std::vector<double> ci_lo;
    std::vector<double> ci_hi;
    double span = 0.75;
};

struct SlopeIntercept {
    double intercept = 0.0;  // calibration-in-the-large (slope fixed at 1)
    double slope = 1.0;      // overall-effect slope
};

struct HlBin {
    std::size_t n = 0;
    double observed = 0.0;  // positives in bin
    double expected = 0.0;  // sum of predicted probabilities
};

struct HlTestResult {
    double statistic = 0.0;
    std::size_t df = 0;
    double p_value = 1.0;
    std::vector<HlBin> bins;
};

// Logistic regression of labels on logit(raw_probs), Newton-Raphson to
// gradient norm <= 1e-10.
Recalibrator fit_recalibrator(std::span<const int> labels,
                              std::span<const double> raw_probs);

std::vector<double> apply(const Recalibrator& recal, std::span<const double> probs);
double apply_one(const Recalibrator& recal, double prob);

SlopeIntercept slope_intercept(std::span<const int> labels,
                               std::span<const double> probs);

// Degree-1 loess of outcomes on predictions with tricube weights over the
// span-fraction nearest neighbors; pointwise 95% band from the local WLS
// equivalent-kernel norm and a residual variance estimate.
CalibrationCurve loess_curve(std::span<const int> labels,
                             std::span<const double> probs, double span = 0.75,
                             std::size_t grid_size = 100);

HlTestResult hosmer_lemeshow(std::span<const int> labels,
                             std::span<const double> probs, std::size_t g = 10);

// Upper-tail chi-square p-value, exposed for reuse in reports.
double chi_squared_upper_tail(double statistic, std::size_t df);

}  // namespace calex
