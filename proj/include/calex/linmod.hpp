#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "calex/dataset.hpp"

namespace calex {

struct Standardizer {
    std::vector<double> means;
    std::vector<double> sds;  // 0 marks a dropped zero-variance column
};

struct LogisticLassoModel {
    double intercept = 0.0;                 // original scale
    std::vector<double> coefficients;       // original scale, dropped columns = 0
    double lambda = 0.0;
    Standardizer standardizer;
    std::vector<FeatureSchema> schema;      // carries names, kinds, bounds
    std::vector<double> feature_lo;         // observed training min per feature
    std::vector<double> feature_hi;         // observed training max per feature
    std::vector<std::string> dropped_features;
    bool converged = false;
    std::size_t iterations = 0;             // coordinate-descent sweeps

    std::vector<std::string> feature_names() const;
};

struct RegularizationPath {
    std::vector<double> lambdas;       // strictly decreasing
    std::vector<double> coef_matrix;   // nlambda x p, row-major, original scale
    std::vector<double> intercepts;

    std::size_t nlambda() const { return lambdas.size(); }
    std::span<const double> coefs(std::size_t k) const {
        const std::size_t p = coef_matrix.size() / lambdas.size();
        return {coef_matrix.data() + k * p, p};
    }
};

struct PathSpec {
    std::size_t nlambda = 100;
    double lambda_min_ratio = 1e-3;
    double tol = 1e-7;
    std::size_t max_iter = 10000;
};

struct CvResult {
    std::vector<double> lambdas;
    // fold_aucs[k] holds the per-(repeat, fold) AUCs for lambdas[k] in fixed
    // (repeat-major) order; when `pooled`, one pooled AUC per repeat instead.
    std::vector<std::vector<double>> fold_aucs;
    std::vector<double> mean_auc;
    std::vector<double> sd_auc;  // sample sd over the per-lambda list
    double selected_lambda = 0.0;
    std::size_t selected_index = 0;
    std::uint64_t seed = 0;
    std::size_t folds = 0;
    std::size_t repeats = 0;
    bool pooled = false;  // per-repeat pooling when some fold is one-class
};

// sign(z) * max(|z| - gamma, 0)
double soft_threshold(double z, double gamma);

// Largest penalty with an all-zero solution: max_j |x~_j' (y - ybar)| / n
// over standardized columns.
double lambda_max(const DataTable& train);

// L1-penalized logistic regression minimizing
//   (1/n) sum_i -log-likelihood_i + lambda * ||beta||_1
// over standardized features (intercept unpenalized), by IRLS with a cyclic
// coordinate-descent inner loop.
LogisticLassoModel fit(const DataTable& train, double lambda, double tol = 1e-7,
                       std::size_t max_iter = 10000);

std::vector<double> predict_proba(const LogisticLassoModel& model,
                                  std::span<const double> rows, std::size_t n_rows);
double predict_one(const LogisticLassoModel& model, std::span<const double> row);

// Log-spaced grid from lambda_max down to ratio * lambda_max, warm-started.
RegularizationPath path(const DataTable& train, const PathSpec& spec = {});

struct CvOptions {
    std::size_t folds = 10;
    std::size_t repeats = 10;
    PathSpec path_spec;
    bool one_se_rule = false;
    std::size_t threads = 1;  // 0 = hardware concurrency; result is identical
};

// Repeated stratified k-fold CV scored by AUC on a shared lambda grid;
// selects the AUC-maximizing lambda (largest on ties, or the 1-SE choice).
CvResult cross_validate(const DataTable& train, const CvOptions& options,
                        std::uint64_t seed);

}  // namespace calex
