#include "calex/linmod.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <mutex>
#include <thread>

#include "calex/error.hpp"
#include "calex/eval.hpp"
#include "calex/kernels.hpp"
#include "calex/rng.hpp"

namespace calex {

namespace {

constexpr double kProbFloor = 1e-5;    // IRLS weight guard
constexpr double kPredictClamp = 1e-12;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double log1pexp(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double logit(double p) { return std::log(p / (1.0 - p)); }

// Standardized training design, column-major for coordinate access.
struct Design {
    std::size_t n = 0;
    std::size_t p = 0;
    std::vector<double> cols;       // p columns of length n; dropped cols zeroed
    std::vector<double> means;
    std::vector<double> sds;        // 0 for dropped columns
    std::vector<std::size_t> active;
    std::vector<double> y;
    double ybar = 0.0;

    const double* col(std::size_t j) const { return cols.data() + j * n; }
};

Design build_design(const DataTable& table) {
    Design d;
    d.n = table.n();
    d.p = table.p();
    if (d.n == 0) throw Error(ErrorKind::EmptyTable, "fit on empty table");

    d.y.resize(d.n);
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < d.n; ++i) {
        d.y[i] = static_cast<double>(table.target()[i]);
        n_pos += static_cast<std::size_t>(table.target()[i]);
    }
    if (n_pos == 0 || n_pos == d.n)
        throw Error(ErrorKind::DegenerateTarget, "target is constant");
    d.ybar = kernels::sum(d.y.data(), d.n) / static_cast<double>(d.n);

    d.cols.assign(d.p * d.n, 0.0);
    d.means.resize(d.p);
    d.sds.resize(d.p);
    const double nd = static_cast<double>(d.n);
    for (std::size_t j = 0; j < d.p; ++j) {
        double* col = d.cols.data() + j * d.n;
        for (std::size_t i = 0; i < d.n; ++i) col[i] = table.at(i, j);
        const double mean = kernels::sum(col, d.n) / nd;
        for (std::size_t i = 0; i < d.n; ++i) col[i] -= mean;
        const double var = kernels::dot(col, col, d.n) / nd;
        const double sd = std::sqrt(std::max(0.0, var));
        d.means[j] = mean;
        d.sds[j] = sd;
        if (sd > 0.0) {
            const double inv = 1.0 / sd;
            for (std::size_t i = 0; i < d.n; ++i) col[i] *= inv;
            d.active.push_back(j);
        } else {
            std::fill(col, col + d.n, 0.0);
        }
    }
    return d;
}

// IRLS + cyclic coordinate descent on a standardized design. State persists
// across solve() calls so a lambda path gets warm starts for free.
class Solver {
public:
    Solver(Design design, double tol, std::size_t max_iter)
        : d_(std::move(design)),
          tol_(tol),
          max_iter_(max_iter),
          beta_(d_.p, 0.0),
          eta_(d_.n),
          prob_(d_.n),
          weight_(d_.n),
          resid_(d_.n) {
        if (!(tol > 0.0)) throw Error(ErrorKind::BadSpec, "tol must be positive");
        const double pbar = std::clamp(d_.ybar, kProbFloor, 1.0 - kProbFloor);
        b0_ = logit(pbar);
        std::fill(prob_.begin(), prob_.end(), pbar);
        fresh_start_ = true;
    }

    // Penalty bound computed with the same arithmetic solve() uses for its
    // first quadratic, so fitting at exactly this value keeps beta at zero.
    double lambda_max() {
        const double pbar = std::clamp(d_.ybar, kProbFloor, 1.0 - kProbFloor);
        const double w = pbar * (1.0 - pbar);
        std::vector<double> wv(d_.n, w), rv(d_.n);
        for (std::size_t i = 0; i < d_.n; ++i) rv[i] = (d_.y[i] - pbar) / w;
        double best = 0.0;
        for (std::size_t j : d_.active) {
            const double g =
                kernels::dot3(wv.data(), d_.col(j), rv.data(), d_.n) / static_cast<double>(d_.n);
            best = std::max(best, std::fabs(g));
        }
        return best;
    }

    void solve(double lambda) {
        if (lambda < 0.0) throw Error(ErrorKind::BadSpec, "lambda must be >= 0");
        lambda_ = lambda;
        const double nd = static_cast<double>(d_.n);
        const std::size_t max_outer = 1000;
        iterations_ = 0;
        converged_ = false;

        compute_eta();
        if (!fresh_start_) update_prob();
        double prev_obj = objective();

        std::vector<double> q(d_.p, 0.0);
        std::vector<double> beta_start(d_.p);
        double b0_start;

        for (std::size_t outer = 0; outer < max_outer; ++outer) {
            // quadratic approximation at the current state
            for (std::size_t i = 0; i < d_.n; ++i) {
                weight_[i] = prob_[i] * (1.0 - prob_[i]);
                resid_[i] = (d_.y[i] - prob_[i]) / weight_[i];
            }
            for (std::size_t j : d_.active)
                q[j] = kernels::wsumsq(weight_.data(), d_.col(j), d_.n) / nd;
            const double sw = kernels::sum(weight_.data(), d_.n);

            beta_start = beta_;
            b0_start = b0_;

            // cyclic coordinate descent on the penalized weighted LS problem
            while (true) {
                double max_delta = 0.0;
                for (std::size_t j : d_.active) {
                    const double g =
                        kernels::dot3(weight_.data(), d_.col(j), resid_.data(), d_.n) / nd;
                    const double num = g + beta_[j] * q[j];
                    const double bnew = soft_threshold(num, lambda) / q[j];
                    const double delta = bnew - beta_[j];
                    if (delta != 0.0) {
                        beta_[j] = bnew;
                        kernels::axpy(-delta, d_.col(j), resid_.data(), d_.n);
                        max_delta = std::max(max_delta, std::fabs(delta));
                    }
                }
                const double db0 =
                    kernels::dot(weight_.data(), resid_.data(), d_.n) / sw;
                if (db0 != 0.0) {
                    b0_ += db0;
                    for (std::size_t i = 0; i < d_.n; ++i) resid_[i] -= db0;
                    max_delta = std::max(max_delta, std::fabs(db0));
                }
                ++iterations_;
                if (max_delta <= tol_ || iterations_ >= max_iter_) break;
            }

            compute_eta();
            update_prob();
            double obj = objective();
            if (!std::isfinite(obj)) throw Error(ErrorKind::NonFinite, "objective diverged");

            // Step-halving guard: the IRLS quadratic is a local model, so an
            // uphill full step gets pulled back toward the previous iterate.
            int halvings = 0;
            while (obj > prev_obj + 1e-12 * (1.0 + std::fabs(prev_obj)) && halvings < 30) {
                for (std::size_t j : d_.active) beta_[j] = 0.5 * (beta_[j] + beta_start[j]);
                b0_ = 0.5 * (b0_ + b0_start);
                compute_eta();
                update_prob();
                obj = objective();
                ++halvings;
            }
            prev_obj = obj;

            double outer_delta = std::fabs(b0_ - b0_start);
            for (std::size_t j : d_.active)
                outer_delta = std::max(outer_delta, std::fabs(beta_[j] - beta_start[j]));
            if (outer_delta <= tol_) {
                converged_ = true;
                break;
            }
            if (iterations_ >= max_iter_) break;
        }
        fresh_start_ = false;
    }

    LogisticLassoModel extract(const DataTable& table) const {
        LogisticLassoModel model;
        model.lambda = lambda_;
        model.converged = converged_;
        model.iterations = iterations_;
        model.schema = table.schema();
        model.standardizer.means = d_.means;
        model.standardizer.sds = d_.sds;
        model.coefficients.assign(d_.p, 0.0);
        double intercept = b0_;
        for (std::size_t j : d_.active) {
            model.coefficients[j] = beta_[j] / d_.sds[j];
            intercept -= beta_[j] * d_.means[j] / d_.sds[j];
        }
        model.intercept = intercept;
        for (std::size_t j = 0; j < d_.p; ++j)
            if (d_.sds[j] == 0.0) model.dropped_features.push_back(table.schema()[j].name);
        model.feature_lo.resize(d_.p);
        model.feature_hi.resize(d_.p);
        for (std::size_t j = 0; j < d_.p; ++j) {
            double lo = table.at(0, j), hi = lo;
            for (std::size_t i = 1; i < table.n(); ++i) {
                lo = std::min(lo, table.at(i, j));
                hi = std::max(hi, table.at(i, j));
            }
            model.feature_lo[j] = lo;
            model.feature_hi[j] = hi;
        }
        return model;
    }

    void original_scale(std::vector<double>& coef, double& intercept) const {
        coef.assign(d_.p, 0.0);
        intercept = b0_;
        for (std::size_t j : d_.active) {
            coef[j] = beta_[j] / d_.sds[j];
            intercept -= beta_[j] * d_.means[j] / d_.sds[j];
        }
    }

private:
    void compute_eta() {
        std::fill(eta_.begin(), eta_.end(), b0_);
        for (std::size_t j : d_.active)
            if (beta_[j] != 0.0) kernels::axpy(beta_[j], d_.col(j), eta_.data(), d_.n);
    }

    void update_prob() {
        for (std::size_t i = 0; i < d_.n; ++i)
            prob_[i] = std::clamp(sigmoid(eta_[i]), kProbFloor, 1.0 - kProbFloor);
    }

    double objective() const {
        double nll = 0.0;
        for (std::size_t i = 0; i < d_.n; ++i)
            nll += log1pexp(eta_[i]) - d_.y[i] * eta_[i];
        double l1 = 0.0;
        for (std::size_t j : d_.active) l1 += std::fabs(beta_[j]);
        return nll / static_cast<double>(d_.n) + lambda_ * l1;
    }

    Design d_;
    double tol_;
    std::size_t max_iter_;
    std::vector<double> beta_;
    double b0_ = 0.0;
    std::vector<double> eta_, prob_, weight_, resid_;
    double lambda_ = 0.0;
    std::size_t iterations_ = 0;
    bool converged_ = false;
    bool fresh_start_ = true;
};

}  // namespace

double soft_threshold(double z, double gamma) {
    if (gamma < 0.0) throw Error(ErrorKind::BadSpec, "gamma must be >= 0");
    const double mag = std::fabs(z) - gamma;
    if (mag <= 0.0) return 0.0;
    return z > 0.0 ? mag : -mag;
}

double lambda_max(const DataTable& train) {
    Design d = build_design(train);
    Solver solver(std::move(d), 1e-7, 1);
    return solver.lambda_max();
}

LogisticLassoModel fit(const DataTable& train, double lambda, double tol,
                       std::size_t max_iter) {
    Solver solver(build_design(train), tol, max_iter);
    solver.solve(lambda);
    return solver.extract(train);
}

std::vector<double> predict_proba(const LogisticLassoModel& model,
                                  std::span<const double> rows, std::size_t n_rows) {
    const std::size_t p = model.coefficients.size();
    if (rows.size() != n_rows * p)
        throw Error(ErrorKind::WidthMismatch,
                    "expected " + std::to_string(n_rows) + " rows of width " + std::to_string(p));
    std::vector<double> probs(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) {
        const double eta =
            model.intercept + kernels::dot(rows.data() + i * p, model.coefficients.data(), p);
        probs[i] = std::clamp(sigmoid(eta), kPredictClamp, 1.0 - kPredictClamp);
    }
    return probs;
}

double predict_one(const LogisticLassoModel& model, std::span<const double> row) {
    return predict_proba(model, row, 1)[0];
}

std::vector<std::string> LogisticLassoModel::feature_names() const {
    std::vector<std::string> names;
    names.reserve(schema.size());
    for (const auto& f : schema) names.push_back(f.name);
    return names;
}

namespace {

std::vector<double> lambda_grid(double lmax, std::size_t nlambda, double ratio) {
    std::vector<double> grid(nlambda);
    const double log_lmax = std::log(lmax);
    const double log_lmin = std::log(lmax * ratio);
    for (std::size_t k = 0; k < nlambda; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(nlambda - 1);
        grid[k] = std::exp(log_lmax + t * (log_lmin - log_lmax));
    }
    grid[0] = lmax;  // exact endpoint
    return grid;
}

}  // namespace

RegularizationPath path(const DataTable& train, const PathSpec& spec) {
    if (spec.nlambda < 2) throw Error(ErrorKind::BadSpec, "nlambda must be >= 2");
    if (!(spec.lambda_min_ratio > 0.0 && spec.lambda_min_ratio < 1.0))
        throw Error(ErrorKind::BadSpec, "lambda_min_ratio must be in (0,1)");

    Solver solver(build_design(train), spec.tol, spec.max_iter);
    const double lmax = solver.lambda_max();
    const auto grid = lambda_grid(lmax, spec.nlambda, spec.lambda_min_ratio);

    RegularizationPath out;
    out.lambdas = grid;
    out.coef_matrix.resize(spec.nlambda * train.p());
    out.intercepts.resize(spec.nlambda);
    std::vector<double> coef;
    for (std::size_t k = 0; k < spec.nlambda; ++k) {
        solver.solve(grid[k]);
        double intercept;
        solver.original_scale(coef, intercept);
        std::copy(coef.begin(), coef.end(), out.coef_matrix.begin() + k * train.p());
        out.intercepts[k] = intercept;
    }
    return out;
}

namespace {

// Stratified fold labels for one repeat: per class, shuffle then deal
// round-robin, which spreads every class over as many folds as it has
// members.
std::vector<std::size_t> stratified_folds(const DataTable& table, std::size_t folds,
                                          Rng rng) {
    std::vector<std::size_t> fold_of(table.n());
    for (int cls = 0; cls < 2; ++cls) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < table.n(); ++i)
            if (table.target()[i] == cls) idx.push_back(i);
        rng.shuffle(idx);
        for (std::size_t t = 0; t < idx.size(); ++t) fold_of[idx[t]] = t % folds;
    }
    return fold_of;
}

struct RepeatTask {
    std::vector<std::size_t> fold_of;
};

}  // namespace

CvResult cross_validate(const DataTable& train, const CvOptions& options,
                        std::uint64_t seed) {
    const std::size_t folds = options.folds;
    const std::size_t repeats = options.repeats;
    if (folds < 2 || folds > train.n())
        throw Error(ErrorKind::BadCount, "folds must be in [2, n]");
    if (repeats < 1) throw Error(ErrorKind::BadCount, "repeats must be >= 1");

    std::size_t class_count[2] = {0, 0};
    for (int y : train.target()) ++class_count[y];
    if (class_count[0] < 2 || class_count[1] < 2)
        throw Error(ErrorKind::TooFewPerClass, "need at least 2 rows of each class");

    const Rng master(seed);
    std::vector<RepeatTask> tasks(repeats);
    for (std::size_t r = 0; r < repeats; ++r)
        tasks[r].fold_of = stratified_folds(train, folds, master.derive(r));

    // Per-fold AUC needs both classes held out; leave-one-out style folds
    // fall back to pooling predictions within each repeat.
    bool pooled = false;
    for (const auto& task : tasks) {
        std::vector<std::size_t> pos(folds, 0), tot(folds, 0);
        for (std::size_t i = 0; i < train.n(); ++i) {
            ++tot[task.fold_of[i]];
            pos[task.fold_of[i]] += static_cast<std::size_t>(train.target()[i]);
        }
        for (std::size_t f = 0; f < folds; ++f)
            if (tot[f] == 0 || pos[f] == 0 || pos[f] == tot[f]) pooled = true;
    }

    const double lmax = lambda_max(train);
    const auto grid =
        lambda_grid(lmax, options.path_spec.nlambda, options.path_spec.lambda_min_ratio);
    const std::size_t nlambda = grid.size();
    const std::size_t slots_per_lambda = pooled ? repeats : repeats * folds;

    CvResult result;
    result.lambdas = grid;
    result.seed = seed;
    result.folds = folds;
    result.repeats = repeats;
    result.pooled = pooled;
    result.fold_aucs.assign(nlambda, std::vector<double>(slots_per_lambda, 0.0));

    auto run_repeat = [&](std::size_t r) {
        const auto& fold_of = tasks[r].fold_of;
        // pooled mode: predictions for every row, per lambda
        std::vector<std::vector<double>> pooled_scores;
        if (pooled) pooled_scores.assign(nlambda, std::vector<double>(train.n(), 0.0));

        for (std::size_t f = 0; f < folds; ++f) {
            std::vector<std::size_t> tr_idx, ho_idx;
            for (std::size_t i = 0; i < train.n(); ++i)
                (fold_of[i] == f ? ho_idx : tr_idx).push_back(i);
            if (ho_idx.empty()) continue;
            DataTable fold_train = train.take(tr_idx);

            std::size_t cc[2] = {0, 0};
            for (int y : fold_train.target()) ++cc[y];
            if (cc[0] == 0 || cc[1] == 0)
                throw Error(ErrorKind::TooFewPerClass,
                            "fold training part lost a class; use fewer folds");

            Solver solver(build_design(fold_train), options.path_spec.tol,
                          options.path_spec.max_iter);
            std::vector<double> coef;
            std::vector<int> ho_labels(ho_idx.size());
            for (std::size_t t = 0; t < ho_idx.size(); ++t)
                ho_labels[t] = train.target()[ho_idx[t]];

            for (std::size_t k = 0; k < nlambda; ++k) {
                solver.solve(grid[k]);
                double intercept;
                solver.original_scale(coef, intercept);
                std::vector<double> scores(ho_idx.size());
                for (std::size_t t = 0; t < ho_idx.size(); ++t) {
                    auto row = train.row(ho_idx[t]);
                    scores[t] =
                        intercept + kernels::dot(row.data(), coef.data(), train.p());
                }
                if (pooled) {
                    for (std::size_t t = 0; t < ho_idx.size(); ++t)
                        pooled_scores[k][ho_idx[t]] = scores[t];
                } else {
                    result.fold_aucs[k][r * folds + f] = auc(ho_labels, scores);
                }
            }
        }
        if (pooled) {
            for (std::size_t k = 0; k < nlambda; ++k)
                result.fold_aucs[k][r] = auc(train.target(), pooled_scores[k]);
        }
    };

    std::size_t threads = options.threads;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, repeats);
    if (threads <= 1) {
        for (std::size_t r = 0; r < repeats; ++r) run_repeat(r);
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr first_error;
        std::mutex error_mutex;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t r = t; r < repeats; r += threads) run_repeat(r);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    result.mean_auc.resize(nlambda);
    result.sd_auc.resize(nlambda);
    const auto m = static_cast<double>(slots_per_lambda);
    for (std::size_t k = 0; k < nlambda; ++k) {
        double s = 0.0;
        for (double v : result.fold_aucs[k]) s += v;
        const double mean = s / m;
        double ss = 0.0;
        for (double v : result.fold_aucs[k]) ss += (v - mean) * (v - mean);
        result.mean_auc[k] = mean;
        result.sd_auc[k] = slots_per_lambda > 1 ? std::sqrt(ss / (m - 1.0)) : 0.0;
    }

    std::size_t best = 0;
    for (std::size_t k = 1; k < nlambda; ++k)
        if (result.mean_auc[k] > result.mean_auc[best]) best = k;

    if (options.one_se_rule) {
        const double threshold =
            result.mean_auc[best] - result.sd_auc[best] / std::sqrt(m);
        for (std::size_t k = 0; k <= best; ++k) {
            if (result.mean_auc[k] >= threshold) {
                best = k;
                break;
            }
        }
    }
    result.selected_index = best;
    result.selected_lambda = grid[best];
    return result;
}

}  // namespace calex
