#include "calex/loess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "calex/error.hpp"

namespace calex {

namespace {

double tricube(double u) {
    if (u >= 1.0) return 0.0;
    const double t = 1.0 - u * u * u;
    return t * t * t;
}

struct LocalFit {
    double fitted = 0.0;
    double lnorm2 = 0.0;    // ||l(x0)||^2
    double self_l = 0.0;    // l(x0) entry of a requested index, for trace
};

// One weighted linear fit at x0 over the q nearest sorted points.
// `self` is the sorted index whose hat entry the caller wants (or npos).
LocalFit local_fit(std::span<const double> xs, std::span<const double> ys,
                   std::size_t q, double x0, std::size_t self) {
    const std::size_t n = xs.size();

    // nearest-q window is contiguous in sorted order
    std::size_t lo = static_cast<std::size_t>(
        std::lower_bound(xs.begin(), xs.end(), x0) - xs.begin());
    std::size_t hi = lo;
    while (hi - lo < q) {
        const bool can_left = lo > 0;
        const bool can_right = hi < n;
        if (can_left && (!can_right || x0 - xs[lo - 1] <= xs[hi] - x0))
            --lo;
        else
            ++hi;
    }

    double h = 0.0;
    for (std::size_t i = lo; i < hi; ++i) h = std::max(h, std::fabs(xs[i] - x0));

    std::vector<double> w(hi - lo);
    double wsum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        w[i - lo] = h > 0.0 ? tricube(std::fabs(xs[i] - x0) / h) : 1.0;
        wsum += w[i - lo];
    }
    if (wsum <= 0.0) {  // every neighbor exactly at distance h
        std::fill(w.begin(), w.end(), 1.0);
        wsum = static_cast<double>(hi - lo);
    }

    double s0 = 0.0, s1 = 0.0, s2 = 0.0, t0 = 0.0, t1 = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double wi = w[i - lo];
        const double dx = xs[i] - x0;
        s0 += wi;
        s1 += wi * dx;
        s2 += wi * dx * dx;
        t0 += wi * ys[i];
        t1 += wi * dx * ys[i];
    }

    LocalFit out;
    const double det = s0 * s2 - s1 * s1;
    const double scale = s0 * s2;
    if (det > 1e-12 * std::max(scale, 1e-300)) {
        out.fitted = (s2 * t0 - s1 * t1) / det;
        for (std::size_t i = lo; i < hi; ++i) {
            const double li = w[i - lo] * (s2 - s1 * (xs[i] - x0)) / det;
            out.lnorm2 += li * li;
            if (i == self) out.self_l = li;
        }
    } else {  // degenerate window (all x equal): weighted mean
        out.fitted = t0 / s0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double li = w[i - lo] / s0;
            out.lnorm2 += li * li;
            if (i == self) out.self_l = li;
        }
    }
    return out;
}

}  // namespace

LoessFit loess_smooth(std::span<const double> x, std::span<const double> y,
                      double span, std::span<const double> eval_points) {
    const std::size_t n = x.size();
    if (n != y.size()) throw Error(ErrorKind::LengthMismatch, "loess x/y lengths");
    if (n < 2) throw Error(ErrorKind::TooFewPoints, "loess needs at least 2 points");
    if (!(span > 0.0 && span <= 1.0)) throw Error(ErrorKind::BadSpan, std::to_string(span));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x[a] != x[b] ? x[a] < x[b] : a < b;
    });
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = x[order[i]];
        ys[i] = y[order[i]];
    }

    const std::size_t q = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(span * static_cast<double>(n))), 2, n);

    // residual variance from the fit at the data points
    double rss = 0.0;
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const LocalFit f = local_fit(xs, ys, q, xs[i], i);
        const double e = ys[i] - f.fitted;
        rss += e * e;
        trace += f.self_l;
    }
    const double dof = std::max(static_cast<double>(n) - trace, 1.0);
    const double sigma2 = rss / dof;

    LoessFit out;
    out.fitted.resize(eval_points.size());
    out.se.resize(eval_points.size());
    for (std::size_t k = 0; k < eval_points.size(); ++k) {
        const LocalFit f = local_fit(xs, ys, q, eval_points[k], n);
        out.fitted[k] = f.fitted;
        out.se[k] = std::sqrt(std::max(0.0, sigma2 * f.lnorm2));
    }
    return out;
}

}  // namespace calex
