#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace calex {

struct LoessFit {
    std::vector<double> fitted;
    std::vector<double> se;  // sqrt(sigma2 * ||equivalent kernel||^2)
};

// Degree-1 locally weighted regression of y on x with tricube weights over
// the ceil(span*n) nearest neighbors, evaluated at `eval_points`. The
// residual variance behind `se` is estimated from the loess residuals at the
// data points with the trace of the smoother hat as degrees of freedom.
LoessFit loess_smooth(std::span<const double> x, std::span<const double> y,
                      double span, std::span<const double> eval_points);

}  // namespace calex
