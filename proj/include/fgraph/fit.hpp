#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

namespace fgraph::fit {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

inline LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_linear: need >= 2 matched samples");
    double n = (double)x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0) throw std::invalid_argument("fit_linear: degenerate abscissae");
    LinearFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

/// Growth exponent: slope of log y against log x. Zero y values are clamped
/// to 1 so flat (bounded) sequences fit a near-zero exponent.
inline LinearFit fit_loglog(std::span<const double> x, std::span<const double> y) {
    std::vector<double> lx(x.size()), ly(y.size());
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0) throw std::invalid_argument("fit_loglog: x must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i] < 1.0 ? 1.0 : y[i]);
    }
    return fit_linear(lx, ly);
}

}  // namespace fgraph::fit
