#pragma once

// Shape measures on sampled curves, shared by the unit tests and the
// acceptance runner.

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace metrics {

/// Full width at half maximum of the peak at `peak`, with linear
/// interpolation of the crossings. Empty when a side never drops below half.
inline std::optional<double> fwhm(const Eigen::VectorXd& x, const Eigen::VectorXd& y, Eigen::Index peak) {
    const double half = y[peak] / 2;
    Eigen::Index l = peak, r = peak;
    while (l > 0 && y[l] > half) --l;
    while (r < y.size() - 1 && y[r] > half) ++r;
    if (y[l] > half || y[r] > half) return std::nullopt;
    const double xl = x[l] + (half - y[l]) / (y[l + 1] - y[l]) * (x[l + 1] - x[l]);
    const double xr = x[r - 1] + (half - y[r - 1]) / (y[r] - y[r - 1]) * (x[r] - x[r - 1]);
    return xr - xl;
}

inline std::optional<double> fwhm(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    Eigen::Index peak;
    y.maxCoeff(&peak);
    return fwhm(x, y, peak);
}

/// Indices of strict interior local maxima.
inline std::vector<Eigen::Index> local_maxima(const Eigen::VectorXd& y) {
    std::vector<Eigen::Index> out;
    for (Eigen::Index i = 1; i + 1 < y.size(); ++i)
        if (y[i] > y[i - 1] && y[i] >= y[i + 1]) out.push_back(i);
    return out;
}

/// Standard deviation of x under the weights y.
inline double rms_width(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const double mass = y.sum();
    const double mean = x.dot(y) / mass;
    return std::sqrt((x.array() - mean).square().matrix().dot(y) / mass);
}

} // namespace metrics
