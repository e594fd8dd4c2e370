#pragma once

#include <Eigen/Core>

namespace spdc {

/// n-point Gauss-Legendre rule on [-1, 1]; nodes ascending.
struct GaussLegendreRule {
    Eigen::ArrayXd nodes;
    Eigen::ArrayXd weights;
};

/// Cached rule, built once per order by the Golub-Welsch eigenproblem.
/// Safe to call concurrently; the returned reference stays valid.
const GaussLegendreRule& gauss_legendre(int n);

} // namespace spdc
