#include "spdc/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace spdc {

namespace {

GaussLegendreRule build_rule(int n) {
    // Jacobi matrix of the Legendre recurrence: zero diagonal,
    // off-diagonal k / sqrt(4k^2 - 1).
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
    for (int k = 1; k < n; ++k) sub[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw std::runtime_error("Gauss-Legendre eigensolver failed");

    GaussLegendreRule rule;
    rule.nodes = solver.eigenvalues().array();
    rule.weights = 2.0 * solver.eigenvectors().row(0).transpose().array().square();

    // Exact symmetry: x_k = -x_{n-1-k}, w_k = w_{n-1-k}.
    for (int k = 0; k < n / 2; ++k) {
        const int j = n - 1 - k;
        const double x = 0.5 * (rule.nodes[j] - rule.nodes[k]);
        const double w = 0.5 * (rule.weights[j] + rule.weights[k]);
        rule.nodes[k] = -x;
        rule.nodes[j] = x;
        rule.weights[k] = rule.weights[j] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

} // namespace

const GaussLegendreRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussLegendreRule>(build_rule(n));
    return *slot;
}

} // namespace spdc
