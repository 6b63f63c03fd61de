#pragma once

#include <cstddef>
#include <string>

#include <Eigen/Core>

namespace gpquad {

/// Hard cap on tensor-product grid sizes; overridable per call.
inline constexpr std::size_t kDefaultPointBudget = 100000;

/// A quadrature rule in standard-Gaussian space: unit sigma-points xi_i
/// (one per column) with mean and covariance weights. cov_weights equal
/// mean_weights for every rule except the scaled unscented baseline.
struct UnitPointSet {
    Eigen::MatrixXd points;       // D x N
    Eigen::VectorXd mean_weights; // N
    Eigen::VectorXd cov_weights;  // N
    std::string rule_name;

    Eigen::Index dim() const { return points.rows(); }
    Eigen::Index count() const { return points.cols(); }
};

/// A univariate Gaussian quadrature rule: nodes with matching weights.
struct HermiteRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

/// Unscented rule: 2D+1 points [0, c*I, -c*I] with c = sqrt(D + kappa),
/// w0 = kappa/(D + kappa) and wi = 1/(2(D + kappa)).
UnitPointSet ut_points(int dim, double kappa);

/// Scaled unscented rule. With spread alpha_ut and prior weight beta_ut,
/// lambda = alpha_ut^2 (D + kappa) - D replaces kappa in the point and
/// mean-weight formulas, and the centre covariance weight picks up the
/// extra term (1 - alpha_ut^2 + beta_ut). For alpha_ut = 1 the points and
/// mean weights reduce to ut_points(dim, kappa).
UnitPointSet scaled_ut_points(int dim, double kappa, double alpha_ut, double beta_ut);

/// Spherical-radial rule: 2D points [c*I, -c*I] with c = sqrt(D), equal
/// weights 1/(2D). Same as the unscented rule without the centre point.
UnitPointSet sr_points(int dim);

/// Gauss-Hermite rule for the standard Gaussian weight (probabilists'
/// convention), computed from the eigen-decomposition of the symmetric
/// Jacobi matrix. Nodes are strictly increasing and exactly symmetric
/// about zero; weights sum to one. Exact for polynomials of degree
/// <= 2*order - 1.
HermiteRule hermite_rule_1d(int order);

/// Tensor-product Gauss-Hermite rule with order^dim points in row-major
/// Cartesian-product order (last dimension varies fastest). Throws
/// ResourceLimitError when the grid exceeds max_points.
UnitPointSet gh_points(int dim, int order, std::size_t max_points = kDefaultPointBudget);

} // namespace gpquad
