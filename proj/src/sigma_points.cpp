#include "gpquad/sigma_points.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "gpquad/errors.hpp"

namespace gpquad {

namespace {

void check_dim(int dim) {
    if (dim < 1) {
        throw InvalidParameterError("dimension must be at least 1, got " +
                                    std::to_string(dim));
    }
}

// Columns [center?, +c*e_1..+c*e_D, -c*e_1..-c*e_D]; fixed ordering keeps
// golden outputs stable.
Eigen::MatrixXd symmetric_axis_points(int dim, double c, bool center) {
    const Eigen::Index n = (center ? 1 : 0) + 2 * dim;
    Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(dim, n);
    const Eigen::Index base = center ? 1 : 0;
    for (int d = 0; d < dim; ++d) {
        pts(d, base + d) = c;
        pts(d, base + dim + d) = -c;
    }
    return pts;
}

} // namespace

UnitPointSet ut_points(int dim, double kappa) {
    check_dim(dim);
    const double scale = dim + kappa;
    if (scale <= 0.0) {
        throw InvalidParameterError("unscented rule needs dim + kappa > 0");
    }
    UnitPointSet rule;
    rule.rule_name = "ut";
    rule.points = symmetric_axis_points(dim, std::sqrt(scale), true);
    rule.mean_weights = Eigen::VectorXd::Constant(2 * dim + 1, 1.0 / (2.0 * scale));
    rule.mean_weights(0) = kappa / scale;
    rule.cov_weights = rule.mean_weights;
    return rule;
}

UnitPointSet scaled_ut_points(int dim, double kappa, double alpha_ut, double beta_ut) {
    check_dim(dim);
    const double lambda = alpha_ut * alpha_ut * (dim + kappa) - dim;
    const double scale = dim + lambda;
    if (scale == 0.0) {
        throw InvalidParameterError("scaled unscented rule needs dim + lambda != 0");
    }
    if (scale < 0.0) {
        throw InvalidParameterError("scaled unscented rule needs dim + lambda > 0 "
                                    "for real-valued points");
    }
    UnitPointSet rule;
    rule.rule_name = "scaled-ut";
    rule.points = symmetric_axis_points(dim, std::sqrt(scale), true);
    rule.mean_weights = Eigen::VectorXd::Constant(2 * dim + 1, 1.0 / (2.0 * scale));
    rule.mean_weights(0) = lambda / scale;
    rule.cov_weights = rule.mean_weights;
    rule.cov_weights(0) += 1.0 - alpha_ut * alpha_ut + beta_ut;
    return rule;
}

UnitPointSet sr_points(int dim) {
    check_dim(dim);
    UnitPointSet rule;
    rule.rule_name = "sr";
    rule.points = symmetric_axis_points(dim, std::sqrt(static_cast<double>(dim)), false);
    rule.mean_weights = Eigen::VectorXd::Constant(2 * dim, 1.0 / (2.0 * dim));
    rule.cov_weights = rule.mean_weights;
    return rule;
}

HermiteRule hermite_rule_1d(int order) {
    if (order < 1) {
        throw InvalidParameterError("Hermite rule order must be at least 1");
    }
    HermiteRule rule;
    if (order == 1) {
        rule.nodes = Eigen::VectorXd::Zero(1);
        rule.weights = Eigen::VectorXd::Ones(1);
        return rule;
    }
    // Golub-Welsch: the Jacobi matrix of the probabilists' Hermite
    // recurrence has zero diagonal and off-diagonal sqrt(k). Its
    // eigenvalues are the nodes; squared first eigenvector components are
    // the weights (total mass of N(0,1) is one).
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) {
        const double b = std::sqrt(static_cast<double>(k));
        jacobi(k - 1, k) = b;
        jacobi(k, k - 1) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    rule.nodes = es.eigenvalues();
    rule.weights = es.eigenvectors().row(0).transpose().cwiseAbs2();

    // Enforce exact +/- symmetry of the node set.
    for (int i = 0; i < order / 2; ++i) {
        const int j = order - 1 - i;
        const double node = 0.5 * (rule.nodes(j) - rule.nodes(i));
        rule.nodes(i) = -node;
        rule.nodes(j) = node;
        const double weight = 0.5 * (rule.weights(i) + rule.weights(j));
        rule.weights(i) = weight;
        rule.weights(j) = weight;
    }
    if (order % 2 == 1) {
        rule.nodes(order / 2) = 0.0;
    }
    return rule;
}

UnitPointSet gh_points(int dim, int order, std::size_t max_points) {
    check_dim(dim);
    if (order < 1) {
        throw InvalidParameterError("Gauss-Hermite order must be at least 1");
    }
    std::size_t count = 1;
    for (int d = 0; d < dim; ++d) {
        if (count > max_points / static_cast<std::size_t>(order)) {
            throw ResourceLimitError(
                "Gauss-Hermite grid " + std::to_string(order) + "^" +
                std::to_string(dim) + " exceeds the point budget of " +
                std::to_string(max_points));
        }
        count *= static_cast<std::size_t>(order);
    }
    const HermiteRule rule1d = hermite_rule_1d(order);

    UnitPointSet rule;
    rule.rule_name = "gh";
    rule.points.resize(dim, static_cast<Eigen::Index>(count));
    rule.mean_weights.resize(static_cast<Eigen::Index>(count));
    for (std::size_t n = 0; n < count; ++n) {
        std::size_t rest = n;
        double weight = 1.0;
        // Row-major multi-index: last dimension varies fastest.
        for (int d = dim - 1; d >= 0; --d) {
            const std::size_t i = rest % static_cast<std::size_t>(order);
            rest /= static_cast<std::size_t>(order);
            rule.points(d, static_cast<Eigen::Index>(n)) = rule1d.nodes(static_cast<Eigen::Index>(i));
            weight *= rule1d.weights(static_cast<Eigen::Index>(i));
        }
        rule.mean_weights(static_cast<Eigen::Index>(n)) = weight;
    }
    rule.cov_weights = rule.mean_weights;
    return rule;
}

} // namespace gpquad
