#include "gpquad/gpq.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "gpquad/errors.hpp"

namespace gpquad {

namespace {

// Clamp tolerance for quantities that are nonnegative in exact arithmetic.
constexpr double kNegativityTolerance = 1e-9;

void check_params(const Eigen::MatrixXd& points, const RbfKernelParams& params) {
    if (params.alpha <= 0.0) {
        throw InvalidParameterError("kernel scaling alpha must be positive");
    }
    if (params.lengthscales.size() != points.rows()) {
        throw InvalidParameterError("kernel lengthscale count " +
                                    std::to_string(params.lengthscales.size()) +
                                    " does not match point dimension " +
                                    std::to_string(points.rows()));
    }
    if ((params.lengthscales.array() <= 0.0).any()) {
        throw InvalidParameterError("kernel lengthscales must be positive");
    }
}

// Quantities like sigma_bar_sq are nonnegative in exact arithmetic, but
// their round-off floor grows with the conditioning of the solves, so the
// tolerable negativity is scaled by a pivot-ratio condition estimate.
double clamp_nonnegative(double value, double tolerance, const char* label) {
    if (value >= 0.0) {
        return value;
    }
    if (value >= -tolerance) {
        return 0.0;
    }
    throw IllConditionedKernelError(std::string(label) + " is negative beyond " +
                                    "round-off tolerance: " + std::to_string(value));
}

Eigen::LLT<Eigen::MatrixXd> factorize_kernel(const KernelMatrix& km) {
    Eigen::LLT<Eigen::MatrixXd> llt(km.gram);
    if (llt.info() != Eigen::Success) {
        throw IllConditionedKernelError("kernel matrix lost positive definiteness");
    }
    return llt;
}

double negativity_tolerance(const Eigen::LLT<Eigen::MatrixXd>& llt, double alpha) {
    const Eigen::VectorXd pivots = Eigen::MatrixXd(llt.matrixL()).diagonal();
    const double ratio = pivots.maxCoeff() / pivots.minCoeff();
    const double n = static_cast<double>(pivots.size());
    return kNegativityTolerance * alpha * alpha * std::max(1.0, n * ratio * ratio);
}

} // namespace

double rbf_kernel(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj,
                  const RbfKernelParams& params) {
    if (xi.size() != xj.size() || xi.size() != params.lengthscales.size()) {
        throw InvalidParameterError("rbf_kernel argument dimensions disagree");
    }
    const Eigen::ArrayXd d = (xi - xj).array() / params.lengthscales.array();
    return params.alpha * params.alpha * std::exp(-0.5 * d.square().sum());
}

KernelMatrix kernel_matrix(const Eigen::MatrixXd& points, const RbfKernelParams& params) {
    check_params(points, params);
    const Eigen::Index n = points.cols();
    if (n < 1) {
        throw InvalidParameterError("kernel matrix needs at least one point");
    }
    const double alpha_sq = params.alpha * params.alpha;
    const Eigen::ArrayXd inv_ls = params.lengthscales.array().inverse();

    KernelMatrix km;
    km.gram.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        km.gram(i, i) = alpha_sq;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const Eigen::ArrayXd d = (points.col(i) - points.col(j)).array() * inv_ls;
            const double dist_sq = d.square().sum();
            if (dist_sq < 1e-24) {
                throw IllConditionedKernelError(
                    "duplicate sigma-points at columns " + std::to_string(i) +
                    " and " + std::to_string(j));
            }
            km.gram(i, j) = km.gram(j, i) = alpha_sq * std::exp(-0.5 * dist_sq);
        }
    }

    Eigen::LLT<Eigen::MatrixXd> llt(km.gram);
    if (llt.info() != Eigen::Success) {
        km.jitter_used = 1e-8 * alpha_sq;
        km.gram.diagonal().array() += km.jitter_used;
        llt.compute(km.gram);
        if (llt.info() != Eigen::Success) {
            throw IllConditionedKernelError(
                "kernel matrix is singular even after jitter");
        }
    }
    return km;
}

Eigen::VectorXd kernel_mean_vector(const Eigen::MatrixXd& points,
                                   const RbfKernelParams& params) {
    check_params(points, params);
    const Eigen::ArrayXd ls_sq = params.lengthscales.array().square();
    // alpha^2 |Lambda^-1 + I|^-1/2, diagonal Lambda
    const double scale =
        params.alpha * params.alpha / std::sqrt((ls_sq.inverse() + 1.0).prod());
    const Eigen::ArrayXd inv_ls_sq_p1 = (ls_sq + 1.0).inverse();

    Eigen::VectorXd q(points.cols());
    for (Eigen::Index i = 0; i < points.cols(); ++i) {
        const Eigen::ArrayXd xi = points.col(i).array();
        q(i) = scale * std::exp(-0.5 * (xi.square() * inv_ls_sq_p1).sum());
    }
    return q;
}

Eigen::MatrixXd kernel_cov_matrix(const Eigen::MatrixXd& points,
                                  const RbfKernelParams& params) {
    check_params(points, params);
    const Eigen::Index n = points.cols();
    const Eigen::ArrayXd inv_ls_sq = params.lengthscales.array().square().inverse();
    const Eigen::ArrayXd two_inv_p1 = 2.0 * inv_ls_sq + 1.0;
    const double alpha4 = std::pow(params.alpha, 4);
    const double scale = alpha4 / std::sqrt(two_inv_p1.prod());

    // Per-point quadratic forms xi^T Lambda^-1 xi, reused across pairs.
    Eigen::VectorXd self_form(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        self_form(i) = (points.col(i).array().square() * inv_ls_sq).sum();
    }

    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const Eigen::ArrayXd z =
                (points.col(i) + points.col(j)).array() * inv_ls_sq;
            const double cross = (z.square() / two_inv_p1).sum();
            const double value =
                scale * std::exp(-0.5 * (self_form(i) + self_form(j) - cross));
            cov(i, j) = cov(j, i) = value;
        }
    }
    return cov;
}

Eigen::MatrixXd kernel_cross_matrix(const Eigen::MatrixXd& points,
                                    const RbfKernelParams& params) {
    const Eigen::VectorXd q = kernel_mean_vector(points, params);
    const Eigen::ArrayXd inv_ls_sq_p1 =
        (params.lengthscales.array().square() + 1.0).inverse();

    Eigen::MatrixXd cross(points.rows(), points.cols());
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
        cross.col(j) = q(j) * (points.col(j).array() * inv_ls_sq_p1).matrix();
    }
    return cross;
}

GpqWeights gpq_weights(const Eigen::MatrixXd& unit_points, const RbfKernelParams& params) {
    const KernelMatrix km = kernel_matrix(unit_points, params);
    const Eigen::LLT<Eigen::MatrixXd> llt = factorize_kernel(km);

    const Eigen::VectorXd q = kernel_mean_vector(unit_points, params);
    const Eigen::MatrixXd cov = kernel_cov_matrix(unit_points, params);
    const Eigen::MatrixXd cross = kernel_cross_matrix(unit_points, params);

    GpqWeights weights;
    weights.w_mean = llt.solve(q);
    const Eigen::MatrixXd kinv_cov = llt.solve(cov);
    weights.w_cov = symmetrize(llt.solve(kinv_cov.transpose()).transpose());
    weights.w_cross = llt.solve(cross.transpose()).transpose();
    weights.sigma_bar_sq =
        clamp_nonnegative(params.alpha * params.alpha - kinv_cov.trace(),
                          negativity_tolerance(llt, params.alpha),
                          "expected GP variance");
    weights.unit_points = unit_points;
    weights.kernel_params = params;
    return weights;
}

GpqWeights gpq_weights(const UnitPointSet& rule, const RbfKernelParams& params) {
    return gpq_weights(rule.points, params);
}

MomentTransformResult gpq_transform(const VectorFunction& g,
                                    const GaussianDensity& input,
                                    const GpqWeights& weights) {
    if (g.in_dim != input.dim()) {
        throw InvalidParameterError("function input dimension does not match density");
    }
    if (weights.unit_points.rows() != input.dim()) {
        throw InvalidParameterError("GPQ weights were built for dimension " +
                                    std::to_string(weights.unit_points.rows()) +
                                    ", input has " + std::to_string(input.dim()));
    }
    const Eigen::MatrixXd chol = cholesky_with_jitter(input.cov);
    const Eigen::MatrixXd points =
        (chol * weights.unit_points).colwise() + input.mean;
    const Eigen::MatrixXd values = evaluate_columns(g, points); // E x N

    MomentTransformResult result;
    result.out_mean = values * weights.w_mean;
    Eigen::MatrixXd out_cov =
        values * weights.w_cov * values.transpose() -
        result.out_mean * result.out_mean.transpose();
    out_cov.diagonal().array() += weights.sigma_bar_sq;
    result.out_cov = symmetrize(out_cov);
    // Unit-space input mean is zero, so the cross-covariance back-maps
    // through the Cholesky factor alone.
    result.cross_cov = chol * (weights.w_cross * values.transpose());
    result.extra.sigma_bar_sq = weights.sigma_bar_sq;
    result.extra.function_values = values;
    return result;
}

MomentTransformResult gpq_transform(const VectorFunction& g,
                                    const GaussianDensity& input,
                                    const Eigen::MatrixXd& unit_points,
                                    const RbfKernelParams& params) {
    return gpq_transform(g, input, gpq_weights(unit_points, params));
}

std::pair<double, double> gp_posterior(const Eigen::MatrixXd& points,
                                       const Eigen::VectorXd& values,
                                       const RbfKernelParams& params,
                                       const Eigen::VectorXd& query) {
    if (values.size() != points.cols()) {
        throw InvalidParameterError("observation count does not match point count");
    }
    const KernelMatrix km = kernel_matrix(points, params);
    const Eigen::LLT<Eigen::MatrixXd> llt = factorize_kernel(km);

    Eigen::VectorXd kvec(points.cols());
    for (Eigen::Index i = 0; i < points.cols(); ++i) {
        kvec(i) = rbf_kernel(query, points.col(i), params);
    }
    const double mean = kvec.dot(llt.solve(values));
    const double variance = clamp_nonnegative(
        params.alpha * params.alpha - kvec.dot(llt.solve(kvec)),
        negativity_tolerance(llt, params.alpha), "GP variance");
    return {mean, variance};
}

double integral_variance(const Eigen::MatrixXd& points, const RbfKernelParams& params) {
    const KernelMatrix km = kernel_matrix(points, params);
    const Eigen::LLT<Eigen::MatrixXd> llt = factorize_kernel(km);
    const Eigen::VectorXd q = kernel_mean_vector(points, params);
    // E[k(xi, xi')] for two independent N(0, I) arguments
    const Eigen::ArrayXd inv_ls_sq = params.lengthscales.array().square().inverse();
    const double prior_term =
        params.alpha * params.alpha / std::sqrt((2.0 * inv_ls_sq + 1.0).prod());
    return clamp_nonnegative(prior_term - q.dot(llt.solve(q)),
                             negativity_tolerance(llt, params.alpha),
                             "integral variance");
}

} // namespace gpquad
