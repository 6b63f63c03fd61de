#pragma once

#include <utility>

#include <Eigen/Core>

#include "gpquad/gaussian.hpp"
#include "gpquad/transform.hpp"

namespace gpquad {

/// RBF (Gaussian) kernel with automatic relevance determination:
/// k(xi, xj) = alpha^2 exp(-1/2 (xi-xj)^T Lambda^-1 (xi-xj)) with
/// Lambda = diag(l_1^2 ... l_D^2). Lengthscales live in unit-sigma-point
/// space: the whole quadrature operates after the change of variables
/// that maps the input density onto N(0, I).
struct RbfKernelParams {
    double alpha = 1.0;
    Eigen::VectorXd lengthscales;

    static RbfKernelParams isotropic(double alpha, double lengthscale, Eigen::Index dim) {
        return {alpha, Eigen::VectorXd::Constant(dim, lengthscale)};
    }
};

/// Kernel Gram matrix together with the jitter that was needed to make it
/// positive definite (0 when none was).
struct KernelMatrix {
    Eigen::MatrixXd gram;
    double jitter_used = 0.0;
};

double rbf_kernel(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj,
                  const RbfKernelParams& params);

/// Pairwise kernel evaluations of the point columns. Adds a jitter of
/// 1e-8 * alpha^2 on the diagonal if the first factorization fails;
/// throws IllConditionedKernelError on duplicate points or persistent
/// singularity.
KernelMatrix kernel_matrix(const Eigen::MatrixXd& points, const RbfKernelParams& params);

/// Gaussian-weighted kernel expectations under xi ~ N(0, I). These are the
/// closed forms that make the quadrature weights computable without any
/// further numerical integration:
///
///   q_i   = E[k(xi, xi_i)]
///   Q_ij  = E[k(xi, xi_i) k(xi, xi_j)]
///   R_:j  = E[xi k(xi, xi_j)]            (equals q_j (Lambda+I)^-1 xi_j)
///   k_bar = E[k(xi, xi)] = alpha^2
Eigen::VectorXd kernel_mean_vector(const Eigen::MatrixXd& points,
                                   const RbfKernelParams& params);
Eigen::MatrixXd kernel_cov_matrix(const Eigen::MatrixXd& points,
                                  const RbfKernelParams& params);
Eigen::MatrixXd kernel_cross_matrix(const Eigen::MatrixXd& points,
                                    const RbfKernelParams& params);

/// Quadrature weights of the GP-based transform, precomputed from the
/// kernel expectations for one set of unit sigma-points:
///
///   w_mean  = K^-1 q                      (transformed mean)
///   w_cov   = K^-1 Q K^-1                 (transformed covariance)
///   w_cross = R K^-1                      (input-output cross-covariance)
///   sigma_bar_sq = k_bar - tr(Q K^-1)     (expected GP variance)
///
/// The weights depend only on the unit points and kernel parameters, never
/// on the integrand or the input moments, so one instance is reusable for
/// any number of transforms (the intended filtering pattern). Immutable
/// and safe to share across threads.
struct GpqWeights {
    Eigen::VectorXd w_mean;  // N
    Eigen::MatrixXd w_cov;   // N x N, symmetric
    Eigen::MatrixXd w_cross; // D x N
    double sigma_bar_sq = 0.0;
    Eigen::MatrixXd unit_points; // D x N
    RbfKernelParams kernel_params;
};

GpqWeights gpq_weights(const Eigen::MatrixXd& unit_points, const RbfKernelParams& params);

/// Convenience overload using the points of a classical rule (its weights
/// are ignored; the GP quadrature derives its own).
GpqWeights gpq_weights(const UnitPointSet& rule, const RbfKernelParams& params);

/// GP-quadrature moment transform. Moments are computed in unit space,
/// where the input is N(0, I); the output covariance carries the extra
/// sigma_bar_sq * I term that accounts for the integration error, and the
/// cross-covariance is mapped back through the input Cholesky factor.
MomentTransformResult gpq_transform(const VectorFunction& g,
                                    const GaussianDensity& input,
                                    const GpqWeights& weights);

MomentTransformResult gpq_transform(const VectorFunction& g,
                                    const GaussianDensity& input,
                                    const Eigen::MatrixXd& unit_points,
                                    const RbfKernelParams& params);

/// Posterior mean and variance of a noiseless GP regression at one query
/// point. Diagnostic companion of the transform; the variance is clamped
/// to zero from round-off negativity.
std::pair<double, double> gp_posterior(const Eigen::MatrixXd& points,
                                       const Eigen::VectorXd& values,
                                       const RbfKernelParams& params,
                                       const Eigen::VectorXd& query);

/// Posterior variance of the integral E[g] itself under the GP model:
/// E[k(xi, xi')] - q^T K^-1 q. Standalone diagnostic.
double integral_variance(const Eigen::MatrixXd& points, const RbfKernelParams& params);

/// gpq_transform bound to fixed precomputed weights.
class GpqTransform final : public MomentTransform {
public:
    explicit GpqTransform(GpqWeights weights) : weights_(std::move(weights)) {}

    GpqTransform(const UnitPointSet& rule, const RbfKernelParams& params)
        : weights_(gpq_weights(rule, params)) {}

    MomentTransformResult apply(const VectorFunction& g,
                                const GaussianDensity& input) const override {
        return gpq_transform(g, input, weights_);
    }

    const GpqWeights& weights() const { return weights_; }

private:
    GpqWeights weights_;
};

} // namespace gpquad
