#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "gpquad/gaussian.hpp"

namespace gpquad {

/// Root-mean-square error over a trajectory: sqrt(1/K sum ||x_k - m_k||^2).
double rmse(const std::vector<Eigen::VectorXd>& truth,
            const std::vector<Eigen::VectorXd>& estimates);

/// Time-averaged Gaussian negative log-likelihood of the truth under the
/// per-step estimates: mean of 1/2 [log|2 pi P_k| + e_k^T P_k^-1 e_k].
double nll(const std::vector<Eigen::VectorXd>& truth,
           const std::vector<Eigen::VectorXd>& means,
           const std::vector<Eigen::MatrixXd>& covs);

/// Inclination (credibility) indicator per run:
///   nu_r = 10/K sum_k log10( e^T P_k^-1 e / e^T Sigma_k^-1 e ),
/// where Sigma_k is the across-runs sample mean-square-error matrix at
/// step k. Positive values flag an optimistic filter (covariance smaller
/// than the actual error), negative a pessimistic one. Needs at least two
/// runs; throws DegenerateEnsembleError when some Sigma_k is singular.
std::vector<double> inclination_per_run(
    const std::vector<std::vector<Eigen::VectorXd>>& truth_runs,
    const std::vector<std::vector<Eigen::VectorXd>>& mean_runs,
    const std::vector<std::vector<Eigen::MatrixXd>>& cov_runs);

/// Average of inclination_per_run over the runs.
double inclination(const std::vector<std::vector<Eigen::VectorXd>>& truth_runs,
                   const std::vector<std::vector<Eigen::VectorXd>>& mean_runs,
                   const std::vector<std::vector<Eigen::MatrixXd>>& cov_runs);

/// Symmetrized KL divergence between two Gaussians:
/// 1/4 [ d^T S1^-1 d + d^T S2^-1 d + tr(S1^-1 S2) + tr(S2^-1 S1) - 2E ].
double skl(const GaussianDensity& g1, const GaussianDensity& g2);

/// Point estimate with a bootstrap +/- 2 standard deviation band.
struct BootstrapCi {
    double mean = 0.0;
    double band = 0.0; // two standard deviations of the resampled means

    double lower() const { return mean - band; }
    double upper() const { return mean + band; }
};

/// Seeded bootstrap of the sample mean: n_resamples resamples with
/// replacement; band = 2 x standard deviation of the resampled means.
BootstrapCi bootstrap_ci(const std::vector<double>& values, int n_resamples,
                         std::uint64_t seed);

} // namespace gpquad
