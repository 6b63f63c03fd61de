#include "gpquad/filtering.hpp"

#include <string>

#include <Eigen/Cholesky>

#include "gpquad/errors.hpp"

namespace gpquad {

GaussianDensity predict(const MomentTransform& transform,
                        const GaussianDensity& posterior,
                        const TimeVaryingDynamics& dynamics,
                        const Eigen::MatrixXd& process_noise_cov, int k) {
    const Eigen::Index d = posterior.dim();
    VectorFunction f{d, d, [&dynamics, k](const Eigen::VectorXd& x) {
                         return dynamics(x, k);
                     }};
    const MomentTransformResult res = transform.apply(f, posterior);
    return {res.out_mean, symmetrize(res.out_cov + process_noise_cov)};
}

GaussianDensity update(const MomentTransform& transform,
                       const GaussianDensity& prior,
                       const VectorFunction& observation,
                       const Eigen::MatrixXd& measurement_noise_cov,
                       const Eigen::VectorXd& measurement,
                       InnovationRecord* innovation) {
    if (!measurement.allFinite()) {
        throw InvalidParameterError("measurement contains non-finite values");
    }
    const MomentTransformResult res = transform.apply(observation, prior);
    const Eigen::MatrixXd innov_cov =
        symmetrize(res.out_cov + measurement_noise_cov);

    Eigen::LLT<Eigen::MatrixXd> llt(innov_cov);
    if (llt.info() != Eigen::Success) {
        Eigen::MatrixXd bumped = innov_cov;
        bumped.diagonal().array() +=
            1e-12 * innov_cov.trace() / static_cast<double>(innov_cov.rows());
        llt.compute(bumped);
        if (llt.info() != Eigen::Success) {
            throw SingularInnovationError("innovation covariance is not positive definite");
        }
    }
    // gain = C S^-1, via S G^T = C^T
    const Eigen::MatrixXd gain = llt.solve(res.cross_cov.transpose()).transpose();

    GaussianDensity posterior;
    posterior.mean = prior.mean + gain * (measurement - res.out_mean);
    posterior.cov =
        symmetrize(prior.cov - gain * innov_cov * gain.transpose());
    if (innovation != nullptr) {
        innovation->predicted_measurement = res.out_mean;
        innovation->innovation_cov = innov_cov;
    }
    return posterior;
}

FilterRun run_filter(const StateSpaceModel& model,
                     const MomentTransform& dynamics_transform,
                     const MomentTransform& observation_transform,
                     const std::vector<Eigen::VectorXd>& measurements) {
    if (measurements.empty()) {
        throw InvalidParameterError("run_filter needs at least one measurement");
    }
    const int steps = static_cast<int>(measurements.size());
    FilterRun run;
    run.predicted_means.reserve(steps);
    run.predicted_covs.reserve(steps);
    run.filtered_means.reserve(steps);
    run.filtered_covs.reserve(steps);
    run.innovations.resize(steps);

    GaussianDensity state = model.initial;
    for (int k = 1; k <= steps; ++k) {
        try {
            const GaussianDensity prior =
                predict(dynamics_transform, state, model.dynamics,
                        model.process_noise_cov, k);
            run.predicted_means.push_back(prior.mean);
            run.predicted_covs.push_back(prior.cov);
            state = update(observation_transform, prior, model.observation,
                           model.measurement_noise_cov,
                           measurements[static_cast<std::size_t>(k - 1)],
                           &run.innovations[static_cast<std::size_t>(k - 1)]);
            run.filtered_means.push_back(state.mean);
            run.filtered_covs.push_back(state.cov);
        } catch (const Error& e) {
            throw NumericalError("filter step " + std::to_string(k) + ": " + e.what());
        }
    }
    return run;
}

} // namespace gpquad
