#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "gpquad/gaussian.hpp"
#include "gpquad/transform.hpp"

namespace gpquad {

/// Dynamics callable f(x, k); the step index makes time-varying models
/// expressible.
using TimeVaryingDynamics = std::function<Eigen::VectorXd(const Eigen::VectorXd&, int)>;

/// Discrete-time state-space model with additive zero-mean noise on both
/// the dynamics and the observation.
struct StateSpaceModel {
    Eigen::Index state_dim = 0;
    Eigen::Index obs_dim = 0;
    TimeVaryingDynamics dynamics;
    VectorFunction observation;
    Eigen::MatrixXd process_noise_cov;     // D x D
    Eigen::MatrixXd measurement_noise_cov; // E x E
    GaussianDensity initial;
};

/// Predicted measurement and innovation covariance of one update.
struct InnovationRecord {
    Eigen::VectorXd predicted_measurement;
    Eigen::MatrixXd innovation_cov;
};

/// Full trace of a filter pass: per-step predicted and filtered moments
/// plus the innovation record.
struct FilterRun {
    std::vector<Eigen::VectorXd> predicted_means;
    std::vector<Eigen::MatrixXd> predicted_covs;
    std::vector<Eigen::VectorXd> filtered_means;
    std::vector<Eigen::MatrixXd> filtered_covs;
    std::vector<InnovationRecord> innovations;

    std::size_t steps() const { return filtered_means.size(); }
};

/// Moment-matching prediction through the dynamics: applies the transform
/// to f(., k) at the posterior and adds the process noise covariance.
GaussianDensity predict(const MomentTransform& transform,
                        const GaussianDensity& posterior,
                        const TimeVaryingDynamics& dynamics,
                        const Eigen::MatrixXd& process_noise_cov, int k);

/// Kalman-style measurement update. The innovation covariance is the
/// transformed observation covariance plus the measurement noise; its
/// Cholesky factor backs the gain solve. Throws SingularInnovationError
/// when it is not positive definite.
GaussianDensity update(const MomentTransform& transform,
                       const GaussianDensity& prior,
                       const VectorFunction& observation,
                       const Eigen::MatrixXd& measurement_noise_cov,
                       const Eigen::VectorXd& measurement,
                       InnovationRecord* innovation = nullptr);

/// Runs the filter over a measurement sequence, alternating predict and
/// update from model.initial. Step k = 1 consumes measurements[0]. Any
/// step failure is rethrown with the step index attached. Deterministic;
/// independent runs may share the (immutable) transforms and model.
FilterRun run_filter(const StateSpaceModel& model,
                     const MomentTransform& dynamics_transform,
                     const MomentTransform& observation_transform,
                     const std::vector<Eigen::VectorXd>& measurements);

} // namespace gpquad
