#include "gpquad/models.hpp"

#include <cmath>

#include "gpquad/errors.hpp"
#include "gpquad/rng.hpp"

namespace gpquad {

Eigen::Vector2d polar2cartesian(const Eigen::Vector2d& x) {
    return {x(0) * std::cos(x(1)), x(0) * std::sin(x(1))};
}

VectorFunction polar2cartesian_fn() {
    return {2, 2, [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
                return polar2cartesian(x.head<2>());
            }};
}

double ungm_dynamics(double x, int k) {
    return 0.5 * x + 25.0 * x / (1.0 + x * x) + 8.0 * std::cos(1.2 * k);
}

double ungm_observation(double x) {
    return x * x / 20.0;
}

VectorFunction ungm_dynamics_fn(int k) {
    return {1, 1, [k](const Eigen::VectorXd& x) {
                return Eigen::VectorXd::Constant(1, ungm_dynamics(x(0), k));
            }};
}

VectorFunction ungm_observation_fn() {
    return {1, 1, [](const Eigen::VectorXd& x) {
                return Eigen::VectorXd::Constant(1, ungm_observation(x(0)));
            }};
}

UngmSimulation ungm_simulate(const UngmConfig& config, int run_index) {
    if (config.steps < 1) {
        throw InvalidParameterError("UNGM simulation needs at least one step");
    }
    if (config.process_noise_var <= 0.0 || config.meas_noise_var <= 0.0 ||
        config.init_var <= 0.0) {
        throw InvalidParameterError("UNGM variances must be positive");
    }
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(run_index)));
    const double q_std = std::sqrt(config.process_noise_var);
    const double r_std = std::sqrt(config.meas_noise_var);

    UngmSimulation sim;
    sim.states.resize(config.steps);
    sim.measurements.resize(config.steps);
    double x = config.init_mean + std::sqrt(config.init_var) * rng.normal();
    sim.initial_state = x;
    for (int k = 1; k <= config.steps; ++k) {
        const double x_prev = x;
        x = ungm_dynamics(x_prev, k) + q_std * rng.normal();
        const double observed =
            config.observation_indexing == UngmObservationIndexing::PreviousState
                ? x_prev
                : x;
        sim.states(k - 1) = x;
        sim.measurements(k - 1) = ungm_observation(observed) + r_std * rng.normal();
    }
    return sim;
}

Eigen::Vector3d reentry_drift(const Eigen::Vector3d& state, double gamma) {
    const double p = state(0);
    const double v = state(1);
    const double theta = state(2);
    return {-v, -v * v * theta * std::exp(-gamma * p), 0.0};
}

Eigen::Vector3d reentry_rk4_step(const Eigen::Vector3d& state, double dt, double gamma) {
    const Eigen::Vector3d k1 = reentry_drift(state, gamma);
    const Eigen::Vector3d k2 = reentry_drift(state + 0.5 * dt * k1, gamma);
    const Eigen::Vector3d k3 = reentry_drift(state + 0.5 * dt * k2, gamma);
    const Eigen::Vector3d k4 = reentry_drift(state + dt * k3, gamma);
    return state + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Eigen::Vector3d reentry_euler_step(const Eigen::Vector3d& state, double dt, double gamma) {
    return state + dt * reentry_drift(state, gamma);
}

double reentry_range(const Eigen::Vector3d& state, double radar_x, double radar_y) {
    const double dy = radar_y - state(0);
    return std::sqrt(radar_x * radar_x + dy * dy);
}

VectorFunction reentry_dynamics_fn(const ReentryConfig& config) {
    const double dt = config.dt;
    const double gamma = config.gamma;
    return {3, 3, [dt, gamma](const Eigen::VectorXd& x) -> Eigen::VectorXd {
                return reentry_euler_step(x.head<3>(), dt, gamma);
            }};
}

VectorFunction reentry_observation_fn(const ReentryConfig& config) {
    const double sx = config.radar_x;
    const double sy = config.radar_y;
    return {3, 1, [sx, sy](const Eigen::VectorXd& x) {
                return Eigen::VectorXd::Constant(1, reentry_range(x.head<3>(), sx, sy));
            }};
}

ReentrySimulation reentry_simulate_truth(const ReentryConfig& config, int run_index) {
    if (config.dt <= 0.0 || config.duration < config.dt) {
        throw InvalidParameterError("reentry needs dt > 0 and duration >= dt");
    }
    const int steps = config.steps();
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(run_index)));

    Eigen::Vector3d state =
        config.truth_init_mean.array() +
        config.truth_init_cov_diag.array().sqrt() * rng.normal_vector(3).array();

    ReentrySimulation sim;
    sim.states.resize(3, steps);
    sim.measurements.resize(steps);
    const double r_std = std::sqrt(config.meas_noise_var);
    for (int k = 0; k < steps; ++k) {
        state = reentry_rk4_step(state, config.dt, config.gamma);
        sim.states.col(k) = state;
        sim.measurements(k) =
            reentry_range(state, config.radar_x, config.radar_y) + r_std * rng.normal();
    }
    return sim;
}

} // namespace gpquad
