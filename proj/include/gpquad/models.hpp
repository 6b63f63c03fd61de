#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "gpquad/gaussian.hpp"
#include "gpquad/transform.hpp"

namespace gpquad {

// ---------------------------------------------------------------------------
// Polar coordinates
// ---------------------------------------------------------------------------

/// (r, theta) -> (r cos theta, r sin theta), meters/radians in, meters out.
Eigen::Vector2d polar2cartesian(const Eigen::Vector2d& x);

VectorFunction polar2cartesian_fn();

// ---------------------------------------------------------------------------
// Univariate non-stationary growth model
// ---------------------------------------------------------------------------

double ungm_dynamics(double x, int k);
double ungm_observation(double x);

VectorFunction ungm_dynamics_fn(int k);
VectorFunction ungm_observation_fn();

/// Which state the measurement at step k is taken from. The growth-model
/// equations are implemented with the observation reading x_{k-1}
/// (PreviousState); the indexing common in the wider benchmark literature
/// reads x_k (CurrentState). Both simulations feed the same filter, whose
/// observation model always evaluates the current state.
enum class UngmObservationIndexing { PreviousState, CurrentState };

struct UngmConfig {
    int steps = 500;
    int n_runs = 25; // desk scale; 100 for the full study
    double process_noise_var = 10.0;
    double meas_noise_var = 1.0;
    double init_mean = 0.0;
    double init_var = 5.0;
    std::uint64_t seed = 0;
    UngmObservationIndexing observation_indexing = UngmObservationIndexing::PreviousState;
};

struct UngmSimulation {
    double initial_state = 0.0;   // x_0 draw
    Eigen::VectorXd states;       // x_1 .. x_K
    Eigen::VectorXd measurements; // z_1 .. z_K
};

/// Simulates one truth trajectory plus measurements; the run RNG stream is
/// derive_seed(config.seed, run_index), so runs are reproducible and
/// independent.
UngmSimulation ungm_simulate(const UngmConfig& config, int run_index);

// ---------------------------------------------------------------------------
// Ballistic reentry
// ---------------------------------------------------------------------------

struct ReentryConfig {
    double gamma = 0.164;
    double radar_x = 30.0; // km, horizontal offset of the radar
    double radar_y = 30.0; // km, radar altitude
    double meas_noise_var = 9.2903e-4; // km^2
    double dt = 0.1;       // s
    double duration = 30.0; // s
    Eigen::Vector3d truth_init_mean{90.0, 6.0, 1.5};
    Eigen::Vector3d truth_init_cov_diag{0.0929, 1.4865, 1e-4};
    Eigen::Vector3d filter_init_mean{90.0, 6.0, 1.7};
    Eigen::Vector3d filter_init_cov_diag{0.0929, 1.4865, 10.0};
    // Discrete process noise for the filter model; the continuous-time
    // noise intensity has no single discrete equivalent, so these are
    // artifact defaults, configurable.
    Eigen::Vector3d process_noise_diag{1e-10, 1e-10, 1e-8};
    int n_runs = 20; // desk scale; 100 for the full study
    std::uint64_t seed = 0;

    int steps() const { return static_cast<int>(duration / dt + 0.5); }
};

/// Time derivative of (altitude, velocity, ballistic parameter) under the
/// deterministic drag-only drift.
Eigen::Vector3d reentry_drift(const Eigen::Vector3d& state, double gamma = 0.164);

/// One classical 4th-order Runge-Kutta step of the deterministic drift.
Eigen::Vector3d reentry_rk4_step(const Eigen::Vector3d& state, double dt,
                                 double gamma = 0.164);

/// Euler-discretized dynamics used by the filters:
///   p+ = p - dt v,  v+ = v - dt v^2 theta exp(-gamma p),  theta+ = theta,
/// plus additive noise supplied by the caller.
Eigen::Vector3d reentry_euler_step(const Eigen::Vector3d& state, double dt,
                                   double gamma = 0.164);

/// Radar range from position (radar at (radar_x, radar_y)).
double reentry_range(const Eigen::Vector3d& state, double radar_x = 30.0,
                     double radar_y = 30.0);

VectorFunction reentry_dynamics_fn(const ReentryConfig& config);
VectorFunction reentry_observation_fn(const ReentryConfig& config);

struct ReentrySimulation {
    Eigen::MatrixXd states;       // 3 x K, RK4 truth at t = dt .. duration
    Eigen::VectorXd measurements; // K ranges
};

/// Truth trajectory: the initial state is drawn from the truth prior, then
/// integrated with RK4 at dt; one noisy range measurement per step.
ReentrySimulation reentry_simulate_truth(const ReentryConfig& config, int run_index);

} // namespace gpquad
