#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gpquad/gpq.hpp"
#include "gpquad/metrics.hpp"
#include "gpquad/models.hpp"
#include "gpquad/sigma_points.hpp"

namespace gpquad {

// ---------------------------------------------------------------------------
// Polar -> Cartesian transform study
// ---------------------------------------------------------------------------

/// Input means on a spiral (r_i = 2 + 0.5 i meters, theta_i = i pi/4),
/// radius sigma fixed, azimuth sigmas spanning [min, max] degrees. For
/// every (position, azimuth sigma) cell the spherical-radial transform and
/// the GP quadrature with the same points are scored by symmetrized KL
/// divergence against a seeded Monte Carlo ground truth.
struct PolarConfig {
    int n_positions = 10;
    int n_sigmas = 10;
    double sigma_r = 0.5;               // m
    double sigma_theta_min_deg = 6.0;
    double sigma_theta_max_deg = 36.0;
    double alpha = 1.0;
    Eigen::Vector2d lengthscales{60.0, 6.0};
    int mc_samples = 10000;
    std::uint64_t seed = 0;
    int jobs = 1;
};

struct PolarCell {
    int position_index = 0;
    double sigma_theta_deg = 0.0;
    double skl_sr = 0.0;
    double skl_gpq = 0.0;
};

struct PolarResult {
    std::vector<PolarCell> grid;      // position-major, sigma-minor
    Eigen::VectorXd sr_by_position;   // averaged over azimuth sigmas
    Eigen::VectorXd gpq_by_position;
    Eigen::VectorXd sr_by_sigma;      // averaged over positions
    Eigen::VectorXd gpq_by_sigma;
    double sr_mean = 0.0;
    double gpq_mean = 0.0;
};

PolarResult polar_experiment(const PolarConfig& config);

// ---------------------------------------------------------------------------
// Filter benchmarks
// ---------------------------------------------------------------------------

/// One filter configuration of a benchmark: a sigma-point set applied
/// either through the classical weighted-sum transform or through the GP
/// quadrature transform with the given kernel.
struct SigmaFilterSpec {
    std::string label;
    UnitPointSet points;
    bool use_gpq = false;
    RbfKernelParams kernel;
};

/// Named growth-model filter configurations with their study defaults:
/// "ukf", "ckf", "ghkf-R" (classical), and "gpqkf-ut" (lengthscale 3),
/// "gpqkf-sr" (0.3), "gpqkf-gh-R" (0.3 up to order 5, 0.1 above), all with
/// unit kernel scaling.
SigmaFilterSpec ungm_filter_spec(const std::string& label);

struct RunMetrics {
    double rmse = 0.0;
    double nll = 0.0;
    double nci = 0.0;
};

struct FilterSummary {
    BootstrapCi rmse;
    BootstrapCi nll;
    BootstrapCi nci;
};

struct UngmBenchmarkResult {
    std::vector<std::string> filter_labels;
    std::vector<std::vector<RunMetrics>> per_run; // [filter][run]
    std::vector<FilterSummary> summaries;         // [filter]
};

/// Runs every configured filter on shared per-run measurement sequences
/// (paired comparison) and aggregates RMSE, NLL and the inclination
/// indicator with bootstrap bands. Runs execute in parallel under `jobs`;
/// results are aggregated in run order, so the output is independent of
/// the thread count.
UngmBenchmarkResult ungm_benchmark(const UngmConfig& config,
                                   const std::vector<SigmaFilterSpec>& filters,
                                   int jobs);

/// Kernels of the reentry GP-quadrature filter; the dynamics and the
/// measurement nonlinearity use different parameters.
struct ReentryKernels {
    RbfKernelParams dynamics{0.5, Eigen::Vector3d{10.0, 10.0, 10.0}};
    RbfKernelParams observation{0.5, Eigen::Vector3d{15.0, 20.0, 20.0}};
};

/// Per-time-step ensemble curves of one filter.
struct ReentryCurves {
    Eigen::VectorXd time;             // K, seconds
    Eigen::MatrixXd rmse_components;  // 3 x K
    Eigen::VectorXd rmse_state;       // K
    Eigen::MatrixXd nu_components;    // 3 x K
    Eigen::VectorXd nu_state;         // K
};

struct ReentryBenchmarkResult {
    std::vector<std::string> filter_labels; // {"ukf", "gpqkf-ut"}
    std::vector<std::vector<RunMetrics>> per_run;
    std::vector<FilterSummary> summaries;
    std::vector<ReentryCurves> curves;
};

/// Tracking benchmark: RK4 truth with drawn initial states, filters on the
/// Euler-discretized model with a heavier-object initial guess. Compares
/// the scaled-unscented baseline (kappa 0, spread 1, beta 2) against the
/// GP quadrature filter on plain unscented points (kappa 0).
ReentryBenchmarkResult reentry_benchmark(const ReentryConfig& config,
                                         const ReentryKernels& kernels,
                                         int jobs);

} // namespace gpquad
