#include "gpquad/benchmarks.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>

#include "gpquad/errors.hpp"
#include "gpquad/filtering.hpp"
#include "gpquad/parallel.hpp"
#include "gpquad/rng.hpp"

namespace gpquad {

namespace {

constexpr int kBootstrapResamples = 1000;

std::unique_ptr<MomentTransform> make_transform(const SigmaFilterSpec& spec) {
    if (spec.use_gpq) {
        return std::make_unique<GpqTransform>(spec.points, spec.kernel);
    }
    return std::make_unique<ClassicalTransform>(spec.points);
}

FilterSummary summarize(const std::vector<RunMetrics>& metrics,
                        std::uint64_t seed, std::uint64_t filter_index) {
    std::vector<double> rmse_values, nll_values, nci_values;
    rmse_values.reserve(metrics.size());
    nll_values.reserve(metrics.size());
    nci_values.reserve(metrics.size());
    for (const RunMetrics& m : metrics) {
        rmse_values.push_back(m.rmse);
        nll_values.push_back(m.nll);
        nci_values.push_back(m.nci);
    }
    FilterSummary summary;
    summary.rmse = bootstrap_ci(rmse_values, kBootstrapResamples,
                                derive_seed(seed, 900000 + filter_index * 3));
    summary.nll = bootstrap_ci(nll_values, kBootstrapResamples,
                               derive_seed(seed, 900001 + filter_index * 3));
    summary.nci = bootstrap_ci(nci_values, kBootstrapResamples,
                               derive_seed(seed, 900002 + filter_index * 3));
    return summary;
}

// Trajectories of one filter across all runs.
struct EnsembleTrace {
    std::vector<std::vector<Eigen::VectorXd>> truth;  // [run][step]
    std::vector<std::vector<Eigen::VectorXd>> means;
    std::vector<std::vector<Eigen::MatrixXd>> covs;
};

std::vector<RunMetrics> ensemble_metrics(const EnsembleTrace& trace) {
    const std::size_t runs = trace.truth.size();
    const std::vector<double> nci =
        inclination_per_run(trace.truth, trace.means, trace.covs);
    std::vector<RunMetrics> metrics(runs);
    for (std::size_t r = 0; r < runs; ++r) {
        metrics[r].rmse = rmse(trace.truth[r], trace.means[r]);
        metrics[r].nll = nll(trace.truth[r], trace.means[r], trace.covs[r]);
        metrics[r].nci = nci[r];
    }
    return metrics;
}

} // namespace

PolarResult polar_experiment(const PolarConfig& config) {
    if (config.n_positions < 1 || config.n_sigmas < 1) {
        throw InvalidParameterError("polar experiment needs a non-empty grid");
    }
    const UnitPointSet rule = sr_points(2);
    const RbfKernelParams kernel{config.alpha, config.lengthscales};
    const GpqWeights weights = gpq_weights(rule, kernel);
    const VectorFunction fn = polar2cartesian_fn();

    const int cells = config.n_positions * config.n_sigmas;
    PolarResult result;
    result.grid.resize(static_cast<std::size_t>(cells));

    parallel_for_index(cells, config.jobs, [&](int cell) {
        const int i = cell / config.n_sigmas;
        const int j = cell % config.n_sigmas;
        const double sigma_deg =
            config.n_sigmas == 1
                ? config.sigma_theta_min_deg
                : config.sigma_theta_min_deg +
                      (config.sigma_theta_max_deg - config.sigma_theta_min_deg) *
                          j / (config.n_sigmas - 1.0);
        const double sigma_rad = sigma_deg * std::numbers::pi / 180.0;

        GaussianDensity input;
        input.mean = Eigen::Vector2d(2.0 + 0.5 * i, i * std::numbers::pi / 4.0);
        input.cov = Eigen::Vector2d(config.sigma_r * config.sigma_r,
                                    sigma_rad * sigma_rad)
                        .asDiagonal();

        const MomentTransformResult truth = mc_transform_serial(
            fn, input, config.mc_samples,
            derive_seed(config.seed, static_cast<std::uint64_t>(cell)));
        const MomentTransformResult sr = classical_transform(fn, input, rule);
        const MomentTransformResult gpq = gpq_transform(fn, input, weights);

        const GaussianDensity truth_density{truth.out_mean, truth.out_cov};
        PolarCell& out = result.grid[static_cast<std::size_t>(cell)];
        out.position_index = i;
        out.sigma_theta_deg = sigma_deg;
        out.skl_sr = skl(truth_density, {sr.out_mean, sr.out_cov});
        out.skl_gpq = skl(truth_density, {gpq.out_mean, gpq.out_cov});
    });

    result.sr_by_position = Eigen::VectorXd::Zero(config.n_positions);
    result.gpq_by_position = Eigen::VectorXd::Zero(config.n_positions);
    result.sr_by_sigma = Eigen::VectorXd::Zero(config.n_sigmas);
    result.gpq_by_sigma = Eigen::VectorXd::Zero(config.n_sigmas);
    for (std::size_t idx = 0; idx < result.grid.size(); ++idx) {
        const PolarCell& cell = result.grid[idx];
        const int pos = cell.position_index;
        const int sig = static_cast<int>(idx) % config.n_sigmas;
        result.sr_by_position(pos) += cell.skl_sr / config.n_sigmas;
        result.gpq_by_position(pos) += cell.skl_gpq / config.n_sigmas;
        result.sr_by_sigma(sig) += cell.skl_sr / config.n_positions;
        result.gpq_by_sigma(sig) += cell.skl_gpq / config.n_positions;
    }
    result.sr_mean = result.sr_by_position.mean();
    result.gpq_mean = result.gpq_by_position.mean();
    return result;
}

SigmaFilterSpec ungm_filter_spec(const std::string& label) {
    SigmaFilterSpec spec;
    spec.label = label;
    if (label == "ukf") {
        spec.points = ut_points(1, 0.0);
        return spec;
    }
    if (label == "ckf") {
        spec.points = sr_points(1);
        return spec;
    }
    if (label.rfind("ghkf-", 0) == 0) {
        spec.points = gh_points(1, std::stoi(label.substr(5)));
        return spec;
    }
    spec.use_gpq = true;
    if (label == "gpqkf-ut") {
        spec.points = ut_points(1, 0.0);
        spec.kernel = RbfKernelParams::isotropic(1.0, 3.0, 1);
        return spec;
    }
    if (label == "gpqkf-sr") {
        spec.points = sr_points(1);
        spec.kernel = RbfKernelParams::isotropic(1.0, 0.3, 1);
        return spec;
    }
    if (label.rfind("gpqkf-gh-", 0) == 0) {
        const int order = std::stoi(label.substr(9));
        spec.points = gh_points(1, order);
        spec.kernel = RbfKernelParams::isotropic(1.0, order <= 5 ? 0.3 : 0.1, 1);
        return spec;
    }
    throw InvalidParameterError("unknown filter spec '" + label + "'");
}

UngmBenchmarkResult ungm_benchmark(const UngmConfig& config,
                                   const std::vector<SigmaFilterSpec>& filters,
                                   int jobs) {
    if (filters.empty()) {
        throw InvalidParameterError("ungm benchmark needs at least one filter");
    }
    if (config.n_runs < 2) {
        throw InvalidParameterError("ungm benchmark needs at least two runs");
    }
    const std::size_t n_filters = filters.size();

    std::vector<std::unique_ptr<MomentTransform>> transforms;
    transforms.reserve(n_filters);
    for (const SigmaFilterSpec& spec : filters) {
        transforms.push_back(make_transform(spec));
    }

    StateSpaceModel model;
    model.state_dim = 1;
    model.obs_dim = 1;
    model.dynamics = [](const Eigen::VectorXd& x, int k) {
        return Eigen::VectorXd::Constant(1, ungm_dynamics(x(0), k));
    };
    model.observation = ungm_observation_fn();
    model.process_noise_cov =
        Eigen::MatrixXd::Constant(1, 1, config.process_noise_var);
    model.measurement_noise_cov =
        Eigen::MatrixXd::Constant(1, 1, config.meas_noise_var);
    model.initial = {Eigen::VectorXd::Constant(1, config.init_mean),
                     Eigen::MatrixXd::Constant(1, 1, config.init_var)};

    std::vector<EnsembleTrace> traces(n_filters);
    for (EnsembleTrace& trace : traces) {
        trace.truth.resize(static_cast<std::size_t>(config.n_runs));
        trace.means.resize(static_cast<std::size_t>(config.n_runs));
        trace.covs.resize(static_cast<std::size_t>(config.n_runs));
    }

    parallel_for_index(config.n_runs, jobs, [&](int run) {
        const UngmSimulation sim = ungm_simulate(config, run);
        std::vector<Eigen::VectorXd> truth(static_cast<std::size_t>(config.steps));
        std::vector<Eigen::VectorXd> measurements(static_cast<std::size_t>(config.steps));
        for (int k = 0; k < config.steps; ++k) {
            truth[static_cast<std::size_t>(k)] =
                Eigen::VectorXd::Constant(1, sim.states(k));
            measurements[static_cast<std::size_t>(k)] =
                Eigen::VectorXd::Constant(1, sim.measurements(k));
        }
        for (std::size_t f = 0; f < n_filters; ++f) {
            const FilterRun fr =
                run_filter(model, *transforms[f], *transforms[f], measurements);
            traces[f].truth[static_cast<std::size_t>(run)] = truth;
            traces[f].means[static_cast<std::size_t>(run)] = fr.filtered_means;
            traces[f].covs[static_cast<std::size_t>(run)] = fr.filtered_covs;
        }
    });

    UngmBenchmarkResult result;
    for (std::size_t f = 0; f < n_filters; ++f) {
        result.filter_labels.push_back(filters[f].label);
        result.per_run.push_back(ensemble_metrics(traces[f]));
        result.summaries.push_back(summarize(result.per_run.back(), config.seed, f));
    }
    return result;
}

ReentryBenchmarkResult reentry_benchmark(const ReentryConfig& config,
                                         const ReentryKernels& kernels,
                                         int jobs) {
    if (config.n_runs < 2) {
        throw InvalidParameterError("reentry benchmark needs at least two runs");
    }
    const int steps = config.steps();

    StateSpaceModel model;
    model.state_dim = 3;
    model.obs_dim = 1;
    const double dt = config.dt;
    const double gamma = config.gamma;
    model.dynamics = [dt, gamma](const Eigen::VectorXd& x, int) -> Eigen::VectorXd {
        return reentry_euler_step(x.head<3>(), dt, gamma);
    };
    model.observation = reentry_observation_fn(config);
    model.process_noise_cov = config.process_noise_diag.asDiagonal();
    model.measurement_noise_cov =
        Eigen::MatrixXd::Constant(1, 1, config.meas_noise_var);
    model.initial = {config.filter_init_mean,
                     Eigen::MatrixXd(config.filter_init_cov_diag.asDiagonal())};

    const ClassicalTransform ukf_transform(scaled_ut_points(3, 0.0, 1.0, 2.0));
    const UnitPointSet gpq_points = ut_points(3, 0.0);
    const GpqTransform gpq_dyn(gpq_points, kernels.dynamics);
    const GpqTransform gpq_obs(gpq_points, kernels.observation);

    const std::size_t n_filters = 2;
    std::vector<EnsembleTrace> traces(n_filters);
    for (EnsembleTrace& trace : traces) {
        trace.truth.resize(static_cast<std::size_t>(config.n_runs));
        trace.means.resize(static_cast<std::size_t>(config.n_runs));
        trace.covs.resize(static_cast<std::size_t>(config.n_runs));
    }

    parallel_for_index(config.n_runs, jobs, [&](int run) {
        const ReentrySimulation sim = reentry_simulate_truth(config, run);
        std::vector<Eigen::VectorXd> truth(static_cast<std::size_t>(steps));
        std::vector<Eigen::VectorXd> measurements(static_cast<std::size_t>(steps));
        for (int k = 0; k < steps; ++k) {
            truth[static_cast<std::size_t>(k)] = sim.states.col(k);
            measurements[static_cast<std::size_t>(k)] =
                Eigen::VectorXd::Constant(1, sim.measurements(k));
        }
        for (std::size_t f = 0; f < n_filters; ++f) {
            const FilterRun fr =
                f == 0 ? run_filter(model, ukf_transform, ukf_transform, measurements)
                       : run_filter(model, gpq_dyn, gpq_obs, measurements);
            traces[f].truth[static_cast<std::size_t>(run)] = truth;
            traces[f].means[static_cast<std::size_t>(run)] = fr.filtered_means;
            traces[f].covs[static_cast<std::size_t>(run)] = fr.filtered_covs;
        }
    });

    ReentryBenchmarkResult result;
    result.filter_labels = {"ukf", "gpqkf-ut"};
    for (std::size_t f = 0; f < n_filters; ++f) {
        result.per_run.push_back(ensemble_metrics(traces[f]));
        result.summaries.push_back(summarize(result.per_run.back(), config.seed, f));
    }

    // Per-time-step ensemble curves.
    const double runs = static_cast<double>(config.n_runs);
    for (std::size_t f = 0; f < n_filters; ++f) {
        const EnsembleTrace& trace = traces[f];
        ReentryCurves curves;
        curves.time.resize(steps);
        curves.rmse_components.resize(3, steps);
        curves.rmse_state.resize(steps);
        curves.nu_components.resize(3, steps);
        curves.nu_state.resize(steps);
        for (int k = 0; k < steps; ++k) {
            curves.time(k) = (k + 1) * config.dt;
            Eigen::MatrixXd mse = Eigen::MatrixXd::Zero(3, 3);
            for (int r = 0; r < config.n_runs; ++r) {
                const Eigen::VectorXd err = trace.truth[r][k] - trace.means[r][k];
                mse.noalias() += err * err.transpose();
            }
            mse /= runs;
            curves.rmse_components.col(k) = mse.diagonal().cwiseSqrt();
            curves.rmse_state(k) = std::sqrt(mse.trace());

            Eigen::LLT<Eigen::MatrixXd> mse_llt(mse);
            if (mse_llt.info() != Eigen::Success) {
                throw DegenerateEnsembleError(
                    "reentry ensemble mean-square-error matrix singular at step " +
                    std::to_string(k + 1));
            }
            Eigen::Vector3d nu_comp = Eigen::Vector3d::Zero();
            double nu_state = 0.0;
            for (int r = 0; r < config.n_runs; ++r) {
                const Eigen::VectorXd err = trace.truth[r][k] - trace.means[r][k];
                const Eigen::MatrixXd& cov = trace.covs[r][k];
                for (int c = 0; c < 3; ++c) {
                    nu_comp(c) += 10.0 * std::log10(mse(c, c) / cov(c, c));
                }
                const Eigen::MatrixXd chol = cholesky_with_jitter(cov);
                const double filter_form =
                    chol.triangularView<Eigen::Lower>().solve(err).squaredNorm();
                const double sample_form = err.dot(mse_llt.solve(err));
                nu_state += 10.0 * std::log10(filter_form / sample_form);
            }
            curves.nu_components.col(k) = nu_comp / runs;
            curves.nu_state(k) = nu_state / runs;
        }
        result.curves.push_back(std::move(curves));
    }
    return result;
}

} // namespace gpquad
