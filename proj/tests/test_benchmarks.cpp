#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "gpquad/benchmarks.hpp"
#include "gpquad/errors.hpp"
#include "gpquad/filtering.hpp"
#include "gpquad/gaussian.hpp"
#include "gpquad/models.hpp"
#include "gpquad/rng.hpp"

using namespace gpquad;

TEST_CASE("polar2cartesian") {
    CHECK((polar2cartesian({1.0, 0.0}) - Eigen::Vector2d(1.0, 0.0)).norm() == 0.0);
    CHECK((polar2cartesian({2.0, std::numbers::pi / 2}) - Eigen::Vector2d(0.0, 2.0))
              .norm() < 1e-15);
    CHECK((polar2cartesian({std::sqrt(2.0), std::numbers::pi / 4}) -
           Eigen::Vector2d(1.0, 1.0))
              .norm() < 1e-15);
}

TEST_CASE("ungm model equations") {
    // one noise-free step from the origin
    CHECK(ungm_dynamics(0.0, 1) == doctest::Approx(2.898862035813389).epsilon(1e-14));
    CHECK(ungm_observation(2.898862035813389) ==
          doctest::Approx(0.4201700551340073).epsilon(1e-14));
}

TEST_CASE("ungm_simulate") {
    SUBCASE("near-deterministic limit distinguishes the indexing conventions") {
        UngmConfig config;
        config.steps = 1;
        config.process_noise_var = 1e-30;
        config.meas_noise_var = 1e-30;
        config.init_var = 1e-30;
        config.seed = 4;

        config.observation_indexing = UngmObservationIndexing::PreviousState;
        const UngmSimulation printed = ungm_simulate(config, 0);
        CHECK(std::abs(printed.states(0) - 2.898862035813389) <= 1e-9);
        // measurement reads x_0 ~ 0
        CHECK(std::abs(printed.measurements(0)) <= 1e-9);

        config.observation_indexing = UngmObservationIndexing::CurrentState;
        const UngmSimulation conventional = ungm_simulate(config, 0);
        CHECK(std::abs(conventional.measurements(0) - 0.4201700551340073) <= 1e-9);
    }
    SUBCASE("fixed seed reproduces the trajectory") {
        UngmConfig config;
        config.steps = 50;
        config.seed = 99;
        const UngmSimulation a = ungm_simulate(config, 3);
        const UngmSimulation b = ungm_simulate(config, 3);
        CHECK((a.states - b.states).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.measurements - b.measurements).cwiseAbs().maxCoeff() == 0.0);
        const UngmSimulation other_run = ungm_simulate(config, 4);
        CHECK((a.states - other_run.states).cwiseAbs().maxCoeff() > 0.0);
    }
    SUBCASE("initial draws have the configured variance") {
        UngmConfig config;
        config.seed = 12345;
        config.steps = 1;
        double acc = 0.0, acc_sq = 0.0;
        const int runs = 10000;
        for (int run = 0; run < runs; ++run) {
            const double x0 = ungm_simulate(config, run).initial_state;
            acc += x0;
            acc_sq += x0 * x0;
        }
        const double mean = acc / runs;
        const double var = acc_sq / runs - mean * mean;
        CHECK(var == doctest::Approx(5.0).epsilon(0.1));
    }
}

TEST_CASE("reentry model pieces") {
    SUBCASE("range is the radar offset at matching altitude") {
        CHECK(reentry_range({30.0, 5.0, 1.5}) == doctest::Approx(30.0).epsilon(1e-14));
    }
    SUBCASE("drift at the nominal entry state") {
        const Eigen::Vector3d drift = reentry_drift({90.0, 6.0, 1.5});
        CHECK(drift(0) == doctest::Approx(-6.0));
        CHECK(drift(1) == doctest::Approx(-2.0999415511041776e-05).epsilon(1e-12));
        CHECK(drift(2) == 0.0);
    }
    SUBCASE("euler step") {
        const Eigen::Vector3d still = reentry_euler_step({50.0, 0.0, 1.5}, 0.1);
        CHECK((still - Eigen::Vector3d(50.0, 0.0, 1.5)).norm() == 0.0);

        const Eigen::Vector3d stepped = reentry_euler_step({90.0, 6.0, 1.5}, 0.1);
        CHECK(stepped(0) == doctest::Approx(89.4).epsilon(1e-14));
    }
    SUBCASE("euler stays within O(dt^2) of RK4") {
        const Eigen::Vector3d euler = reentry_euler_step({90.0, 6.0, 1.5}, 0.1);
        const Eigen::Vector3d rk4 = reentry_rk4_step({90.0, 6.0, 1.5}, 0.1);
        CHECK(std::abs(euler(0) - rk4(0)) < 1e-2);
    }
    SUBCASE("altitude decreases while the object is falling") {
        ReentryConfig config;
        config.seed = 8;
        const ReentrySimulation sim = reentry_simulate_truth(config, 0);
        for (Eigen::Index k = 0; k + 1 < sim.states.cols(); ++k) {
            if (sim.states(1, k) > 0.0) {
                CHECK(sim.states(0, k + 1) < sim.states(0, k));
            }
        }
    }
}

TEST_CASE("polar experiment on a reduced grid") {
    PolarConfig config;
    config.n_positions = 3;
    config.n_sigmas = 3;
    config.mc_samples = 2000;
    config.seed = 31;

    const PolarResult serial = polar_experiment(config);
    REQUIRE(serial.grid.size() == 9);
    for (const PolarCell& cell : serial.grid) {
        CHECK(std::isfinite(cell.skl_sr));
        CHECK(cell.skl_sr >= 0.0);
        CHECK(cell.skl_gpq >= 0.0);
    }
    CHECK(serial.sr_by_position.size() == 3);
    CHECK(serial.sr_mean ==
          doctest::Approx(serial.sr_by_sigma.mean()).epsilon(1e-12));

    SUBCASE("thread count does not change the numbers") {
        PolarConfig parallel_config = config;
        parallel_config.jobs = 2;
        const PolarResult parallel = polar_experiment(parallel_config);
        for (std::size_t i = 0; i < serial.grid.size(); ++i) {
            CHECK(serial.grid[i].skl_sr == parallel.grid[i].skl_sr);
            CHECK(serial.grid[i].skl_gpq == parallel.grid[i].skl_gpq);
        }
    }
    SUBCASE("tighter azimuth spread lowers the divergence for both transforms") {
        PolarConfig tight = config;
        tight.sigma_theta_min_deg = 3.0;
        tight.sigma_theta_max_deg = 18.0;
        const PolarResult tight_result = polar_experiment(tight);
        CHECK(tight_result.sr_mean < serial.sr_mean);
        CHECK(tight_result.gpq_mean < serial.gpq_mean);
    }
}

TEST_CASE("ungm filter specs") {
    CHECK(ungm_filter_spec("ukf").points.count() == 3);
    CHECK_FALSE(ungm_filter_spec("ukf").use_gpq);
    CHECK(ungm_filter_spec("ckf").points.count() == 2);
    CHECK(ungm_filter_spec("ghkf-5").points.count() == 5);
    const SigmaFilterSpec gpq_ut = ungm_filter_spec("gpqkf-ut");
    CHECK(gpq_ut.use_gpq);
    CHECK(gpq_ut.kernel.lengthscales(0) == 3.0);
    CHECK(ungm_filter_spec("gpqkf-sr").kernel.lengthscales(0) == 0.3);
    CHECK(ungm_filter_spec("gpqkf-gh-5").kernel.lengthscales(0) == 0.3);
    CHECK(ungm_filter_spec("gpqkf-gh-7").kernel.lengthscales(0) == 0.1);
    CHECK_THROWS_AS(ungm_filter_spec("banana"), InvalidParameterError);
}

TEST_CASE("ungm benchmark at reduced scale") {
    UngmConfig config;
    config.n_runs = 4;
    config.steps = 60;
    config.seed = 5;
    const std::vector<SigmaFilterSpec> filters{ungm_filter_spec("ukf"),
                                               ungm_filter_spec("gpqkf-ut")};
    const UngmBenchmarkResult serial = ungm_benchmark(config, filters, 1);
    REQUIRE(serial.per_run.size() == 2);
    REQUIRE(serial.per_run[0].size() == 4);
    for (const auto& filter_metrics : serial.per_run) {
        for (const RunMetrics& m : filter_metrics) {
            CHECK(std::isfinite(m.rmse));
            CHECK(std::isfinite(m.nll));
            CHECK(std::isfinite(m.nci));
            CHECK(m.rmse > 0.0);
        }
    }
    SUBCASE("bands are centred on the estimates") {
        for (const FilterSummary& s : serial.summaries) {
            CHECK(s.rmse.lower() <= s.rmse.mean);
            CHECK(s.rmse.upper() >= s.rmse.mean);
        }
    }
    SUBCASE("parallel execution reproduces the serial numbers") {
        const UngmBenchmarkResult parallel = ungm_benchmark(config, filters, 2);
        for (std::size_t f = 0; f < 2; ++f) {
            for (std::size_t r = 0; r < 4; ++r) {
                CHECK(serial.per_run[f][r].rmse == parallel.per_run[f][r].rmse);
                CHECK(serial.per_run[f][r].nll == parallel.per_run[f][r].nll);
                CHECK(serial.per_run[f][r].nci == parallel.per_run[f][r].nci);
            }
        }
    }
}

TEST_CASE("reentry benchmark at reduced scale") {
    ReentryConfig config;
    config.n_runs = 4;
    config.duration = 6.0;
    config.seed = 13;
    const ReentryKernels kernels;
    const ReentryBenchmarkResult serial = reentry_benchmark(config, kernels, 1);
    REQUIRE(serial.filter_labels.size() == 2);
    REQUIRE(serial.curves.size() == 2);
    CHECK(serial.curves[0].time.size() == 60);
    CHECK(serial.curves[0].time(0) == doctest::Approx(0.1));
    CHECK(serial.curves[0].time(59) == doctest::Approx(6.0));
    for (const auto& filter_metrics : serial.per_run) {
        for (const RunMetrics& m : filter_metrics) {
            CHECK(std::isfinite(m.rmse));
            CHECK(std::isfinite(m.nci));
        }
    }
    SUBCASE("parallel execution reproduces the serial numbers") {
        const ReentryBenchmarkResult parallel = reentry_benchmark(config, kernels, 2);
        for (std::size_t f = 0; f < 2; ++f) {
            CHECK((serial.curves[f].rmse_state - parallel.curves[f].rmse_state)
                      .cwiseAbs()
                      .maxCoeff() == 0.0);
            CHECK((serial.curves[f].nu_state - parallel.curves[f].nu_state)
                      .cwiseAbs()
                      .maxCoeff() == 0.0);
            for (std::size_t r = 0; r < 4; ++r) {
                CHECK(serial.per_run[f][r].rmse == parallel.per_run[f][r].rmse);
            }
        }
    }
}

TEST_CASE("filtered covariances stay PSD across the benchmark models") {
    UngmConfig ungm_config;
    ungm_config.n_runs = 3;
    ungm_config.steps = 80;
    ungm_config.seed = 21;
    for (const char* label : {"ukf", "ckf", "ghkf-3", "gpqkf-ut"}) {
        StateSpaceModel model;
        model.state_dim = 1;
        model.obs_dim = 1;
        model.dynamics = [](const Eigen::VectorXd& x, int k) {
            return Eigen::VectorXd::Constant(1, ungm_dynamics(x(0), k));
        };
        model.observation = ungm_observation_fn();
        model.process_noise_cov = Eigen::MatrixXd::Constant(1, 1, 10.0);
        model.measurement_noise_cov = Eigen::MatrixXd::Identity(1, 1);
        model.initial = {Eigen::VectorXd::Zero(1),
                         Eigen::MatrixXd::Constant(1, 1, 5.0)};
        const SigmaFilterSpec spec = ungm_filter_spec(label);
        std::unique_ptr<MomentTransform> transform;
        if (spec.use_gpq) {
            transform = std::make_unique<GpqTransform>(spec.points, spec.kernel);
        } else {
            transform = std::make_unique<ClassicalTransform>(spec.points);
        }
        const UngmSimulation sim = ungm_simulate(ungm_config, 0);
        std::vector<Eigen::VectorXd> measurements;
        for (int k = 0; k < ungm_config.steps; ++k) {
            measurements.push_back(Eigen::VectorXd::Constant(1, sim.measurements(k)));
        }
        const FilterRun run = run_filter(model, *transform, *transform, measurements);
        for (const Eigen::MatrixXd& cov : run.filtered_covs) {
            CHECK(min_eigenvalue(cov) >=
                  -1e-9 * std::max(cov.cwiseAbs().maxCoeff(), 1e-12));
        }
    }
}
