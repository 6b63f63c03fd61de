// Timing comparison of the serial reference paths against the
// OpenMP-parallel ones. The parallel paths are block/run deterministic, so
// besides the timings this also cross-checks that both produce identical
// numbers on a real workload.

#include <chrono>
#include <cstdio>
#include <functional>

#include "gpquad/benchmarks.hpp"
#include "gpquad/models.hpp"
#include "gpquad/parallel.hpp"
#include "gpquad/transform.hpp"

using namespace gpquad;

namespace {

double time_seconds(const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    return elapsed.count();
}

void report(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-28s %8.3f s %8.3f s %6.2fx  %s\n", name, serial, parallel,
                serial / parallel, identical ? "identical" : "MISMATCH");
}

} // namespace

int main() {
    std::printf("%-28s %10s %10s %7s\n", "workload", "serial", "openmp", "speedup");
    std::printf("threads available: %d\n", resolve_jobs(0));

    {
        GaussianDensity input{Eigen::Vector2d(3.0, 0.5),
                              Eigen::Vector2d(0.25, 0.05).asDiagonal()};
        const VectorFunction fn = polar2cartesian_fn();
        MomentTransformResult serial_res, parallel_res;
        const double t_serial = time_seconds(
            [&] { serial_res = mc_transform_serial(fn, input, 4000000, 42); });
        const double t_parallel =
            time_seconds([&] { parallel_res = mc_transform(fn, input, 4000000, 42); });
        const bool same = serial_res.out_mean == parallel_res.out_mean &&
                          serial_res.out_cov == parallel_res.out_cov &&
                          serial_res.cross_cov == parallel_res.cross_cov;
        report("mc_transform 4e6 samples", t_serial, t_parallel, same);
    }

    {
        UngmConfig cfg;
        cfg.n_runs = 50;
        cfg.seed = 7;
        const std::vector<SigmaFilterSpec> filters{ungm_filter_spec("ukf"),
                                                   ungm_filter_spec("gpqkf-ut")};
        UngmBenchmarkResult serial_res, parallel_res;
        const double t_serial =
            time_seconds([&] { serial_res = ungm_benchmark(cfg, filters, 1); });
        const double t_parallel =
            time_seconds([&] { parallel_res = ungm_benchmark(cfg, filters, 0); });
        bool same = true;
        for (std::size_t f = 0; f < filters.size(); ++f) {
            for (std::size_t r = 0; r < serial_res.per_run[f].size(); ++r) {
                same = same &&
                       serial_res.per_run[f][r].rmse == parallel_res.per_run[f][r].rmse &&
                       serial_res.per_run[f][r].nci == parallel_res.per_run[f][r].nci;
            }
        }
        report("ungm 50 runs x 500 steps", t_serial, t_parallel, same);
    }

    {
        ReentryConfig cfg;
        cfg.n_runs = 40;
        cfg.seed = 3;
        const ReentryKernels kernels;
        ReentryBenchmarkResult serial_res, parallel_res;
        const double t_serial =
            time_seconds([&] { serial_res = reentry_benchmark(cfg, kernels, 1); });
        const double t_parallel =
            time_seconds([&] { parallel_res = reentry_benchmark(cfg, kernels, 0); });
        bool same = true;
        for (std::size_t f = 0; f < 2; ++f) {
            for (std::size_t r = 0; r < serial_res.per_run[f].size(); ++r) {
                same = same &&
                       serial_res.per_run[f][r].rmse == parallel_res.per_run[f][r].rmse;
            }
        }
        report("reentry 40 runs x 300 steps", t_serial, t_parallel, same);
    }

    {
        PolarConfig cfg;
        cfg.seed = 11;
        cfg.mc_samples = 100000;
        PolarResult serial_res, parallel_res;
        PolarConfig serial_cfg = cfg;
        serial_cfg.jobs = 1;
        PolarConfig parallel_cfg = cfg;
        parallel_cfg.jobs = 0;
        const double t_serial =
            time_seconds([&] { serial_res = polar_experiment(serial_cfg); });
        const double t_parallel =
            time_seconds([&] { parallel_res = polar_experiment(parallel_cfg); });
        bool same = true;
        for (std::size_t i = 0; i < serial_res.grid.size(); ++i) {
            same = same && serial_res.grid[i].skl_sr == parallel_res.grid[i].skl_sr &&
                   serial_res.grid[i].skl_gpq == parallel_res.grid[i].skl_gpq;
        }
        report("polar grid, 1e5 mc/cell", t_serial, t_parallel, same);
    }

    return 0;
}
