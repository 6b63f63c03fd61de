// Command-line front end: sigma-point tables, one-shot moment transforms,
// and the three benchmark studies, all emitted as CSV.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpquad/benchmarks.hpp"
#include "gpquad/csv.hpp"
#include "gpquad/errors.hpp"
#include "gpquad/gpq.hpp"
#include "gpquad/models.hpp"
#include "gpquad/sigma_points.hpp"
#include "gpquad/transform.hpp"

namespace {

using gpquad::CsvWriter;
using gpquad::format_number;

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> values;
    std::string normalized = text;
    for (char& c : normalized) {
        if (c == ';') {
            c = ',';
        }
    }
    std::stringstream stream(normalized);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item.empty()) {
            continue;
        }
        std::size_t used = 0;
        const double value = std::stod(item, &used);
        if (used != item.size()) {
            throw gpquad::InvalidParameterError("cannot parse number '" + item + "'");
        }
        values.push_back(value);
    }
    if (values.empty()) {
        throw gpquad::InvalidParameterError("empty number list '" + text + "'");
    }
    return values;
}

Eigen::VectorXd parse_vector(const std::string& text) {
    const std::vector<double> values = parse_number_list(text);
    return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                             static_cast<Eigen::Index>(values.size()));
}

// D values are a diagonal, D*D values a row-major full matrix.
Eigen::MatrixXd parse_covariance(const std::string& text, Eigen::Index dim) {
    const std::vector<double> values = parse_number_list(text);
    if (static_cast<Eigen::Index>(values.size()) == dim) {
        Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            cov(i, i) = values[static_cast<std::size_t>(i)];
        }
        return cov;
    }
    if (static_cast<Eigen::Index>(values.size()) == dim * dim) {
        Eigen::MatrixXd cov(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r) {
            for (Eigen::Index c = 0; c < dim; ++c) {
                cov(r, c) = values[static_cast<std::size_t>(r * dim + c)];
            }
        }
        return cov;
    }
    throw gpquad::InvalidParameterError(
        "covariance needs " + std::to_string(dim) + " (diagonal) or " +
        std::to_string(dim * dim) + " (row-major) values, got " +
        std::to_string(values.size()));
}

Eigen::VectorXd parse_lengthscales(const std::string& text, Eigen::Index dim) {
    Eigen::VectorXd values = parse_vector(text);
    if (values.size() == 1 && dim > 1) {
        return Eigen::VectorXd::Constant(dim, values(0)); // broadcast
    }
    if (values.size() != dim) {
        throw gpquad::InvalidParameterError(
            "expected 1 or " + std::to_string(dim) + " lengthscales, got " +
            std::to_string(values.size()));
    }
    return values;
}

std::string default_out_path(const std::string& filename) {
    const char* dir = std::getenv("GPQUAD_OUT_DIR");
    return (dir != nullptr && *dir != '\0' ? std::string(dir) : std::string("."))
           + "/" + filename;
}

// Writes through a callback either to the given file or to stdout ("-").
void with_csv_output(const std::string& path,
                     const std::function<void(std::ostream&)>& emit) {
    if (path == "-") {
        emit(std::cout);
        return;
    }
    std::ofstream file(path);
    if (!file) {
        throw gpquad::InvalidParameterError("cannot write output file '" + path + "'");
    }
    emit(file);
    std::cout << "wrote " << path << "\n";
}

gpquad::UnitPointSet build_rule(const std::string& rule, int dim, double kappa,
                                int order, std::size_t max_points) {
    if (rule == "ut") {
        return gpquad::ut_points(dim, kappa);
    }
    if (rule == "sr") {
        return gpquad::sr_points(dim);
    }
    if (rule == "gh") {
        return gpquad::gh_points(dim, order, max_points);
    }
    throw gpquad::InvalidParameterError("unknown rule '" + rule + "'");
}

struct NamedFunction {
    gpquad::VectorFunction fn;
    std::string name;
};

NamedFunction build_function(const std::string& name, int time_index) {
    if (name == "polar") {
        return {gpquad::polar2cartesian_fn(), name};
    }
    if (name == "ungm-dyn") {
        return {gpquad::ungm_dynamics_fn(time_index), name};
    }
    if (name == "ungm-obs") {
        return {gpquad::ungm_observation_fn(), name};
    }
    if (name == "reentry-obs") {
        return {gpquad::reentry_observation_fn(gpquad::ReentryConfig{}), name};
    }
    throw gpquad::InvalidParameterError("unknown function '" + name + "'");
}

void emit_points_csv(std::ostream& out, const gpquad::UnitPointSet& rule) {
    CsvWriter csv(out);
    std::vector<std::string> header{"index"};
    for (Eigen::Index d = 0; d < rule.dim(); ++d) {
        header.push_back("xi_" + std::to_string(d + 1));
    }
    header.push_back("w_mean");
    header.push_back("w_cov");
    csv.header(header);
    for (Eigen::Index i = 0; i < rule.count(); ++i) {
        std::vector<std::string> row{std::to_string(i)};
        for (Eigen::Index d = 0; d < rule.dim(); ++d) {
            row.push_back(format_number(rule.points(d, i)));
        }
        row.push_back(format_number(rule.mean_weights(i)));
        row.push_back(format_number(rule.cov_weights(i)));
        csv.row(row);
    }
}

void emit_transform_csv(std::ostream& out, const gpquad::MomentTransformResult& res) {
    CsvWriter csv(out);
    csv.header({"block", "row", "col", "value"});
    for (Eigen::Index i = 0; i < res.out_mean.size(); ++i) {
        csv.row({"mean", std::to_string(i), "0", format_number(res.out_mean(i))});
    }
    for (Eigen::Index r = 0; r < res.out_cov.rows(); ++r) {
        for (Eigen::Index c = 0; c < res.out_cov.cols(); ++c) {
            csv.row({"cov", std::to_string(r), std::to_string(c),
                     format_number(res.out_cov(r, c))});
        }
    }
    for (Eigen::Index r = 0; r < res.cross_cov.rows(); ++r) {
        for (Eigen::Index c = 0; c < res.cross_cov.cols(); ++c) {
            csv.row({"cross_cov", std::to_string(r), std::to_string(c),
                     format_number(res.cross_cov(r, c))});
        }
    }
}

void emit_run_metrics_csv(std::ostream& out,
                          const std::vector<std::string>& labels,
                          const std::vector<std::vector<gpquad::RunMetrics>>& per_run) {
    CsvWriter csv(out);
    csv.header({"run", "filter", "rmse", "nll", "nci"});
    if (labels.empty()) {
        return;
    }
    const std::size_t runs = per_run.front().size();
    for (std::size_t run = 0; run < runs; ++run) {
        for (std::size_t f = 0; f < labels.size(); ++f) {
            const gpquad::RunMetrics& m = per_run[f][run];
            csv.row({std::to_string(run), labels[f], format_number(m.rmse),
                     format_number(m.nll), format_number(m.nci)});
        }
    }
}

void print_summaries(const std::vector<std::string>& labels,
                     const std::vector<gpquad::FilterSummary>& summaries) {
    for (std::size_t f = 0; f < labels.size(); ++f) {
        const gpquad::FilterSummary& s = summaries[f];
        std::cout << labels[f] << ": rmse " << format_number(s.rmse.mean) << " +/- "
                  << format_number(s.rmse.band) << ", nll "
                  << format_number(s.nll.mean) << " +/- "
                  << format_number(s.nll.band) << ", nci "
                  << format_number(s.nci.mean) << " +/- "
                  << format_number(s.nci.band) << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moment transforms for Gaussian random variables: classical "
                 "sigma-point rules, a GP-quadrature transform that accounts "
                 "for integration error, nonlinear Gaussian filtering, and "
                 "benchmark studies. Experiment defaults follow the published "
                 "study configurations; all CSV output is deterministic for "
                 "fixed flags and seed."};
    app.require_subcommand(1);
    app.get_formatter()->column_width(38);

    // --- points ---
    auto* points = app.add_subcommand("points", "print a sigma-point/weight table");
    points->set_config("--config", "",
                       "plain key=value config file; flags override it");
    struct {
        std::string rule = "ut";
        int dim = 1;
        double kappa = 0.0;
        int order = 3;
        std::size_t max_points = gpquad::kDefaultPointBudget;
        std::string out;
    } points_opts;
    points->add_option("--rule", points_opts.rule, "rule: ut, sr or gh")
        ->capture_default_str();
    points->add_option("--dim", points_opts.dim, "input dimension")->capture_default_str();
    points->add_option("--kappa", points_opts.kappa, "unscented kappa")
        ->capture_default_str();
    points->add_option("--order", points_opts.order, "Gauss-Hermite order")
        ->capture_default_str();
    points->add_option("--max-points", points_opts.max_points,
                       "tensor-grid point budget")
        ->capture_default_str();
    points->add_option("--out", points_opts.out, "output CSV path ('-' = stdout)");

    // --- transform ---
    auto* transform = app.add_subcommand("transform",
                                         "propagate a Gaussian through a nonlinearity");
    transform->set_config("--config", "",
                       "plain key=value config file; flags override it");
    struct {
        std::string rule = "ut";
        std::string method = "classical";
        std::string func = "polar";
        std::string mean;
        std::string cov;
        double kappa = 0.0;
        int order = 3;
        double alpha = 1.0;
        std::string lengthscale = "1";
        std::int64_t samples = 10000;
        std::uint64_t seed = 0;
        int time_index = 1;
        std::string out;
    } tr_opts;
    transform->add_option("--rule", tr_opts.rule, "point set: ut, sr or gh")
        ->capture_default_str();
    transform
        ->add_option("--method", tr_opts.method, "transform: classical, gpq or mc")
        ->capture_default_str();
    transform
        ->add_option("--func", tr_opts.func,
                     "nonlinearity: polar, ungm-dyn, ungm-obs or reentry-obs")
        ->capture_default_str();
    transform->add_option("--mean", tr_opts.mean, "input mean, comma separated")
        ->required();
    transform
        ->add_option("--cov", tr_opts.cov,
                     "input covariance: D diagonal or D*D row-major values")
        ->required();
    transform->add_option("--kappa", tr_opts.kappa, "unscented kappa")
        ->capture_default_str();
    transform->add_option("--order", tr_opts.order, "Gauss-Hermite order")
        ->capture_default_str();
    transform->add_option("--alpha", tr_opts.alpha, "kernel scaling (gpq)")
        ->capture_default_str();
    transform
        ->add_option("--lengthscale", tr_opts.lengthscale,
                     "kernel lengthscales, comma separated; one value "
                     "broadcasts to all dimensions (gpq)")
        ->capture_default_str();
    transform->add_option("--samples", tr_opts.samples, "sample count (mc)")
        ->capture_default_str();
    transform->add_option("--seed", tr_opts.seed, "seed (mc)")->capture_default_str();
    transform
        ->add_option("--k", tr_opts.time_index, "time step for ungm-dyn")
        ->capture_default_str();
    transform->add_option("--out", tr_opts.out, "output CSV path ('-' = stdout)");

    // --- polar ---
    auto* polar = app.add_subcommand(
        "polar", "polar->Cartesian SKL study on the spiral grid (10 positions x "
                 "10 azimuth sigmas, SR vs GPQ-SR)");
    polar->set_config("--config", "",
                       "plain key=value config file; flags override it");
    gpquad::PolarConfig polar_cfg;
    std::string polar_out;
    polar->add_option("--seed", polar_cfg.seed, "master seed")->capture_default_str();
    polar->add_option("--samples", polar_cfg.mc_samples,
                      "Monte Carlo truth samples per cell")
        ->capture_default_str();
    polar->add_option("--sigma-r", polar_cfg.sigma_r, "radius sigma [m]")
        ->capture_default_str();
    polar->add_option("--alpha", polar_cfg.alpha, "kernel scaling")
        ->capture_default_str();
    std::string polar_ls = "60,6";
    polar->add_option("--lengthscale", polar_ls, "kernel lengthscales")
        ->capture_default_str();
    polar->add_option("--jobs", polar_cfg.jobs,
                      "worker threads (0 = all cores); results do not depend on it")
        ->capture_default_str();
    polar->add_option("--out", polar_out, "output CSV path ('-' = stdout)");

    // --- ungm ---
    auto* ungm = app.add_subcommand(
        "ungm", "univariate growth-model filtering benchmark (shared "
                "measurement sequences across filters)");
    ungm->set_config("--config", "",
                       "plain key=value config file; flags override it");
    gpquad::UngmConfig ungm_cfg;
    struct {
        std::string filters = "ukf,gpqkf-ut";
        std::string obs_index = "printed";
        std::string lengthscale;
        int jobs = 0;
        std::string out;
    } ungm_opts;
    ungm->add_option("--runs", ungm_cfg.n_runs, "Monte Carlo runs (study scale: 100)")
        ->capture_default_str();
    ungm->add_option("--steps", ungm_cfg.steps, "time steps per run")
        ->capture_default_str();
    ungm->add_option("--seed", ungm_cfg.seed, "master seed")->capture_default_str();
    ungm->add_option("--filters", ungm_opts.filters,
                     "comma list: ukf, ckf, ghkf-R, gpqkf-ut, gpqkf-sr, gpqkf-gh-R")
        ->capture_default_str();
    ungm->add_option("--obs-index", ungm_opts.obs_index,
                     "which state the simulated measurement reads: 'printed' "
                     "(previous state) or 'conventional' (current state)")
        ->capture_default_str();
    ungm->add_option("--lengthscale", ungm_opts.lengthscale,
                     "override kernel lengthscale for all GPQ filters");
    ungm->add_option("--jobs", ungm_opts.jobs,
                     "worker threads (0 = all cores); results do not depend on it")
        ->capture_default_str();
    ungm->add_option("--out", ungm_opts.out, "output CSV path ('-' = stdout)");

    // --- reentry ---
    auto* reentry = app.add_subcommand(
        "reentry", "ballistic reentry tracking benchmark (UKF vs GPQKF-UT)");
    reentry->set_config("--config", "",
                       "plain key=value config file; flags override it");
    gpquad::ReentryConfig re_cfg;
    gpquad::ReentryKernels re_kernels;
    struct {
        int jobs = 0;
        std::string out;
        std::string curves;
        std::string ell_dyn = "10,10,10";
        std::string ell_obs = "15,20,20";
    } re_opts;
    reentry->add_option("--runs", re_cfg.n_runs, "Monte Carlo runs (study scale: 100)")
        ->capture_default_str();
    reentry->add_option("--seed", re_cfg.seed, "master seed")->capture_default_str();
    reentry->add_option("--duration", re_cfg.duration, "trajectory length [s]")
        ->capture_default_str();
    reentry->add_option("--q-pos", re_cfg.process_noise_diag(0),
                        "filter process noise, position [km^2]")
        ->capture_default_str();
    reentry->add_option("--q-vel", re_cfg.process_noise_diag(1),
                        "filter process noise, velocity [km^2/s^2]")
        ->capture_default_str();
    reentry->add_option("--q-theta", re_cfg.process_noise_diag(2),
                        "filter process noise, ballistic parameter")
        ->capture_default_str();
    reentry->add_option("--alpha-dyn", re_kernels.dynamics.alpha,
                        "kernel scaling, dynamics")
        ->capture_default_str();
    reentry->add_option("--alpha-obs", re_kernels.observation.alpha,
                        "kernel scaling, observation")
        ->capture_default_str();
    reentry->add_option("--ell-dyn", re_opts.ell_dyn, "kernel lengthscales, dynamics")
        ->capture_default_str();
    reentry
        ->add_option("--ell-obs", re_opts.ell_obs, "kernel lengthscales, observation")
        ->capture_default_str();
    reentry->add_option("--jobs", re_opts.jobs,
                        "worker threads (0 = all cores); results do not depend on it")
        ->capture_default_str();
    reentry->add_option("--out", re_opts.out, "metrics CSV path ('-' = stdout)");
    reentry->add_option("--curves", re_opts.curves, "per-time-step curves CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (points->parsed()) {
            const gpquad::UnitPointSet rule =
                build_rule(points_opts.rule, points_opts.dim, points_opts.kappa,
                           points_opts.order, points_opts.max_points);
            const std::string path = points_opts.out.empty()
                                         ? default_out_path("points.csv")
                                         : points_opts.out;
            with_csv_output(path, [&](std::ostream& out) { emit_points_csv(out, rule); });
        } else if (transform->parsed()) {
            const NamedFunction func = build_function(tr_opts.func, tr_opts.time_index);
            gpquad::GaussianDensity input;
            input.mean = parse_vector(tr_opts.mean);
            if (input.mean.size() != func.fn.in_dim) {
                throw gpquad::InvalidParameterError(
                    "function '" + func.name + "' expects dimension " +
                    std::to_string(func.fn.in_dim));
            }
            input.cov = parse_covariance(tr_opts.cov, input.mean.size());
            gpquad::validate(input);

            gpquad::MomentTransformResult res;
            if (tr_opts.method == "mc") {
                res = gpquad::mc_transform(func.fn, input, tr_opts.samples, tr_opts.seed);
            } else {
                const gpquad::UnitPointSet rule = build_rule(
                    tr_opts.rule, static_cast<int>(input.mean.size()), tr_opts.kappa,
                    tr_opts.order, gpquad::kDefaultPointBudget);
                if (tr_opts.method == "classical") {
                    res = gpquad::classical_transform(func.fn, input, rule);
                } else if (tr_opts.method == "gpq") {
                    const gpquad::RbfKernelParams kernel{
                        tr_opts.alpha,
                        parse_lengthscales(tr_opts.lengthscale, input.mean.size())};
                    res = gpquad::gpq_transform(func.fn, input, rule.points, kernel);
                } else {
                    throw gpquad::InvalidParameterError("unknown method '" +
                                                        tr_opts.method + "'");
                }
            }
            const std::string path = tr_opts.out.empty()
                                         ? default_out_path("transform.csv")
                                         : tr_opts.out;
            with_csv_output(path,
                            [&](std::ostream& out) { emit_transform_csv(out, res); });
        } else if (polar->parsed()) {
            const Eigen::VectorXd ls = parse_lengthscales(polar_ls, 2);
            polar_cfg.lengthscales = ls.head<2>();
            const gpquad::PolarResult res = gpquad::polar_experiment(polar_cfg);
            const std::string path =
                polar_out.empty() ? default_out_path("polar.csv") : polar_out;
            with_csv_output(path, [&](std::ostream& out) {
                CsvWriter csv(out);
                csv.header({"position_index", "sigma_theta_deg", "transform", "skl"});
                for (const gpquad::PolarCell& cell : res.grid) {
                    csv.row({std::to_string(cell.position_index),
                             format_number(cell.sigma_theta_deg), "sr",
                             format_number(cell.skl_sr)});
                    csv.row({std::to_string(cell.position_index),
                             format_number(cell.sigma_theta_deg), "gpq-sr",
                             format_number(cell.skl_gpq)});
                }
            });
            std::cout << "mean skl: sr " << format_number(res.sr_mean) << ", gpq-sr "
                      << format_number(res.gpq_mean) << "\n";
        } else if (ungm->parsed()) {
            ungm_cfg.observation_indexing =
                ungm_opts.obs_index == "printed"
                    ? gpquad::UngmObservationIndexing::PreviousState
                    : gpquad::UngmObservationIndexing::CurrentState;
            if (ungm_opts.obs_index != "printed" &&
                ungm_opts.obs_index != "conventional") {
                throw gpquad::InvalidParameterError(
                    "--obs-index must be 'printed' or 'conventional'");
            }
            std::vector<gpquad::SigmaFilterSpec> specs;
            std::stringstream stream(ungm_opts.filters);
            std::string label;
            while (std::getline(stream, label, ',')) {
                if (label.empty()) {
                    continue;
                }
                gpquad::SigmaFilterSpec spec = gpquad::ungm_filter_spec(label);
                if (spec.use_gpq && !ungm_opts.lengthscale.empty()) {
                    spec.kernel.lengthscales =
                        parse_lengthscales(ungm_opts.lengthscale, 1);
                }
                specs.push_back(std::move(spec));
            }
            const gpquad::UngmBenchmarkResult res =
                gpquad::ungm_benchmark(ungm_cfg, specs, ungm_opts.jobs);
            const std::string path =
                ungm_opts.out.empty() ? default_out_path("ungm.csv") : ungm_opts.out;
            with_csv_output(path, [&](std::ostream& out) {
                emit_run_metrics_csv(out, res.filter_labels, res.per_run);
            });
            print_summaries(res.filter_labels, res.summaries);
        } else if (reentry->parsed()) {
            re_kernels.dynamics.lengthscales = parse_lengthscales(re_opts.ell_dyn, 3);
            re_kernels.observation.lengthscales =
                parse_lengthscales(re_opts.ell_obs, 3);
            const gpquad::ReentryBenchmarkResult res =
                gpquad::reentry_benchmark(re_cfg, re_kernels, re_opts.jobs);
            const std::string path =
                re_opts.out.empty() ? default_out_path("reentry.csv") : re_opts.out;
            with_csv_output(path, [&](std::ostream& out) {
                emit_run_metrics_csv(out, res.filter_labels, res.per_run);
            });
            const std::string curve_path = re_opts.curves.empty()
                                               ? default_out_path("reentry_curves.csv")
                                               : re_opts.curves;
            const char* components[] = {"pos", "vel", "theta", "state"};
            with_csv_output(curve_path, [&](std::ostream& out) {
                CsvWriter csv(out);
                csv.header({"t", "filter", "component", "rmse", "nu"});
                const Eigen::Index steps = res.curves.front().time.size();
                for (Eigen::Index k = 0; k < steps; ++k) {
                    for (std::size_t f = 0; f < res.filter_labels.size(); ++f) {
                        const gpquad::ReentryCurves& c = res.curves[f];
                        for (int comp = 0; comp < 4; ++comp) {
                            const double r = comp < 3 ? c.rmse_components(comp, k)
                                                      : c.rmse_state(k);
                            const double nu = comp < 3 ? c.nu_components(comp, k)
                                                       : c.nu_state(k);
                            csv.row({format_number(c.time(k)), res.filter_labels[f],
                                     components[comp], format_number(r),
                                     format_number(nu)});
                        }
                    }
                }
            });
            print_summaries(res.filter_labels, res.summaries);
        }
        return 0;
    } catch (const gpquad::InvalidParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const gpquad::ResourceLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const gpquad::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
