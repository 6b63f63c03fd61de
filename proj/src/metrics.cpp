#include "gpquad/metrics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>

#include "gpquad/errors.hpp"
#include "gpquad/rng.hpp"

namespace gpquad {

namespace {

void check_equal_lengths(std::size_t a, std::size_t b, const char* what) {
    if (a != b || a == 0) {
        throw InvalidParameterError(std::string(what) +
                                    ": sequences must be non-empty and equal length");
    }
}

} // namespace

double rmse(const std::vector<Eigen::VectorXd>& truth,
            const std::vector<Eigen::VectorXd>& estimates) {
    check_equal_lengths(truth.size(), estimates.size(), "rmse");
    double acc = 0.0;
    for (std::size_t k = 0; k < truth.size(); ++k) {
        acc += (truth[k] - estimates[k]).squaredNorm();
    }
    return std::sqrt(acc / static_cast<double>(truth.size()));
}

double nll(const std::vector<Eigen::VectorXd>& truth,
           const std::vector<Eigen::VectorXd>& means,
           const std::vector<Eigen::MatrixXd>& covs) {
    check_equal_lengths(truth.size(), means.size(), "nll");
    check_equal_lengths(truth.size(), covs.size(), "nll");
    double acc = 0.0;
    for (std::size_t k = 0; k < truth.size(); ++k) {
        const Eigen::Index dim = truth[k].size();
        const Eigen::MatrixXd chol = cholesky_with_jitter(covs[k]);
        const Eigen::VectorXd err = truth[k] - means[k];
        // log|2 pi P| = D log(2 pi) + 2 sum log diag(L)
        const double log_det = static_cast<double>(dim) * std::log(2.0 * std::numbers::pi) +
                               2.0 * chol.diagonal().array().log().sum();
        const Eigen::VectorXd white =
            chol.triangularView<Eigen::Lower>().solve(err);
        acc += 0.5 * (log_det + white.squaredNorm());
    }
    return acc / static_cast<double>(truth.size());
}

std::vector<double> inclination_per_run(
    const std::vector<std::vector<Eigen::VectorXd>>& truth_runs,
    const std::vector<std::vector<Eigen::VectorXd>>& mean_runs,
    const std::vector<std::vector<Eigen::MatrixXd>>& cov_runs) {
    const std::size_t runs = truth_runs.size();
    if (runs < 2) {
        throw InvalidParameterError("inclination needs at least two runs");
    }
    check_equal_lengths(runs, mean_runs.size(), "inclination");
    check_equal_lengths(runs, cov_runs.size(), "inclination");
    const std::size_t steps = truth_runs[0].size();
    for (std::size_t r = 0; r < runs; ++r) {
        check_equal_lengths(truth_runs[r].size(), steps, "inclination");
        check_equal_lengths(mean_runs[r].size(), steps, "inclination");
        check_equal_lengths(cov_runs[r].size(), steps, "inclination");
    }
    const Eigen::Index dim = truth_runs[0][0].size();

    // Sample mean-square-error matrix across runs, one per step.
    std::vector<Eigen::LLT<Eigen::MatrixXd>> mse_factors;
    mse_factors.reserve(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        Eigen::MatrixXd mse = Eigen::MatrixXd::Zero(dim, dim);
        for (std::size_t r = 0; r < runs; ++r) {
            const Eigen::VectorXd err = truth_runs[r][k] - mean_runs[r][k];
            mse.noalias() += err * err.transpose();
        }
        mse /= static_cast<double>(runs);
        Eigen::LLT<Eigen::MatrixXd> llt(mse);
        if (llt.info() != Eigen::Success) {
            throw DegenerateEnsembleError(
                "sample mean-square-error matrix singular at step " +
                std::to_string(k + 1));
        }
        mse_factors.push_back(std::move(llt));
    }

    std::vector<double> per_run(runs, 0.0);
    for (std::size_t r = 0; r < runs; ++r) {
        double acc = 0.0;
        for (std::size_t k = 0; k < steps; ++k) {
            const Eigen::VectorXd err = truth_runs[r][k] - mean_runs[r][k];
            const Eigen::MatrixXd chol = cholesky_with_jitter(cov_runs[r][k]);
            const double filter_form =
                chol.triangularView<Eigen::Lower>().solve(err).squaredNorm();
            const double sample_form = err.dot(mse_factors[k].solve(err));
            acc += std::log10(filter_form / sample_form);
        }
        per_run[r] = 10.0 * acc / static_cast<double>(steps);
    }
    return per_run;
}

double inclination(const std::vector<std::vector<Eigen::VectorXd>>& truth_runs,
                   const std::vector<std::vector<Eigen::VectorXd>>& mean_runs,
                   const std::vector<std::vector<Eigen::MatrixXd>>& cov_runs) {
    const std::vector<double> per_run =
        inclination_per_run(truth_runs, mean_runs, cov_runs);
    double acc = 0.0;
    for (const double v : per_run) {
        acc += v;
    }
    return acc / static_cast<double>(per_run.size());
}

double skl(const GaussianDensity& g1, const GaussianDensity& g2) {
    if (g1.dim() != g2.dim()) {
        throw InvalidParameterError("skl needs densities of equal dimension");
    }
    const Eigen::Index dim = g1.dim();
    const Eigen::LLT<Eigen::MatrixXd> llt1(g1.cov);
    const Eigen::LLT<Eigen::MatrixXd> llt2(g2.cov);
    if (llt1.info() != Eigen::Success || llt2.info() != Eigen::Success) {
        throw SingularCovarianceError("skl needs positive definite covariances");
    }
    const Eigen::VectorXd diff = g1.mean - g2.mean;
    const double quad1 = diff.dot(llt1.solve(diff));
    const double quad2 = diff.dot(llt2.solve(diff));
    const double trace12 = llt1.solve(g2.cov).trace();
    const double trace21 = llt2.solve(g1.cov).trace();
    return 0.25 * (quad1 + quad2 + trace12 + trace21 - 2.0 * static_cast<double>(dim));
}

BootstrapCi bootstrap_ci(const std::vector<double>& values, int n_resamples,
                         std::uint64_t seed) {
    if (values.size() < 2) {
        throw InvalidParameterError("bootstrap needs at least two values");
    }
    if (n_resamples < 2) {
        throw InvalidParameterError("bootstrap needs at least two resamples");
    }
    const std::size_t n = values.size();
    double total = 0.0;
    for (const double v : values) {
        total += v;
    }

    Rng rng(seed);
    std::vector<double> resampled(static_cast<std::size_t>(n_resamples));
    for (double& estimate : resampled) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += values[rng.uniform_index(n)];
        }
        estimate = acc / static_cast<double>(n);
    }
    double mean_of_means = 0.0;
    for (const double v : resampled) {
        mean_of_means += v;
    }
    mean_of_means /= static_cast<double>(n_resamples);
    double var = 0.0;
    for (const double v : resampled) {
        var += (v - mean_of_means) * (v - mean_of_means);
    }
    var /= static_cast<double>(n_resamples - 1);

    return {total / static_cast<double>(n), 2.0 * std::sqrt(var)};
}

} // namespace gpquad
