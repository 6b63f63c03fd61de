#include "gpquad/transform.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "gpquad/errors.hpp"
#include "gpquad/parallel.hpp"
#include "gpquad/rng.hpp"

namespace gpquad {

namespace {

constexpr std::int64_t kMcBlockSize = 8192;

void check_input_dims(const VectorFunction& g, const GaussianDensity& input) {
    if (g.in_dim != input.dim()) {
        throw InvalidParameterError("function input dimension " +
                                    std::to_string(g.in_dim) +
                                    " does not match density dimension " +
                                    std::to_string(input.dim()));
    }
}

struct McBlockSums {
    Eigen::VectorXd sum_x;  // D
    Eigen::VectorXd sum_y;  // E
    Eigen::MatrixXd sum_yy; // E x E
    Eigen::MatrixXd sum_xy; // D x E
};

// One block of the Monte Carlo accumulation; the block RNG stream depends
// only on (seed, block index), never on the executing thread.
McBlockSums mc_block(const VectorFunction& g, const Eigen::VectorXd& mean,
                     const Eigen::MatrixXd& chol, std::uint64_t seed,
                     std::int64_t block, std::int64_t block_samples) {
    const Eigen::Index d = mean.size();
    const Eigen::Index e = g.out_dim;
    McBlockSums sums{Eigen::VectorXd::Zero(d), Eigen::VectorXd::Zero(e),
                     Eigen::MatrixXd::Zero(e, e), Eigen::MatrixXd::Zero(d, e)};
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(block)));
    for (std::int64_t s = 0; s < block_samples; ++s) {
        const Eigen::VectorXd x = mean + chol * rng.normal_vector(d);
        const Eigen::VectorXd y = g(x);
        if (!y.allFinite()) {
            throw EvaluationError("non-finite function value at sample " +
                                  std::to_string(block * kMcBlockSize + s));
        }
        sums.sum_x += x;
        sums.sum_y += y;
        sums.sum_yy.noalias() += y * y.transpose();
        sums.sum_xy.noalias() += x * y.transpose();
    }
    return sums;
}

MomentTransformResult mc_transform_impl(const VectorFunction& g,
                                        const GaussianDensity& input,
                                        std::int64_t n_samples,
                                        std::uint64_t seed, int jobs) {
    check_input_dims(g, input);
    if (n_samples < 2) {
        throw InvalidParameterError("Monte Carlo transform needs at least 2 samples");
    }
    const Eigen::MatrixXd chol = cholesky_with_jitter(input.cov);
    const std::int64_t blocks = (n_samples + kMcBlockSize - 1) / kMcBlockSize;

    std::vector<McBlockSums> partial(static_cast<std::size_t>(blocks));
    parallel_for_index(static_cast<int>(blocks), jobs, [&](int b) {
        const std::int64_t begin = static_cast<std::int64_t>(b) * kMcBlockSize;
        const std::int64_t count = std::min(kMcBlockSize, n_samples - begin);
        partial[static_cast<std::size_t>(b)] =
            mc_block(g, input.mean, chol, seed, b, count);
    });

    // Canonical block-order reduction keeps the result independent of the
    // thread count.
    const Eigen::Index d = input.dim();
    const Eigen::Index e = g.out_dim;
    McBlockSums total{Eigen::VectorXd::Zero(d), Eigen::VectorXd::Zero(e),
                      Eigen::MatrixXd::Zero(e, e), Eigen::MatrixXd::Zero(d, e)};
    for (const McBlockSums& p : partial) {
        total.sum_x += p.sum_x;
        total.sum_y += p.sum_y;
        total.sum_yy += p.sum_yy;
        total.sum_xy += p.sum_xy;
    }

    const double n = static_cast<double>(n_samples);
    MomentTransformResult result;
    result.out_mean = total.sum_y / n;
    const Eigen::VectorXd x_mean = total.sum_x / n;
    result.out_cov = symmetrize(total.sum_yy / n -
                                result.out_mean * result.out_mean.transpose());
    result.cross_cov = total.sum_xy / n - x_mean * result.out_mean.transpose();
    return result;
}

} // namespace

Eigen::MatrixXd affine_map_points(const GaussianDensity& input,
                                  const Eigen::MatrixXd& unit_points) {
    if (unit_points.rows() != input.dim()) {
        throw InvalidParameterError("unit points do not match density dimension");
    }
    const Eigen::MatrixXd chol = cholesky_with_jitter(input.cov);
    return (chol * unit_points).colwise() + input.mean;
}

Eigen::MatrixXd evaluate_columns(const VectorFunction& g, const Eigen::MatrixXd& points) {
    Eigen::MatrixXd values(g.out_dim, points.cols());
    for (Eigen::Index i = 0; i < points.cols(); ++i) {
        const Eigen::VectorXd y = g(points.col(i));
        if (y.size() != g.out_dim) {
            throw EvaluationError("function returned dimension " +
                                  std::to_string(y.size()) + ", declared " +
                                  std::to_string(g.out_dim));
        }
        if (!y.allFinite()) {
            std::string coords;
            for (Eigen::Index r = 0; r < points.rows(); ++r) {
                coords += (r ? "," : "") + std::to_string(points(r, i));
            }
            throw EvaluationError("non-finite function value at point " +
                                  std::to_string(i) + " [" + coords + "]");
        }
        values.col(i) = y;
    }
    return values;
}

MomentTransformResult classical_transform(const VectorFunction& g,
                                          const GaussianDensity& input,
                                          const UnitPointSet& rule) {
    check_input_dims(g, input);
    if (rule.dim() != input.dim()) {
        throw InvalidParameterError("rule dimension does not match density dimension");
    }
    const Eigen::MatrixXd points = affine_map_points(input, rule.points);
    const Eigen::MatrixXd values = evaluate_columns(g, points);

    MomentTransformResult result;
    result.out_mean = values * rule.mean_weights;
    const Eigen::MatrixXd dy = values.colwise() - result.out_mean;
    const Eigen::MatrixXd dx = points.colwise() - input.mean;
    result.out_cov = symmetrize(dy * rule.cov_weights.asDiagonal() * dy.transpose());
    result.cross_cov = dx * rule.cov_weights.asDiagonal() * dy.transpose();
    result.extra.function_values = values;
    return result;
}

MomentTransformResult mc_transform(const VectorFunction& g,
                                   const GaussianDensity& input,
                                   std::int64_t n_samples, std::uint64_t seed) {
    return mc_transform_impl(g, input, n_samples, seed, 0);
}

MomentTransformResult mc_transform_serial(const VectorFunction& g,
                                          const GaussianDensity& input,
                                          std::int64_t n_samples, std::uint64_t seed) {
    return mc_transform_impl(g, input, n_samples, seed, 1);
}

} // namespace gpquad
