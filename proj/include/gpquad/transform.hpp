#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include <Eigen/Core>

#include "gpquad/gaussian.hpp"
#include "gpquad/sigma_points.hpp"

namespace gpquad {

/// A nonlinearity y = g(x) with declared input/output dimensions.
struct VectorFunction {
    Eigen::Index in_dim = 0;
    Eigen::Index out_dim = 0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> fn;

    Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return fn(x); }
};

/// Per-transform diagnostics attached to a result.
struct TransformDiagnostics {
    /// Expected GP variance used to inflate the output covariance (GPQ only).
    std::optional<double> sigma_bar_sq;
    /// Function values at the sigma-points, one column per point (empty for
    /// sample-based transforms).
    Eigen::MatrixXd function_values;
};

/// Joint-Gaussian approximation of (x, g(x)): output mean and covariance
/// plus the input-output cross-covariance.
struct MomentTransformResult {
    Eigen::VectorXd out_mean;  // E
    Eigen::MatrixXd out_cov;   // E x E
    Eigen::MatrixXd cross_cov; // D x E
    TransformDiagnostics extra;
};

/// Interface of a moment transform; implementations are immutable and safe
/// to share across threads.
class MomentTransform {
public:
    virtual ~MomentTransform() = default;
    virtual MomentTransformResult apply(const VectorFunction& g,
                                        const GaussianDensity& input) const = 0;
};

/// Maps unit sigma-points into the input space: column i becomes
/// mean + L * xi_i with cov = L L^T.
Eigen::MatrixXd affine_map_points(const GaussianDensity& input,
                                  const Eigen::MatrixXd& unit_points);

/// Evaluates g column-wise on X; throws EvaluationError naming the first
/// column whose value is non-finite.
Eigen::MatrixXd evaluate_columns(const VectorFunction& g, const Eigen::MatrixXd& points);

/// Weighted-sum moment transform: mean from mean_weights, second moments
/// from cov_weights, output covariance symmetrized.
MomentTransformResult classical_transform(const VectorFunction& g,
                                          const GaussianDensity& input,
                                          const UnitPointSet& rule);

/// Monte Carlo moment transform over n_samples draws from the input
/// density. Sampling is organized in fixed-size blocks, each with its own
/// seed derived from (seed, block index), and block sums are reduced in
/// block order; the result is therefore bit-identical no matter how many
/// threads execute the blocks. Runs the blocks with OpenMP when available.
MomentTransformResult mc_transform(const VectorFunction& g,
                                   const GaussianDensity& input,
                                   std::int64_t n_samples,
                                   std::uint64_t seed);

/// Serial reference for mc_transform: same block structure, same numbers,
/// no threading. Kept for testing the parallel path against.
MomentTransformResult mc_transform_serial(const VectorFunction& g,
                                          const GaussianDensity& input,
                                          std::int64_t n_samples,
                                          std::uint64_t seed);

/// classical_transform bound to a fixed rule.
class ClassicalTransform final : public MomentTransform {
public:
    explicit ClassicalTransform(UnitPointSet rule) : rule_(std::move(rule)) {}

    MomentTransformResult apply(const VectorFunction& g,
                                const GaussianDensity& input) const override {
        return classical_transform(g, input, rule_);
    }

    const UnitPointSet& rule() const { return rule_; }

private:
    UnitPointSet rule_;
};

} // namespace gpquad
