#include <doctest.h>

#include <cmath>
#include <vector>

#include "gpquad/errors.hpp"
#include "gpquad/gpq.hpp"
#include "gpquad/rng.hpp"
#include "gpquad/sigma_points.hpp"
#include "test_helpers.hpp"

using namespace gpquad;

namespace {

Eigen::MatrixXd random_points(Rng& rng, int dim, int count) {
    // rejection keeps pairwise separation, so Gram matrices stay well
    // conditioned for the noiseless solves
    Eigen::MatrixXd pts(dim, count);
    int placed = 0;
    int attempts = 0;
    while (placed < count) {
        if (++attempts > 200) { // adversarial layout, start over
            placed = 0;
            attempts = 0;
        }
        const Eigen::VectorXd candidate =
            Eigen::VectorXd::NullaryExpr(dim, [&] { return rng.uniform(-2.5, 2.5); });
        bool ok = true;
        for (int i = 0; i < placed; ++i) {
            if ((pts.col(i) - candidate).norm() < 0.4) {
                ok = false;
                break;
            }
        }
        if (ok) {
            pts.col(placed++) = candidate;
        }
    }
    return pts;
}

RbfKernelParams random_params(Rng& rng, int dim) {
    RbfKernelParams params;
    params.alpha = rng.uniform(0.5, 2.0);
    params.lengthscales =
        Eigen::VectorXd::NullaryExpr(dim, [&] { return rng.uniform(0.8, 3.0); });
    return params;
}

// brute-force estimates of the kernel expectations over xi ~ N(0, I)
struct McKernelExpectations {
    Eigen::VectorXd q;
    Eigen::MatrixXd qq;
    Eigen::MatrixXd cross;
};

McKernelExpectations mc_kernel_expectations(const Eigen::MatrixXd& points,
                                            const RbfKernelParams& params,
                                            std::int64_t samples, std::uint64_t seed) {
    const Eigen::Index dim = points.rows();
    const Eigen::Index n = points.cols();
    McKernelExpectations est{Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n),
                             Eigen::MatrixXd::Zero(dim, n)};
    Rng rng(seed);
    Eigen::VectorXd kvec(n);
    for (std::int64_t s = 0; s < samples; ++s) {
        const Eigen::VectorXd xi = rng.normal_vector(dim);
        for (Eigen::Index i = 0; i < n; ++i) {
            kvec(i) = rbf_kernel(xi, points.col(i), params);
        }
        est.q += kvec;
        est.qq.noalias() += kvec * kvec.transpose();
        est.cross.noalias() += xi * kvec.transpose();
    }
    const double inv = 1.0 / static_cast<double>(samples);
    est.q *= inv;
    est.qq *= inv;
    est.cross *= inv;
    return est;
}

} // namespace

TEST_CASE("rbf_kernel closed-form values") {
    const RbfKernelParams unit = RbfKernelParams::isotropic(1.0, 1.0, 1);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
    CHECK(rbf_kernel(one, one, unit) == doctest::Approx(1.0));
    CHECK(rbf_kernel(zero, one, unit) ==
          doctest::Approx(0.6065306597126334).epsilon(1e-14));

    const RbfKernelParams scaled = RbfKernelParams::isotropic(2.0, 1.0, 1);
    CHECK(rbf_kernel(zero, one, scaled) ==
          doctest::Approx(4.0 * rbf_kernel(zero, one, unit)).epsilon(1e-14));

    Rng rng(5);
    const RbfKernelParams ard{1.3, Eigen::Vector3d(0.7, 1.1, 2.0)};
    const Eigen::VectorXd a = rng.normal_vector(3);
    const Eigen::VectorXd b = rng.normal_vector(3);
    CHECK(rbf_kernel(a, b, ard) == doctest::Approx(rbf_kernel(b, a, ard)));
    CHECK(rbf_kernel(a, a, ard) == doctest::Approx(1.3 * 1.3));
}

TEST_CASE("kernel_matrix") {
    SUBCASE("single point") {
        const RbfKernelParams params = RbfKernelParams::isotropic(1.5, 1.0, 1);
        const KernelMatrix km =
            kernel_matrix(Eigen::MatrixXd::Zero(1, 1), params);
        CHECK(km.gram(0, 0) == doctest::Approx(2.25));
        CHECK(km.jitter_used == 0.0);
    }
    SUBCASE("duplicate points are rejected") {
        Eigen::MatrixXd pts(1, 2);
        pts << 0.7, 0.7;
        CHECK_THROWS_AS(kernel_matrix(pts, RbfKernelParams::isotropic(1.0, 1.0, 1)),
                        IllConditionedKernelError);
    }
    SUBCASE("unscented points at unit lengthscale") {
        const KernelMatrix km = kernel_matrix(
            ut_points(1, 0.0).points, RbfKernelParams::isotropic(1.0, 1.0, 1));
        CHECK(km.gram(0, 1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
        CHECK(km.gram(1, 2) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    }
}

TEST_CASE("kernel expectation closed forms at the origin") {
    SUBCASE("kernel mean") {
        const Eigen::MatrixXd origin1 = Eigen::MatrixXd::Zero(1, 1);
        CHECK(kernel_mean_vector(origin1, RbfKernelParams::isotropic(1.0, 1.0, 1))(0) ==
              doctest::Approx(0.7071067811865476).epsilon(1e-14));
        const Eigen::MatrixXd origin2 = Eigen::MatrixXd::Zero(2, 1);
        CHECK(kernel_mean_vector(origin2, RbfKernelParams::isotropic(1.0, 1.0, 2))(0) ==
              doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("kernel covariance") {
        const Eigen::MatrixXd origin = Eigen::MatrixXd::Zero(1, 1);
        CHECK(kernel_cov_matrix(origin, RbfKernelParams::isotropic(1.0, 1.0, 1))(0, 0) ==
              doctest::Approx(0.5773502691896258).epsilon(1e-14));
    }
    SUBCASE("kernel cross moments") {
        const Eigen::MatrixXd origin = Eigen::MatrixXd::Zero(2, 1);
        CHECK(kernel_cross_matrix(origin, RbfKernelParams::isotropic(1.0, 1.0, 2))
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
        Eigen::MatrixXd one(1, 1);
        one << 1.0;
        CHECK(kernel_cross_matrix(one, RbfKernelParams::isotropic(1.0, 1.0, 1))(0, 0) ==
              doctest::Approx(0.2753476574515919).epsilon(1e-12));
    }
}

TEST_CASE("kernel covariance is symmetric on random points") {
    Rng rng(31);
    const Eigen::MatrixXd pts = random_points(rng, 3, 6);
    const RbfKernelParams params = random_params(rng, 3);
    const Eigen::MatrixXd cov = kernel_cov_matrix(pts, params);
    CHECK((cov - cov.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("kernel expectations agree with brute-force sampling") {
    Rng rng(7);
    for (int trial = 0; trial < 3; ++trial) {
        const int dim = 1 + static_cast<int>(rng.uniform_index(3));
        const int count = 3 + static_cast<int>(rng.uniform_index(4));
        const Eigen::MatrixXd pts = random_points(rng, dim, count);
        const RbfKernelParams params = random_params(rng, dim);

        const McKernelExpectations est =
            mc_kernel_expectations(pts, params, 200000, 1000 + trial);
        const Eigen::VectorXd q = kernel_mean_vector(pts, params);
        const Eigen::MatrixXd qq = kernel_cov_matrix(pts, params);
        const Eigen::MatrixXd cross = kernel_cross_matrix(pts, params);

        for (Eigen::Index i = 0; i < q.size(); ++i) {
            if (std::abs(q(i)) > 0.01) {
                CHECK(est.q(i) == doctest::Approx(q(i)).epsilon(0.03));
            }
            for (Eigen::Index j = 0; j < q.size(); ++j) {
                if (std::abs(qq(i, j)) > 0.01) {
                    CHECK(est.qq(i, j) == doctest::Approx(qq(i, j)).epsilon(0.03));
                }
            }
            for (Eigen::Index d = 0; d < dim; ++d) {
                if (std::abs(cross(d, i)) > 0.01) {
                    CHECK(est.cross(d, i) ==
                          doctest::Approx(cross(d, i)).epsilon(0.05));
                }
            }
        }
    }
}

TEST_CASE("gpq_weights single-point algebra") {
    const GpqWeights w = gpq_weights(Eigen::MatrixXd::Zero(1, 1),
                                     RbfKernelParams::isotropic(1.0, 1.0, 1));
    CHECK(w.w_mean(0) == doctest::Approx(0.7071067811865476).epsilon(1e-13));
    CHECK(w.sigma_bar_sq == doctest::Approx(0.4226497308103742).epsilon(1e-13));
}

TEST_CASE("weights are independent of the kernel scaling") {
    const std::vector<UnitPointSet> rules{ut_points(2, 0.0), sr_points(3),
                                          gh_points(2, 3)};
    for (const UnitPointSet& rule : rules) {
        const int dim = static_cast<int>(rule.dim());
        const Eigen::VectorXd ls = Eigen::VectorXd::Constant(dim, 1.7);
        const GpqWeights base = gpq_weights(rule.points, {1.0, ls});
        for (const double alpha : {0.1, 10.0}) {
            const GpqWeights other = gpq_weights(rule.points, {alpha, ls});
            CHECK((base.w_mean - other.w_mean).cwiseAbs().maxCoeff() < 1e-9);
            CHECK((base.w_cov - other.w_cov).cwiseAbs().maxCoeff() < 1e-9);
            CHECK((base.w_cross - other.w_cross).cwiseAbs().maxCoeff() < 1e-9);
            // the additive variance term scales exactly with alpha^2
            CHECK(other.sigma_bar_sq ==
                  doctest::Approx(alpha * alpha * base.sigma_bar_sq).epsilon(1e-9));
        }
    }
}

TEST_CASE("gpq_weights is a pure function") {
    const UnitPointSet rule = ut_points(2, 1.0);
    const RbfKernelParams params{0.8, Eigen::Vector2d(1.5, 2.5)};
    const GpqWeights a = gpq_weights(rule.points, params);
    const GpqWeights b = gpq_weights(rule.points, params);
    CHECK((a.w_mean - b.w_mean).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.w_cov - b.w_cov).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.w_cross - b.w_cross).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.sigma_bar_sq == b.sigma_bar_sq);
}

TEST_CASE("kernel feature covariance Q - q q^T is PSD") {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 1 + static_cast<int>(rng.uniform_index(4));
        const Eigen::MatrixXd pts =
            random_points(rng, dim, 2 + static_cast<int>(rng.uniform_index(6)));
        const RbfKernelParams params = random_params(rng, dim);
        const Eigen::VectorXd q = kernel_mean_vector(pts, params);
        const Eigen::MatrixXd qq = kernel_cov_matrix(pts, params);
        const Eigen::MatrixXd feature_cov = qq - q * q.transpose();
        const double largest = std::max(feature_cov.cwiseAbs().maxCoeff(), 1e-12);
        CHECK(min_eigenvalue(feature_cov) >= -1e-9 * largest);
    }
}

TEST_CASE("gpq covariance inflation for sin through unscented points") {
    GaussianDensity input{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1)};
    const VectorFunction g{1, 1, [](const Eigen::VectorXd& x) {
                               return Eigen::VectorXd::Constant(1, std::sin(x(0)));
                           }};
    const UnitPointSet rule = ut_points(1, 2.0);
    const MomentTransformResult classical = classical_transform(g, input, rule);
    const GpqWeights weights =
        gpq_weights(rule.points, RbfKernelParams::isotropic(1.0, 3.0, 1));
    const MomentTransformResult gpq = gpq_transform(g, input, weights);
    CHECK(gpq.extra.sigma_bar_sq.has_value());
    CHECK(gpq.out_cov(0, 0) >= classical.out_cov(0, 0) + weights.sigma_bar_sq);
}

TEST_CASE("gpq joint covariance is positive semi-definite") {
    Rng rng(4242);
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 1 + static_cast<int>(rng.uniform_index(4));
        const int out = 1 + static_cast<int>(rng.uniform_index(4));
        UnitPointSet rule;
        switch (rng.uniform_index(3)) {
        case 0:
            rule = ut_points(dim, 0.5);
            break;
        case 1:
            rule = sr_points(dim);
            break;
        default:
            rule = gh_points(dim, 2 + static_cast<int>(rng.uniform_index(2)));
            break;
        }
        const RbfKernelParams params = random_params(rng, dim);
        const GpqWeights weights = gpq_weights(rule.points, params);

        GaussianDensity input;
        input.mean = Eigen::VectorXd::NullaryExpr(dim, [&] { return rng.normal(); });
        input.cov = testing_oracles::random_pd(
            Eigen::MatrixXd::NullaryExpr(dim, dim, [&] { return rng.normal(); }));
        // arbitrary smooth nonlinearity mixing the outputs
        Eigen::MatrixXd mix =
            Eigen::MatrixXd::NullaryExpr(out, dim, [&] { return rng.normal(); });
        const VectorFunction g{dim, out,
                               [mix](const Eigen::VectorXd& x) -> Eigen::VectorXd {
                                   return (mix * x).array().sin().matrix() +
                                          0.3 * (mix * x);
                               }};
        const MomentTransformResult res = gpq_transform(g, input, weights);

        Eigen::MatrixXd joint(dim + out, dim + out);
        joint.topLeftCorner(dim, dim) = input.cov;
        joint.topRightCorner(dim, out) = res.cross_cov;
        joint.bottomLeftCorner(out, dim) = res.cross_cov.transpose();
        joint.bottomRightCorner(out, out) = res.out_cov;
        const double largest = std::max(joint.cwiseAbs().maxCoeff(), 1e-12);
        CHECK(min_eigenvalue(res.out_cov) >=
              -1e-9 * std::max(res.out_cov.cwiseAbs().maxCoeff(), 1e-12));
        CHECK(min_eigenvalue(joint) >= -1e-9 * largest);
    }
}

TEST_CASE("gp_posterior") {
    Rng rng(88);
    SUBCASE("interpolates the observations at the training points") {
        const Eigen::MatrixXd pts = random_points(rng, 2, 5);
        const RbfKernelParams params = random_params(rng, 2);
        const Eigen::VectorXd values = rng.normal_vector(5);
        for (Eigen::Index i = 0; i < pts.cols(); ++i) {
            const auto [mean, variance] = gp_posterior(pts, values, params, pts.col(i));
            CHECK(std::abs(mean - values(i)) <= 1e-6);
            CHECK(variance <= 1e-6 * params.alpha * params.alpha);
        }
    }
    SUBCASE("reverts to the prior far away from the data") {
        const Eigen::MatrixXd pts = random_points(rng, 1, 4);
        const RbfKernelParams params = RbfKernelParams::isotropic(1.4, 0.9, 1);
        const Eigen::VectorXd values = rng.normal_vector(4);
        const auto [mean, variance] = gp_posterior(
            pts, values, params, Eigen::VectorXd::Constant(1, 500.0));
        const double alpha_sq = params.alpha * params.alpha;
        CHECK(std::abs(variance - alpha_sq) <= 1e-3 * alpha_sq);
        CHECK(std::abs(mean) <= 1e-6);
    }
    SUBCASE("single observation") {
        Eigen::MatrixXd pts(1, 1);
        pts << 0.3;
        const auto [mean, variance] =
            gp_posterior(pts, Eigen::VectorXd::Constant(1, 2.0),
                         RbfKernelParams::isotropic(1.0, 1.0, 1), pts.col(0));
        CHECK(mean == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(variance <= 1e-12);
    }
}

TEST_CASE("large lengthscales recover exact means of linear functions") {
    const UnitPointSet rule = ut_points(2, 0.0);
    const GpqWeights weights =
        gpq_weights(rule.points, RbfKernelParams::isotropic(1.0, 1000.0, 2));
    GaussianDensity input{Eigen::Vector2d(0.5, -1.0),
                          (Eigen::Matrix2d() << 2.0, 0.4, 0.4, 1.0).finished()};
    const Eigen::Matrix2d a = (Eigen::Matrix2d() << 1.0, 2.0, -0.5, 1.5).finished();
    const VectorFunction g{2, 2, [a](const Eigen::VectorXd& x) -> Eigen::VectorXd {
                               return a * x;
                           }};
    const MomentTransformResult res = gpq_transform(g, input, weights);
    const Eigen::Vector2d exact = a * input.mean;
    CHECK((res.out_mean - exact).norm() <= 1e-3 * exact.norm());
}

TEST_CASE("integral_variance is a nonnegative shrinking diagnostic") {
    Rng rng(3131);
    const RbfKernelParams params = RbfKernelParams::isotropic(1.0, 1.0, 1);
    const Eigen::MatrixXd few = ut_points(1, 0.0).points;
    const Eigen::MatrixXd many = gh_points(1, 7).points;
    const double v_few = integral_variance(few, params);
    const double v_many = integral_variance(many, params);
    CHECK(v_few >= 0.0);
    CHECK(v_many >= 0.0);
    CHECK(v_many < v_few);

    // first term of the closed form vs brute force
    const double prior_term = 1.0 / std::sqrt(3.0);
    double est = 0.0;
    const int samples = 200000;
    for (int s = 0; s < samples; ++s) {
        est += rbf_kernel(rng.normal_vector(1), rng.normal_vector(1), params);
    }
    est /= samples;
    CHECK(est == doctest::Approx(prior_term).epsilon(0.02));
}
