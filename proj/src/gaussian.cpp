#include "gpquad/gaussian.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "gpquad/errors.hpp"

namespace gpquad {

Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& cov) {
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() == Eigen::Success) {
        return llt.matrixL();
    }
    const double d = static_cast<double>(cov.rows());
    const double jitter = 1e-12 * cov.trace() / d;
    Eigen::MatrixXd bumped = cov;
    bumped.diagonal().array() += jitter;
    llt.compute(bumped);
    if (llt.info() != Eigen::Success) {
        throw SingularCovarianceError(
            "covariance is not positive definite even after jitter " +
            std::to_string(jitter));
    }
    return llt.matrixL();
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(m),
                                                      Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool is_psd(const Eigen::MatrixXd& m, double tol_scale) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(m),
                                                      Eigen::EigenvaluesOnly);
    const double largest = es.eigenvalues().cwiseAbs().maxCoeff();
    return es.eigenvalues().minCoeff() >= -tol_scale * std::max(largest, 1e-300);
}

void validate(const GaussianDensity& density) {
    if (density.mean.size() == 0) {
        throw InvalidParameterError("Gaussian density has empty mean");
    }
    if (density.cov.rows() != density.dim() || density.cov.cols() != density.dim()) {
        throw InvalidParameterError("covariance shape does not match mean dimension");
    }
    const double scale = std::max(density.cov.cwiseAbs().maxCoeff(), 1.0);
    const double asym = (density.cov - density.cov.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * scale) {
        throw InvalidParameterError("covariance is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(density.cov),
                                                      Eigen::EigenvaluesOnly);
    const double largest = es.eigenvalues().maxCoeff();
    if (es.eigenvalues().minCoeff() < -1e-9 * std::max(largest, 1e-300)) {
        throw InvalidParameterError("covariance has a significantly negative eigenvalue");
    }
    cholesky_with_jitter(density.cov);
}

} // namespace gpquad
