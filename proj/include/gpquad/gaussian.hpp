#pragma once

#include <Eigen/Core>

namespace gpquad {

/// Mean and covariance of a Gaussian random variable. The universal
/// input/output of every moment transform in this library.
struct GaussianDensity {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;

    Eigen::Index dim() const { return mean.size(); }
};

inline Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
    return 0.5 * (m + m.transpose());
}

/// Lower Cholesky factor of a covariance matrix.
///
/// If the plain factorization fails, a single jitter of
/// 1e-12 * trace(P)/D on the diagonal is attempted; a second failure
/// throws SingularCovarianceError. The jitter tolerates round-off
/// without masking genuinely singular inputs.
Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& cov);

/// Smallest eigenvalue of the symmetrized matrix.
double min_eigenvalue(const Eigen::MatrixXd& m);

/// True when every eigenvalue is >= -tol_scale * max(|eigenvalues|).
bool is_psd(const Eigen::MatrixXd& m, double tol_scale = 1e-9);

/// Checks the GaussianDensity invariants: matching dimensions, symmetry
/// within 1e-10 relative, eigenvalues above -1e-9 * largest, and a
/// factorizable covariance. Throws InvalidParameterError or
/// SingularCovarianceError.
void validate(const GaussianDensity& density);

} // namespace gpquad
