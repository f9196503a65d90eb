#pragma once

#include <Eigen/Dense>

namespace nicert {

struct SpectralSummary {
    double lambda_max;
    double lambda_min;
    double sigma_min;
};

/// Extreme eigenvalues and smallest singular value.  When
/// assert_real_spectrum is set and an eigenvalue with
/// |Im| > 1e-8 * spectral radius appears, throws ComplexSpectrum.
SpectralSummary spectral(const Eigen::MatrixXcd& M, bool assert_real_spectrum = true);
SpectralSummary spectral(const Eigen::MatrixXd& M, bool assert_real_spectrum = true);

/// lambda_min / lambda_max of a Hermitian matrix (symmetrized input).
double hermitian_lambda_min(const Eigen::MatrixXcd& M);
double hermitian_lambda_max(const Eigen::MatrixXcd& M);
double symmetric_lambda_min(const Eigen::MatrixXd& M);
double symmetric_lambda_max(const Eigen::MatrixXd& M);

double sigma_min(const Eigen::MatrixXcd& M);
double sigma_max(const Eigen::MatrixXcd& M);

}  // namespace nicert
