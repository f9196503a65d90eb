#include "nicert/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "nicert/errors.hpp"

namespace nicert {

namespace {

bool nearly_hermitian(const Eigen::MatrixXcd& M) {
    return (M - M.adjoint()).norm() <= 1e-12 * (1.0 + M.norm());
}

}  // namespace

SpectralSummary spectral(const Eigen::MatrixXcd& M, bool assert_real_spectrum) {
    if (M.rows() != M.cols()) throw Error("spectral() needs a square matrix");
    SpectralSummary out{};
    if (nearly_hermitian(M)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
        out.lambda_min = es.eigenvalues().minCoeff();
        out.lambda_max = es.eigenvalues().maxCoeff();
    } else {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
        double radius = 0.0, max_im = 0.0;
        for (int i = 0; i < es.eigenvalues().size(); ++i) {
            radius = std::max(radius, std::abs(es.eigenvalues()(i)));
            max_im = std::max(max_im, std::abs(es.eigenvalues()(i).imag()));
        }
        if (assert_real_spectrum && max_im > 1e-8 * std::max(radius, 1e-300)) {
            throw ComplexSpectrum("eigenvalue with significant imaginary part");
        }
        out.lambda_min = es.eigenvalues()(0).real();
        out.lambda_max = out.lambda_min;
        for (int i = 0; i < es.eigenvalues().size(); ++i) {
            out.lambda_min = std::min(out.lambda_min, es.eigenvalues()(i).real());
            out.lambda_max = std::max(out.lambda_max, es.eigenvalues()(i).real());
        }
    }
    out.sigma_min = sigma_min(M);
    return out;
}

SpectralSummary spectral(const Eigen::MatrixXd& M, bool assert_real_spectrum) {
    return spectral(Eigen::MatrixXcd(M.cast<std::complex<double>>()), assert_real_spectrum);
}

double hermitian_lambda_min(const Eigen::MatrixXcd& M) {
    Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double hermitian_lambda_max(const Eigen::MatrixXcd& M) {
    Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double symmetric_lambda_min(const Eigen::MatrixXd& M) {
    Eigen::MatrixXd H = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double symmetric_lambda_max(const Eigen::MatrixXd& M) {
    Eigen::MatrixXd H = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double sigma_min(const Eigen::MatrixXcd& M) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

double sigma_max(const Eigen::MatrixXcd& M) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    return svd.singularValues()(0);
}

}  // namespace nicert
