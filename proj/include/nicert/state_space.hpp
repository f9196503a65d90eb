#pragma once

#include <Eigen/Dense>
#include <complex>

#include "nicert/transfer_matrix.hpp"

namespace nicert {

struct StateSpaceRealization {
    Eigen::MatrixXd A, B, C, D;

    int order() const { return static_cast<int>(A.rows()); }

    /// C (sI - A)^{-1} B + D.
    Eigen::MatrixXcd eval(std::complex<double> s) const;

    /// Eigenvalues of A.
    Eigen::VectorXcd pole_eigenvalues() const;
};

/// Entrywise controllable-canonical stacking (generally non-minimal).
StateSpaceRealization realize(const TransferMatrix& G);

/// Kalman-reduced minimal realization, validated against the source matrix
/// at probe frequencies.
StateSpaceRealization minimal_realization(const TransferMatrix& G);

/// Positive feedback interconnection of P and C built from minimal
/// realizations; eigenvalues of A are the closed-loop poles.  Inputs are the
/// two loop injections and outputs the two internal signals.  Throws
/// IllPosedError when I - P(inf)C(inf) is singular.
StateSpaceRealization close_loop(const TransferMatrix& P, const TransferMatrix& C);

}  // namespace nicert
