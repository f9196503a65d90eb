#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nicert/transfer_matrix.hpp"

namespace nicert {

enum class StabilityStatus { Stable, Unstable, IllPosed, Inconclusive };

struct StabilityVerdict {
    StabilityStatus status = StabilityStatus::Unstable;
    std::optional<std::complex<double>> offending_pole;
    std::optional<std::string> failed_condition;  // "a" / "b" / "c" / "well-posedness"
    bool boundary = false;  // a decisive quantity sits inside the strictness margin
    std::map<std::string, double> condition_values;
};

struct PsiParameter {
    Eigen::MatrixXd psi;
};

/// Default admissible Psi for a given P(inf): negative definite with
/// lambda_max(P(inf) Psi) < 1.
PsiParameter default_psi(const Eigen::MatrixXd& p_inf);

/// Brute-force verdict from the closed-loop state matrix.
StabilityVerdict oracle_stability(const TransferMatrix& P, const TransferMatrix& C);

/// Static/instantaneous-gain feedback stability test for P NI without origin
/// poles and C SNI (first condition set).
StabilityVerdict lemma2_check(const TransferMatrix& P, const TransferMatrix& C);

/// Alternative condition set under the same hypotheses.
StabilityVerdict lemma3_check(const TransferMatrix& P, const TransferMatrix& C);

/// Variant admitting origin poles in P; condition (c) is the symbolic
/// s -> 0 limit of (I - Psi P(inf)) (I - C P(inf))^{-1} (C P - I) (I - Psi P)^{-1}.
StabilityVerdict lemma4_check(const TransferMatrix& P, const TransferMatrix& C,
                              std::optional<PsiParameter> psi = std::nullopt);

struct HomotopyReport {
    std::vector<double> tau_grid;
    // Determinant triples per tau for the two condition lists.
    std::vector<std::array<double, 3>> det_b;
    std::vector<std::array<double, 3>> det_c;
    bool statement_a = false;  // per-tau gain-condition check
    bool statement_b = false;  // first determinant list nonvanishing
    bool statement_c = false;  // second determinant list nonvanishing
    bool equivalent_verdict = false;  // the three statements agree
    int refinements = 0;
};

/// Homotopy determinant equivalences over tau in [0,1].
HomotopyReport theorem1_check(const TransferMatrix& P, const TransferMatrix& C);

/// Sufficient eigenvalue test: Stable when lambda_max[P(0)C(0)] < 1 and
/// lambda_max[P(inf)C(inf)] < 1 under a sign hypothesis on P(inf) or C(inf);
/// Inconclusive otherwise.
StabilityVerdict theorem2_check(const TransferMatrix& P, const TransferMatrix& C);

}  // namespace nicert
