#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "nicert/transfer_matrix.hpp"

namespace nicert {

enum class NIVerdict { NotNI, NI, SNI };

// Which membership clause a witness violates: open-RHP pole, the frequency
// inequality on (0, inf), a nonreal axis-pole residue condition, or the
// origin-pole limit conditions.
enum class NIClause { RHPPole, FrequencyInequality, AxisResidue, OriginLimit };

struct NIWitness {
    NIClause clause;
    double omega0 = 0.0;        // violation frequency; 0 with at_origin for the origin clause
    bool at_origin = false;
    bool at_infinity = false;
    Eigen::VectorXcd direction;  // unit vector, phase-normalized
    double defect = 0.0;
};

struct FrequencyGridInfo {
    double omega_min = 0.0, omega_max = 0.0;
    int base_points = 0;
    int refined_points = 0;
    double tol_abs = 0.0;
};

struct NIClassification {
    NIVerdict verdict = NIVerdict::NotNI;
    std::optional<NIWitness> witness;          // present iff verdict == NotNI
    std::vector<PoleData> marginal_poles;      // imaginary-axis poles
    bool stable = false;                       // member of RH-infinity
    // Worst point of the frequency inequality over the grid (always filled
    // when the scan runs); reused as the violation witness downstream.
    double strictness_margin = 0.0;
    double strictness_omega = 0.0;
    Eigen::VectorXcd strictness_direction;
    std::complex<double> rhp_pole{0.0, 0.0};
    FrequencyGridInfo grid;
};

struct ClassifyOptions {
    double omega_min = 1e-6;
    double omega_max = 1e6;
    int base_points = 400;
    double tol = 1e-9;  // absolute, on unit-normalized responses
};

/// Membership test with certificate or violation witness.
NIClassification classify_ni(const TransferMatrix& G, const ClassifyOptions& opt = {});

/// Recompute the defect of a witness from scratch.
double replay_witness(const TransferMatrix& G, const NIWitness& w);

struct PassivityReport {
    bool passive = false;
    double min_value = 0.0;               // min over the grid of lambda_min(G + G*)
    std::optional<double> witness_omega;  // populated when not passive
};

/// Positive-real test.  Poles in the open right half plane raise
/// NotStableError; simple imaginary-axis poles with Hermitian PSD residues
/// are admitted (lossless case), anything else on the axis fails the test.
PassivityReport is_positive_real(const TransferMatrix& G, const ClassifyOptions& opt = {});

struct OutputStrictPassivityReport {
    bool output_strictly_passive = false;
    double epsilon_star = 0.0;
    std::optional<double> witness_omega;
};

/// Output strict passivity: largest feasible epsilon in
/// G + G* >= eps G* G over the grid.  Requires RH-infinity membership.
OutputStrictPassivityReport is_output_strictly_passive(const TransferMatrix& G,
                                                       const ClassifyOptions& opt = {});

/// Normalize phase so the first significantly nonzero entry is positive real.
Eigen::VectorXcd normalize_phase(Eigen::VectorXcd x);

}  // namespace nicert
