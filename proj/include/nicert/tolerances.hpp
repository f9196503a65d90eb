#pragma once

// Central numeric tolerances.  These are part of the certificates the
// library emits, so they live in one place and reports embed them.

namespace nicert::tol {

// Singular values below rank_rel x largest are treated as rank deficient.
inline constexpr double rank_rel = 1e-9;

// |Re(pole)| < axis_pole * (1 + |pole|) classifies a pole as imaginary-axis.
inline constexpr double axis_pole = 1e-8;

// eval_at refuses points with |den(s)| <= eval_pole * ||den coeffs||.
inline constexpr double eval_pole = 1e-12;

// Margin for deciding strict eigenvalue inequalities; values inside the
// margin are flagged as boundary rather than silently classified.
inline constexpr double eig_margin = 1e-9;

// Relative smallest-singular-value threshold for well-posedness.
inline constexpr double det_wellposed = 1e-10;

// Absolute tolerance on eigenvalues of unit-normalized frequency responses.
inline constexpr double freq_ineq = 1e-9;

// Engineered closed-loop singularity tolerance for counterexample pins.
inline constexpr double pin = 1e-6;

// Witness replay reproduction tolerance.
inline constexpr double witness_replay = 1e-9;

// Closed-loop eigenvalues with real part above -stability_re are unstable.
inline constexpr double stability_re = 1e-8;

}  // namespace nicert::tol
