#pragma once

namespace liecurve {

// Absolute tolerance for algebraic predicates, on unit-normalized brackets.
// Overridable through the LIECURVE_TOL environment variable.
double tau_alg();

// Relative singular-value cutoff for kernel extraction (derivation spaces).
inline constexpr double kDerivationSvdCut = 1e-8;

// Relative residual separating a soliton certificate from "none".
inline constexpr double kTolSol = 1e-7;

// Fixed-point residual for normalized-bracket-flow convergence.
inline constexpr double kTolFix = 1e-8;

// Consecutive accepted steps the fixed-point residual must stay below
// kTolFix before the flow is declared converged.
inline constexpr int kConvergenceDwell = 50;

// Metrics with an eigenvalue below kDegenerateEig * max eigenvalue are
// rejected rather than regularized.
inline constexpr double kDegenerateEig = 1e-12;

}  // namespace liecurve
