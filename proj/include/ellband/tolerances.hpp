#pragma once

// Central tolerance configuration.  Every numeric threshold used by the
// library and its verification suite lives here, so that a change in one
// place propagates consistently.

namespace ellband::tol {

// Elliptic function kernel: Pythagorean identities of the (sn, cn, dn) triple.
inline constexpr double kernel = 1e-12;

// Closed-form shift identities and periodicity checks against direct
// evaluation.
inline constexpr double identity = 1e-10;

// First derivative at a reported potential extremum.
inline constexpr double extremum_gradient = 1e-8;

// |V''| below this at a stationary point classifies it as degenerate.
inline constexpr double extremum_curvature = 1e-8;

// Membership test for the solvability parabolas q = (a-n+1)(a-n).
inline constexpr double parabola = 1e-9;

// Relative Schroedinger residual max|-psi'' + (V-E) psi| / max|psi|.
inline constexpr double residual = 1e-6;

// Agreement between closed-form and numerically located band edges.
inline constexpr double edge_match = 1e-5;

// QES block eigenvalues against the tabulated closed forms.
inline constexpr double qes_match = 1e-9;

// Monodromy integrator error control.
inline constexpr double ode_rel = 1e-10;
inline constexpr double ode_abs = 1e-12;

// Band edge root refinement in energy.
inline constexpr double edge_bisect = 1e-9;

// |dD/dE| below this at |D| = 2 marks a closed gap (double edge).
inline constexpr double tangency = 1e-6;

// Wronskian drift allowed over one period of integration.
inline constexpr double wronskian = 1e-9;

// Self-isospectrality verdict thresholds for max|V+(x) - V-(x - L/2)|.
inline constexpr double self_iso_pass = 1e-8;
inline constexpr double self_iso_fail = 1e-3;

// Superpotential construction invariants: oddness and one-period mean.
inline constexpr double superpotential_odd = 1e-9;
inline constexpr double superpotential_mean = 1e-8;

// Band-edge wavefunction period classification psi(x+L) = +/- psi(x).
inline constexpr double period_class = 1e-8;

}  // namespace ellband::tol
