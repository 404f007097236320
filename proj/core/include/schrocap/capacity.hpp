#pragma once

#include "schrocap/manifold.hpp"
#include "schrocap/schrodinger.hpp"
#include "schrocap/spectrum.hpp"
#include "schrocap/types.hpp"

namespace schrocap {

/// Result of the constrained quadratic minimization
///   cap(A) = min { Q(u) : u = e_1 on A, mass-weighted mean of u = 0 }.
/// The minimizer is unique (Q strictly convex on an affine set).
struct CapacityResult {
  Real cap = 0.0;
  /// Minimizer u_A, full length, pinned to e_1 on A bit for bit.
  Vector minimizer;
  /// Multiplier of the mean-zero constraint.
  Real lagrange_mean = 0.0;
  /// Norm of the stationarity residual on free coordinates.
  Real kkt_residual = 0.0;
  HoleSet hole;
  /// min_i |e_1,i| recorded for division-safety diagnostics downstream.
  Real min_abs_e1 = 0.0;
};

/// Solve the capacity QP. e1 must be the sign-normalized first eigenvector of
/// op on the full manifold. Pinned coordinates are eliminated by substitution;
/// the mean constraint adds one bordered row to a sparse indefinite solve.
CapacityResult compute_capacity(const SchrodingerOperator& op, const HoleSet& a,
                                const Vector& e1);

/// cap/lambda_1 - <u_A, u_A>_mass; nonnegative up to round-off.
Real poincare_slack(const SchrodingerOperator& op, Real lambda1,
                    const CapacityResult& r);

/// Test functions phi_j = e_j (1 - u_A/e_1), which vanish exactly on A, with
/// the diagnostics used by the eigenvalue-shift certificate. All certified
/// quantities are subspace-level (eigenvalues of the reduced k x k pencil),
/// so they are stable under re-basing inside degenerate eigenspaces.
struct TestFunctionBundle {
  Matrix phis;
  /// max_{i,j} |<phi_i, phi_j>_mass - delta_ij| over the full bundle.
  Real gram_defect = 0.0;
  /// Ascending eigenvalues of (Phi' H Phi, Phi' M Phi); the last entry is the
  /// Rayleigh quotient maximized over the span. Empty when dim_ok is false.
  Vector rayleigh_values;
  /// True when the smallest eigenvalue of the mass Gram exceeds 1e-8
  /// (numerical rank check: the span has full dimension k).
  bool dim_ok = true;
  /// Reduced matrices kept for per-k certificates (leading blocks).
  Matrix reduced_hamiltonian;
  Matrix reduced_mass;
  Real min_abs_e1 = 0.0;
};

/// Minimum mass-Gram eigenvalue above which a test-function span counts as
/// full-dimensional.
inline constexpr Real kDimRankThreshold = 1e-8;

TestFunctionBundle build_test_functions(const SchrodingerOperator& op,
                                        const Spectrum& full, const CapacityResult& r,
                                        Index k);

/// Certified record for one k: the spectral gap and the minimax witness
///   lambda_k(holes) <= witness_k = max Rayleigh over span(phi_1..phi_k).
struct BoundCertificate {
  Index k = 0;
  Real lambda_full = 0.0;
  Real lambda_holes = 0.0;
  Real gap = 0.0;
  /// Largest eigenvalue of the leading k x k reduced pencil; NaN when the
  /// certificate is unavailable.
  Real witness = 0.0;
  /// Gram defect over the leading k x k block.
  Real gram_defect = 0.0;
  /// False when the leading k columns fail the rank check (legal for holes
  /// large enough to degenerate the span).
  bool available = true;
};

BoundCertificate bound_certificate(const Spectrum& spec_full, const Spectrum& spec_holes,
                                   const TestFunctionBundle& bundle, Index k);

} // namespace schrocap
