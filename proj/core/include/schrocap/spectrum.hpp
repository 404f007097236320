#pragma once

#include "schrocap/manifold.hpp"
#include "schrocap/schrodinger.hpp"
#include "schrocap/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace schrocap {

enum class SolverBackend { Dense, Iterative };

struct SolverOptions {
  SolverBackend backend = SolverBackend::Dense;
  /// Relative residual tolerance: a pair is converged when
  /// |H e - lambda M e| / |e| <= tol * residual_scale.
  Real tol = 1e-9;
  /// Cap on block-Lanczos steps for the iterative backend.
  int max_iterations = 200;
  /// Seed for the iterative starting block.
  std::uint64_t seed = 0;
  /// Lanczos block size; 0 selects automatically (>= 4, resolves the model
  /// problems' eigenvalue multiplicities).
  int block_size = 0;
};

/// k lowest eigenpairs of (hamiltonian, mass), eigenvalues ascending,
/// eigenvectors mass-orthonormal. Vectors on a holes domain are embedded
/// into full length with exact zeros on the excised set; their residuals
/// refer to the restricted pencil.
struct Spectrum {
  Vector eigenvalues;
  Matrix eigenvectors;
  /// Empty optional: full manifold; otherwise the excised set.
  std::optional<HoleSet> domain_holes;
  /// Per-pair residual norms |H e - lambda M e| / |e|.
  Vector residuals;
  /// Scale for relative residual checks: inf-norm of H plus max mass weight
  /// times the largest computed eigenvalue.
  Real residual_scale = 1.0;

  Index k() const { return eigenvalues.size(); }
  bool full_domain() const { return !domain_holes.has_value(); }
};

/// Dirichlet restriction of the pencil: rows/columns indexed by the hole set
/// removed, with the map from restricted back to full coordinates.
struct RestrictedOperator {
  SparseMatrix hamiltonian;
  Vector mass;
  std::vector<Index> free_to_full;

  Index n() const { return mass.size(); }
};

RestrictedOperator restrict_dirichlet(const SchrodingerOperator& op, const HoleSet& a);

/// k lowest eigenpairs on the full manifold.
Spectrum solve_spectrum(const SchrodingerOperator& op, Index k,
                        const SolverOptions& opts = {});

/// k lowest eigenpairs with the hole set excised (Dirichlet by DOF removal).
Spectrum solve_spectrum_holes(const SchrodingerOperator& op, const HoleSet& a,
                              Index k, const SolverOptions& opts = {});

} // namespace schrocap
