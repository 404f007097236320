#pragma once

#include "schrocap/manifold.hpp"
#include "schrocap/potential.hpp"
#include "schrocap/types.hpp"

#include <memory>

namespace schrocap {

/// The Schrodinger operator -Laplacian + V as a symmetric-definite matrix
/// pencil (stiffness + potential_mass, mass). Houses the quadratic form
///   Q(u) = u'*stiffness*u + sum_i volume_i * V_i * u_i^2
/// and the lumped L2 inner product. Immutable; shareable read-only.
class SchrodingerOperator {
public:
  SchrodingerOperator(std::shared_ptr<const DiscreteManifold> manifold, Potential v);

  const DiscreteManifold& manifold() const { return *manifold_; }
  std::shared_ptr<const DiscreteManifold> manifold_ptr() const { return manifold_; }
  const Potential& potential() const { return potential_; }

  Index n_vertices() const { return manifold_->n_vertices; }
  const SparseMatrix& stiffness() const { return manifold_->stiffness; }
  /// Diagonal of the lumped mass matrix (the volume weights).
  const Vector& mass() const { return manifold_->volume_weights; }
  /// Diagonal of the potential-weighted mass matrix, entries volume_i * V_i.
  const Vector& potential_mass() const { return potential_mass_; }
  /// Pencil left-hand side, stiffness + diag(potential_mass). Cached.
  const SparseMatrix& hamiltonian() const { return hamiltonian_; }

  /// The operator applied in function space: mass^{-1} (stiffness + PV) u.
  Vector apply(const Vector& u) const;

private:
  std::shared_ptr<const DiscreteManifold> manifold_;
  Potential potential_;
  Vector potential_mass_;
  SparseMatrix hamiltonian_;
};

/// Assemble the pencil; throws ShapeError on length mismatch. Potential
/// construction already enforces min V > 0.
SchrodingerOperator assemble(std::shared_ptr<const DiscreteManifold> m, Potential v);
SchrodingerOperator assemble(DiscreteManifold m, Potential v);

/// Q(u); zero iff u = 0. Evaluated as two quadratic terms so it is exactly
/// symmetric in floating point.
Real quadratic_form(const SchrodingerOperator& op, const Vector& u);

/// Lumped L2 inner product sum_i volume_i u_i v_i.
Real mass_inner(const SchrodingerOperator& op, const Vector& u, const Vector& v);

/// Q(u) / <u,u>_mass; throws DegenerateError for u = 0.
Real rayleigh_quotient(const SchrodingerOperator& op, const Vector& u);

} // namespace schrocap
