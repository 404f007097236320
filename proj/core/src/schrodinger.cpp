#include "schrocap/schrodinger.hpp"

#include "schrocap/errors.hpp"

#include <string>
#include <utility>

namespace schrocap {

namespace {

void check_length(const char* where, Index got, Index want) {
  if (got != want)
    throw ShapeError(std::string(where) + ": vector length " + std::to_string(got) +
                     " does not match n_vertices = " + std::to_string(want));
}

} // namespace

SchrodingerOperator::SchrodingerOperator(std::shared_ptr<const DiscreteManifold> manifold,
                                         Potential v)
    : manifold_(std::move(manifold)), potential_(std::move(v)) {
  const Index n = manifold_->n_vertices;
  check_length("assemble", potential_.size(), n);

  potential_mass_ = manifold_->volume_weights.cwiseProduct(potential_.values());

  SparseMatrix diag(n, n);
  diag.reserve(Eigen::VectorXi::Constant(static_cast<int>(n), 1));
  for (Index i = 0; i < n; ++i) diag.insert(i, i) = potential_mass_[i];
  hamiltonian_ = manifold_->stiffness + diag;
  hamiltonian_.makeCompressed();
}

Vector SchrodingerOperator::apply(const Vector& u) const {
  check_length("apply", u.size(), n_vertices());
  return (hamiltonian_ * u).cwiseQuotient(mass());
}

SchrodingerOperator assemble(std::shared_ptr<const DiscreteManifold> m, Potential v) {
  return SchrodingerOperator(std::move(m), std::move(v));
}

SchrodingerOperator assemble(DiscreteManifold m, Potential v) {
  return SchrodingerOperator(std::make_shared<const DiscreteManifold>(std::move(m)),
                             std::move(v));
}

Real quadratic_form(const SchrodingerOperator& op, const Vector& u) {
  check_length("quadratic_form", u.size(), op.n_vertices());
  // Two quadratic terms, never operator-apply + inner product: keeps the
  // value exactly symmetric in floating point.
  const Real dirichlet = u.dot(op.stiffness() * u);
  const Real potential = op.potential_mass().dot(u.cwiseProduct(u));
  return dirichlet + potential;
}

Real mass_inner(const SchrodingerOperator& op, const Vector& u, const Vector& v) {
  check_length("mass_inner", u.size(), op.n_vertices());
  check_length("mass_inner", v.size(), op.n_vertices());
  return op.mass().dot(u.cwiseProduct(v));
}

Real rayleigh_quotient(const SchrodingerOperator& op, const Vector& u) {
  const Real denom = mass_inner(op, u, u);
  if (denom == 0.0)
    throw DegenerateError("rayleigh_quotient: u = 0 has no Rayleigh quotient");
  return quadratic_form(op, u) / denom;
}

} // namespace schrocap
