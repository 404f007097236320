#include "schrocap/potential.hpp"

#include "schrocap/errors.hpp"

#include <cmath>
#include <string>

namespace schrocap {

Potential::Potential(Vector values) : values_(std::move(values)) {
  if (values_.size() == 0)
    throw AssumptionError("potential: empty value vector");
  if (!values_.allFinite())
    throw AssumptionError("potential: values must be finite (bounded V)");
  min_ = values_.minCoeff();
  max_ = values_.maxCoeff();
  if (!(min_ > 0))
    throw AssumptionError("potential: min V = " + format_real(min_) +
                          " violates the standing assumption min V > 0");
}

Potential sample_potential(const DiscreteManifold& m, const PotentialSpec& spec) {
  constexpr Real two_pi = 2.0 * M_PI;
  const Real lx = m.model ? m.model->lx : 1.0;
  const Real ly = (m.dim == 2 && m.model) ? m.model->ly : 1.0;

  Vector v = Vector::Constant(m.n_vertices, spec.constant);
  for (const CosineTerm& term : spec.terms) {
    if (m.dim == 1 && term.mode_y != 0)
      throw ShapeError("potential: cosine mode_y must be 0 on a ring");
    for (Index i = 0; i < m.n_vertices; ++i) {
      Real arg = two_pi * term.mode_x * m.coordinates(i, 0) / lx + term.phase;
      if (m.dim == 2) arg += two_pi * term.mode_y * m.coordinates(i, 1) / ly;
      v[i] += term.amplitude * std::cos(arg);
    }
  }
  return Potential(std::move(v));
}

} // namespace schrocap
