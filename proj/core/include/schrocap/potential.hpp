#pragma once

#include "schrocap/manifold.hpp"
#include "schrocap/types.hpp"

#include <vector>

namespace schrocap {

/// Bounded potential with min V > 0 (standing assumption). Construction
/// rejects any violation, so a Potential value is always usable.
class Potential {
public:
  explicit Potential(Vector values);

  const Vector& values() const { return values_; }
  Real min_value() const { return min_; }
  Real max_value() const { return max_; }
  Index size() const { return values_.size(); }

private:
  Vector values_;
  Real min_ = 0.0;
  Real max_ = 0.0;
};

/// One term of a cosine series over the periodic coordinates:
///   amplitude * cos(2*pi*(mode_x * x/Lx + mode_y * y/Ly) + phase).
/// mode_y must be 0 on a ring.
struct CosineTerm {
  Real amplitude = 0.0;
  int mode_x = 0;
  int mode_y = 0;
  Real phase = 0.0;
};

/// Closed-form potential expression: constant plus a finite cosine series.
struct PotentialSpec {
  Real constant = 1.0;
  std::vector<CosineTerm> terms;
};

/// Sample the expression at every vertex of m.
Potential sample_potential(const DiscreteManifold& m, const PotentialSpec& spec);

} // namespace schrocap
