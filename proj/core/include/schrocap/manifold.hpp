#pragma once

#include "schrocap/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace schrocap {

enum class ManifoldKind { Ring, Torus };

/// Construction record; refine() rebuilds the model from it.
struct ManifoldModel {
  ManifoldKind kind = ManifoldKind::Ring;
  Index nx = 0;    // ring: n
  Index ny = 0;    // torus only
  Real lx = 0.0;   // ring: circumference
  Real ly = 0.0;   // torus only
};

/// Discrete closed manifold: lumped volume weights (mass) plus a sparse
/// stiffness matrix so that u' * stiffness * u approximates the Dirichlet
/// energy of u. Immutable after construction; safe to share read-only.
///
/// Structural guarantees of the builders:
///   - stiffness assembled symmetrically (S_ij == S_ji bit for bit),
///   - off-diagonal entries <= 0 (M-matrix), row sums cancel exactly,
///     so the constant vector spans the kernel,
///   - volume weights positive, summing to the model volume.
struct DiscreteManifold {
  int dim = 1;
  Index n_vertices = 0;
  Vector volume_weights;
  SparseMatrix stiffness;
  /// n x dim periodic coordinates: arc-length position on the ring,
  /// (x, y) on the flat torus. Used only for hole geometry and
  /// potential sampling.
  Matrix coordinates;
  std::optional<ManifoldModel> model;

  Real total_volume() const { return volume_weights.sum(); }

  /// Geodesic (periodic flat-metric) distance between two vertices.
  Real periodic_distance(Index i, Index j) const;

  /// Human-readable construction record, e.g. "ring(n=64, L=6.28319)".
  std::string describe() const;
};

/// Uniform ring of n vertices with the given circumference (default 2*pi, so
/// the continuum eigenvalues are integers plus the potential offset).
/// Spacing h = circumference/n; weights all h; stiffness periodic
/// tridiagonal with diagonal 2/h and off-diagonal -1/h.
DiscreteManifold build_ring(Index n, Real circumference = kTwoPi);

/// Flat torus on an nx x ny periodic grid with side lengths lx, ly
/// (default 2*pi each). 5-point stiffness: x-edges weighted hy/hx, y-edges
/// hx/hy; weights all hx*hy.
DiscreteManifold build_torus(Index nx, Index ny, Real lx = kTwoPi, Real ly = kTwoPi);

/// Same model with every resolution parameter doubled.
DiscreteManifold refine(const DiscreteManifold& m);

/// Descriptor recorded when a hole set came from hole_ball.
struct HoleDescriptor {
  Index center_vertex = 0;
  Real radius = 0.0;
};

/// Excised vertex set A. Indices strictly increasing, unique, in range.
struct HoleSet {
  std::vector<Index> indices;
  std::optional<HoleDescriptor> descriptor;

  bool empty() const { return indices.empty(); }
  Index size() const { return static_cast<Index>(indices.size()); }
  bool contains(Index v) const;
};

/// Validate ordering/range invariants; throws IndexError on violation.
void validate_hole_set(const HoleSet& a, Index n_vertices);

/// All vertices within geodesic distance <= radius of center_vertex.
HoleSet hole_ball(const DiscreteManifold& m, Index center_vertex, Real radius);

} // namespace schrocap
