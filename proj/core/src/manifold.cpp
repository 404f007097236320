#include "schrocap/manifold.hpp"

#include "schrocap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace schrocap {

namespace {

// Shortest displacement on a circle of length l.
Real wrap_distance(Real a, Real b, Real l) {
  Real d = std::abs(a - b);
  return std::min(d, l - d);
}

SparseMatrix assemble_from_edges(Index n,
                                 const std::vector<Eigen::Triplet<Real>>& edges) {
  SparseMatrix s(n, n);
  s.setFromTriplets(edges.begin(), edges.end());
  s.makeCompressed();
  return s;
}

// Accumulate one weighted graph edge into the triplet list. Both off-diagonal
// mirror entries receive the same value, so setFromTriplets leaves the matrix
// symmetric bit for bit, and row sums cancel exactly for the constant vector.
void add_edge(std::vector<Eigen::Triplet<Real>>& t, Index i, Index j, Real w) {
  t.emplace_back(i, i, w);
  t.emplace_back(j, j, w);
  t.emplace_back(i, j, -w);
  t.emplace_back(j, i, -w);
}

} // namespace

Real DiscreteManifold::periodic_distance(Index i, Index j) const {
  if (i < 0 || i >= n_vertices || j < 0 || j >= n_vertices)
    throw IndexError("periodic_distance: vertex index out of range");
  if (dim == 1) {
    const Real l = model ? model->lx : coordinates.col(0).maxCoeff();
    return wrap_distance(coordinates(i, 0), coordinates(j, 0), l);
  }
  const Real lx = model->lx;
  const Real ly = model->ly;
  const Real dx = wrap_distance(coordinates(i, 0), coordinates(j, 0), lx);
  const Real dy = wrap_distance(coordinates(i, 1), coordinates(j, 1), ly);
  return std::hypot(dx, dy);
}

// No commas here: the descriptor is a CSV field.
std::string DiscreteManifold::describe() const {
  if (!model) return "custom(n=" + std::to_string(n_vertices) + ")";
  if (model->kind == ManifoldKind::Ring)
    return "ring(n=" + std::to_string(model->nx) +
           " L=" + format_real_short(model->lx) + ")";
  return "torus(nx=" + std::to_string(model->nx) +
         " ny=" + std::to_string(model->ny) +
         " lx=" + format_real_short(model->lx) +
         " ly=" + format_real_short(model->ly) + ")";
}

DiscreteManifold build_ring(Index n, Real circumference) {
  if (n < 3)
    throw InvalidResolutionError("build_ring: n must be >= 3, got " + std::to_string(n));
  if (!(circumference > 0))
    throw InvalidResolutionError("build_ring: circumference must be > 0");

  const Real h = circumference / static_cast<Real>(n);

  DiscreteManifold m;
  m.dim = 1;
  m.n_vertices = n;
  m.volume_weights = Vector::Constant(n, h);
  m.coordinates.resize(n, 1);
  for (Index i = 0; i < n; ++i) m.coordinates(i, 0) = static_cast<Real>(i) * h;

  std::vector<Eigen::Triplet<Real>> t;
  t.reserve(static_cast<std::size_t>(4 * n));
  for (Index i = 0; i < n; ++i) add_edge(t, i, (i + 1) % n, 1.0 / h);
  m.stiffness = assemble_from_edges(n, t);

  m.model = ManifoldModel{ManifoldKind::Ring, n, 0, circumference, 0.0};
  return m;
}

DiscreteManifold build_torus(Index nx, Index ny, Real lx, Real ly) {
  if (nx < 3 || ny < 3)
    throw InvalidResolutionError("build_torus: nx and ny must be >= 3, got " +
                                 std::to_string(nx) + "x" + std::to_string(ny));
  if (!(lx > 0) || !(ly > 0))
    throw InvalidResolutionError("build_torus: side lengths must be > 0");

  const Real hx = lx / static_cast<Real>(nx);
  const Real hy = ly / static_cast<Real>(ny);
  const Index n = nx * ny;

  DiscreteManifold m;
  m.dim = 2;
  m.n_vertices = n;
  m.volume_weights = Vector::Constant(n, hx * hy);
  m.coordinates.resize(n, 2);

  // Vertex (i, j) lives at flat index j*nx + i.
  auto vid = [nx](Index i, Index j) { return j * nx + i; };
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i < nx; ++i) {
      m.coordinates(vid(i, j), 0) = static_cast<Real>(i) * hx;
      m.coordinates(vid(i, j), 1) = static_cast<Real>(j) * hy;
    }

  std::vector<Eigen::Triplet<Real>> t;
  t.reserve(static_cast<std::size_t>(8 * n));
  const Real wx = hy / hx;
  const Real wy = hx / hy;
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i < nx; ++i) {
      add_edge(t, vid(i, j), vid((i + 1) % nx, j), wx);
      add_edge(t, vid(i, j), vid(i, (j + 1) % ny), wy);
    }
  m.stiffness = assemble_from_edges(n, t);

  m.model = ManifoldModel{ManifoldKind::Torus, nx, ny, lx, ly};
  return m;
}

DiscreteManifold refine(const DiscreteManifold& m) {
  if (!m.model)
    throw RefineError("refine: manifold carries no construction record");
  const ManifoldModel& md = *m.model;
  if (md.kind == ManifoldKind::Ring) return build_ring(2 * md.nx, md.lx);
  return build_torus(2 * md.nx, 2 * md.ny, md.lx, md.ly);
}

bool HoleSet::contains(Index v) const {
  return std::binary_search(indices.begin(), indices.end(), v);
}

void validate_hole_set(const HoleSet& a, Index n_vertices) {
  Index prev = -1;
  for (Index v : a.indices) {
    if (v < 0 || v >= n_vertices)
      throw IndexError("hole set: vertex " + std::to_string(v) + " out of range");
    if (v <= prev)
      throw IndexError("hole set: indices must be strictly increasing");
    prev = v;
  }
}

HoleSet hole_ball(const DiscreteManifold& m, Index center_vertex, Real radius) {
  if (center_vertex < 0 || center_vertex >= m.n_vertices)
    throw IndexError("hole_ball: center vertex " + std::to_string(center_vertex) +
                     " out of range [0, " + std::to_string(m.n_vertices) + ")");
  if (radius < 0)
    throw IndexError("hole_ball: radius must be >= 0");

  HoleSet a;
  for (Index v = 0; v < m.n_vertices; ++v)
    if (m.periodic_distance(center_vertex, v) <= radius) a.indices.push_back(v);
  a.descriptor = HoleDescriptor{center_vertex, radius};
  return a;
}

} // namespace schrocap
