#include "schrocap/capacity.hpp"
#include "schrocap/errors.hpp"

#include "doctest.h"
#include "oracles.hpp"
#include "test_support.hpp"

#include <cmath>
#include <random>

using namespace schrocap;

namespace {

SchrodingerOperator ring_op(Index n, Real circumference, Real v0) {
  auto m = build_ring(n, circumference);
  const Index nv = m.n_vertices;
  return assemble(std::move(m), Potential(Vector::Constant(nv, v0)));
}

} // namespace

TEST_CASE("empty hole: zero capacity, zero minimizer") {
  const auto op = ring_op(16, 2.0 * M_PI, 1.0);
  const Spectrum full = solve_spectrum(op, 1);
  const CapacityResult r = compute_capacity(op, HoleSet{}, full.eigenvectors.col(0));
  CHECK(r.cap == 0.0);
  CHECK(r.minimizer.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.lagrange_mean == 0.0);
  CHECK(poincare_slack(op, full.eigenvalues[0], r) == 0.0);
}

TEST_CASE("single pinned vertex on the 4-ring matches the dense null-space oracle") {
  const auto op = ring_op(4, 2.0 * M_PI, 1.0);
  const Spectrum full = solve_spectrum(op, 1);
  const Vector e1 = full.eigenvectors.col(0);
  const HoleSet a{{0}, std::nullopt};

  const CapacityResult r = compute_capacity(op, a, e1);

  const Eigen::MatrixXd h =
      oracles::ring_dense_hamiltonian(4, 2.0 * M_PI, Vector::Constant(4, 1.0));
  const auto oracle = oracles::capacity_nullspace(h, op.mass(), {0}, e1);
  CHECK(r.cap == doctest::Approx(oracle.cap).epsilon(1e-10));
  CHECK((r.minimizer - oracle.minimizer).cwiseAbs().maxCoeff() <= 1e-10);

  // Feasible comparison vector: e1 at the pin, balanced elsewhere.
  Vector v(4);
  v << e1[0], -e1[0] / 3.0, -e1[0] / 3.0, -e1[0] / 3.0;
  CHECK(r.cap > 0.0);
  CHECK(r.cap < quadratic_form(op, v));
}

TEST_CASE("capacity result invariants") {
  const auto op = ring_op(32, 2.0 * M_PI, 1.0);
  const Spectrum full = solve_spectrum(op, 1);
  const Vector e1 = full.eigenvectors.col(0);
  const auto a = hole_ball(op.manifold(), 5, 0.3);

  const CapacityResult r = compute_capacity(op, a, e1);
  for (Index v : a.indices) CHECK(r.minimizer[v] == e1[v]);  // pinned bit for bit
  CHECK(std::abs(mass_inner(op, r.minimizer, Vector::Ones(32))) <= 1e-10);
  CHECK(r.cap == doctest::Approx(quadratic_form(op, r.minimizer)).epsilon(1e-12));
  CHECK(r.kkt_residual <= 1e-9 * (1.0 + r.cap));
  CHECK(r.min_abs_e1 > 0.0);
}

TEST_CASE("capacity is monotone under hole inclusion") {
  const auto op = ring_op(64, 2.0 * M_PI, 1.0);
  const Spectrum full = solve_spectrum(op, 1);
  const Vector e1 = full.eigenvectors.col(0);

  const auto small = hole_ball(op.manifold(), 0, M_PI / 32.0);
  const auto large = hole_ball(op.manifold(), 0, M_PI / 16.0);
  for (Index v : small.indices) CHECK(large.contains(v));

  const Real cap_small = compute_capacity(op, small, e1).cap;
  const Real cap_large = compute_capacity(op, large, e1).cap;
  CHECK(cap_small <= cap_large + 1e-12);
}

TEST_CASE("errors: full-cover hole") {
  const auto op = ring_op(4, 1.0, 1.0);
  const Spectrum full = solve_spectrum(op, 1);
  CHECK_THROWS_AS(
      compute_capacity(op, HoleSet{{0, 1, 2, 3}, std::nullopt}, full.eigenvectors.col(0)),
      EmptyDomainError);
}

TEST_CASE("poincare slack is nonnegative") {
  SUBCASE("ring n=64, single vertex") {
    const auto op = ring_op(64, 2.0 * M_PI, 1.0);
    const Spectrum full = solve_spectrum(op, 1);
    const CapacityResult r =
        compute_capacity(op, HoleSet{{0}, std::nullopt}, full.eigenvectors.col(0));
    CHECK(poincare_slack(op, full.eigenvalues[0], r) >= -1e-10);
  }
  SUBCASE("ring n=8, two antipodal vertices") {
    const auto op = ring_op(8, 2.0 * M_PI, 1.0);
    const Spectrum full = solve_spectrum(op, 1);
    const CapacityResult r =
        compute_capacity(op, HoleSet{{0, 4}, std::nullopt}, full.eigenvectors.col(0));
    CHECK(poincare_slack(op, full.eigenvalues[0], r) >= -1e-10);
  }
}

TEST_CASE("minimizer is optimal against random feasible perturbations") {
  std::mt19937_64 rng(31);
  const auto op = ring_op(32, 2.0 * M_PI, 1.0);
  const Spectrum full = solve_spectrum(op, 1);
  const auto a = hole_ball(op.manifold(), 3, 0.25);
  const CapacityResult r = compute_capacity(op, a, full.eigenvectors.col(0));

  for (int trial = 0; trial < 100; ++trial) {
    const Vector w = test_support::feasible_perturbation(rng, op, a);
    for (Real t : {-1e-1, -1e-3, 1e-3, 1e-1}) {
      const Vector candidate = r.minimizer + t * w;
      CHECK(quadratic_form(op, candidate) >= r.cap - 1e-12);
    }
  }
}

TEST_CASE("test functions: empty hole reproduces the eigenvectors") {
  const auto op = ring_op(24, 2.0 * M_PI, 1.0);
  const Spectrum full = solve_spectrum(op, 3);
  const CapacityResult r = compute_capacity(op, HoleSet{}, full.eigenvectors.col(0));

  const TestFunctionBundle b = build_test_functions(op, full, r, 3);
  CHECK((b.phis - full.eigenvectors.leftCols(3)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(b.gram_defect <= 1e-12);
  CHECK(b.dim_ok);
  REQUIRE(b.rayleigh_values.size() == 3);
  CHECK(b.rayleigh_values[2] == doctest::Approx(full.eigenvalues[2]).epsilon(1e-10));
}

TEST_CASE("test functions vanish exactly on the hole") {
  const auto op = ring_op(64, 2.0 * M_PI, 1.0);
  const Spectrum full = solve_spectrum(op, 2);
  const auto a = hole_ball(op.manifold(), 0, M_PI / 64.0);
  const CapacityResult r = compute_capacity(op, a, full.eigenvectors.col(0));

  const TestFunctionBundle b = build_test_functions(op, full, r, 2);
  for (Index v : a.indices)
    for (Index j = 0; j < 2; ++j) CHECK(b.phis(v, j) == 0.0);
}

TEST_CASE("test functions reject a vanishing first eigenvector") {
  const auto op = ring_op(16, 2.0 * M_PI, 1.0);
  Spectrum full = solve_spectrum(op, 2);
  const CapacityResult r = compute_capacity(op, HoleSet{}, full.eigenvectors.col(0));
  full.eigenvectors(7, 0) = 0.0;
  CHECK_THROWS_AS(build_test_functions(op, full, r, 2), DegenerateError);
}

TEST_CASE("bound certificate: identical domains") {
  const auto op = ring_op(32, 2.0 * M_PI, 1.0);
  const Spectrum full = solve_spectrum(op, 4);
  const Spectrum holes = solve_spectrum_holes(op, HoleSet{}, 4);
  const CapacityResult r = compute_capacity(op, HoleSet{}, full.eigenvectors.col(0));
  const TestFunctionBundle b = build_test_functions(op, full, r, 4);

  for (Index k = 1; k <= 4; ++k) {
    const BoundCertificate c = bound_certificate(full, holes, b, k);
    CHECK(c.available);
    CHECK(std::abs(c.gap) <= 1e-12);
    CHECK(c.witness == doctest::Approx(full.eigenvalues[k - 1]).epsilon(1e-10));
  }
}

TEST_CASE("bound certificate: single-vertex hole on the ring") {
  const auto op = ring_op(64, 2.0 * M_PI, 1.0);
  const Spectrum full = solve_spectrum(op, 1);
  const HoleSet a{{0}, std::nullopt};
  const Spectrum holes = solve_spectrum_holes(op, a, 1);
  const CapacityResult r = compute_capacity(op, a, full.eigenvectors.col(0));
  const TestFunctionBundle b = build_test_functions(op, full, r, 1);

  const BoundCertificate c = bound_certificate(full, holes, b, 1);
  CHECK(c.available);
  CHECK(c.gap >= -1e-10);
  CHECK(c.lambda_holes <= c.witness + 1e-9 * (1.0 + std::abs(c.witness)));
}

TEST_CASE("bound certificate: torus ball") {
  auto m = build_torus(16, 16, 2.0 * M_PI, 2.0 * M_PI);
  const Index nv = m.n_vertices;
  const auto op = assemble(std::move(m), Potential(Vector::Constant(nv, 1.0)));
  const Spectrum full = solve_spectrum(op, 3);
  const auto a = hole_ball(op.manifold(), 0, 0.1);
  const Spectrum holes = solve_spectrum_holes(op, a, 3);
  const CapacityResult r = compute_capacity(op, a, full.eigenvectors.col(0));
  const TestFunctionBundle b = build_test_functions(op, full, r, 3);

  const BoundCertificate c = bound_certificate(full, holes, b, 3);
  CHECK(c.available);
  CHECK(c.gap >= -1e-10);
  CHECK(c.lambda_holes <= c.witness + 1e-9 * (1.0 + std::abs(c.witness)));
}
