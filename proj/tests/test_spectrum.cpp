#include "schrocap/errors.hpp"
#include "schrocap/spectrum.hpp"

#include "doctest.h"
#include "oracles.hpp"
#include "test_support.hpp"

#include <cmath>
#include <memory>
#include <random>
#include <thread>
#include <vector>

using namespace schrocap;

namespace {

SchrodingerOperator ring_op(Index n, Real circumference, Real v0) {
  auto m = build_ring(n, circumference);
  const Index nv = m.n_vertices;
  return assemble(std::move(m), Potential(Vector::Constant(nv, v0)));
}

SchrodingerOperator torus_op(Index nx, Index ny, Real lx, Real ly, Real v0) {
  auto m = build_torus(nx, ny, lx, ly);
  const Index nv = m.n_vertices;
  return assemble(std::move(m), Potential(Vector::Constant(nv, v0)));
}

void check_spectrum_invariants(const SchrodingerOperator& op, const Spectrum& s,
                               Real tol) {
  for (Index i = 0; i + 1 < s.k(); ++i) CHECK(s.eigenvalues[i] <= s.eigenvalues[i + 1]);
  CHECK(s.eigenvalues[0] >= op.potential().min_value() - 1e-10);
  CHECK((s.residuals.array() <= tol * s.residual_scale).all());

  // Mass-Gram identity.
  const Matrix gram =
      s.eigenvectors.transpose() * op.mass().asDiagonal() * s.eigenvectors;
  CHECK((gram - Matrix::Identity(s.k(), s.k())).cwiseAbs().maxCoeff() <= 1e-10);
}

} // namespace

TEST_CASE("ring n=4: full spectrum against the closed form") {
  const auto op = ring_op(4, 2.0 * M_PI, 1.0);
  const Spectrum s = solve_spectrum(op, 4);
  const Real second = 1.0 + 8.0 / (M_PI * M_PI);
  const Real fourth = 1.0 + 16.0 / (M_PI * M_PI);
  CHECK(s.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(s.eigenvalues[1] == doctest::Approx(second).epsilon(1e-10));
  CHECK(s.eigenvalues[2] == doctest::Approx(second).epsilon(1e-10));
  CHECK(s.eigenvalues[3] == doctest::Approx(fourth).epsilon(1e-10));
  check_spectrum_invariants(op, s, 1e-9);
}

TEST_CASE("ring n=64: constant ground state, unit eigenvalue") {
  const auto op = ring_op(64, 2.0 * M_PI, 1.0);
  const Spectrum s = solve_spectrum(op, 1);
  CHECK(s.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  const Real expected = 1.0 / std::sqrt(2.0 * M_PI);
  for (Index i = 0; i < 64; ++i)
    CHECK(s.eigenvectors(i, 0) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("torus 8x8: lowest three eigenvalues against the oracle") {
  const auto op = torus_op(8, 8, 2.0 * M_PI, 2.0 * M_PI, 1.0);
  const Spectrum s = solve_spectrum(op, 3);
  const auto expected = oracles::torus_spectrum(8, 8, 2.0 * M_PI, 2.0 * M_PI, 1.0);
  for (Index i = 0; i < 3; ++i)
    CHECK(s.eigenvalues[i] ==
          doctest::Approx(expected[static_cast<std::size_t>(i)]).epsilon(1e-8));
  check_spectrum_invariants(op, s, 1e-9);
}

TEST_CASE("solve_spectrum: size errors and convergence errors") {
  const auto op = ring_op(8, 1.0, 1.0);
  CHECK_THROWS_AS(solve_spectrum(op, 9), SizeError);
  CHECK_THROWS_AS(solve_spectrum(op, 0), SizeError);

  // An iteration cap of one block step cannot satisfy the two-pass
  // convergence rule on a genuinely iterative solve.
  const auto big = ring_op(128, 2.0 * M_PI, 1.0);
  SolverOptions opts;
  opts.backend = SolverBackend::Iterative;
  opts.max_iterations = 1;
  CHECK_THROWS_AS(solve_spectrum(big, 4, opts), ConvergenceError);
}

TEST_CASE("first eigenvector is single-signed with no zero entries") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    auto m = build_ring(48, 2.0 * M_PI);
    const auto op = assemble(std::move(m), test_support::random_potential(rng, 48));
    const Spectrum s = solve_spectrum(op, 1);
    CHECK(s.eigenvectors.col(0).minCoeff() > 0.0);
  }
}

TEST_CASE("restrict_dirichlet: empty hole set keeps the matrices") {
  const auto op = ring_op(4, 2.0 * M_PI, 1.0);
  const auto r = restrict_dirichlet(op, HoleSet{});
  CHECK(r.n() == 4);
  CHECK((Matrix(r.hamiltonian) - Matrix(op.hamiltonian())).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK((r.mass - op.mass()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("restrict_dirichlet: deletes the pinned row and column") {
  const auto op = ring_op(4, 2.0 * M_PI, 1.0);
  const auto r = restrict_dirichlet(op, HoleSet{{0}, std::nullopt});
  REQUIRE(r.n() == 3);
  const Matrix full(op.hamiltonian());
  const Matrix sub(r.hamiltonian);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j)
      CHECK(sub(i, j) == full(i + 1, j + 1));
}

TEST_CASE("restrict_dirichlet: excising everything is an error") {
  const auto op = ring_op(4, 2.0 * M_PI, 1.0);
  CHECK_THROWS_AS(restrict_dirichlet(op, HoleSet{{0, 1, 2, 3}, std::nullopt}),
                  EmptyDomainError);
}

TEST_CASE("solve_spectrum_holes: empty hole equals the full solve") {
  const auto op = torus_op(4, 4, 1.0, 1.0, 1.5);
  const Spectrum full = solve_spectrum(op, 5);
  const Spectrum holes = solve_spectrum_holes(op, HoleSet{}, 5);
  for (Index i = 0; i < 5; ++i)
    CHECK(holes.eigenvalues[i] == doctest::Approx(full.eigenvalues[i]).epsilon(1e-12));
  CHECK(holes.domain_holes.has_value());
}

TEST_CASE("solve_spectrum_holes: one pinned vertex raises the ground state") {
  const auto op = ring_op(64, 2.0 * M_PI, 1.0);
  const Spectrum full = solve_spectrum(op, 1);
  const Spectrum holes = solve_spectrum_holes(op, HoleSet{{0}, std::nullopt}, 1);
  CHECK(full.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(holes.eigenvalues[0] > full.eigenvalues[0]);
  CHECK(holes.eigenvectors(0, 0) == 0.0);
  check_spectrum_invariants(op, full, 1e-9);
}

TEST_CASE("solve_spectrum_holes: restricted dimension bounds k") {
  const auto op = ring_op(8, 2.0 * M_PI, 1.0);
  const HoleSet a{{0}, std::nullopt};
  const Spectrum s = solve_spectrum_holes(op, a, 7);
  CHECK(s.k() == 7);
  CHECK_THROWS_AS(solve_spectrum_holes(op, a, 8), SizeError);
}

TEST_CASE("domain monotonicity and nestedness over random hole families") {
  std::mt19937_64 rng(29);
  const auto op = ring_op(64, 2.0 * M_PI, 1.0);
  const Spectrum full = solve_spectrum(op, 4);

  for (int trial = 0; trial < 8; ++trial) {
    std::uniform_int_distribution<Index> size_dist(1, 20);
    HoleSet a = test_support::random_hole_set(rng, 64, size_dist(rng));
    const Spectrum holes = solve_spectrum_holes(op, a, 4);
    for (Index i = 0; i < 4; ++i)
      CHECK(holes.eigenvalues[i] >= full.eigenvalues[i] - 1e-10);

    // Extend a to a superset b; eigenvalues must not decrease.
    HoleSet b = a;
    for (Index v = 0; v < 64 && b.size() < a.size() + 4; v += 13)
      if (!b.contains(v)) b.indices.push_back(v);
    std::sort(b.indices.begin(), b.indices.end());
    const Spectrum nested = solve_spectrum_holes(op, b, 4);
    for (Index i = 0; i < 4; ++i)
      CHECK(nested.eigenvalues[i] >= holes.eigenvalues[i] - 1e-10);
  }
}

TEST_CASE("iterative and dense backends agree to 1e-8 up to n = 512") {
  SolverOptions iterative;
  iterative.backend = SolverBackend::Iterative;

  SUBCASE("ring n=256, k=6") {
    const auto op = ring_op(256, 2.0 * M_PI, 1.0);
    const Spectrum dense = solve_spectrum(op, 6);
    const Spectrum iter = solve_spectrum(op, 6, iterative);
    for (Index i = 0; i < 6; ++i)
      CHECK(iter.eigenvalues[i] == doctest::Approx(dense.eigenvalues[i]).epsilon(1e-8));
    check_spectrum_invariants(op, iter, iterative.tol);
  }

  SUBCASE("ring n=512 with a cosine potential, k=5") {
    auto m = build_ring(512, 2.0 * M_PI);
    PotentialSpec spec;
    spec.constant = 1.0;
    spec.terms.push_back({0.4, 2, 0, 0.3});
    auto v = sample_potential(m, spec);
    const auto op = assemble(std::move(m), std::move(v));
    const Spectrum dense = solve_spectrum(op, 5);
    const Spectrum iter = solve_spectrum(op, 5, iterative);
    for (Index i = 0; i < 5; ++i)
      CHECK(iter.eigenvalues[i] == doctest::Approx(dense.eigenvalues[i]).epsilon(1e-8));
  }

  SUBCASE("torus 16x16, k=10, degenerate clusters") {
    const auto op = torus_op(16, 16, 2.0 * M_PI, 2.0 * M_PI, 1.0);
    const Spectrum dense = solve_spectrum(op, 10);
    const Spectrum iter = solve_spectrum(op, 10, iterative);
    for (Index i = 0; i < 10; ++i)
      CHECK(iter.eigenvalues[i] == doctest::Approx(dense.eigenvalues[i]).epsilon(1e-8));
    check_spectrum_invariants(op, iter, iterative.tol);
  }

  SUBCASE("restricted pencil, ring n=256 with a ball hole") {
    const auto op = ring_op(256, 2.0 * M_PI, 1.0);
    const auto a = hole_ball(op.manifold(), 0, 0.1);
    const Spectrum dense = solve_spectrum_holes(op, a, 4);
    const Spectrum iter = solve_spectrum_holes(op, a, 4, iterative);
    for (Index i = 0; i < 4; ++i)
      CHECK(iter.eigenvalues[i] == doctest::Approx(dense.eigenvalues[i]).epsilon(1e-8));
  }
}

TEST_CASE("distinct pencils solve safely on concurrent threads") {
  auto manifold = std::make_shared<const DiscreteManifold>(build_ring(96, 2.0 * M_PI));
  const SchrodingerOperator op =
      assemble(manifold, Potential(Vector::Constant(96, 1.0)));
  const Spectrum serial_full = solve_spectrum(op, 3);
  const Spectrum serial_holes =
      solve_spectrum_holes(op, HoleSet{{0}, std::nullopt}, 3);

  std::vector<Spectrum> results(4);
  std::vector<std::thread> workers;
  for (int t = 0; t < 4; ++t)
    workers.emplace_back([&, t] {
      results[static_cast<std::size_t>(t)] =
          t % 2 == 0 ? solve_spectrum(op, 3)
                     : solve_spectrum_holes(op, HoleSet{{0}, std::nullopt}, 3);
    });
  for (auto& w : workers) w.join();

  for (int t = 0; t < 4; ++t) {
    const Spectrum& expected = t % 2 == 0 ? serial_full : serial_holes;
    CHECK((results[static_cast<std::size_t>(t)].eigenvalues - expected.eigenvalues)
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
}

TEST_CASE("iterative solves are deterministic for a fixed seed") {
  const auto op = torus_op(12, 12, 2.0 * M_PI, 2.0 * M_PI, 1.0);
  SolverOptions opts;
  opts.backend = SolverBackend::Iterative;
  opts.seed = 42;
  const Spectrum a = solve_spectrum(op, 5, opts);
  const Spectrum b = solve_spectrum(op, 5, opts);
  CHECK((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.eigenvectors - b.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
}
