#include "schrocap/capacity.hpp"

#include "schrocap/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace schrocap {

namespace {

Matrix symmetrized(const Matrix& m) { return (m + m.transpose()) * 0.5; }

} // namespace

CapacityResult compute_capacity(const SchrodingerOperator& op, const HoleSet& a,
                                const Vector& e1) {
  const Index n = op.n_vertices();
  if (e1.size() != n)
    throw ShapeError("compute_capacity: e1 length does not match the operator");
  validate_hole_set(a, n);
  if (a.size() >= n)
    throw EmptyDomainError("compute_capacity: excising every vertex leaves an "
                           "empty domain");

  std::vector<Index> full_to_free(static_cast<std::size_t>(n), -1);
  std::vector<Index> free_to_full;
  free_to_full.reserve(static_cast<std::size_t>(n - a.size()));
  for (Index v = 0; v < n; ++v)
    if (!a.contains(v)) {
      full_to_free[static_cast<std::size_t>(v)] = static_cast<Index>(free_to_full.size());
      free_to_full.push_back(v);
    }
  const Index nf = static_cast<Index>(free_to_full.size());

  // Pinned coordinates are eliminated by substitution; the mean-zero
  // constraint is one bordered row. Stationarity of the Lagrangian:
  //   H_FF u_F + mu * m_F = -H_FP e1_P,   m_F . u_F = -m_P . e1_P.
  const SparseMatrix& h = op.hamiltonian();
  const Vector& mass = op.mass();

  Vector rhs = Vector::Zero(nf + 1);
  std::vector<Eigen::Triplet<Real>> t;
  t.reserve(static_cast<std::size_t>(h.nonZeros() + 2 * nf));
  for (int o = 0; o < h.outerSize(); ++o)
    for (SparseMatrix::InnerIterator it(h, o); it; ++it) {
      const Index fi = full_to_free[static_cast<std::size_t>(it.row())];
      const Index fj = full_to_free[static_cast<std::size_t>(it.col())];
      if (fi >= 0 && fj >= 0) {
        t.emplace_back(fi, fj, it.value());
      } else if (fi >= 0 && fj < 0) {
        rhs[fi] -= it.value() * e1[it.col()];
      }
    }
  Real pinned_mass_sum = 0.0;
  for (Index v : a.indices) pinned_mass_sum += mass[v] * e1[v];
  rhs[nf] = -pinned_mass_sum;

  for (Index f = 0; f < nf; ++f) {
    const Real mf = mass[free_to_full[static_cast<std::size_t>(f)]];
    t.emplace_back(f, nf, mf);
    t.emplace_back(nf, f, mf);
  }

  SparseMatrix kkt(nf + 1, nf + 1);
  kkt.setFromTriplets(t.begin(), t.end());
  kkt.makeCompressed();

  Eigen::SparseLU<SparseMatrix> lu;
  lu.analyzePattern(kkt);
  lu.factorize(kkt);
  if (lu.info() != Eigen::Success)
    throw DegenerateError("compute_capacity: singular KKT system (size " +
                          std::to_string(nf + 1) + ", |A| = " +
                          std::to_string(a.size()) + "): " + lu.lastErrorMessage());
  const Vector sol = lu.solve(rhs);

  CapacityResult res;
  res.hole = a;
  res.minimizer = Vector::Zero(n);
  for (Index f = 0; f < nf; ++f)
    res.minimizer[free_to_full[static_cast<std::size_t>(f)]] = sol[f];
  for (Index v : a.indices) res.minimizer[v] = e1[v];
  res.lagrange_mean = sol[nf];
  res.cap = quadratic_form(op, res.minimizer);
  res.min_abs_e1 = e1.cwiseAbs().minCoeff();

  // Stationarity residual on the free coordinates.
  const Vector grad = h * res.minimizer;
  Real sq = 0.0;
  for (Index f = 0; f < nf; ++f) {
    const Index v = free_to_full[static_cast<std::size_t>(f)];
    const Real g = grad[v] + res.lagrange_mean * mass[v];
    sq += g * g;
  }
  res.kkt_residual = std::sqrt(sq);
  return res;
}

Real poincare_slack(const SchrodingerOperator& op, Real lambda1,
                    const CapacityResult& r) {
  if (!(lambda1 > 0))
    throw DegenerateError("poincare_slack: lambda_1 must be positive");
  return r.cap / lambda1 - mass_inner(op, r.minimizer, r.minimizer);
}

TestFunctionBundle build_test_functions(const SchrodingerOperator& op,
                                        const Spectrum& full, const CapacityResult& r,
                                        Index k) {
  if (!full.full_domain())
    throw ShapeError("build_test_functions: spectrum must be a full-manifold solve");
  if (k <= 0 || k > full.k())
    throw SizeError("build_test_functions: need 1 <= k <= " + std::to_string(full.k()));
  if (r.minimizer.size() != op.n_vertices())
    throw ShapeError("build_test_functions: capacity result does not match operator");

  const Vector e1 = full.eigenvectors.col(0);
  if ((e1.array() == 0.0).any())
    throw DegenerateError("build_test_functions: e_1 vanishes at a vertex; "
                          "sign-definiteness invariant breached");

  // phi_j = e_j (1 - u_A/e_1). On A the minimizer is pinned to e_1 bit for
  // bit, so the factor is exactly zero there.
  const Vector factor = Vector::Ones(e1.size()) - r.minimizer.cwiseQuotient(e1);

  TestFunctionBundle b;
  b.min_abs_e1 = e1.cwiseAbs().minCoeff();
  b.phis.resize(e1.size(), k);
  for (Index j = 0; j < k; ++j)
    b.phis.col(j) = full.eigenvectors.col(j).cwiseProduct(factor);

  b.reduced_mass = symmetrized(b.phis.transpose() *
                               op.mass().asDiagonal() * b.phis);
  b.reduced_hamiltonian = symmetrized(b.phis.transpose() *
                                      (op.hamiltonian() * b.phis));
  b.gram_defect = (b.reduced_mass - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();

  Eigen::SelfAdjointEigenSolver<Matrix> gram(b.reduced_mass);
  b.dim_ok = gram.eigenvalues().minCoeff() > kDimRankThreshold;
  if (b.dim_ok) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(b.reduced_hamiltonian,
                                                        b.reduced_mass);
    b.rayleigh_values = es.eigenvalues();
  }
  return b;
}

BoundCertificate bound_certificate(const Spectrum& spec_full, const Spectrum& spec_holes,
                                   const TestFunctionBundle& bundle, Index k) {
  if (k <= 0 || k > spec_full.k() || k > spec_holes.k() ||
      k > bundle.reduced_mass.rows())
    throw SizeError("bound_certificate: k = " + std::to_string(k) +
                    " exceeds the available spectra or bundle");

  BoundCertificate c;
  c.k = k;
  c.lambda_full = spec_full.eigenvalues[k - 1];
  c.lambda_holes = spec_holes.eigenvalues[k - 1];
  c.gap = c.lambda_holes - c.lambda_full;

  const Matrix mk = bundle.reduced_mass.topLeftCorner(k, k);
  const Matrix hk = bundle.reduced_hamiltonian.topLeftCorner(k, k);
  c.gram_defect = (mk - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();

  Eigen::SelfAdjointEigenSolver<Matrix> gram(mk);
  c.available = gram.eigenvalues().minCoeff() > kDimRankThreshold;
  if (c.available) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(hk, mk);
    c.witness = es.eigenvalues().maxCoeff();
  } else {
    c.witness = std::numeric_limits<Real>::quiet_NaN();
  }
  return c;
}

} // namespace schrocap
