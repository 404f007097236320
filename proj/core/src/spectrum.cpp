#include "schrocap/spectrum.hpp"

#include "schrocap/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace schrocap {

namespace {

// Eigenpairs of one pencil (H, diag(mass)) in its own coordinate space,
// eigenvalues ascending, eigenvectors mass-orthonormal.
struct EigenPairs {
  Vector values;
  Matrix vectors;
};

Real infinity_norm(const SparseMatrix& a) {
  Vector row_abs = Vector::Zero(a.rows());
  for (int o = 0; o < a.outerSize(); ++o)
    for (SparseMatrix::InnerIterator it(a, o); it; ++it)
      row_abs[it.row()] += std::abs(it.value());
  return row_abs.size() ? row_abs.maxCoeff() : 0.0;
}

// The pencil is symmetric-definite with diagonal mass, so the generalized
// problem reduces to a standard symmetric one: C = D^-1/2 H D^-1/2 with
// D = diag(mass), u = D^-1/2 y.
EigenPairs solve_dense(const SparseMatrix& h, const Vector& mass, Index k) {
  const Vector dinv_sqrt = mass.cwiseSqrt().cwiseInverse();

  Matrix c = Matrix(h);
  c = dinv_sqrt.asDiagonal() * c * dinv_sqrt.asDiagonal();
  c = ((c + c.transpose()) * 0.5).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> es(c);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("dense eigensolver failed to converge");

  EigenPairs out;
  out.values = es.eigenvalues().head(k);
  out.vectors = dinv_sqrt.asDiagonal() * es.eigenvectors().leftCols(k);
  return out;
}

// ---------------------------------------------------------------------------
// Shift-invert block Lanczos at sigma = 0.
//
// H is positive definite (min V > 0), so the smallest pencil eigenvalues are
// the largest eigenvalues of T = D^1/2 H^-1 D^1/2 acting on y = D^1/2 u.
// Full reorthogonalization keeps the basis orthonormal; the Rayleigh-Ritz
// projection is assembled from the stored T-applications, which stays exact
// even when the three-term recurrence drifts. Breakdown columns are replaced
// by fresh seeded random directions, which is also what lets repeated copies
// of a degenerate eigenvalue enter the basis.
// ---------------------------------------------------------------------------

class ShiftInvertLanczos {
public:
  ShiftInvertLanczos(const SparseMatrix& h, const Vector& mass,
                     const SolverOptions& opts)
      : h_(h), mass_(mass), dsqrt_(mass.cwiseSqrt()),
        dinv_sqrt_(mass.cwiseSqrt().cwiseInverse()), opts_(opts),
        rng_(opts.seed) {
    ldlt_.compute(h_);
    if (ldlt_.info() != Eigen::Success)
      throw DegenerateError("shift-invert factorization of the pencil failed");
    norm_h_ = infinity_norm(h_);
    mass_max_ = mass_.maxCoeff();
  }

  EigenPairs solve(Index k, int block) {
    const Index n = mass_.size();
    basis_.resize(n, 0);
    t_basis_.resize(n, 0);

    Matrix x = random_block(block);
    orthonormalize_block(x);

    Vector prev_values;
    int consecutive_ok = 0;
    Vector last_residuals;

    for (int step = 0; step < opts_.max_iterations; ++step) {
      Matrix w = apply_shift_invert(x);
      append(basis_, x);
      append(t_basis_, w);

      const Index p = basis_.cols();
      const bool exhausted = p >= n;

      if (p >= k) {
        EigenPairs ritz = extract_ritz(k);
        last_residuals = pencil_residuals(ritz);
        const bool finite = ritz.values.allFinite();
        const Real scale =
            norm_h_ + (finite ? ritz.values.cwiseAbs().maxCoeff() : 0.0) * mass_max_;
        const bool residual_ok =
            finite && (last_residuals.array() <= opts_.tol * scale).all();
        bool stable = prev_values.size() == k;
        if (stable)
          for (Index i = 0; i < k; ++i)
            stable = stable && std::abs(ritz.values[i] - prev_values[i]) <=
                                   0.1 * opts_.tol * (1.0 + std::abs(ritz.values[i]));
        prev_values = ritz.values;

        if (residual_ok) ++consecutive_ok;
        else consecutive_ok = 0;

        // Two consecutive clean extractions with stable values: a late copy
        // of a degenerate eigenvalue would displace the k-th pair and reset
        // the stability test.
        if ((consecutive_ok >= 2 && stable) || exhausted) {
          if (exhausted && !residual_ok)
            throw ConvergenceError(
                "lanczos: basis exhausted before reaching tolerance; residuals " +
                residual_report(last_residuals));
          return ritz;
        }
      }
      if (exhausted) break;

      // Next block: reorthogonalize the T-image against everything seen.
      Index next_cols = std::min<Index>(block, n - p);
      Matrix next = w.leftCols(next_cols);
      orthonormalize_block(next);
      x = next;
    }

    throw ConvergenceError("lanczos: no convergence after " +
                           std::to_string(opts_.max_iterations) +
                           " block iterations; residuals " +
                           residual_report(last_residuals));
  }

private:
  static void append(Matrix& m, const Matrix& cols) {
    m.conservativeResize(cols.rows(), m.cols() + cols.cols());
    m.rightCols(cols.cols()) = cols;
  }

  Matrix apply_shift_invert(const Matrix& y) const {
    return dsqrt_.asDiagonal() * ldlt_.solve(dsqrt_.asDiagonal() * y);
  }

  Matrix random_block(Index cols) {
    std::normal_distribution<Real> dist(0.0, 1.0);
    Matrix x(mass_.size(), cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < x.rows(); ++i) x(i, j) = dist(rng_);
    return x;
  }

  // Orthonormalize the block against the accumulated basis and itself
  // (classical Gram-Schmidt run twice, then column-wise with breakdown
  // replacement by fresh random directions).
  void orthonormalize_block(Matrix& x) {
    std::normal_distribution<Real> dist(0.0, 1.0);

    // Unit columns first: the breakdown threshold below then measures the
    // fraction of a column outside the current span, independent of the
    // operator's scale.
    for (Index c = 0; c < x.cols(); ++c) {
      Real nrm = x.col(c).norm();
      while (!(nrm > 0.0) || !std::isfinite(nrm)) {
        for (Index i = 0; i < x.rows(); ++i) x(i, c) = dist(rng_);
        nrm = x.col(c).norm();
      }
      x.col(c) /= nrm;
    }

    for (int pass = 0; pass < 2; ++pass)
      if (basis_.cols() > 0) x -= basis_ * (basis_.transpose() * x);
    for (Index c = 0; c < x.cols(); ++c) {
      for (int attempt = 0; attempt < 64; ++attempt) {
        for (Index prev = 0; prev < c; ++prev)
          x.col(c) -= x.col(prev).dot(x.col(c)) * x.col(prev);
        if (basis_.cols() > 0 && attempt > 0)
          x.col(c) -= basis_ * (basis_.transpose() * x.col(c));
        const Real nrm = x.col(c).norm();
        if (nrm > 1e-8) {
          x.col(c) /= nrm;
          // One clean-up pass keeps orthogonality at round-off level.
          for (Index prev = 0; prev < c; ++prev)
            x.col(c) -= x.col(prev).dot(x.col(c)) * x.col(prev);
          if (basis_.cols() > 0)
            x.col(c) -= basis_ * (basis_.transpose() * x.col(c));
          x.col(c) /= x.col(c).norm();
          break;
        }
        // Breakdown: the direction lives in the span already. Restart the
        // column with a fresh random direction.
        for (Index i = 0; i < x.rows(); ++i) x(i, c) = dist(rng_);
        if (basis_.cols() > 0) x.col(c) -= basis_ * (basis_.transpose() * x.col(c));
      }
    }
  }

  EigenPairs extract_ritz(Index k) const {
    Matrix g = basis_.transpose() * t_basis_;
    g = ((g + g.transpose()) * 0.5).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(g);
    if (es.info() != Eigen::Success)
      throw ConvergenceError("lanczos: Rayleigh-Ritz projection failed");

    const Index p = g.rows();
    EigenPairs out;
    out.values.resize(k);
    out.vectors.resize(basis_.rows(), k);
    for (Index i = 0; i < k; ++i) {
      const Real theta = es.eigenvalues()[p - 1 - i];
      // Ritz values of T must be positive for the pairs we report; junk
      // directions with theta <= 0 mean the basis is still too poor.
      out.values[i] = theta > 0 ? 1.0 / theta
                                : std::numeric_limits<Real>::infinity();
      out.vectors.col(i) =
          dinv_sqrt_.asDiagonal() * (basis_ * es.eigenvectors().col(p - 1 - i));
    }
    return out;
  }

  Vector pencil_residuals(const EigenPairs& pairs) const {
    Vector r(pairs.values.size());
    for (Index i = 0; i < pairs.values.size(); ++i) {
      if (!std::isfinite(pairs.values[i])) {
        r[i] = std::numeric_limits<Real>::infinity();
        continue;
      }
      const Vector u = pairs.vectors.col(i);
      r[i] = (h_ * u - pairs.values[i] * mass_.cwiseProduct(u)).norm() / u.norm();
    }
    return r;
  }

  static std::string residual_report(const Vector& r) {
    std::string s = "[";
    for (Index i = 0; i < r.size(); ++i) {
      if (i) s += ", ";
      s += format_real_short(r[i]);
    }
    return s + "]";
  }

  const SparseMatrix& h_;
  const Vector& mass_;
  Vector dsqrt_;
  Vector dinv_sqrt_;
  SolverOptions opts_;
  std::mt19937_64 rng_;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
  Real norm_h_ = 0.0;
  Real mass_max_ = 0.0;
  Matrix basis_;
  Matrix t_basis_;
};

EigenPairs solve_pencil(const SparseMatrix& h, const Vector& mass, Index k,
                        const SolverOptions& opts) {
  const Index n = mass.size();
  if (k <= 0) throw SizeError("solve_spectrum: k must be positive");
  if (k > n)
    throw SizeError("solve_spectrum: k = " + std::to_string(k) +
                    " exceeds the pencil dimension " + std::to_string(n));

  if (opts.backend == SolverBackend::Dense) return solve_dense(h, mass, k);

  int block = opts.block_size > 0 ? opts.block_size
                                  : static_cast<int>(std::clamp<Index>(k, 4, 8));
  // Lanczos needs headroom beyond k; tiny or over-constrained pencils go
  // through the direct path instead.
  if (n < 48 || k + 2 * block + 2 > n) return solve_dense(h, mass, k);

  ShiftInvertLanczos lanczos(h, mass, opts);
  return lanczos.solve(k, block);
}

// Deterministic sign convention: flip by the mass-weighted mean when it is
// decisively nonzero (the first eigenvector's mean is bounded away from 0),
// otherwise by the entry of largest magnitude.
void sign_normalize(Matrix& vectors, const Vector& mass) {
  for (Index j = 0; j < vectors.cols(); ++j) {
    const Real mean = mass.dot(vectors.col(j));
    const Real threshold =
        1e-8 * mass.sum() * vectors.col(j).cwiseAbs().maxCoeff();
    Real sign = 0.0;
    if (std::abs(mean) > threshold) {
      sign = mean;
    } else {
      Index imax = 0;
      vectors.col(j).cwiseAbs().maxCoeff(&imax);
      sign = vectors(imax, j);
    }
    if (sign < 0) vectors.col(j) = -vectors.col(j);
  }
}

Spectrum finalize(EigenPairs pairs, const SparseMatrix& h, const Vector& mass) {
  sign_normalize(pairs.vectors, mass);

  Spectrum s;
  s.eigenvalues = std::move(pairs.values);
  s.eigenvectors = std::move(pairs.vectors);
  s.residuals.resize(s.eigenvalues.size());
  for (Index i = 0; i < s.eigenvalues.size(); ++i) {
    const Vector u = s.eigenvectors.col(i);
    s.residuals[i] =
        (h * u - s.eigenvalues[i] * mass.cwiseProduct(u)).norm() / u.norm();
  }
  s.residual_scale =
      infinity_norm(h) + s.eigenvalues.cwiseAbs().maxCoeff() * mass.maxCoeff();
  return s;
}

} // namespace

RestrictedOperator restrict_dirichlet(const SchrodingerOperator& op, const HoleSet& a) {
  const Index n = op.n_vertices();
  validate_hole_set(a, n);
  if (a.size() >= n)
    throw EmptyDomainError("restrict_dirichlet: excising every vertex leaves "
                           "an empty domain");

  RestrictedOperator r;
  r.free_to_full.reserve(static_cast<std::size_t>(n - a.size()));
  std::vector<Index> full_to_free(static_cast<std::size_t>(n), -1);
  for (Index v = 0; v < n; ++v)
    if (!a.contains(v)) {
      full_to_free[static_cast<std::size_t>(v)] = static_cast<Index>(r.free_to_full.size());
      r.free_to_full.push_back(v);
    }

  const Index nf = static_cast<Index>(r.free_to_full.size());
  r.mass.resize(nf);
  for (Index f = 0; f < nf; ++f) r.mass[f] = op.mass()[r.free_to_full[static_cast<std::size_t>(f)]];

  std::vector<Eigen::Triplet<Real>> t;
  const SparseMatrix& h = op.hamiltonian();
  t.reserve(static_cast<std::size_t>(h.nonZeros()));
  for (int o = 0; o < h.outerSize(); ++o)
    for (SparseMatrix::InnerIterator it(h, o); it; ++it) {
      const Index fi = full_to_free[static_cast<std::size_t>(it.row())];
      const Index fj = full_to_free[static_cast<std::size_t>(it.col())];
      if (fi >= 0 && fj >= 0) t.emplace_back(fi, fj, it.value());
    }
  r.hamiltonian.resize(nf, nf);
  r.hamiltonian.setFromTriplets(t.begin(), t.end());
  r.hamiltonian.makeCompressed();
  return r;
}

Spectrum solve_spectrum(const SchrodingerOperator& op, Index k,
                        const SolverOptions& opts) {
  EigenPairs pairs = solve_pencil(op.hamiltonian(), op.mass(), k, opts);
  return finalize(std::move(pairs), op.hamiltonian(), op.mass());
}

Spectrum solve_spectrum_holes(const SchrodingerOperator& op, const HoleSet& a,
                              Index k, const SolverOptions& opts) {
  RestrictedOperator r = restrict_dirichlet(op, a);
  if (k > r.n())
    throw SizeError("solve_spectrum_holes: k = " + std::to_string(k) +
                    " exceeds the restricted dimension " + std::to_string(r.n()));

  EigenPairs pairs = solve_pencil(r.hamiltonian, r.mass, k, opts);
  Spectrum s = finalize(std::move(pairs), r.hamiltonian, r.mass);

  // Re-embed with exact zeros on the excised set.
  Matrix embedded = Matrix::Zero(op.n_vertices(), k);
  for (Index f = 0; f < r.n(); ++f)
    embedded.row(r.free_to_full[static_cast<std::size_t>(f)]) = s.eigenvectors.row(f);
  s.eigenvectors = std::move(embedded);
  s.domain_holes = a;
  return s;
}

} // namespace schrocap
