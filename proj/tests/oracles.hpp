#pragma once

// Test-side oracles. Everything here is assembled and solved independently of
// the library's code paths: closed-form spectra, raw lattice-arithmetic ball
// scans, and a dense null-space solver for the constrained quadratic program
// (the library uses a sparse bordered Lagrange system).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracles {

// Eigenvalues of (ring stiffness, lumped mass) plus a constant potential v0:
//   v0 + (2/h^2)(1 - cos(2 pi m / n)), m = 0..n-1, sorted ascending.
inline std::vector<double> ring_spectrum(int n, double circumference, double v0) {
  const double h = circumference / n;
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m)
    ev[static_cast<std::size_t>(m)] =
        v0 + (2.0 / (h * h)) * (1.0 - std::cos(2.0 * M_PI * m / n));
  std::sort(ev.begin(), ev.end());
  return ev;
}

// 2D discrete Fourier diagonalization of the flat-torus pencil.
inline std::vector<double> torus_spectrum(int nx, int ny, double lx, double ly,
                                          double v0) {
  const double hx = lx / nx;
  const double hy = ly / ny;
  std::vector<double> ev;
  ev.reserve(static_cast<std::size_t>(nx * ny));
  for (int p = 0; p < nx; ++p)
    for (int q = 0; q < ny; ++q)
      ev.push_back(v0 + (2.0 / (hx * hx)) * (1.0 - std::cos(2.0 * M_PI * p / nx)) +
                   (2.0 / (hy * hy)) * (1.0 - std::cos(2.0 * M_PI * q / ny)));
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Periodic ball on the ring by index arithmetic.
inline std::vector<long> ring_ball(int n, double circumference, long center,
                                   double radius) {
  const double h = circumference / n;
  std::vector<long> in;
  for (long v = 0; v < n; ++v) {
    const long d = std::abs(v - center);
    const double dist = h * static_cast<double>(std::min(d, n - d));
    if (dist <= radius) in.push_back(v);
  }
  return in;
}

// Periodic ball on the torus lattice by index arithmetic.
inline std::vector<long> torus_ball(int nx, int ny, double lx, double ly,
                                    long ci, long cj, double radius) {
  const double hx = lx / nx;
  const double hy = ly / ny;
  std::vector<long> in;
  for (long v = 0; v < static_cast<long>(nx) * ny; ++v) {
    const long i = v % nx, j = v / nx;
    const long di = std::abs(i - ci), dj = std::abs(j - cj);
    const double dx = hx * static_cast<double>(std::min(di, nx - di));
    const double dy = hy * static_cast<double>(std::min(dj, ny - dj));
    if (std::hypot(dx, dy) <= radius) in.push_back(v);
  }
  return in;
}

// Dense ring Hamiltonian (stiffness + diag(h * V)) assembled from the model
// formulas, not from the library.
inline Eigen::MatrixXd ring_dense_hamiltonian(int n, double circumference,
                                              const Eigen::VectorXd& v) {
  const double h = circumference / n;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = 2.0 / h + h * v[i];
    m(i, (i + 1) % n) -= 1.0 / h;
    m((i + 1) % n, i) -= 1.0 / h;
  }
  return m;
}

struct CapacityOracle {
  double cap = 0.0;
  Eigen::VectorXd minimizer;
};

// Null-space solve of
//   min u' H u   s.t.  u = e1 on the hole, mass . u = 0.
// Pinned coordinates substituted, the mean constraint eliminated by an
// explicit null-space basis, then one dense LDLT solve.
inline CapacityOracle capacity_nullspace(const Eigen::MatrixXd& h,
                                         const Eigen::VectorXd& mass,
                                         const std::vector<long>& hole,
                                         const Eigen::VectorXd& e1) {
  const long n = h.rows();
  std::vector<long> free;
  std::vector<bool> pinned(static_cast<std::size_t>(n), false);
  for (long v : hole) pinned[static_cast<std::size_t>(v)] = true;
  for (long v = 0; v < n; ++v)
    if (!pinned[static_cast<std::size_t>(v)]) free.push_back(v);
  const long nf = static_cast<long>(free.size());

  Eigen::MatrixXd hff(nf, nf);
  Eigen::VectorXd mf(nf), hfp_e1 = Eigen::VectorXd::Zero(nf);
  for (long a = 0; a < nf; ++a) {
    mf[a] = mass[free[static_cast<std::size_t>(a)]];
    for (long b = 0; b < nf; ++b)
      hff(a, b) = h(free[static_cast<std::size_t>(a)], free[static_cast<std::size_t>(b)]);
    for (long v : hole)
      hfp_e1[a] += h(free[static_cast<std::size_t>(a)], v) * e1[v];
  }

  double c = 0.0;
  for (long v : hole) c -= mass[v] * e1[v];

  // Particular solution of mf . u = c, then the null-space basis
  // N col a = e_a - (mf_a / mf_last) e_last.
  Eigen::VectorXd u_part = (c / mf.squaredNorm()) * mf;
  Eigen::MatrixXd null_basis = Eigen::MatrixXd::Zero(nf, nf - 1);
  for (long a = 0; a + 1 < nf; ++a) {
    null_basis(a, a) = 1.0;
    null_basis(nf - 1, a) = -mf[a] / mf[nf - 1];
  }

  const Eigen::MatrixXd reduced = null_basis.transpose() * hff * null_basis;
  const Eigen::VectorXd rhs =
      -null_basis.transpose() * (hff * u_part + hfp_e1);
  const Eigen::VectorXd z = reduced.ldlt().solve(rhs);
  const Eigen::VectorXd uf = u_part + null_basis * z;

  CapacityOracle out;
  out.minimizer = Eigen::VectorXd::Zero(n);
  for (long a = 0; a < nf; ++a) out.minimizer[free[static_cast<std::size_t>(a)]] = uf[a];
  for (long v : hole) out.minimizer[v] = e1[v];
  out.cap = out.minimizer.dot(h * out.minimizer);
  return out;
}

} // namespace oracles
