#include "schrocap/sweep.hpp"

#include "schrocap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>

namespace schrocap {

namespace {

constexpr Real kNaN = std::numeric_limits<Real>::quiet_NaN();

// Everything computed once per radius and shared by its k rows.
struct RadiusResult {
  HoleSet hole;
  Spectrum holes_spectrum;
  CapacityResult capacity;
  TestFunctionBundle bundle;
  Real slack = 0.0;
  Real residual_ceiling = 0.0;
  std::string status = "ok";
  bool hole_built = false;

  bool ok() const { return status == "ok"; }
};

RadiusResult run_radius(const SchrodingerOperator& op, const Spectrum& full,
                        Index center, Real radius, Index k_max,
                        const SolverOptions& solver) {
  RadiusResult r;
  try {
    if (radius < 0) {
      r.hole = HoleSet{{}, HoleDescriptor{center, radius}};
    } else {
      r.hole = hole_ball(op.manifold(), center, radius);
    }
    r.hole_built = true;

    r.holes_spectrum = solve_spectrum_holes(op, r.hole, k_max, solver);
    r.capacity = compute_capacity(op, r.hole, full.eigenvectors.col(0));
    r.bundle = build_test_functions(op, full, r.capacity, k_max);
    r.slack = poincare_slack(op, full.eigenvalues[0], r.capacity);
    r.residual_ceiling = std::max(full.residuals.maxCoeff(),
                                  r.holes_spectrum.residuals.maxCoeff());
  } catch (const std::exception& e) {
    r.status = e.what();
  }
  return r;
}

} // namespace

std::vector<SweepRow> bound_sweep(const SweepConfig& cfg) {
  if (cfg.k_max <= 0)
    throw SizeError("bound_sweep: k_max must be positive");
  if (cfg.radii.empty())
    throw SizeError("bound_sweep: radius list is empty");

  auto manifold = std::make_shared<const DiscreteManifold>(cfg.manifold);
  SchrodingerOperator op = assemble(manifold, sample_potential(*manifold, cfg.potential));
  const std::string descriptor = manifold->describe();

  const Spectrum full = solve_spectrum(op, cfg.k_max, cfg.solver);

  std::vector<Real> radii = cfg.radii;
  std::sort(radii.begin(), radii.end());

  std::vector<RadiusResult> per_radius;
  per_radius.reserve(radii.size());
  for (Real radius : radii)
    per_radius.push_back(
        run_radius(op, full, cfg.hole_center, radius, cfg.k_max, cfg.solver));

  std::vector<SweepRow> rows;
  rows.reserve(radii.size() * static_cast<std::size_t>(cfg.k_max));
  for (Index k = 1; k <= cfg.k_max; ++k) {
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const RadiusResult& rr = per_radius[i];
      SweepRow row;
      row.manifold = descriptor;
      row.hole_center = cfg.hole_center;
      row.radius = radii[i];
      row.k = k;
      row.status = rr.status;
      if (rr.ok()) {
        const BoundCertificate cert =
            bound_certificate(full, rr.holes_spectrum, rr.bundle, k);
        row.hole_size = rr.hole.size();
        row.cap = rr.capacity.cap;
        row.lambda_full = cert.lambda_full;
        row.lambda_holes = cert.lambda_holes;
        row.gap = cert.gap;
        row.sqrt_cap = std::sqrt(rr.capacity.cap);
        row.ratio = rr.capacity.cap > 0 ? row.gap / row.sqrt_cap : kNaN;
        row.witness = cert.witness;
        row.gram_defect = cert.gram_defect;
        row.poincare_slack = rr.slack;
        row.residual_ceiling = rr.residual_ceiling;
      } else {
        row.hole_size = rr.hole_built ? rr.hole.size() : -1;
        row.cap = row.lambda_full = row.lambda_holes = row.gap = kNaN;
        row.sqrt_cap = row.ratio = row.witness = row.gram_defect = kNaN;
        row.poincare_slack = row.residual_ceiling = kNaN;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

SweepConfig refine_sweep_config(const SweepConfig& cfg) {
  SweepConfig fine = cfg;
  fine.manifold = refine(cfg.manifold);
  if (!cfg.manifold.model) return fine;  // refine() would have thrown already
  if (cfg.manifold.model->kind == ManifoldKind::Ring) {
    fine.hole_center = 2 * cfg.hole_center;
  } else {
    const Index nx = cfg.manifold.model->nx;
    const Index i = cfg.hole_center % nx;
    const Index j = cfg.hole_center / nx;
    fine.hole_center = (2 * j) * (2 * nx) + 2 * i;
  }
  return fine;
}

CkEstimate estimate_ck(const std::vector<SweepRow>& rows, Index k) {
  CkEstimate est;
  est.k = k;
  est.c_k = 0.0;
  for (const SweepRow& row : rows) {
    if (row.k != k || !row.ok() || !(row.cap > 0) || !std::isfinite(row.ratio))
      continue;
    est.support.emplace_back(row.radius, row.ratio);
    est.c_k = std::max(est.c_k, row.ratio);
  }
  if (est.support.size() < 2)
    throw InsufficientDataError("estimate_ck: need at least two positive-capacity "
                                "rows for k = " + std::to_string(k) + ", have " +
                                std::to_string(est.support.size()));

  std::vector<Real> ratios;
  ratios.reserve(est.support.size());
  for (const auto& [radius, ratio] : est.support) ratios.push_back(ratio);
  std::sort(ratios.begin(), ratios.end());
  const std::size_t mid = ratios.size() / 2;
  est.median_ratio = ratios.size() % 2 ? ratios[mid]
                                       : 0.5 * (ratios[mid - 1] + ratios[mid]);
  return est;
}

std::vector<std::string> csv_header() {
  return {"manifold",  "hole_center", "hole_radius",    "hole_size",
          "k",         "cap",         "lambda_full",    "lambda_holes",
          "gap",       "sqrt_cap",    "ratio",          "witness",
          "gram_defect", "poincare_slack", "residual_ceiling", "status"};
}

void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  const auto header = csv_header();
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";

  for (const SweepRow& row : rows) {
    // Error texts may contain separators; keep the file parseable.
    std::string status = row.status;
    for (char& c : status)
      if (c == ',' || c == '\n') c = ';';

    out << row.manifold << ',' << row.hole_center << ','
        << format_real(row.radius) << ',';
    if (row.hole_size >= 0) out << row.hole_size;
    out << ',' << row.k << ',' << format_real(row.cap) << ','
        << format_real(row.lambda_full) << ',' << format_real(row.lambda_holes)
        << ',' << format_real(row.gap) << ',' << format_real(row.sqrt_cap) << ','
        << format_real(row.ratio) << ',' << format_real(row.witness) << ','
        << format_real(row.gram_defect) << ',' << format_real(row.poincare_slack)
        << ',' << format_real(row.residual_ceiling) << ',' << status << "\n";
  }
}

void emit_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& destination) {
  std::ofstream out(destination);
  if (!out)
    throw IoError("emit_csv: cannot open '" + destination.string() + "' for writing");
  emit_csv(rows, out);
  out.flush();
  if (!out)
    throw IoError("emit_csv: write to '" + destination.string() + "' failed");
}

} // namespace schrocap
