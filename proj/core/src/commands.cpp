#include "schrocap/commands.hpp"

#include "schrocap/capacity.hpp"
#include "schrocap/errors.hpp"
#include "schrocap/sweep.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <memory>
#include <ostream>
#include <string>

namespace schrocap {

namespace {

// Exit statuses shared by the commands.
constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitContract = 4;

// Sign-contract tolerances for the sweep gate.
constexpr Real kGapTolerance = 1e-10;
constexpr Real kSlackTolerance = 1e-10;
constexpr Real kWitnessRelTolerance = 1e-9;

bool verbose() {
  const char* v = std::getenv("SCHROCAP_VERBOSE");
  return v != nullptr && *v != '\0' && std::string(v) != "0";
}

struct Problem {
  std::shared_ptr<const DiscreteManifold> manifold;
  std::unique_ptr<SchrodingerOperator> op;
  std::optional<HoleSet> hole;
};

// Build manifold + potential + operator + optional hole set, validating in
// config terms before any solve runs.
Problem setup(const RunConfig& cfg, bool hole_required) {
  Problem p;
  p.manifold = std::make_shared<const DiscreteManifold>(build_manifold(cfg));

  Potential v = [&] {
    try {
      return sample_potential(*p.manifold, cfg.potential);
    } catch (const Error& e) {
      throw ConfigError("config: key 'potential' is invalid: " + std::string(e.what()));
    }
  }();
  p.op = std::make_unique<SchrodingerOperator>(p.manifold, std::move(v));

  if (cfg.hole_none) {
    p.hole = HoleSet{};
  } else if (cfg.hole_center || cfg.hole_radius) {
    if (!cfg.hole_center)
      throw ConfigError("config: key 'hole.center' is required with hole.radius");
    if (!cfg.hole_radius)
      throw ConfigError("config: key 'hole.radius' is required with hole.center");
    p.hole = hole_ball(*p.manifold, resolve_center_vertex(cfg, *p.manifold),
                       *cfg.hole_radius);
  } else if (hole_required) {
    throw ConfigError("config: key 'hole.none' or hole.center/hole.radius is "
                      "required for this command");
  }
  return p;
}

void print_solver(const RunConfig& cfg, std::ostream& out) {
  out << "solver.backend = "
      << (cfg.solver.backend == SolverBackend::Dense ? "dense" : "iterative") << "\n";
  out << "solver.tol = " << format_real(cfg.solver.tol) << "\n";
  out << "solver.seed = " << cfg.solver.seed << "\n";
}

int run_guarded(std::ostream& err, const char* command, int (*body)(const RunConfig&,
                std::ostream&, std::ostream&, const std::optional<std::string>&),
                const RunConfig& cfg, std::ostream& out,
                const std::optional<std::string>& output_override) {
  try {
    return body(cfg, out, err, output_override);
  } catch (const ConfigError& e) {
    err << command << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConvergenceError& e) {
    err << command << ": " << e.what() << "\n";
    return kExitSolver;
  } catch (const Error& e) {
    err << command << ": " << e.what() << "\n";
    return kExitFailure;
  }
}

int spectrum_body(const RunConfig& cfg, std::ostream& out, std::ostream& err,
                  const std::optional<std::string>&) {
  if (!cfg.spectrum_k)
    throw ConfigError("config: key 'spectrum.k' is required for the spectrum command");
  const Index k = *cfg.spectrum_k;

  Problem p = setup(cfg, /*hole_required=*/false);
  const Index n = p.manifold->n_vertices;
  if (k > n)
    throw SizeError("spectrum: k = " + std::to_string(k) +
                    " exceeds n_vertices = " + std::to_string(n));
  if (p.hole && k > n - p.hole->size())
    throw SizeError("spectrum: k = " + std::to_string(k) +
                    " exceeds the restricted dimension " +
                    std::to_string(n - p.hole->size()));

  if (verbose()) err << "spectrum: solving " << p.manifold->describe() << "\n";

  out << "command = spectrum\n";
  out << "manifold = " << p.manifold->describe() << "\n";
  print_solver(cfg, out);
  out << "potential.min = " << format_real(p.op->potential().min_value()) << "\n";
  out << "k = " << k << "\n";

  const Spectrum full = solve_spectrum(*p.op, k, cfg.solver);
  for (Index i = 0; i < k; ++i)
    out << "lambda_full." << (i + 1) << " = " << format_real(full.eigenvalues[i])
        << "\n";
  for (Index i = 0; i < k; ++i)
    out << "residual_full." << (i + 1) << " = " << format_real(full.residuals[i])
        << "\n";
  out << "residual_full.max = " << format_real(full.residuals.maxCoeff()) << "\n";

  const Real min_v = p.op->potential().min_value();
  const bool ground_ok = full.eigenvalues[0] >= min_v - 1e-10;
  out << "lambda1_ge_min_potential = " << (ground_ok ? "pass" : "fail") << "\n";

  if (p.hole) {
    out << "hole.size = " << p.hole->size() << "\n";
    const Spectrum holes = solve_spectrum_holes(*p.op, *p.hole, k, cfg.solver);
    for (Index i = 0; i < k; ++i)
      out << "lambda_holes." << (i + 1) << " = "
          << format_real(holes.eigenvalues[i]) << "\n";
    for (Index i = 0; i < k; ++i)
      out << "residual_holes." << (i + 1) << " = "
          << format_real(holes.residuals[i]) << "\n";
    out << "residual_holes.max = " << format_real(holes.residuals.maxCoeff())
        << "\n";
  }
  return ground_ok ? kExitOk : kExitContract;
}

int capacity_body(const RunConfig& cfg, std::ostream& out, std::ostream& err,
                  const std::optional<std::string>&) {
  Problem p = setup(cfg, /*hole_required=*/true);
  if (verbose()) err << "capacity: solving " << p.manifold->describe() << "\n";

  const Spectrum full = solve_spectrum(*p.op, 1, cfg.solver);
  const CapacityResult r = compute_capacity(*p.op, *p.hole, full.eigenvectors.col(0));
  const Real slack = poincare_slack(*p.op, full.eigenvalues[0], r);

  Real min_abs_e1_on_hole = std::numeric_limits<Real>::quiet_NaN();
  for (Index v : p.hole->indices) {
    const Real a = std::abs(full.eigenvectors(v, 0));
    if (std::isnan(min_abs_e1_on_hole) || a < min_abs_e1_on_hole)
      min_abs_e1_on_hole = a;
  }

  out << "command = capacity\n";
  out << "manifold = " << p.manifold->describe() << "\n";
  print_solver(cfg, out);
  out << "hole.size = " << p.hole->size() << "\n";
  out << "cap = " << format_real(r.cap) << "\n";
  out << "minimizer.mass_norm_sq = "
      << format_real(mass_inner(*p.op, r.minimizer, r.minimizer)) << "\n";
  out << "poincare_slack = " << format_real(slack) << "\n";
  out << "kkt_residual = " << format_real(r.kkt_residual) << "\n";
  out << "min_abs_e1_on_hole = " << format_real(min_abs_e1_on_hole) << "\n";
  return kExitOk;
}

int sweep_body(const RunConfig& cfg, std::ostream& out, std::ostream& err,
               const std::optional<std::string>& output_override) {
  if (cfg.sweep_radii.empty())
    throw ConfigError("config: key 'sweep.radii' is required for the sweep command");
  if (!cfg.sweep_k_max)
    throw ConfigError("config: key 'sweep.k_max' is required for the sweep command");
  std::string output;
  if (output_override) output = *output_override;
  else if (cfg.output_path) output = *cfg.output_path;
  else
    throw ConfigError("config: key 'output.path' is required for the sweep command");

  SweepConfig sweep;
  sweep.manifold = build_manifold(cfg);
  sweep.potential = cfg.potential;
  sweep.hole_center = resolve_center_vertex(cfg, sweep.manifold);
  sweep.radii = cfg.sweep_radii;
  sweep.k_max = *cfg.sweep_k_max;
  sweep.solver = cfg.solver;

  // Surface a bad potential as a config failure before the sweep starts.
  try {
    sample_potential(sweep.manifold, sweep.potential);
  } catch (const Error& e) {
    throw ConfigError("config: key 'potential' is invalid: " + std::string(e.what()));
  }

  if (verbose()) err << "sweep: " << sweep.manifold.describe() << "\n";

  const std::vector<SweepRow> rows = bound_sweep(sweep);
  emit_csv(rows, std::filesystem::path(output));

  out << "command = sweep\n";
  out << "manifold = " << sweep.manifold.describe() << "\n";
  print_solver(cfg, out);
  out << "rows = " << rows.size() << "\n";
  out << "output = " << output << "\n";

  bool contracts_ok = true;
  for (const SweepRow& row : rows) {
    std::string violation;
    if (!row.ok()) {
      violation = "pipeline failure: " + row.status;
    } else if (!(row.gap >= -kGapTolerance)) {
      violation = "gap sign contract violated";
    } else if (!(row.poincare_slack >= -kSlackTolerance)) {
      violation = "poincare slack contract violated";
    } else if (std::isfinite(row.witness) &&
               !(row.lambda_holes <=
                 row.witness + kWitnessRelTolerance * (1.0 + std::abs(row.witness)))) {
      violation = "witness contract violated";
    }
    if (!violation.empty()) {
      contracts_ok = false;
      err << "sweep: " << violation << " at row k=" << row.k
          << " radius=" << format_real(row.radius) << " (" << row.manifold << ")\n";
    }
  }

  for (Index k = 1; k <= *cfg.sweep_k_max; ++k) {
    try {
      const CkEstimate est = estimate_ck(rows, k);
      out << "ck." << k << " = " << format_real(est.c_k) << "\n";
      out << "ck." << k << ".median = " << format_real(est.median_ratio) << "\n";
      out << "ck." << k << ".support = " << est.support.size() << "\n";
    } catch (const InsufficientDataError&) {
      out << "ck." << k << " = insufficient-data\n";
    }
  }

  // Observed onset of span degeneracy: the smallest capacity whose
  // certificate was unavailable, if any hole got that large.
  Real min_unavailable_cap = std::numeric_limits<Real>::infinity();
  for (const SweepRow& row : rows)
    if (row.ok() && !std::isfinite(row.witness) && std::isfinite(row.cap))
      min_unavailable_cap = std::min(min_unavailable_cap, row.cap);
  out << "witness.unavailable.min_cap = "
      << (std::isfinite(min_unavailable_cap) ? format_real(min_unavailable_cap)
                                             : "none")
      << "\n";

  out << "contracts = " << (contracts_ok ? "pass" : "fail") << "\n";
  return contracts_ok ? kExitOk : kExitContract;
}

} // namespace

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return run_guarded(err, "spectrum", spectrum_body, cfg, out, std::nullopt);
}

int cmd_capacity(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return run_guarded(err, "capacity", capacity_body, cfg, out, std::nullopt);
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err,
              const std::optional<std::string>& output_override) {
  return run_guarded(err, "sweep", sweep_body, cfg, out, output_override);
}

} // namespace schrocap
