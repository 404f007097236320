#pragma once

#include "schrocap/capacity.hpp"
#include "schrocap/manifold.hpp"
#include "schrocap/potential.hpp"
#include "schrocap/spectrum.hpp"
#include "schrocap/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace schrocap {

/// One hole-radius sweep over a fixed manifold and potential. A negative
/// radius selects the empty hole set.
struct SweepConfig {
  DiscreteManifold manifold;
  PotentialSpec potential;
  Index hole_center = 0;
  std::vector<Real> radii;
  Index k_max = 1;
  SolverOptions solver;
};

/// One (radius, k) record of the sweep. Rows are sorted by (k, radius).
/// status is "ok" or the failure text of the radius' pipeline; failed rows
/// carry NaN numerics (rendered empty in CSV).
struct SweepRow {
  std::string manifold;
  Index hole_center = 0;
  Real radius = 0.0;
  Index hole_size = 0;
  Index k = 0;
  Real cap = 0.0;
  Real lambda_full = 0.0;
  Real lambda_holes = 0.0;
  Real gap = 0.0;
  Real sqrt_cap = 0.0;
  /// gap/sqrt(cap); absent (NaN) when cap = 0 or the row failed.
  Real ratio = 0.0;
  Real witness = 0.0;
  Real gram_defect = 0.0;
  Real poincare_slack = 0.0;
  /// Max solver residual across the full and holes solves of this radius.
  Real residual_ceiling = 0.0;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

/// Run the sweep: the full spectrum is computed once and reused across radii;
/// per-radius failures are attached to their rows and the sweep continues.
std::vector<SweepRow> bound_sweep(const SweepConfig& cfg);

/// Same sweep one refinement level up: resolutions doubled, the hole center
/// moved to the vertex at the same periodic coordinates.
SweepConfig refine_sweep_config(const SweepConfig& cfg);

/// Empirical constant for one k: max of gap/sqrt(cap) over rows with cap > 0,
/// with the median ratio and the (radius, ratio) support points. Throws
/// InsufficientDataError with fewer than two positive-cap rows.
struct CkEstimate {
  Index k = 0;
  Real c_k = 0.0;
  Real median_ratio = 0.0;
  std::vector<std::pair<Real, Real>> support;
};

CkEstimate estimate_ck(const std::vector<SweepRow>& rows, Index k);

/// CSV, header plus one line per row, reals with 17 significant digits,
/// absent values as empty fields.
void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void emit_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& destination);

/// Column names in emission order.
std::vector<std::string> csv_header();

} // namespace schrocap
