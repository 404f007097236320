#pragma once

#include "schrocap/manifold.hpp"
#include "schrocap/potential.hpp"
#include "schrocap/spectrum.hpp"
#include "schrocap/types.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace schrocap {

/// Parsed run configuration. The file format is flat `key = value` lines with
/// dotted section names and '#' comments. Unknown keys are rejected.
///
/// Keys:
///   manifold.kind            ring | torus
///   manifold.n               ring resolution (>= 3)
///   manifold.circumference   ring length (> 0)
///   manifold.nx manifold.ny  torus resolutions (>= 3)
///   manifold.lx manifold.ly  torus side lengths (> 0)
///   potential.constant       constant part of V
///   potential.cosine.<i>     "amplitude mode_x mode_y phase" series term
///   hole.none                true: A is empty (spectrum/capacity commands)
///   hole.center              lattice index: "i" on a ring, "i j" on a torus
///   hole.radius              geodesic ball radius (>= 0)
///   spectrum.k               eigenpair count for the spectrum command
///   sweep.radii              radius list; a negative entry selects A = empty
///   sweep.k_max              sweep computes k = 1..k_max
///   solver.backend           dense | iterative
///   solver.tol               relative residual tolerance
///   solver.max_iterations    iterative step cap
///   solver.seed              iterative start seed
///   solver.block_size        iterative block size (0 = auto)
///   output.path              CSV destination for the sweep command
struct RunConfig {
  ManifoldKind kind = ManifoldKind::Ring;
  Index n = 0;             // ring
  Real circumference = 0;  // ring
  Index nx = 0, ny = 0;    // torus
  Real lx = 0, ly = 0;     // torus

  PotentialSpec potential;

  bool hole_none = false;
  std::optional<std::vector<Index>> hole_center;
  std::optional<Real> hole_radius;

  std::optional<Index> spectrum_k;
  std::vector<Real> sweep_radii;
  std::optional<Index> sweep_k_max;

  SolverOptions solver;

  std::optional<std::string> output_path;
};

/// Parse and structurally validate; throws ConfigError naming the first
/// offending key.
RunConfig parse_config(const std::string& text);

/// Read a file and parse it; throws IoError with the path on failure.
RunConfig load_config(const std::filesystem::path& path);

/// Canonical re-serialization: sorted keys, full-precision reals. Parsing the
/// result yields an equivalent configuration.
std::string normalize_config(const RunConfig& cfg);

/// Build the configured manifold.
DiscreteManifold build_manifold(const RunConfig& cfg);

/// Map the configured lattice center to a vertex index; throws ConfigError if
/// no center is configured or it is out of range.
Index resolve_center_vertex(const RunConfig& cfg, const DiscreteManifold& m);

} // namespace schrocap
