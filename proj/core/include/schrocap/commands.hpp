#pragma once

#include "schrocap/config.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace schrocap {

/// Command drivers behind the CLI. Each validates the config it needs, runs
/// the pipeline, writes a machine-readable report to `out` (key = value
/// lines, full-precision reals) and failures to `err`, and returns the
/// process exit status (0 on success).

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int cmd_capacity(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Writes the sweep CSV (output.path, overridable), prints per-k empirical
/// constants, and exits 0 only if every row succeeded and every sign
/// contract (gap, Poincare slack, witness) held.
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err,
              const std::optional<std::string>& output_override = {});

} // namespace schrocap
