#include "schrocap/config.hpp"

#include "schrocap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace schrocap {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> parts;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) parts.push_back(tok);
  return parts;
}

Real parse_real(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const Real x = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(x))
    throw ConfigError("config: key '" + key + "' expects a finite real, got '" +
                      value + "'");
  return x;
}

long long parse_int(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const long long x = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0')
    throw ConfigError("config: key '" + key + "' expects an integer, got '" +
                      value + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError("config: key '" + key + "' expects true or false, got '" +
                    value + "'");
}

// File-ordered key/value pairs; duplicates and malformed lines rejected here.
std::vector<std::pair<std::string, std::string>> tokenize(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) +
                        " is not a 'key = value' assignment: '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config: line " + std::to_string(lineno) + " has an empty key");
    for (const auto& [k, v] : entries)
      if (k == key)
        throw ConfigError("config: key '" + key + "' assigned more than once");
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

class Reader {
public:
  explicit Reader(std::vector<std::pair<std::string, std::string>> entries)
      : entries_(std::move(entries)) {}

  std::optional<std::string> take(const std::string& key) {
    for (auto& [k, v] : entries_)
      if (k == key && !consumed_.count(k)) {
        consumed_.insert(k);
        return v;
      }
    return std::nullopt;
  }

  // Cosine terms ordered by their numeric suffix.
  std::vector<std::pair<long long, std::string>> take_cosine_terms() {
    const std::string prefix = "potential.cosine.";
    std::vector<std::pair<long long, std::string>> terms;
    for (auto& [k, v] : entries_) {
      if (k.rfind(prefix, 0) != 0) continue;
      const std::string suffix = k.substr(prefix.size());
      long long idx = 0;
      try {
        idx = parse_int(k, suffix);
      } catch (const ConfigError&) {
        continue;  // left unconsumed, reported as unknown below
      }
      if (idx <= 0) continue;
      consumed_.insert(k);
      terms.emplace_back(idx, v);
    }
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return terms;
  }

  // First unconsumed key in file order, if any.
  std::optional<std::string> first_unknown() const {
    for (const auto& [k, v] : entries_)
      if (!consumed_.count(k)) return k;
    return std::nullopt;
  }

private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::set<std::string> consumed_;
};

void reject_if_present(Reader& r, const std::string& key, const std::string& why) {
  if (r.take(key))
    throw ConfigError("config: key '" + key + "' " + why);
}

} // namespace

RunConfig parse_config(const std::string& text) {
  Reader reader(tokenize(text));
  RunConfig cfg;

  const auto kind = reader.take("manifold.kind");
  if (!kind)
    throw ConfigError("config: key 'manifold.kind' is required (ring | torus)");
  if (*kind == "ring") cfg.kind = ManifoldKind::Ring;
  else if (*kind == "torus") cfg.kind = ManifoldKind::Torus;
  else
    throw ConfigError("config: key 'manifold.kind' must be ring or torus, got '" +
                      *kind + "'");

  if (cfg.kind == ManifoldKind::Ring) {
    const auto n = reader.take("manifold.n");
    if (!n) throw ConfigError("config: key 'manifold.n' is required for a ring");
    cfg.n = parse_int("manifold.n", *n);
    if (cfg.n < 3) throw ConfigError("config: key 'manifold.n' must be >= 3");
    const auto circ = reader.take("manifold.circumference");
    if (!circ)
      throw ConfigError("config: key 'manifold.circumference' is required for a ring");
    cfg.circumference = parse_real("manifold.circumference", *circ);
    if (!(cfg.circumference > 0))
      throw ConfigError("config: key 'manifold.circumference' must be > 0");
    reject_if_present(reader, "manifold.nx", "does not apply to a ring");
    reject_if_present(reader, "manifold.ny", "does not apply to a ring");
    reject_if_present(reader, "manifold.lx", "does not apply to a ring");
    reject_if_present(reader, "manifold.ly", "does not apply to a ring");
  } else {
    for (const char* key : {"manifold.nx", "manifold.ny"}) {
      const auto v = reader.take(key);
      if (!v)
        throw ConfigError("config: key '" + std::string(key) +
                          "' is required for a torus");
      const long long res = parse_int(key, *v);
      if (res < 3)
        throw ConfigError("config: key '" + std::string(key) + "' must be >= 3");
      (key == std::string("manifold.nx") ? cfg.nx : cfg.ny) = res;
    }
    for (const char* key : {"manifold.lx", "manifold.ly"}) {
      const auto v = reader.take(key);
      if (!v)
        throw ConfigError("config: key '" + std::string(key) +
                          "' is required for a torus");
      const Real l = parse_real(key, *v);
      if (!(l > 0))
        throw ConfigError("config: key '" + std::string(key) + "' must be > 0");
      (key == std::string("manifold.lx") ? cfg.lx : cfg.ly) = l;
    }
    reject_if_present(reader, "manifold.n", "does not apply to a torus");
    reject_if_present(reader, "manifold.circumference", "does not apply to a torus");
  }

  if (const auto c = reader.take("potential.constant"))
    cfg.potential.constant = parse_real("potential.constant", *c);
  for (const auto& [idx, value] : reader.take_cosine_terms()) {
    const std::string key = "potential.cosine." + std::to_string(idx);
    const auto parts = split_ws(value);
    if (parts.size() != 4)
      throw ConfigError("config: key '" + key +
                        "' expects 'amplitude mode_x mode_y phase'");
    CosineTerm term;
    term.amplitude = parse_real(key, parts[0]);
    term.mode_x = static_cast<int>(parse_int(key, parts[1]));
    term.mode_y = static_cast<int>(parse_int(key, parts[2]));
    term.phase = parse_real(key, parts[3]);
    cfg.potential.terms.push_back(term);
  }

  if (const auto none = reader.take("hole.none"))
    cfg.hole_none = parse_bool("hole.none", *none);
  if (const auto center = reader.take("hole.center")) {
    if (cfg.hole_none)
      throw ConfigError("config: key 'hole.center' contradicts hole.none = true");
    const auto parts = split_ws(*center);
    const std::size_t want = cfg.kind == ManifoldKind::Ring ? 1 : 2;
    if (parts.size() != want)
      throw ConfigError("config: key 'hole.center' expects " + std::to_string(want) +
                        " lattice index(es)");
    std::vector<Index> coords;
    for (const auto& p : parts) coords.push_back(parse_int("hole.center", p));
    cfg.hole_center = std::move(coords);
  }
  if (const auto radius = reader.take("hole.radius")) {
    if (cfg.hole_none)
      throw ConfigError("config: key 'hole.radius' contradicts hole.none = true");
    cfg.hole_radius = parse_real("hole.radius", *radius);
    if (*cfg.hole_radius < 0)
      throw ConfigError("config: key 'hole.radius' must be >= 0");
  }

  if (const auto k = reader.take("spectrum.k")) {
    cfg.spectrum_k = parse_int("spectrum.k", *k);
    if (*cfg.spectrum_k < 1)
      throw ConfigError("config: key 'spectrum.k' must be >= 1");
  }
  if (const auto radii = reader.take("sweep.radii")) {
    for (const auto& p : split_ws(*radii))
      cfg.sweep_radii.push_back(parse_real("sweep.radii", p));
    if (cfg.sweep_radii.empty())
      throw ConfigError("config: key 'sweep.radii' lists no radii");
  }
  if (const auto kmax = reader.take("sweep.k_max")) {
    cfg.sweep_k_max = parse_int("sweep.k_max", *kmax);
    if (*cfg.sweep_k_max < 1)
      throw ConfigError("config: key 'sweep.k_max' must be >= 1");
  }

  if (const auto backend = reader.take("solver.backend")) {
    if (*backend == "dense") cfg.solver.backend = SolverBackend::Dense;
    else if (*backend == "iterative") cfg.solver.backend = SolverBackend::Iterative;
    else
      throw ConfigError("config: key 'solver.backend' must be dense or iterative, "
                        "got '" + *backend + "'");
  }
  if (const auto tol = reader.take("solver.tol")) {
    cfg.solver.tol = parse_real("solver.tol", *tol);
    if (!(cfg.solver.tol > 0))
      throw ConfigError("config: key 'solver.tol' must be > 0");
  }
  if (const auto maxit = reader.take("solver.max_iterations")) {
    const long long m = parse_int("solver.max_iterations", *maxit);
    if (m < 1)
      throw ConfigError("config: key 'solver.max_iterations' must be >= 1");
    cfg.solver.max_iterations = static_cast<int>(m);
  }
  if (const auto seed = reader.take("solver.seed")) {
    const long long s = parse_int("solver.seed", *seed);
    if (s < 0) throw ConfigError("config: key 'solver.seed' must be >= 0");
    cfg.solver.seed = static_cast<std::uint64_t>(s);
  }
  if (const auto block = reader.take("solver.block_size")) {
    const long long b = parse_int("solver.block_size", *block);
    if (b < 0) throw ConfigError("config: key 'solver.block_size' must be >= 0");
    cfg.solver.block_size = static_cast<int>(b);
  }

  if (const auto path = reader.take("output.path")) {
    if (path->empty())
      throw ConfigError("config: key 'output.path' must not be empty");
    cfg.output_path = *path;
  }

  if (const auto unknown = reader.first_unknown())
    throw ConfigError("config: unknown key '" + *unknown + "'");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("config: cannot read '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string normalize_config(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> kv;

  if (cfg.kind == ManifoldKind::Ring) {
    kv.emplace_back("manifold.kind", "ring");
    kv.emplace_back("manifold.n", std::to_string(cfg.n));
    kv.emplace_back("manifold.circumference", format_real(cfg.circumference));
  } else {
    kv.emplace_back("manifold.kind", "torus");
    kv.emplace_back("manifold.nx", std::to_string(cfg.nx));
    kv.emplace_back("manifold.ny", std::to_string(cfg.ny));
    kv.emplace_back("manifold.lx", format_real(cfg.lx));
    kv.emplace_back("manifold.ly", format_real(cfg.ly));
  }

  kv.emplace_back("potential.constant", format_real(cfg.potential.constant));
  for (std::size_t i = 0; i < cfg.potential.terms.size(); ++i) {
    const CosineTerm& t = cfg.potential.terms[i];
    kv.emplace_back("potential.cosine." + std::to_string(i + 1),
                    format_real(t.amplitude) + " " + std::to_string(t.mode_x) + " " +
                        std::to_string(t.mode_y) + " " + format_real(t.phase));
  }

  if (cfg.hole_none) kv.emplace_back("hole.none", "true");
  if (cfg.hole_center) {
    std::string v = std::to_string((*cfg.hole_center)[0]);
    if (cfg.hole_center->size() > 1) v += " " + std::to_string((*cfg.hole_center)[1]);
    kv.emplace_back("hole.center", v);
  }
  if (cfg.hole_radius) kv.emplace_back("hole.radius", format_real(*cfg.hole_radius));

  if (cfg.spectrum_k) kv.emplace_back("spectrum.k", std::to_string(*cfg.spectrum_k));
  if (!cfg.sweep_radii.empty()) {
    std::string v;
    for (std::size_t i = 0; i < cfg.sweep_radii.size(); ++i)
      v += (i ? " " : "") + format_real(cfg.sweep_radii[i]);
    kv.emplace_back("sweep.radii", v);
  }
  if (cfg.sweep_k_max) kv.emplace_back("sweep.k_max", std::to_string(*cfg.sweep_k_max));

  kv.emplace_back("solver.backend",
                  cfg.solver.backend == SolverBackend::Dense ? "dense" : "iterative");
  kv.emplace_back("solver.tol", format_real(cfg.solver.tol));
  kv.emplace_back("solver.max_iterations", std::to_string(cfg.solver.max_iterations));
  kv.emplace_back("solver.seed", std::to_string(cfg.solver.seed));
  kv.emplace_back("solver.block_size", std::to_string(cfg.solver.block_size));

  if (cfg.output_path) kv.emplace_back("output.path", *cfg.output_path);

  std::sort(kv.begin(), kv.end());
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

DiscreteManifold build_manifold(const RunConfig& cfg) {
  if (cfg.kind == ManifoldKind::Ring) return build_ring(cfg.n, cfg.circumference);
  return build_torus(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
}

Index resolve_center_vertex(const RunConfig& cfg, const DiscreteManifold& m) {
  if (!cfg.hole_center)
    throw ConfigError("config: key 'hole.center' is required");
  const auto& c = *cfg.hole_center;
  if (cfg.kind == ManifoldKind::Ring) {
    if (c[0] < 0 || c[0] >= m.n_vertices)
      throw ConfigError("config: key 'hole.center' is out of range");
    return c[0];
  }
  if (c[0] < 0 || c[0] >= cfg.nx || c[1] < 0 || c[1] >= cfg.ny)
    throw ConfigError("config: key 'hole.center' is out of range");
  return c[1] * cfg.nx + c[0];
}

} // namespace schrocap
