#include "schrocap/commands.hpp"
#include "schrocap/errors.hpp"

#include <iostream>
#include <optional>
#include <string>

namespace {

int usage(std::ostream& out) {
  out << "usage: schrocap <spectrum|capacity|sweep> <config-file> [--output PATH]\n"
         "\n"
         "  spectrum   eigenvalues on the manifold (and with the hole excised)\n"
         "  capacity   capacity of the configured hole set and its diagnostics\n"
         "  sweep      hole-radius sweep, CSV output plus per-k constants\n"
         "\n"
         "Set SCHROCAP_VERBOSE=1 for progress notes on stderr.\n";
  return 2;
}

} // namespace

int main(int argc, char** argv) {
  std::string command;
  std::string config_path;
  std::optional<std::string> output_override;

  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--help" || arg == "-h") {
      usage(std::cout);
      return 0;
    }
    if (arg == "--output") {
      if (i + 1 >= argc) {
        std::cerr << "schrocap: --output needs a path\n";
        return 2;
      }
      output_override = argv[++i];
    } else if (command.empty()) {
      command = arg;
    } else if (config_path.empty()) {
      config_path = arg;
    } else {
      std::cerr << "schrocap: unexpected argument '" << arg << "'\n";
      return usage(std::cerr);
    }
  }

  if (command.empty() || config_path.empty()) return usage(std::cerr);

  try {
    const schrocap::RunConfig cfg = schrocap::load_config(config_path);
    if (command == "spectrum")
      return schrocap::cmd_spectrum(cfg, std::cout, std::cerr);
    if (command == "capacity")
      return schrocap::cmd_capacity(cfg, std::cout, std::cerr);
    if (command == "sweep")
      return schrocap::cmd_sweep(cfg, std::cout, std::cerr, output_override);
    std::cerr << "schrocap: unknown command '" << command << "'\n";
    return usage(std::cerr);
  } catch (const schrocap::ConfigError& e) {
    std::cerr << "schrocap: " << e.what() << "\n";
    return 2;
  } catch (const schrocap::IoError& e) {
    std::cerr << "schrocap: " << e.what() << "\n";
    return 2;
  } catch (const schrocap::Error& e) {
    std::cerr << "schrocap: " << e.what() << "\n";
    return 1;
  }
}
