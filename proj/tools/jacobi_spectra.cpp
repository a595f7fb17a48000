// jacobi-spectra <command> --config FILE [--set key=value]...

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jacobi_spectra/config.hpp"
#include "jacobi_spectra/potentials.hpp"
#include "jacobi_spectra/run.hpp"

using namespace jacobi_spectra;

int main(int argc, char** argv) {
  CLI::App app{"Spectral distributions of almost-periodic tridiagonal operators"};
  app.set_version_flag("--version", version_string);

  std::string command;
  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("command", command, "eigs | cdf | spectrum | gaps | moments | crosscheck | butterfly")
      ->required();
  app.add_option("--config", config_path, "key = value config file with a [potential] section");
  app.add_option("--set", overrides, "override a config key, e.g. --set potential.theta=pi/3");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config_error;
  }

  try {
    ConfigEntries entries;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("--config", "cannot open '" + config_path + "'");
      std::stringstream text;
      text << in.rdbuf();
      entries = parse_config_text(text.str());
    }
    if (!entries.count("threads")) {
      if (const char* env = std::getenv("JACOBI_SPECTRA_THREADS")) entries["threads"] = env;
    }
    for (const auto& o : overrides) apply_override(entries, o);

    const RunConfig config = build_run_config(command_from_string(command), entries);
    return run(config, std::cout, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const ExplicitOutOfRange& e) {
    std::cerr << "config error: potential.samples: " << e.what() << "\n";
    return exit_config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
