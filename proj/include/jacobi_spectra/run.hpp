#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "jacobi_spectra/config.hpp"

namespace jacobi_spectra {

enum ExitCode : int { exit_ok = 0, exit_config_error = 2, exit_numerical_error = 3 };

struct OutputFile {
  std::string path;  // empty: standard output
  std::string content;
};

struct RunOutput {
  std::vector<OutputFile> files;
  std::string summary;
};

/// Runs the configured pipeline and renders every artifact in memory. The
/// rendered bytes do not depend on config.threads.
RunOutput execute(const RunConfig& config);

/// execute() plus file output. Numerical certification failures are
/// reported on `err` and mapped to exit_numerical_error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace jacobi_spectra
