#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jacobi_spectra/potentials.hpp"

namespace jacobi_spectra {

inline constexpr const char* version_string = "jacobi-spectra 0.1.0";

/// A rejected configuration value. `key()` names the offending key as it
/// appears in the file ("schedule", "potential.theta", ...).
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message);
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class Command { Eigs, Cdf, Spectrum, Gaps, Moments, Crosscheck, Butterfly };

const char* to_string(Command c);
Command command_from_string(const std::string& name);

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  Index points = 0;
};

/// Flat key -> raw value map. Keys inside the [potential] section are
/// stored as "potential.<key>".
using ConfigEntries = std::map<std::string, std::string>;

/// Parses `key = value` lines with an optional [potential] section. Blank
/// lines and '#' comments are ignored.
ConfigEntries parse_config_text(const std::string& text);

/// Applies a single "key=value" override on top of `entries`.
void apply_override(ConfigEntries& entries, const std::string& assignment);

/// Angle expressions: a number, "pi", or products/quotients of numbers with
/// at most one factor pi ("pi/3", "2*pi/7", "0.5*pi"). The two-word form
/// "hi+lo" / "hi-lo" written in config echoes is read back exactly.
Angle parse_angle(const std::string& text);

struct RunConfig {
  Command command = Command::Eigs;
  PotentialSpec potential;

  Index n = 100;
  std::vector<Index> schedule{256, 512, 1024, 2048};
  std::vector<Index> m_schedule{128, 256, 512};
  GridSpec grid;  // points == 0 until resolved from the potential bound
  double tol = 1e-10;
  double h = 0.05;
  double density_floor = 1e-3;
  Index gap_cap = 8;
  Index K = 6;
  Index window_radius = 100000;
  std::vector<Index> offsets;  // empty: default translates of window_radius
  Index shift = 0;
  double flag_tol = 1e-2;
  GridSpec theta_grid{0.0, 3.141592653589793, 64};
  std::string output_path;
  unsigned threads = 0;
};

/// Builds and validates a RunConfig. Every key is checked before any
/// computation; the first bad key raises ConfigError.
RunConfig build_run_config(Command command, const ConfigEntries& entries);

/// Canonical key/value listing of every setting that influences results
/// (threads and output path excluded), used for output headers.
std::vector<std::pair<std::string, std::string>> describe(const RunConfig& config);

}  // namespace jacobi_spectra
