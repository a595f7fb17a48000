#include "jacobi_spectra/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "jacobi_spectra/csv.hpp"

namespace jacobi_spectra {

namespace {

const std::set<std::string> top_level_keys{
    "n",   "schedule",      "m_schedule", "grid",     "tol",        "h",
    "density_floor",        "gap_cap",    "K",        "window_radius",
    "offsets", "shift",     "flag_tol",   "theta_grid", "output",   "threads"};

const std::set<std::string> potential_keys{"kind",  "coeffs",  "theta", "terms",
                                           "value", "samples", "origin"};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double x = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size() || !std::isfinite(x)) {
    throw ConfigError(key, "expected a finite real number, got '" + t + "'");
  }
  return x;
}

Index parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  Index x = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    throw ConfigError(key, "expected an integer, got '" + t + "'");
  }
  return x;
}

std::vector<double> parse_real_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const auto& item : split(text, ',')) out.push_back(parse_real(key, item));
  return out;
}

std::vector<Index> parse_int_list(const std::string& key, const std::string& text) {
  std::vector<Index> out;
  if (trim(text).empty()) return out;
  for (const auto& item : split(text, ',')) out.push_back(parse_int(key, item));
  return out;
}

GridSpec parse_grid(const std::string& key, const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw ConfigError(key, "expected 'min, max, points'");
  GridSpec g{parse_real(key, parts[0]), parse_real(key, parts[1]), parse_int(key, parts[2])};
  if (g.points < 1) throw ConfigError(key, "points must be >= 1");
  if (g.points > 1 && !(g.min < g.max)) throw ConfigError(key, "min must be below max");
  return g;
}

void require_increasing(const std::string& key, const std::vector<Index>& values, Index minimum) {
  if (values.empty()) throw ConfigError(key, "must not be empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < minimum) {
      throw ConfigError(key, "entries must be >= " + std::to_string(minimum));
    }
    if (i > 0 && values[i] <= values[i - 1]) throw ConfigError(key, "must be strictly increasing");
  }
}

std::string format_angle(const Angle& a) {
  if (a.lo == 0.0) return format_short(a.hi);
  return format_short(a.hi) + (a.lo < 0 ? "-" : "+") + format_short(std::abs(a.lo));
}

PotentialSpec build_potential(const ConfigEntries& entries) {
  auto get = [&](const std::string& k) -> const std::string* {
    const auto it = entries.find("potential." + k);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto require = [&](const std::string& k) -> const std::string& {
    const auto* v = get(k);
    if (!v) throw ConfigError("potential." + k, "is required for this kind");
    return *v;
  };

  PotentialKind kind = PotentialKind::Constant;
  if (const auto* k = get("kind")) {
    try {
      kind = potential_kind_from_string(trim(*k));
    } catch (const InvalidPotential& e) {
      throw ConfigError("potential.kind", e.what());
    }
  }

  std::set<std::string> used{"kind"};
  PotentialSpec spec;
  try {
    switch (kind) {
      case PotentialKind::CosineComposed: {
        used.insert({"coeffs", "theta"});
        const auto coeffs = parse_real_list("potential.coeffs", require("coeffs"));
        if (coeffs.empty()) throw ConfigError("potential.coeffs", "must not be empty");
        if (coeffs.size() > max_polynomial_degree + 1) {
          throw ConfigError("potential.coeffs", "degree exceeds " + std::to_string(max_polynomial_degree));
        }
        Angle theta;
        try {
          theta = parse_angle(require("theta"));
        } catch (const std::invalid_argument& e) {
          throw ConfigError("potential.theta", e.what());
        }
        spec = PotentialSpec::cosine_composed(coeffs, theta);
        break;
      }
      case PotentialKind::TrigPolynomial: {
        used.insert("terms");
        std::vector<TrigTerm> terms;
        for (const auto& item : split(require("terms"), ';')) {
          std::istringstream fields(item);
          std::string amp, freq, phase, extra;
          if (!(fields >> amp >> freq >> phase) || (fields >> extra)) {
            throw ConfigError("potential.terms", "each term is 'amplitude frequency phase'");
          }
          Angle f;
          try {
            f = parse_angle(freq);
          } catch (const std::invalid_argument& e) {
            throw ConfigError("potential.terms", e.what());
          }
          terms.push_back({parse_real("potential.terms", amp), f, parse_real("potential.terms", phase)});
        }
        spec = PotentialSpec::trig_polynomial(std::move(terms));
        break;
      }
      case PotentialKind::Constant:
        used.insert("value");
        spec = PotentialSpec::constant(get("value") ? parse_real("potential.value", *get("value")) : 0.0);
        break;
      case PotentialKind::Explicit: {
        used.insert({"samples", "origin"});
        const auto samples = parse_real_list("potential.samples", require("samples"));
        if (samples.empty()) throw ConfigError("potential.samples", "must not be empty");
        const Index origin = get("origin") ? parse_int("potential.origin", *get("origin")) : 0;
        spec = PotentialSpec::explicit_samples(samples, origin);
        break;
      }
    }
  } catch (const InvalidPotential& e) {
    throw ConfigError("potential", e.what());
  }

  for (const auto& [key, value] : entries) {
    if (key.rfind("potential.", 0) != 0) continue;
    const std::string k = key.substr(10);
    if (!potential_keys.count(k)) throw ConfigError(key, "unknown key");
    if (!used.count(k)) {
      throw ConfigError(key, std::string("is not used by kind ") + to_string(kind));
    }
  }
  return spec;
}

// Index window [lo, hi] the command will sample.
std::pair<Index, Index> required_range(const RunConfig& c) {
  switch (c.command) {
    case Command::Eigs:
      return {1 + c.shift, c.n + c.shift};
    case Command::Cdf:
    case Command::Spectrum:
    case Command::Gaps:
    case Command::Butterfly:
      return {1 + c.shift, c.schedule.back() + c.shift};
    case Command::Moments:
      return {std::min(1 + c.shift, -c.window_radius - c.K),
              std::max(c.schedule.back() + c.shift, c.window_radius + c.K)};
    case Command::Crosscheck:
      return {-c.m_schedule.back(), 2 * c.m_schedule.back() + 1};
  }
  return {0, 0};
}

}  // namespace

ConfigError::ConfigError(std::string key, const std::string& message)
    : std::invalid_argument(key + ": " + message), key_(std::move(key)) {}

const char* to_string(Command c) {
  switch (c) {
    case Command::Eigs: return "eigs";
    case Command::Cdf: return "cdf";
    case Command::Spectrum: return "spectrum";
    case Command::Gaps: return "gaps";
    case Command::Moments: return "moments";
    case Command::Crosscheck: return "crosscheck";
    case Command::Butterfly: return "butterfly";
  }
  return "?";
}

Command command_from_string(const std::string& name) {
  for (auto c : {Command::Eigs, Command::Cdf, Command::Spectrum, Command::Gaps, Command::Moments,
                 Command::Crosscheck, Command::Butterfly}) {
    if (name == to_string(c)) return c;
  }
  throw ConfigError("command", "unknown command '" + name + "'");
}

ConfigEntries parse_config_text(const std::string& text) {
  ConfigEntries entries;
  std::istringstream in(text);
  std::string line;
  std::string section;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno), "unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "potential") throw ConfigError("[" + section + "]", "unknown section");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    entries[section.empty() ? key : section + "." + key] = trim(line.substr(eq + 1));
  }
  return entries;
}

void apply_override(ConfigEntries& entries, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("--set", "expected key=value, got '" + assignment + "'");
  entries[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

Angle parse_angle(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw std::invalid_argument("empty angle");
  // Two-word form "hi+lo" / "hi-lo"; a sign after an exponent marker is part of a number.
  for (std::size_t i = 1; i < t.size(); ++i) {
    if ((t[i] != '+' && t[i] != '-') || t[i - 1] == 'e' || t[i - 1] == 'E') continue;
    const Angle hi = parse_angle(t.substr(0, i));
    const Angle lo = parse_angle(t.substr(i + 1));
    if (hi.lo != 0.0 || lo.lo != 0.0 || std::abs(lo.hi) > 0.5 * std::abs(hi.hi) * 0x1p-52) {
      throw std::invalid_argument("'" + t + "' is not a two-word angle");
    }
    return {hi.hi, t[i] == '-' ? -lo.hi : lo.hi};
  }
  double numerator = 1.0;
  double denominator = 1.0;
  int pi_factors = 0;
  char op = '*';
  std::size_t pos = 0;
  while (true) {
    const auto next = t.find_first_of("*/", pos);
    const std::string factor = trim(t.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    if (factor == "pi") {
      if (op == '/') throw std::invalid_argument("pi may not appear in a denominator");
      ++pi_factors;
    } else {
      double x = 0.0;
      const auto res = std::from_chars(factor.data(), factor.data() + factor.size(), x);
      if (factor.empty() || res.ec != std::errc{} || res.ptr != factor.data() + factor.size() ||
          !std::isfinite(x)) {
        throw std::invalid_argument("bad angle factor '" + factor + "'");
      }
      if (op == '*') {
        numerator *= x;
      } else {
        if (x == 0.0) throw std::invalid_argument("division by zero in angle");
        denominator *= x;
      }
    }
    if (next == std::string::npos) break;
    op = t[next];
    pos = next + 1;
  }
  if (pi_factors > 1) throw std::invalid_argument("at most one factor pi is supported");
  if (pi_factors == 1) return Angle::pi_fraction(numerator, denominator);
  return Angle::radians(numerator / denominator);
}

RunConfig build_run_config(Command command, const ConfigEntries& entries) {
  for (const auto& [key, value] : entries) {
    if (key.rfind("potential.", 0) == 0) continue;
    if (!top_level_keys.count(key)) throw ConfigError(key, "unknown key");
  }

  RunConfig c;
  c.command = command;
  c.potential = build_potential(entries);

  auto has = [&](const char* k) { return entries.count(k) != 0; };
  auto raw = [&](const char* k) -> const std::string& { return entries.at(k); };

  if (has("n")) c.n = parse_int("n", raw("n"));
  if (c.n < 1) throw ConfigError("n", "must be >= 1");
  if (has("schedule")) c.schedule = parse_int_list("schedule", raw("schedule"));
  require_increasing("schedule", c.schedule, 1);
  if (has("m_schedule")) c.m_schedule = parse_int_list("m_schedule", raw("m_schedule"));
  require_increasing("m_schedule", c.m_schedule, 0);
  if (has("tol")) c.tol = parse_real("tol", raw("tol"));
  if (!(c.tol > 0.0)) throw ConfigError("tol", "must be positive");
  if (has("h")) c.h = parse_real("h", raw("h"));
  if (!(c.h > 0.0)) throw ConfigError("h", "must be positive");
  if (has("density_floor")) c.density_floor = parse_real("density_floor", raw("density_floor"));
  if (!(c.density_floor > 0.0)) throw ConfigError("density_floor", "must be positive");
  if (has("gap_cap")) c.gap_cap = parse_int("gap_cap", raw("gap_cap"));
  if (c.gap_cap < 0) throw ConfigError("gap_cap", "must be >= 0");
  if (has("K")) c.K = parse_int("K", raw("K"));
  if (c.K < 0) throw ConfigError("K", "must be >= 0");
  if (has("window_radius")) c.window_radius = parse_int("window_radius", raw("window_radius"));
  if (c.window_radius < 1 || c.window_radius <= c.K) {
    throw ConfigError("window_radius", "must be >= 1 and exceed K");
  }
  if (has("offsets")) {
    c.offsets = parse_int_list("offsets", raw("offsets"));
    if (c.offsets.empty()) throw ConfigError("offsets", "must not be empty when given");
  }
  if (has("shift")) c.shift = parse_int("shift", raw("shift"));
  if (has("flag_tol")) c.flag_tol = parse_real("flag_tol", raw("flag_tol"));
  if (!(c.flag_tol > 0.0)) throw ConfigError("flag_tol", "must be positive");
  if (has("theta_grid")) c.theta_grid = parse_grid("theta_grid", raw("theta_grid"));
  if (has("output")) c.output_path = raw("output");

  if (has("threads")) {
    const Index t = parse_int("threads", raw("threads"));
    if (t < 0 || t > 4096) throw ConfigError("threads", "must be in [0, 4096]");
    c.threads = static_cast<unsigned>(t);
  }

  const double reach = c.potential.bound() + 2.0;
  if (has("grid")) {
    c.grid = parse_grid("grid", raw("grid"));
    if (c.grid.points < 2) throw ConfigError("grid", "needs at least 2 points");
  } else {
    c.grid = {-(reach + 0.2), reach + 0.2, 2001};
  }

  if (c.command == Command::Butterfly) {
    if (c.potential.kind != PotentialKind::CosineComposed) {
      throw ConfigError("potential.kind", "butterfly sweeps theta and needs CosineComposed");
    }
    if (c.output_path.empty()) throw ConfigError("output", "butterfly needs an output directory");
  }

  const auto [lo, hi] = required_range(c);
  if (c.potential.kind == PotentialKind::Explicit) {
    const Index last = c.potential.origin + static_cast<Index>(c.potential.samples.size()) - 1;
    if (lo < c.potential.origin || hi > last) {
      throw ConfigError("potential.samples",
                        "covers [" + std::to_string(c.potential.origin) + ", " + std::to_string(last) +
                            "] but the command needs [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
  }

  if (c.command == Command::Cdf) {
    // Every schedule entry is a prefix of the largest window.
    const auto d = sample_sequence(c.potential, 1 + c.shift, c.schedule.back() + c.shift);
    const auto [dmin, dmax] = std::minmax_element(d.begin(), d.end());
    if (c.grid.min > *dmin - 2.0 || c.grid.max < *dmax + 2.0) {
      throw ConfigError("grid", "must cover the Gershgorin interval [" + format_short(*dmin - 2.0) +
                                    ", " + format_short(*dmax + 2.0) + "]");
    }
  }
  return c;
}

std::vector<std::pair<std::string, std::string>> describe(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> out;
  auto ints = [](const std::vector<Index>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s;
  };
  auto reals = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_short(v[i]);
    return s;
  };
  auto grid = [](const GridSpec& g) {
    return format_short(g.min) + ", " + format_short(g.max) + ", " + std::to_string(g.points);
  };

  out.emplace_back("command", to_string(c.command));
  const auto& p = c.potential;
  out.emplace_back("potential.kind", to_string(p.kind));
  switch (p.kind) {
    case PotentialKind::CosineComposed:
      out.emplace_back("potential.coeffs", reals(p.coeffs));
      out.emplace_back("potential.theta", format_angle(p.theta));
      break;
    case PotentialKind::TrigPolynomial: {
      std::string s;
      for (std::size_t i = 0; i < p.terms.size(); ++i) {
        s += (i ? "; " : "") + format_short(p.terms[i].amplitude) + " " +
             format_angle(p.terms[i].frequency) + " " + format_short(p.terms[i].phase);
      }
      out.emplace_back("potential.terms", s);
      break;
    }
    case PotentialKind::Constant:
      out.emplace_back("potential.value", format_short(p.value));
      break;
    case PotentialKind::Explicit:
      out.emplace_back("potential.samples", reals(p.samples));
      out.emplace_back("potential.origin", std::to_string(p.origin));
      break;
  }
  out.emplace_back("n", std::to_string(c.n));
  out.emplace_back("schedule", ints(c.schedule));
  out.emplace_back("m_schedule", ints(c.m_schedule));
  out.emplace_back("grid", grid(c.grid));
  out.emplace_back("tol", format_short(c.tol));
  out.emplace_back("h", format_short(c.h));
  out.emplace_back("density_floor", format_short(c.density_floor));
  out.emplace_back("gap_cap", std::to_string(c.gap_cap));
  out.emplace_back("K", std::to_string(c.K));
  out.emplace_back("window_radius", std::to_string(c.window_radius));
  out.emplace_back("offsets", c.offsets.empty() ? std::string("default") : ints(c.offsets));
  out.emplace_back("shift", std::to_string(c.shift));
  out.emplace_back("flag_tol", format_short(c.flag_tol));
  out.emplace_back("theta_grid", grid(c.theta_grid));
  return out;
}

}  // namespace jacobi_spectra
