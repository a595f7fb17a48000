#include "jacobi_spectra/run.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "jacobi_spectra/csv.hpp"
#include "jacobi_spectra/specmeasure.hpp"
#include "jacobi_spectra/tridiag.hpp"

namespace jacobi_spectra {

namespace {

std::string config_header(const RunConfig& config) {
  std::ostringstream os;
  os << "# " << version_string << "\n";
  for (const auto& [key, value] : describe(config)) os << "# " << key << " = " << value << "\n";
  return os.str();
}

std::vector<double> grid_points(const GridSpec& g) { return uniform_grid(g.min, g.max, g.points); }

void periodicity_note(const PotentialSpec& p, std::ostream& summary) {
  if (p.kind != PotentialKind::CosineComposed && p.kind != PotentialKind::TrigPolynomial) return;
  const auto check = periodicity_check(p, default_nonperiodic_search, default_nonperiodic_tol);
  if (check.periodic()) {
    summary << "warning: potential is periodic with period " << *check.period
            << "; the operator is outside the almost-periodic, non-periodic class\n";
  } else {
    summary << "note: no period <= " << default_nonperiodic_search << " found (tol "
            << format_short(default_nonperiodic_tol)
            << "); non-periodicity is claimed from this finite scan, not proven\n";
  }
}

std::string render_spectrum(const RunConfig& c, const SpectrumReport& report, const std::string& extra) {
  std::ostringstream os;
  os << config_header(c) << extra;
  if (c.command == Command::Gaps) {
    write_gap_intervals(os, gap_intervals(report));
  } else {
    write_spectrum_report(os, report);
  }
  return os.str();
}

void summarize_spectrum(const SpectrumReport& report, std::ostream& summary) {
  std::size_t in = 0, gap = 0, und = 0;
  for (const auto& p : report.points) {
    in += p.label == SpectralClass::InSpectrum;
    gap += p.label == SpectralClass::Gap;
    und += p.label == SpectralClass::Undecided;
  }
  summary << "grid points: " << report.points.size() << "  IN " << in << "  GAP " << gap
          << "  UND " << und << "  (h " << format_short(report.half_width) << ", floor "
          << format_short(report.density_floor) << ", cap " << report.gap_cap << ")\n";
  for (const auto& g : gap_intervals(report)) {
    if (g.interior) {
      summary << "  interior gap (" << format_short(g.lo) << ", " << format_short(g.hi)
              << "] max count " << g.max_count << "\n";
    }
  }
}

}  // namespace

RunOutput execute(const RunConfig& c) {
  RunOutput result;
  std::ostringstream summary;
  std::ostringstream body;
  body << config_header(c);
  summary << version_string << " " << to_string(c.command) << "\n";
  periodicity_note(c.potential, summary);

  switch (c.command) {
    case Command::Eigs: {
      const auto matrix = build_unilateral(c.potential, c.n, c.shift);
      const auto list = eigenvalues(matrix, c.tol, {c.threads});
      write_eigenvalues_csv(body, list);
      summary << "n " << list.n << "  range [" << format_short(list.values.front()) << ", "
              << format_short(list.values.back()) << "]  certified radius "
              << format_short(list.certified_radius) << (list.resolved ? "" : "  (UNRESOLVED clusters)")
              << "\n";
      break;
    }
    case Command::Cdf: {
      const auto est = estimate_distribution(c.potential, c.schedule, grid_points(c.grid),
                                             {c.tol, c.shift, false, c.threads});
      write_cdf_table(body, est);
      for (std::size_t j = 0; j < est.cauchy_sup.size(); ++j) {
        summary << "sup |F_" << est.schedule[j + 1] << " - F_" << est.schedule[j]
                << "| = " << format_short(est.cauchy_sup[j]) << "\n";
      }
      if (est.cauchy_sup.empty()) summary << "single dimension: no Cauchy differences\n";
      break;
    }
    case Command::Spectrum:
    case Command::Gaps: {
      const auto report = classify_spectrum(c.potential, grid_points(c.grid), c.h, c.schedule,
                                            c.density_floor, c.gap_cap, {c.shift, c.threads});
      body.str("");
      body << render_spectrum(c, report, "");
      summarize_spectrum(report, summary);
      break;
    }
    case Command::Moments: {
      const auto report = moment_match(c.potential, c.schedule, c.K, c.window_radius, c.flag_tol,
                                       {c.tol, c.shift, c.threads});
      const auto offsets = c.offsets.empty() ? default_mean_offsets(c.window_radius) : c.offsets;
      const auto mean = von_neumann_mean(c.potential, c.window_radius, offsets);
      body << "# potential_mean=" << format_double(mean.value)
           << ", uniformity_defect=" << format_double(mean.uniformity_defect) << "\n";
      write_moment_report(body, report);
      summary << "potential mean " << format_short(mean.value) << " (uniformity defect "
              << format_short(mean.uniformity_defect) << ")\n";
      summary << "k  cesaro(n=" << report.n << ")  trace(R=" << c.window_radius << ")  |diff|\n";
      for (const auto& r : report.rows) {
        summary << r.k << "  " << format_short(r.cesaro) << "  " << format_short(r.trace) << "  "
                << format_short(r.abs_diff) << (r.flagged ? "  FLAGGED" : "") << "\n";
      }
      break;
    }
    case Command::Crosscheck: {
      const auto report = bilateral_crosscheck(c.potential, c.m_schedule, grid_points(c.grid), c.threads);
      write_crosscheck(body, report);
      for (const auto& r : report.rows) {
        summary << "m " << r.m << " (dim " << r.dimension << ")  sup distance "
                << format_short(r.sup_distance) << "\n";
      }
      summary << (report.decreasing() ? "distances decrease along the schedule\n"
                                      : "distances do NOT decrease along the schedule\n");
      break;
    }
    case Command::Butterfly: {
      const auto thetas = grid_points(c.theta_grid);
      const auto grid = grid_points(c.grid);
      std::ostringstream index;
      index << config_header(c) << "index,theta,file,in_fraction,interior_gaps\n";
      for (std::size_t i = 0; i < thetas.size(); ++i) {
        RunConfig local = c;
        local.potential.theta = Angle::radians(thetas[i]);
        const auto report = classify_spectrum(local.potential, grid, c.h, c.schedule,
                                              c.density_floor, c.gap_cap, {c.shift, c.threads});
        char name[32];
        std::snprintf(name, sizeof name, "theta_%04zu.csv", i);
        const std::string extra = "# theta = " + format_double(thetas[i]) + "\n";
        result.files.push_back({(std::filesystem::path(c.output_path) / name).string(),
                                render_spectrum(c, report, extra)});
        std::size_t in = 0;
        for (const auto& p : report.points) in += p.label == SpectralClass::InSpectrum;
        std::size_t interior = 0;
        for (const auto& g : gap_intervals(report)) interior += g.interior;
        index << i << "," << format_double(thetas[i]) << "," << name << ","
              << format_double(static_cast<double>(in) / static_cast<double>(report.points.size()))
              << "," << interior << "\n";
      }
      result.files.push_back({(std::filesystem::path(c.output_path) / "index.csv").string(), index.str()});
      summary << "wrote " << thetas.size() << " theta slices to " << c.output_path << "\n";
      result.summary = summary.str();
      return result;
    }
  }

  result.files.push_back({c.output_path, body.str()});
  result.summary = summary.str();
  return result;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  RunOutput output;
  try {
    output = execute(config);
  } catch (const TolTooSmall& e) {
    err << "numerical certification failure: " << e.what() << "\n";
    return exit_numerical_error;
  } catch (const UnresolvedEndpoint& e) {
    err << "numerical certification failure: " << e.what() << "\n";
    return exit_numerical_error;
  }

  bool to_stdout = false;
  for (const auto& file : output.files) {
    if (file.path.empty()) {
      out << file.content;
      to_stdout = true;
      continue;
    }
    const std::filesystem::path path(file.path);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    f << file.content;
    if (!f) {
      err << "cannot write " << file.path << "\n";
      return exit_config_error;
    }
  }
  (to_stdout ? err : out) << output.summary;
  return exit_ok;
}

}  // namespace jacobi_spectra
