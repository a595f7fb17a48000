#include "jacobi_spectra/specmeasure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jacobi_spectra/parallel.hpp"

namespace jacobi_spectra {

namespace {

void require_schedule(const std::vector<Index>& schedule, const char* what) {
  if (schedule.empty()) throw std::invalid_argument(std::string(what) + ": schedule is empty");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] < 1) throw std::invalid_argument(std::string(what) + ": dimensions must be >= 1");
    if (i > 0 && schedule[i] <= schedule[i - 1]) {
      throw std::invalid_argument(std::string(what) + ": schedule must be strictly increasing");
    }
  }
}

void require_grid(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) throw std::invalid_argument(std::string(what) + ": grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw std::invalid_argument(std::string(what) + ": non-finite grid point");
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw std::invalid_argument(std::string(what) + ": grid must be strictly increasing");
    }
  }
}

// counts[j][g] = sturm_count(matrices[j], grid[g] + offset)
std::vector<std::vector<Index>> sturm_table(const std::vector<TridiagonalMatrix>& matrices,
                                            const std::vector<double>& grid, double offset,
                                            unsigned threads) {
  std::vector<std::vector<Index>> counts(matrices.size(), std::vector<Index>(grid.size()));
  const std::size_t g_count = grid.size();
  parallel_for(matrices.size() * g_count, threads, [&](std::size_t item) {
    const std::size_t j = item / g_count;
    const std::size_t g = item % g_count;
    counts[j][g] = sturm_count(matrices[j], grid[g] + offset);
  });
  return counts;
}

}  // namespace

UnresolvedEndpoint::UnresolvedEndpoint(double endpoint, double eigenvalue, double radius)
    : std::domain_error("endpoint " + std::to_string(endpoint) + " lies within " +
                        std::to_string(radius) + " of eigenvalue " + std::to_string(eigenvalue)),
      endpoint_(endpoint) {}

PiecewisePolynomial PiecewisePolynomial::polynomial(std::vector<double> coeffs) {
  PiecewisePolynomial p;
  p.pieces.push_back(std::move(coeffs));
  return p;
}

PiecewisePolynomial PiecewisePolynomial::monomial(unsigned k) {
  std::vector<double> c(k + 1, 0.0);
  c[k] = 1.0;
  return polynomial(std::move(c));
}

PiecewisePolynomial PiecewisePolynomial::indicator(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("indicator: need a < b");
  return {{a, b}, {{0.0}, {1.0}, {0.0}}};
}

double PiecewisePolynomial::operator()(double x) const {
  if (pieces.size() != breakpoints.size() + 1) {
    throw std::invalid_argument("PiecewisePolynomial: need one more piece than breakpoints");
  }
  // Piece i covers (b_{i-1}, b_i]: the first breakpoint >= x selects it.
  const auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), x);
  return evaluate_polynomial(pieces[static_cast<std::size_t>(it - breakpoints.begin())], x);
}

EmpiricalMeasure::EmpiricalMeasure(EigenvalueList eigenvalues) : list_(std::move(eigenvalues)) {
  if (list_.n < 1 || static_cast<Index>(list_.values.size()) != list_.n) {
    throw std::invalid_argument("EmpiricalMeasure: eigenvalue list does not match its dimension");
  }
}

double EmpiricalMeasure::cdf(double x) const {
  const auto below = std::upper_bound(list_.values.begin(), list_.values.end(), x) -
                     list_.values.begin();
  return static_cast<double>(below) / static_cast<double>(list_.n);
}

double cesaro_functional(const EmpiricalMeasure& measure, const PiecewisePolynomial& f) {
  return measure.integrate(f);
}

Index counting(const EmpiricalMeasure& measure, double a, double b) {
  if (!(a < b)) throw std::invalid_argument("counting: need a < b");
  const auto& values = measure.eigenvalues().values;
  const double radius = measure.eigenvalues().certified_radius;
  for (double endpoint : {a, b}) {
    const auto it = std::lower_bound(values.begin(), values.end(), endpoint);
    if (it != values.end() && std::abs(*it - endpoint) <= radius) {
      throw UnresolvedEndpoint(endpoint, *it, radius);
    }
    if (it != values.begin() && std::abs(*std::prev(it) - endpoint) <= radius) {
      throw UnresolvedEndpoint(endpoint, *std::prev(it), radius);
    }
  }
  return (std::upper_bound(values.begin(), values.end(), b) -
          std::upper_bound(values.begin(), values.end(), a));
}

std::vector<double> uniform_grid(double lo, double hi, Index points) {
  if (points < 1) throw std::invalid_argument("uniform_grid: need at least one point");
  if (points == 1) return {lo};
  if (!(lo < hi)) throw std::invalid_argument("uniform_grid: need lo < hi");
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (Index i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = lo + step * static_cast<double>(i);
  grid.back() = hi;
  return grid;
}

std::vector<double> cdf_on_grid(const TridiagonalMatrix& a, const std::vector<double>& grid,
                                unsigned threads) {
  std::vector<double> out(grid.size());
  const double n = static_cast<double>(a.size());
  parallel_for(grid.size(), threads, [&](std::size_t g) {
    out[g] = static_cast<double>(sturm_count(a, grid[g])) / n;
  });
  return out;
}

double sup_distance(const std::vector<double>& f, const std::vector<double>& g) {
  if (f.size() != g.size()) throw std::invalid_argument("sup_distance: size mismatch");
  double best = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) best = std::max(best, std::abs(f[i] - g[i]));
  return best;
}

SpectralDistributionEstimate estimate_distribution(const PotentialSpec& spec,
                                                   const std::vector<Index>& schedule,
                                                   const std::vector<double>& grid,
                                                   const DistributionOptions& options) {
  require_schedule(schedule, "estimate_distribution");
  require_grid(grid, "estimate_distribution");

  std::vector<TridiagonalMatrix> matrices;
  matrices.reserve(schedule.size());
  for (Index n : schedule) {
    matrices.push_back(build_unilateral(spec, n, options.shift));
    const auto& m = matrices.back();
    if (grid.front() > m.gershgorin_lower() || grid.back() < m.gershgorin_upper()) {
      throw std::invalid_argument("estimate_distribution: grid does not cover the Gershgorin interval [" +
                                  std::to_string(m.gershgorin_lower()) + ", " +
                                  std::to_string(m.gershgorin_upper()) + "]");
    }
  }

  SpectralDistributionEstimate est;
  est.schedule = schedule;
  est.grid = grid;
  est.tol = options.tol;
  est.shift = options.shift;

  const auto counts = sturm_table(matrices, grid, 0.0, options.threads);
  for (std::size_t j = 0; j < schedule.size(); ++j) {
    std::vector<double> row(grid.size());
    const double n = static_cast<double>(schedule[j]);
    for (std::size_t g = 0; g < grid.size(); ++g) row[g] = static_cast<double>(counts[j][g]) / n;
    est.cdfs.push_back(std::move(row));
  }
  for (std::size_t j = 0; j + 1 < est.cdfs.size(); ++j) {
    est.cauchy_sup.push_back(sup_distance(est.cdfs[j + 1], est.cdfs[j]));
  }
  for (std::size_t j = 0; j + 1 < est.cauchy_sup.size(); ++j) {
    est.cauchy_ratio.push_back(est.cauchy_sup[j] > 0.0 ? est.cauchy_sup[j + 1] / est.cauchy_sup[j] : 0.0);
  }

  est.limit_cdf = est.cdfs.back();
  est.convergence_profile.assign(grid.size(), 0.0);
  if (est.cdfs.size() >= 2) {
    const auto& prev = est.cdfs[est.cdfs.size() - 2];
    for (std::size_t g = 0; g < grid.size(); ++g) {
      est.convergence_profile[g] = std::abs(est.limit_cdf[g] - prev[g]);
    }
  }

  if (options.keep_eigenvalues) {
    for (const auto& m : matrices) {
      est.eigenvalue_lists.push_back(eigenvalues(m, options.tol, {options.threads}));
    }
  }
  return est;
}

TraceMoments trace_moments(const PotentialSpec& spec, Index max_k, Index window_radius,
                           unsigned threads) {
  if (max_k < 0) throw std::invalid_argument("trace_moments: K must be >= 0");
  if (window_radius <= max_k) throw std::invalid_argument("trace_moments: window_radius must exceed K");

  const Index margin = max_k;
  const Index lo = -window_radius - margin;
  const std::vector<double> d = sample_sequence(spec, lo, window_radius + margin);
  const auto sites = static_cast<std::size_t>(2 * window_radius + 1);
  const auto width = static_cast<std::size_t>(2 * margin + 1);
  const auto kk = static_cast<std::size_t>(max_k);

  // diagonal[k-1][s] = (T^k)_{jj} for site j = s - window_radius
  std::vector<std::vector<double>> diagonal(kk, std::vector<double>(sites));
  constexpr std::size_t chunk = 4096;
  const std::size_t chunks = (sites + chunk - 1) / chunk;
  parallel_for(chunks, threads, [&](std::size_t c) {
    std::vector<double> v(width), w(width);
    for (std::size_t s = c * chunk; s < std::min(sites, (c + 1) * chunk); ++s) {
      // Local coordinates: position p <-> bilateral index j - margin + p.
      const std::size_t base = s;  // index into d of position 0
      std::fill(v.begin(), v.end(), 0.0);
      v[static_cast<std::size_t>(margin)] = 1.0;
      for (std::size_t k = 0; k < kk; ++k) {
        for (std::size_t p = 0; p < width; ++p) {
          double acc = d[base + p] * v[p];
          if (p > 0) acc += v[p - 1];
          if (p + 1 < width) acc += v[p + 1];
          w[p] = acc;
        }
        std::swap(v, w);
        diagonal[k][s] = v[static_cast<std::size_t>(margin)];
      }
    }
  });

  TraceMoments out;
  out.window_radius = window_radius;
  out.margin = margin;
  out.moments.push_back(1.0);
  const double scale = 1.0 / static_cast<double>(sites);
  for (std::size_t k = 0; k < kk; ++k) out.moments.push_back(compensated_sum(diagonal[k]) * scale);
  return out;
}

MomentMatchReport moment_match(const PotentialSpec& spec, const std::vector<Index>& schedule,
                               Index max_k, Index window_radius, double flag_tol,
                               const MomentMatchOptions& options) {
  require_schedule(schedule, "moment_match");
  MomentMatchReport report;
  report.n = schedule.back();
  report.flag_tol = flag_tol;
  report.trace = trace_moments(spec, max_k, window_radius, options.threads);

  const EmpiricalMeasure measure(eigenvalues(build_unilateral(spec, report.n, options.shift),
                                             options.eigen_tol, {options.threads}));
  for (Index k = 0; k <= max_k; ++k) {
    MomentRow row;
    row.k = k;
    row.cesaro = k == 0 ? 1.0 : measure.integrate([k](double x) {
      double p = 1.0;
      for (Index i = 0; i < k; ++i) p *= x;
      return p;
    });
    row.trace = report.trace.moments[static_cast<std::size_t>(k)];
    row.abs_diff = std::abs(row.cesaro - row.trace);
    row.flagged = row.abs_diff > flag_tol;
    report.rows.push_back(row);
  }
  return report;
}

const char* to_string(SpectralClass c) {
  switch (c) {
    case SpectralClass::InSpectrum: return "IN";
    case SpectralClass::Gap: return "GAP";
    case SpectralClass::Undecided: return "UND";
  }
  return "?";
}

SpectrumReport classify_spectrum(const PotentialSpec& spec, const std::vector<double>& grid,
                                 double half_width, const std::vector<Index>& schedule,
                                 double density_floor, Index gap_cap,
                                 const ClassifyOptions& options) {
  if (!(half_width > 0.0)) throw std::invalid_argument("classify_spectrum: h must be positive");
  if (!(density_floor > 0.0)) throw std::invalid_argument("classify_spectrum: density_floor must be positive");
  if (gap_cap < 0) throw std::invalid_argument("classify_spectrum: gap_cap must be >= 0");
  require_schedule(schedule, "classify_spectrum");
  require_grid(grid, "classify_spectrum");

  std::vector<TridiagonalMatrix> matrices;
  for (Index n : schedule) matrices.push_back(build_unilateral(spec, n, options.shift));
  const auto upper = sturm_table(matrices, grid, half_width, options.threads);
  const auto lower = sturm_table(matrices, grid, -half_width, options.threads);

  SpectrumReport report;
  report.half_width = half_width;
  report.schedule = schedule;
  report.density_floor = density_floor;
  report.gap_cap = gap_cap;

  const std::size_t tail = schedule.size() / 2;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    PointClassification p;
    p.x = grid[g];
    bool dense = true;
    for (std::size_t j = 0; j < schedule.size(); ++j) {
      const Index c = upper[j][g] - lower[j][g];
      p.counts.push_back(c);
      p.max_count = std::max(p.max_count, c);
      if (j >= tail && static_cast<double>(c) / static_cast<double>(schedule[j]) < density_floor) {
        dense = false;
      }
    }
    p.density = static_cast<double>(p.counts.back()) / static_cast<double>(schedule.back());
    const bool bounded = p.max_count <= gap_cap;
    if (dense && !bounded) {
      p.label = SpectralClass::InSpectrum;
    } else if (bounded && !dense) {
      p.label = SpectralClass::Gap;
    }
    report.points.push_back(std::move(p));
  }
  return report;
}

std::vector<GapInterval> gap_intervals(const SpectrumReport& report) {
  std::vector<GapInterval> out;
  const auto& pts = report.points;
  bool seen_spectrum = false;
  for (std::size_t i = 0; i < pts.size();) {
    if (pts[i].label != SpectralClass::Gap) {
      seen_spectrum = seen_spectrum || pts[i].label == SpectralClass::InSpectrum;
      ++i;
      continue;
    }
    GapInterval gap;
    gap.lo = pts[i].x - report.half_width;
    std::size_t j = i;
    for (; j < pts.size() && pts[j].label == SpectralClass::Gap; ++j) {
      gap.max_count = std::max(gap.max_count, pts[j].max_count);
    }
    gap.hi = pts[j - 1].x + report.half_width;
    const bool spectrum_after = std::any_of(pts.begin() + static_cast<std::ptrdiff_t>(j), pts.end(),
                                            [](const auto& p) { return p.label == SpectralClass::InSpectrum; });
    gap.interior = seen_spectrum && spectrum_after;
    out.push_back(gap);
    i = j;
  }
  return out;
}

bool CrosscheckReport::decreasing() const {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].sup_distance < rows[i - 1].sup_distance)) return false;
  }
  return true;
}

CrosscheckReport bilateral_crosscheck(const PotentialSpec& spec,
                                      const std::vector<Index>& m_schedule,
                                      const std::vector<double>& grid, unsigned threads) {
  if (m_schedule.empty()) throw std::invalid_argument("bilateral_crosscheck: m schedule is empty");
  require_grid(grid, "bilateral_crosscheck");
  CrosscheckReport report;
  for (Index m : m_schedule) {
    const auto bilateral = build_bilateral(spec, m);
    const auto unilateral = build_unilateral(spec, 2 * m + 1);
    report.rows.push_back({m, 2 * m + 1,
                           sup_distance(cdf_on_grid(bilateral, grid, threads),
                                        cdf_on_grid(unilateral, grid, threads))});
  }
  return report;
}

}  // namespace jacobi_spectra
