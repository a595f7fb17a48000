#pragma once

#include <stdexcept>
#include <vector>

#include "jacobi_spectra/potentials.hpp"
#include "jacobi_spectra/summation.hpp"
#include "jacobi_spectra/tridiag.hpp"

namespace jacobi_spectra {

/// Raised when an interval endpoint cannot be placed on one side of a
/// reported eigenvalue; the caller should perturb it.
class UnresolvedEndpoint : public std::domain_error {
 public:
  UnresolvedEndpoint(double endpoint, double eigenvalue, double radius);
  double endpoint() const { return endpoint_; }

 private:
  double endpoint_;
};

/// Piecewise polynomial: pieces[i] (ascending coefficients) applies on
/// (breakpoints[i-1], breakpoints[i]], with open ends at -inf and +inf.
struct PiecewisePolynomial {
  std::vector<double> breakpoints;
  std::vector<std::vector<double>> pieces;

  static PiecewisePolynomial polynomial(std::vector<double> coeffs);
  static PiecewisePolynomial monomial(unsigned k);
  /// 1 on (a, b], 0 elsewhere.
  static PiecewisePolynomial indicator(double a, double b);

  double operator()(double x) const;
};

/// The probability measure n^{-1} sum_i delta_{lambda_i}.
class EmpiricalMeasure {
 public:
  explicit EmpiricalMeasure(EigenvalueList eigenvalues);

  Index n() const { return list_.n; }
  const EigenvalueList& eigenvalues() const { return list_; }

  /// n^{-1} #{lambda_i <= x}
  double cdf(double x) const;

  /// (1/n) sum_i f(lambda_i), compensated and summed in ascending order.
  template <class F>
  double integrate(F&& f) const {
    CompensatedSum acc;
    for (double v : list_.values) acc.add(f(v));
    return acc.value() / static_cast<double>(list_.n);
  }

 private:
  EigenvalueList list_;
};

double cesaro_functional(const EmpiricalMeasure& measure, const PiecewisePolynomial& f);

/// N_n((a, b]). Throws UnresolvedEndpoint if a or b lies within the
/// certified radius of a reported eigenvalue.
Index counting(const EmpiricalMeasure& measure, double a, double b);

/// `points` equally spaced values from lo to hi inclusive.
std::vector<double> uniform_grid(double lo, double hi, Index points);

/// sturm_count(a, x) / n at every grid point.
std::vector<double> cdf_on_grid(const TridiagonalMatrix& a, const std::vector<double>& grid,
                                unsigned threads = 1);

double sup_distance(const std::vector<double>& f, const std::vector<double>& g);

struct DistributionOptions {
  double tol = 1e-10;
  Index shift = 0;               // unilateral window d_{1+shift}..d_{n+shift}
  bool keep_eigenvalues = false;
  unsigned threads = 1;
};

struct SpectralDistributionEstimate {
  std::vector<Index> schedule;
  std::vector<double> grid;
  std::vector<std::vector<double>> cdfs;    // cdfs[j][g] for schedule[j], grid[g]
  std::vector<double> limit_cdf;            // the largest n
  std::vector<double> convergence_profile;  // |cdf_J - cdf_{J-1}| per grid point
  std::vector<double> cauchy_sup;           // sup |cdf_{j+1} - cdf_j|, j = 0..J-2
  std::vector<double> cauchy_ratio;         // cauchy_sup[j+1] / cauchy_sup[j]
  std::vector<EigenvalueList> eigenvalue_lists;  // only with keep_eigenvalues
  double tol = 0.0;
  Index shift = 0;
};

/// Per-n empirical CDFs of the unilateral compressions on a shared grid,
/// read off Sturm counts. The grid must cover every Gershgorin interval.
SpectralDistributionEstimate estimate_distribution(const PotentialSpec& spec,
                                                   const std::vector<Index>& schedule,
                                                   const std::vector<double>& grid,
                                                   const DistributionOptions& options = {});

struct TraceMoments {
  std::vector<double> moments;  // m_0 .. m_K
  Index window_radius = 0;
  Index margin = 0;
};

/// m_k = (2R+1)^{-1} sum_{|j| <= R} <T^k e_j, e_j> with T the bilateral
/// operator. Diagonal entries of T^k are exact path sums over [-R-K, R+K].
TraceMoments trace_moments(const PotentialSpec& spec, Index max_k, Index window_radius,
                           unsigned threads = 1);

struct MomentRow {
  Index k = 0;
  double cesaro = 0.0;
  double trace = 0.0;
  double abs_diff = 0.0;
  bool flagged = false;
};

struct MomentMatchReport {
  Index n = 0;  // dimension used for the Cesaro side
  double flag_tol = 0.0;
  std::vector<MomentRow> rows;
  TraceMoments trace;
};

struct MomentMatchOptions {
  double eigen_tol = 1e-10;
  Index shift = 0;
  unsigned threads = 1;
};

/// Compares (1/n) sum lambda_i^k at the largest n in `schedule` with the
/// trace moments; rows with abs_diff > flag_tol are flagged.
MomentMatchReport moment_match(const PotentialSpec& spec, const std::vector<Index>& schedule,
                               Index max_k, Index window_radius, double flag_tol,
                               const MomentMatchOptions& options = {});

enum class SpectralClass { InSpectrum, Gap, Undecided };

const char* to_string(SpectralClass c);

struct PointClassification {
  double x = 0.0;
  SpectralClass label = SpectralClass::Undecided;
  double density = 0.0;     // N_n(I)/n at the largest n
  Index max_count = 0;      // max_n N_n(I) over the schedule
  std::vector<Index> counts;  // N_n(I) per schedule entry
};

struct ClassifyOptions {
  Index shift = 0;
  unsigned threads = 1;
};

struct SpectrumReport {
  std::vector<PointClassification> points;
  double half_width = 0.0;
  std::vector<Index> schedule;
  double density_floor = 0.0;
  Index gap_cap = 0;
};

inline constexpr double default_density_floor = 1e-3;
inline constexpr Index default_gap_cap = 8;

/// Labels each grid point x from the counts N_n((x-h, x+h]):
///   InSpectrum  N_n/n >= density_floor for every n in the tail half of the schedule,
///   Gap         N_n <= gap_cap for every n in the schedule,
///   Undecided   neither, or both.
SpectrumReport classify_spectrum(const PotentialSpec& spec, const std::vector<double>& grid,
                                 double half_width, const std::vector<Index>& schedule,
                                 double density_floor = default_density_floor,
                                 Index gap_cap = default_gap_cap,
                                 const ClassifyOptions& options = {});

struct GapInterval {
  double lo = 0.0;
  double hi = 0.0;
  Index max_count = 0;
  bool interior = false;  // InSpectrum points on both sides
};

/// Maximal runs of consecutive Gap points, widened by the half width.
std::vector<GapInterval> gap_intervals(const SpectrumReport& report);

struct CrosscheckRow {
  Index m = 0;
  Index dimension = 0;  // 2m + 1
  double sup_distance = 0.0;
};

struct CrosscheckReport {
  std::vector<CrosscheckRow> rows;
  /// sup distances strictly decrease along the m schedule.
  bool decreasing() const;
};

/// sup_x |CDF(bilateral m) - CDF(unilateral 2m+1)| on the grid, per m.
CrosscheckReport bilateral_crosscheck(const PotentialSpec& spec,
                                      const std::vector<Index>& m_schedule,
                                      const std::vector<double>& grid, unsigned threads = 1);

}  // namespace jacobi_spectra
