#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jacobi_spectra {

using Index = std::int64_t;

/// An angle held as an unevaluated sum hi + lo of two doubles, so that
/// multiples n*angle can be reduced modulo 2*pi without losing the low bits.
struct Angle {
  double hi = 0.0;
  double lo = 0.0;

  static Angle radians(double value) { return {value, 0.0}; }
  /// (numerator / denominator) * pi, carried to roughly 106 bits.
  static Angle pi_fraction(double numerator, double denominator = 1.0);

  double value() const { return hi + lo; }
  bool operator==(const Angle&) const = default;
};

/// cos(n * angle + phase), with n*angle reduced in double-double arithmetic.
double cos_multiple(Index n, const Angle& angle, double phase = 0.0);

enum class PotentialKind { CosineComposed, TrigPolynomial, Constant, Explicit };

const char* to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(const std::string& name);

/// One real character term: amplitude * cos(frequency * n + phase).
struct TrigTerm {
  double amplitude = 0.0;
  Angle frequency;
  double phase = 0.0;
};

inline constexpr std::size_t max_polynomial_degree = 64;

class InvalidPotential : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ExplicitOutOfRange : public std::out_of_range {
 public:
  ExplicitOutOfRange(Index lo, Index hi, Index stored_lo, Index stored_hi);
};

/// Symbolic description of a bounded bilateral diagonal sequence d_n.
///
/// Only the fields relevant to `kind` are read. Build instances through the
/// named constructors, which validate their arguments.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::Constant;
  std::vector<double> coeffs;   // CosineComposed: v(x) = sum coeffs[i] x^i
  Angle theta;                  // CosineComposed
  std::vector<TrigTerm> terms;  // TrigPolynomial
  double value = 0.0;           // Constant
  std::vector<double> samples;  // Explicit
  Index origin = 0;             // Explicit: index of samples[0]

  static PotentialSpec constant(double c);
  static PotentialSpec cosine_composed(std::vector<double> coeffs, Angle theta);
  static PotentialSpec trig_polynomial(std::vector<TrigTerm> terms);
  static PotentialSpec explicit_samples(std::vector<double> samples, Index origin);

  /// Throws InvalidPotential if the fields are inconsistent with `kind`.
  void validate() const;

  /// d_n. Throws ExplicitOutOfRange for Explicit specs outside the stored window.
  double at(Index n) const;

  /// A computable B with sup_n |d_n| <= B.
  double bound() const;
};

/// Horner evaluation of an ascending-degree coefficient list.
double evaluate_polynomial(const std::vector<double>& coeffs, double x);

/// d_lo .. d_hi inclusive.
std::vector<double> sample_sequence(const PotentialSpec& spec, Index lo, Index hi);

struct MeanEstimate {
  double value = 0.0;
  Index window_radius = 0;
  double uniformity_defect = 0.0;
};

/// {0, +-n, +-2n, +-5n, +-10n}
std::vector<Index> default_mean_offsets(Index window_radius);

/// Symmetric Cesaro average (2n+1)^{-1} sum_{j=-n}^{n} d_j, together with the
/// largest deviation of the translated windows centred at each offset.
MeanEstimate von_neumann_mean(const PotentialSpec& spec, Index window_radius,
                              const std::vector<Index>& offsets);

struct PeriodicityResult {
  std::optional<Index> period;  // least period found, if any
  Index max_period = 0;

  bool periodic() const { return period.has_value(); }
};

/// Least p <= max_period with |d_{n+p} - d_n| <= tol on the test window
/// n in [-max_period, max_period]. Explicit specs are tested on their stored
/// window only.
PeriodicityResult periodicity_check(const PotentialSpec& spec, Index max_period,
                                    double tol);

inline constexpr Index default_nonperiodic_search = 10000;
inline constexpr double default_nonperiodic_tol = 1e-9;

/// True when no period up to the configured bound was found. This is a finite
/// test, not a proof that theta/pi is irrational.
bool claimed_nonperiodic(const PotentialSpec& spec,
                         Index max_period = default_nonperiodic_search,
                         double tol = default_nonperiodic_tol);

}  // namespace jacobi_spectra
