#include "jacobi_spectra/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jacobi_spectra/summation.hpp"

namespace jacobi_spectra {

namespace {

// Unevaluated sum of two doubles. Only the handful of operations needed for
// argument reduction are provided.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;
};

DoubleDouble two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

DoubleDouble fast_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

DoubleDouble two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

DoubleDouble add(DoubleDouble a, DoubleDouble b) {
  DoubleDouble s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return fast_two_sum(s.hi, s.lo);
}

DoubleDouble negate(DoubleDouble a) { return {-a.hi, -a.lo}; }

DoubleDouble mul(DoubleDouble a, double b) {
  DoubleDouble p = two_prod(a.hi, b);
  p.lo += a.lo * b;
  return fast_two_sum(p.hi, p.lo);
}

DoubleDouble div(DoubleDouble a, double b) {
  const double q1 = a.hi / b;
  const DoubleDouble p = two_prod(q1, b);
  const double rem = ((a.hi - p.hi) - p.lo) + a.lo;
  return fast_two_sum(q1, rem / b);
}

// 2*pi as a triple-double; pi as a double-double.
constexpr double two_pi_1 = 6.283185307179586;
constexpr double two_pi_2 = 2.4492935982947064e-16;
constexpr double two_pi_3 = -5.989539619436679e-33;
constexpr DoubleDouble pi_dd{3.141592653589793, 1.2246467991473532e-16};

// n * angle reduced to roughly [-pi, pi], as a double-double.
DoubleDouble reduce_multiple(Index n, const Angle& angle) {
  const auto nd = static_cast<double>(n);
  DoubleDouble x = two_prod(nd, angle.hi);
  x = add(x, {nd * angle.lo, 0.0});
  const double k = std::nearbyint(x.hi / two_pi_1);
  if (k == 0.0) return x;
  x = add(x, negate(two_prod(k, two_pi_1)));
  x = add(x, negate(two_prod(k, two_pi_2)));
  x = add(x, {-k * two_pi_3, 0.0});
  return x;
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw InvalidPotential(std::string("non-finite value in ") + what);
  }
}

}  // namespace

Angle Angle::pi_fraction(double numerator, double denominator) {
  if (denominator == 0.0) throw InvalidPotential("pi_fraction: zero denominator");
  const DoubleDouble r = div(mul(pi_dd, numerator), denominator);
  return {r.hi, r.lo};
}

double cos_multiple(Index n, const Angle& angle, double phase) {
  DoubleDouble r = reduce_multiple(n, angle);
  if (phase != 0.0) r = add(r, {phase, 0.0});
  return std::cos(r.hi) - std::sin(r.hi) * r.lo;
}

const char* to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::CosineComposed: return "CosineComposed";
    case PotentialKind::TrigPolynomial: return "TrigPolynomial";
    case PotentialKind::Constant: return "Constant";
    case PotentialKind::Explicit: return "Explicit";
  }
  return "?";
}

PotentialKind potential_kind_from_string(const std::string& name) {
  for (auto k : {PotentialKind::CosineComposed, PotentialKind::TrigPolynomial,
                 PotentialKind::Constant, PotentialKind::Explicit}) {
    if (name == to_string(k)) return k;
  }
  throw InvalidPotential("unknown potential kind '" + name + "'");
}

ExplicitOutOfRange::ExplicitOutOfRange(Index lo, Index hi, Index stored_lo, Index stored_hi)
    : std::out_of_range("requested indices [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "] exceed stored samples [" +
                        std::to_string(stored_lo) + ", " + std::to_string(stored_hi) + "]") {}

PotentialSpec PotentialSpec::constant(double c) {
  PotentialSpec s;
  s.kind = PotentialKind::Constant;
  s.value = c;
  s.validate();
  return s;
}

PotentialSpec PotentialSpec::cosine_composed(std::vector<double> coeffs, Angle theta) {
  PotentialSpec s;
  s.kind = PotentialKind::CosineComposed;
  s.coeffs = std::move(coeffs);
  s.theta = theta;
  s.validate();
  return s;
}

PotentialSpec PotentialSpec::trig_polynomial(std::vector<TrigTerm> terms) {
  PotentialSpec s;
  s.kind = PotentialKind::TrigPolynomial;
  s.terms = std::move(terms);
  s.validate();
  return s;
}

PotentialSpec PotentialSpec::explicit_samples(std::vector<double> samples, Index origin) {
  PotentialSpec s;
  s.kind = PotentialKind::Explicit;
  s.samples = std::move(samples);
  s.origin = origin;
  s.validate();
  return s;
}

void PotentialSpec::validate() const {
  switch (kind) {
    case PotentialKind::CosineComposed:
      if (coeffs.empty()) throw InvalidPotential("CosineComposed needs at least one coefficient");
      if (coeffs.size() > max_polynomial_degree + 1) {
        throw InvalidPotential("polynomial degree exceeds " +
                               std::to_string(max_polynomial_degree));
      }
      for (double c : coeffs) require_finite(c, "coeffs");
      require_finite(theta.hi, "theta");
      require_finite(theta.lo, "theta");
      break;
    case PotentialKind::TrigPolynomial:
      if (terms.empty()) throw InvalidPotential("TrigPolynomial needs at least one term");
      for (const auto& t : terms) {
        require_finite(t.amplitude, "terms");
        require_finite(t.frequency.value(), "terms");
        require_finite(t.phase, "terms");
      }
      break;
    case PotentialKind::Constant:
      require_finite(value, "value");
      break;
    case PotentialKind::Explicit:
      if (samples.empty()) throw InvalidPotential("Explicit needs at least one sample");
      for (double v : samples) require_finite(v, "samples");
      break;
  }
}

double evaluate_polynomial(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double PotentialSpec::at(Index n) const {
  switch (kind) {
    case PotentialKind::CosineComposed:
      return evaluate_polynomial(coeffs, cos_multiple(n, theta));
    case PotentialKind::TrigPolynomial: {
      double acc = 0.0;
      for (const auto& t : terms) acc += t.amplitude * cos_multiple(n, t.frequency, t.phase);
      return acc;
    }
    case PotentialKind::Constant:
      return value;
    case PotentialKind::Explicit: {
      const Index last = origin + static_cast<Index>(samples.size()) - 1;
      if (n < origin || n > last) throw ExplicitOutOfRange(n, n, origin, last);
      return samples[static_cast<std::size_t>(n - origin)];
    }
  }
  return 0.0;
}

double PotentialSpec::bound() const {
  double b = 0.0;
  switch (kind) {
    case PotentialKind::CosineComposed:
      for (double c : coeffs) b += std::abs(c);
      break;
    case PotentialKind::TrigPolynomial:
      for (const auto& t : terms) b += std::abs(t.amplitude);
      break;
    case PotentialKind::Constant:
      b = std::abs(value);
      break;
    case PotentialKind::Explicit:
      for (double v : samples) b = std::max(b, std::abs(v));
      break;
  }
  return b;
}

std::vector<double> sample_sequence(const PotentialSpec& spec, Index lo, Index hi) {
  if (lo > hi) throw std::invalid_argument("sample_sequence: lo > hi");
  if (spec.kind == PotentialKind::Explicit) {
    const Index last = spec.origin + static_cast<Index>(spec.samples.size()) - 1;
    if (lo < spec.origin || hi > last) throw ExplicitOutOfRange(lo, hi, spec.origin, last);
    const auto first = spec.samples.begin() + (lo - spec.origin);
    return {first, first + (hi - lo + 1)};
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (Index n = lo; n <= hi; ++n) out.push_back(spec.at(n));
  return out;
}

std::vector<Index> default_mean_offsets(Index window_radius) {
  std::vector<Index> out{0};
  for (Index f : {1, 2, 5, 10}) {
    out.push_back(f * window_radius);
    out.push_back(-f * window_radius);
  }
  return out;
}

MeanEstimate von_neumann_mean(const PotentialSpec& spec, Index window_radius,
                              const std::vector<Index>& offsets) {
  if (window_radius < 1) throw std::invalid_argument("von_neumann_mean: window_radius < 1");
  if (offsets.empty()) throw std::invalid_argument("von_neumann_mean: offsets empty");

  const auto [kmin, kmax] = std::minmax_element(offsets.begin(), offsets.end());
  const Index lo = std::min<Index>(*kmin, 0) - window_radius;
  const Index hi = std::max<Index>(*kmax, 0) + window_radius;
  const std::vector<double> d = sample_sequence(spec, lo, hi);
  const auto width = static_cast<std::size_t>(2 * window_radius + 1);
  const double scale = 1.0 / static_cast<double>(width);

  auto windowed = [&](Index centre) {
    const auto start = static_cast<std::size_t>(centre - window_radius - lo);
    return compensated_sum(std::span<const double>(d).subspan(start, width)) * scale;
  };

  MeanEstimate est;
  est.window_radius = window_radius;
  est.value = windowed(0);
  for (Index k : offsets) {
    est.uniformity_defect = std::max(est.uniformity_defect, std::abs(windowed(k) - est.value));
  }
  return est;
}

PeriodicityResult periodicity_check(const PotentialSpec& spec, Index max_period, double tol) {
  if (max_period < 1) throw std::invalid_argument("periodicity_check: max_period < 1");

  Index lo = -max_period;
  Index hi = 2 * max_period;
  if (spec.kind == PotentialKind::Explicit) {
    lo = spec.origin;
    hi = spec.origin + static_cast<Index>(spec.samples.size()) - 1;
  }
  const std::vector<double> d = sample_sequence(spec, lo, hi);
  const auto size = static_cast<Index>(d.size());
  // Explicit windows are scanned in full; generated ones over [-P, P].
  const Index window = spec.kind == PotentialKind::Explicit ? size : 2 * max_period + 1;

  PeriodicityResult result;
  result.max_period = max_period;
  for (Index p = 1; p <= max_period && p < size; ++p) {
    bool ok = true;
    for (Index i = 0; i < window && i + p < size; ++i) {
      if (!(std::abs(d[i + p] - d[i]) <= tol)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      result.period = p;
      break;
    }
  }
  return result;
}

bool claimed_nonperiodic(const PotentialSpec& spec, Index max_period, double tol) {
  return !periodicity_check(spec, max_period, tol).periodic();
}

}  // namespace jacobi_spectra
