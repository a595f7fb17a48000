#include "jacobi_spectra/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "jacobi_spectra/parallel.hpp"

namespace jacobi_spectra {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

// Frontier size reached serially before the subtrees are farmed out. Fixed so
// the bisection tree, and hence every reported value, is the same for any
// worker count.
constexpr std::size_t parallel_frontier = 64;

struct Bracket {
  double lo;
  double hi;
  Index count_lo;  // sturm_count(lo)
  Index count_hi;  // sturm_count(hi)
};

struct Leaf {
  std::vector<double> values;
  double radius = 0.0;
  bool resolved = true;
};

bool at_roundoff_floor(double lo, double hi) {
  return hi - lo <= 4.0 * eps * std::max(std::abs(lo), std::abs(hi));
}

// Either finishes `b` into `out` or returns its two halves through `left`/`right`.
bool split_or_finish(const TridiagonalMatrix& a, double tol, const Bracket& b, Leaf& out,
                     Bracket& left, Bracket& right) {
  const Index inside = b.count_hi - b.count_lo;
  if (inside == 0) return false;
  const double width = b.hi - b.lo;
  const bool floor = at_roundoff_floor(b.lo, b.hi);
  if ((inside == 1 && width <= tol) || floor) {
    const double mid = b.lo + 0.5 * width;
    out.values.insert(out.values.end(), static_cast<std::size_t>(inside), mid);
    out.radius = std::max(out.radius, 0.5 * width);
    if (inside > 1) out.resolved = false;
    return false;
  }
  const double mid = b.lo + 0.5 * width;
  const Index count_mid = sturm_count(a, mid);
  left = {b.lo, mid, b.count_lo, count_mid};
  right = {mid, b.hi, count_mid, b.count_hi};
  return true;
}

void refine(const TridiagonalMatrix& a, double tol, const Bracket& root, Leaf& out) {
  std::vector<Bracket> stack{root};
  while (!stack.empty()) {
    const Bracket b = stack.back();
    stack.pop_back();
    Bracket left{}, right{};
    if (split_or_finish(a, tol, b, out, left, right)) {
      // Right first so the left half is finished first and output stays sorted.
      stack.push_back(right);
      stack.push_back(left);
    }
  }
}

}  // namespace

TridiagonalMatrix::TridiagonalMatrix(std::vector<double> diag, Index origin)
    : diag_(std::move(diag)), origin_(origin) {
  if (diag_.empty()) throw std::invalid_argument("TridiagonalMatrix: dimension must be >= 1");
  const auto [lo, hi] = std::minmax_element(diag_.begin(), diag_.end());
  min_diag_ = *lo;
  max_diag_ = *hi;
  if (!std::isfinite(min_diag_) || !std::isfinite(max_diag_)) {
    throw std::invalid_argument("TridiagonalMatrix: non-finite diagonal entry");
  }
}

TridiagonalMatrix TridiagonalMatrix::leading_submatrix() const {
  if (diag_.size() < 2) throw std::invalid_argument("leading_submatrix of a 1x1 matrix");
  return {std::vector<double>(diag_.begin(), diag_.end() - 1), origin_};
}

TridiagonalMatrix build_unilateral(const PotentialSpec& spec, Index n, Index shift) {
  if (n < 1) throw std::invalid_argument("build_unilateral: n must be >= 1");
  return {sample_sequence(spec, 1 + shift, n + shift), 1 + shift};
}

TridiagonalMatrix build_bilateral(const PotentialSpec& spec, Index m) {
  if (m < 0) throw std::invalid_argument("build_bilateral: m must be >= 0");
  return {sample_sequence(spec, -m, m), -m};
}

Index sturm_count(const TridiagonalMatrix& a, double x) {
  const auto& d = a.diag();
  const double pivot_floor = eps * a.gershgorin_width();
  Index negatives = 0;
  double q = d[0] - x;
  for (std::size_t k = 0;; ++k) {
    if (std::abs(q) < pivot_floor) q = -pivot_floor;
    if (q < 0.0) ++negatives;
    if (k + 1 == d.size()) break;
    q = (d[k + 1] - x) - 1.0 / q;
  }
  return negatives;
}

TolTooSmall::TolTooSmall(double tol, double minimum)
    : std::domain_error("tol " + std::to_string(tol) +
                        " is below the certifiable minimum " + std::to_string(minimum)),
      tol_(tol) {}

EigenvalueList eigenvalues(const TridiagonalMatrix& a, double tol,
                           const BisectionOptions& options) {
  if (!(tol > 0.0)) throw std::invalid_argument("eigenvalues: tol must be positive");
  const double minimum = 16.0 * eps * a.gershgorin_width();
  if (tol < minimum) throw TolTooSmall(tol, minimum);

  const Index n = a.size();
  double lo = a.gershgorin_lower();
  double hi = a.gershgorin_upper();
  // The pivot floor shifts x by at most eps * width; step out until the
  // bracket holds every eigenvalue.
  const double pad = 2.0 * eps * a.gershgorin_width() + 4.0 * eps * std::max(std::abs(lo), std::abs(hi));
  Index count_lo = sturm_count(a, lo);
  for (double step = pad; count_lo != 0; step *= 2.0) count_lo = sturm_count(a, lo -= step);
  Index count_hi = sturm_count(a, hi);
  for (double step = pad; count_hi != n; step *= 2.0) count_hi = sturm_count(a, hi += step);

  // Breadth-first expansion to a fixed frontier, in left-to-right order.
  // Slots that finish during expansion keep their leaf and stay closed.
  struct Slot {
    Bracket bracket;
    Leaf leaf;
    bool open = true;
  };
  std::vector<Slot> frontier{{{lo, hi, count_lo, count_hi}, {}, true}};
  for (bool split_any = true; split_any && frontier.size() < parallel_frontier;) {
    split_any = false;
    std::vector<Slot> next;
    for (auto& slot : frontier) {
      Bracket left{}, right{};
      if (slot.open && split_or_finish(a, tol, slot.bracket, slot.leaf, left, right)) {
        next.push_back({left, {}, true});
        next.push_back({right, {}, true});
        split_any = true;
      } else if (slot.open) {
        if (!slot.leaf.values.empty()) next.push_back({slot.bracket, std::move(slot.leaf), false});
      } else {
        next.push_back(std::move(slot));
      }
    }
    frontier = std::move(next);
  }

  parallel_for(frontier.size(), options.threads, [&](std::size_t i) {
    if (frontier[i].open) refine(a, tol, frontier[i].bracket, frontier[i].leaf);
  });

  EigenvalueList out;
  out.n = n;
  out.origin = a.origin();
  out.tol = tol;
  out.values.reserve(static_cast<std::size_t>(n));
  for (const auto& [bracket, leaf, open] : frontier) {
    out.values.insert(out.values.end(), leaf.values.begin(), leaf.values.end());
    out.certified_radius = std::max(out.certified_radius, leaf.radius);
    out.resolved = out.resolved && leaf.resolved;
  }
  return out;
}

Index interlacing_violations(const EigenvalueList& outer, const EigenvalueList& inner,
                             double slack) {
  if (inner.values.size() + 1 != outer.values.size()) {
    throw std::invalid_argument("interlacing_violations: dimensions must differ by one");
  }
  Index violations = 0;
  for (std::size_t i = 0; i < inner.values.size(); ++i) {
    const double mu = inner.values[i];
    if (!(mu > outer.values[i] - slack) || !(mu < outer.values[i + 1] + slack)) ++violations;
  }
  return violations;
}

BandedMatrix::BandedMatrix(Index dimension, Index bandwidth)
    : dimension_(dimension), bandwidth_(bandwidth) {
  if (dimension < 1) throw std::invalid_argument("BandedMatrix: dimension must be >= 1");
  if (bandwidth < 0) throw std::invalid_argument("BandedMatrix: negative bandwidth");
  for (Index o = -bandwidth; o <= bandwidth; ++o) {
    bands_.emplace_back(static_cast<std::size_t>(std::max<Index>(0, dimension - std::abs(o))), 0.0);
  }
}

BandedMatrix BandedMatrix::from_tridiagonal(const TridiagonalMatrix& t) {
  BandedMatrix m(t.size(), 1);
  for (Index i = 0; i < t.size(); ++i) {
    m.set(i, i, t.diag()[static_cast<std::size_t>(i)]);
    if (i + 1 < t.size()) {
      m.set(i, i + 1, 1.0);
      m.set(i + 1, i, 1.0);
    }
  }
  return m;
}

double BandedMatrix::operator()(Index i, Index j) const {
  const Index o = j - i;
  if (std::abs(o) > bandwidth_) return 0.0;
  return bands_[static_cast<std::size_t>(o + bandwidth_)][static_cast<std::size_t>(std::min(i, j))];
}

void BandedMatrix::set(Index i, Index j, double value) {
  const Index o = j - i;
  if (std::abs(o) > bandwidth_ || i < 0 || j < 0 || i >= dimension_ || j >= dimension_) {
    throw std::out_of_range("BandedMatrix::set outside the band");
  }
  bands_[static_cast<std::size_t>(o + bandwidth_)][static_cast<std::size_t>(std::min(i, j))] = value;
}

double BandedMatrix::norm_inf() const {
  double best = 0.0;
  for (Index i = 0; i < dimension_; ++i) {
    double row = 0.0;
    for (Index j = std::max<Index>(0, i - bandwidth_);
         j <= std::min(dimension_ - 1, i + bandwidth_); ++j) {
      row += std::abs((*this)(i, j));
    }
    best = std::max(best, row);
  }
  return best;
}

BandedMatrix multiply(const BandedMatrix& a, const BandedMatrix& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("multiply: dimension mismatch");
  const Index n = a.dimension();
  const Index bw = std::min(n - 1, a.bandwidth() + b.bandwidth());
  BandedMatrix c(n, bw);
  for (Index i = 0; i < n; ++i) {
    for (Index j = std::max<Index>(0, i - bw); j <= std::min(n - 1, i + bw); ++j) {
      double s = 0.0;
      const Index k0 = std::max({Index{0}, i - a.bandwidth(), j - b.bandwidth()});
      const Index k1 = std::min({n - 1, i + a.bandwidth(), j + b.bandwidth()});
      for (Index k = k0; k <= k1; ++k) s += a(i, k) * b(k, j);
      c.set(i, j, s);
    }
  }
  return c;
}

DegreeReport filtration_degree_window(const BandedMatrix& a, Index max_k) {
  const Index n = a.dimension();
  if (max_k < 1 || max_k >= n) {
    throw std::invalid_argument("filtration_degree_window: need 1 <= K < N");
  }
  DegreeReport report;
  report.rank_tol = static_cast<double>(n) * eps * a.norm_inf() * 10.0;

  auto numerical_rank = [&](const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    Index r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > report.rank_tol ? 1 : 0;
    return r;
  };

  for (Index k = 1; k <= max_k; ++k) {
    // (P_k A - A P_k)(i, j) = A(i, j) * ([i < k] - [j < k])
    Eigen::MatrixXd commutator = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd corner = Eigen::MatrixXd::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = std::max<Index>(0, i - a.bandwidth());
           j <= std::min(n - 1, i + a.bandwidth()); ++j) {
        const int sign = (i < k ? 1 : 0) - (j < k ? 1 : 0);
        commutator(i, j) = sign * a(i, j);
        if (i < k && j >= k) corner(i, j) = a(i, j);
      }
    }
    report.ranks.push_back(numerical_rank(commutator));
    report.corner_ranks.push_back(numerical_rank(corner));
  }
  report.degree_window = *std::max_element(report.ranks.begin(), report.ranks.end());
  report.corner_degree_window =
      *std::max_element(report.corner_ranks.begin(), report.corner_ranks.end());
  return report;
}

}  // namespace jacobi_spectra
