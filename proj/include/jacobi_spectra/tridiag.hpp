#pragma once

#include <stdexcept>
#include <vector>

#include "jacobi_spectra/potentials.hpp"

namespace jacobi_spectra {

/// Symmetric tridiagonal matrix with unit off-diagonals. Only the diagonal
/// is stored; `origin` is the bilateral index of the first diagonal entry.
class TridiagonalMatrix {
 public:
  TridiagonalMatrix(std::vector<double> diag, Index origin);

  Index size() const { return static_cast<Index>(diag_.size()); }
  const std::vector<double>& diag() const { return diag_; }
  Index origin() const { return origin_; }

  /// [min(diag) - 2, max(diag) + 2]
  double gershgorin_lower() const { return min_diag_ - 2.0; }
  double gershgorin_upper() const { return max_diag_ + 2.0; }
  double gershgorin_width() const { return gershgorin_upper() - gershgorin_lower(); }

  /// Leading principal (size()-1) x (size()-1) block.
  TridiagonalMatrix leading_submatrix() const;

 private:
  std::vector<double> diag_;
  Index origin_;
  double min_diag_;
  double max_diag_;
};

/// T_n over d_{1+shift} .. d_{n+shift}.
TridiagonalMatrix build_unilateral(const PotentialSpec& spec, Index n, Index shift = 0);

/// The (2m+1) x (2m+1) block over d_{-m} .. d_{m}.
TridiagonalMatrix build_bilateral(const PotentialSpec& spec, Index m);

/// Number of eigenvalues in (-inf, x], from the sign count of the LDL^T pivots
/// of A - xI. Pivots smaller in magnitude than eps * gershgorin_width are
/// replaced by minus that floor.
Index sturm_count(const TridiagonalMatrix& a, double x);

class TolTooSmall : public std::domain_error {
 public:
  TolTooSmall(double tol, double minimum);
  double tol() const { return tol_; }

 private:
  double tol_;
};

struct EigenvalueList {
  std::vector<double> values;    // ascending
  double certified_radius = 0.0;
  double tol = 0.0;
  Index n = 0;
  Index origin = 1;
  /// False when round-off prevented separating some cluster; the affected
  /// values are then repeated and the list is not strictly increasing.
  bool resolved = true;
};

struct BisectionOptions {
  unsigned threads = 1;
};

/// All n eigenvalues by Sturm bisection from the Gershgorin interval. Each
/// value is within certified_radius <= tol of a sign change of sturm_count.
/// Throws TolTooSmall below 16 * eps * (spectral interval width).
EigenvalueList eigenvalues(const TridiagonalMatrix& a, double tol,
                           const BisectionOptions& options = {});

/// Number of indices breaking lambda_i < mu_i < lambda_{i+1} by more than
/// `slack`, where mu are the eigenvalues of the leading submatrix.
Index interlacing_violations(const EigenvalueList& outer, const EigenvalueList& inner,
                             double slack);

/// Square band matrix; bands[o + bandwidth][min(i, j)] holds A(i, j) for o = j - i.
class BandedMatrix {
 public:
  BandedMatrix(Index dimension, Index bandwidth);

  static BandedMatrix from_tridiagonal(const TridiagonalMatrix& t);

  Index dimension() const { return dimension_; }
  Index bandwidth() const { return bandwidth_; }

  double operator()(Index i, Index j) const;
  void set(Index i, Index j, double value);

  /// Maximum absolute row sum.
  double norm_inf() const;

 private:
  Index dimension_;
  Index bandwidth_;
  std::vector<std::vector<double>> bands_;
};

BandedMatrix multiply(const BandedMatrix& a, const BandedMatrix& b);

struct DegreeReport {
  std::vector<Index> ranks;         // rank(P_k A - A P_k), k = 1..K
  std::vector<Index> corner_ranks;  // rank(P_k A (1 - P_k)), k = 1..K
  Index degree_window = 0;          // max of ranks
  Index corner_degree_window = 0;   // max of corner_ranks
  double rank_tol = 0.0;
};

/// Numerical ranks of the commutators with the coordinate projections P_k
/// onto e_1..e_k, singular values above N * eps * ||A||_inf * 10 counted.
DegreeReport filtration_degree_window(const BandedMatrix& a, Index max_k);

}  // namespace jacobi_spectra
