#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "jacobi_spectra/specmeasure.hpp"
#include "jacobi_spectra/tridiag.hpp"

namespace jacobi_spectra {

/// printf("%.17g") equivalent; enough digits to round-trip any double.
std::string format_double(double x);

/// Shortest decimal that round-trips, for parameters echoed in headers.
std::string format_short(double x);

class CsvFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One value per line after a "# n=..., origin=..." comment header.
void write_matrix_csv(std::ostream& os, const TridiagonalMatrix& a);
TridiagonalMatrix read_matrix_csv(std::istream& is);

// As above with ", tol=..." in the header and a certified_radius comment.
void write_eigenvalues_csv(std::ostream& os, const EigenvalueList& list);
EigenvalueList read_eigenvalues_csv(std::istream& is);

void write_cdf_table(std::ostream& os, const SpectralDistributionEstimate& est);
void write_spectrum_report(std::ostream& os, const SpectrumReport& report);
void write_gap_intervals(std::ostream& os, const std::vector<GapInterval>& gaps);
void write_moment_report(std::ostream& os, const MomentMatchReport& report);
void write_crosscheck(std::ostream& os, const CrosscheckReport& report);

}  // namespace jacobi_spectra
