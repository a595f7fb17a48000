#include "jacobi_spectra/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace jacobi_spectra {

namespace {

std::string to_chars_string(double x, bool fixed_precision) {
  char buf[64];
  const auto res = fixed_precision
                       ? std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17)
                       : std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

double parse_double(const std::string& text) {
  double x = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  while (first < last && *first == ' ') ++first;
  const auto res = std::from_chars(first, last, x);
  if (res.ec != std::errc{} || res.ptr != last) throw CsvFormatError("bad number '" + text + "'");
  return x;
}

// Reads "key=value" pairs from a "# a=1, b=2" header line.
std::string header_field(const std::string& line, const std::string& key) {
  const std::string needle = key + "=";
  auto pos = line.find(needle);
  if (pos == std::string::npos) throw CsvFormatError("header lacks '" + key + "'");
  pos += needle.size();
  const auto end = line.find(',', pos);
  return line.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
}

struct ParsedList {
  std::vector<std::string> comments;
  std::vector<double> values;
};

ParsedList parse_list(std::istream& is) {
  ParsedList out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      out.comments.push_back(line);
    } else {
      out.values.push_back(parse_double(line));
    }
  }
  return out;
}

const std::string& find_comment(const ParsedList& parsed, const std::string& key) {
  for (const auto& c : parsed.comments) {
    if (c.find(key + "=") != std::string::npos) return c;
  }
  throw CsvFormatError("missing header '" + key + "'");
}

}  // namespace

std::string format_double(double x) { return to_chars_string(x, true); }

std::string format_short(double x) { return to_chars_string(x, false); }

void write_matrix_csv(std::ostream& os, const TridiagonalMatrix& a) {
  os << "# n=" << a.size() << ", origin=" << a.origin() << "\n";
  for (double d : a.diag()) os << format_double(d) << "\n";
}

TridiagonalMatrix read_matrix_csv(std::istream& is) {
  const ParsedList parsed = parse_list(is);
  const std::string& header = find_comment(parsed, "n");
  const auto n = static_cast<std::size_t>(std::stoll(header_field(header, "n")));
  if (n != parsed.values.size()) throw CsvFormatError("row count does not match n");
  return {parsed.values, std::stoll(header_field(header, "origin"))};
}

void write_eigenvalues_csv(std::ostream& os, const EigenvalueList& list) {
  os << "# n=" << list.n << ", origin=" << list.origin << ", tol=" << format_short(list.tol) << "\n";
  os << "# certified_radius=" << format_double(list.certified_radius)
     << ", resolved=" << (list.resolved ? "true" : "false") << "\n";
  for (double v : list.values) os << format_double(v) << "\n";
}

EigenvalueList read_eigenvalues_csv(std::istream& is) {
  const ParsedList parsed = parse_list(is);
  const std::string& header = find_comment(parsed, "tol");
  EigenvalueList list;
  list.n = std::stoll(header_field(header, "n"));
  list.origin = std::stoll(header_field(header, "origin"));
  list.tol = parse_double(header_field(header, "tol"));
  const std::string& cert = find_comment(parsed, "certified_radius");
  list.certified_radius = parse_double(header_field(cert, "certified_radius"));
  list.resolved = header_field(cert, "resolved") == "true";
  list.values = parsed.values;
  if (static_cast<Index>(list.values.size()) != list.n) throw CsvFormatError("row count does not match n");
  return list;
}

void write_cdf_table(std::ostream& os, const SpectralDistributionEstimate& est) {
  os << "x";
  for (Index n : est.schedule) os << ",n=" << n;
  os << "\n";
  for (std::size_t g = 0; g < est.grid.size(); ++g) {
    os << format_double(est.grid[g]);
    for (const auto& row : est.cdfs) os << "," << format_double(row[g]);
    os << "\n";
  }
}

void write_spectrum_report(std::ostream& os, const SpectrumReport& report) {
  os << "x,class,evidence,h,floor,cap\n";
  const std::string tail = "," + format_double(report.half_width) + "," +
                           format_double(report.density_floor) + "," +
                           std::to_string(report.gap_cap) + "\n";
  for (const auto& p : report.points) {
    os << format_double(p.x) << "," << to_string(p.label) << ",";
    if (p.label == SpectralClass::Gap) {
      os << p.max_count;
    } else {
      os << format_double(p.density);
    }
    os << tail;
  }
}

void write_gap_intervals(std::ostream& os, const std::vector<GapInterval>& gaps) {
  os << "lo,hi,max_count,interior\n";
  for (const auto& g : gaps) {
    os << format_double(g.lo) << "," << format_double(g.hi) << "," << g.max_count << ","
       << (g.interior ? "true" : "false") << "\n";
  }
}

void write_moment_report(std::ostream& os, const MomentMatchReport& report) {
  os << "k,cesaro,trace,abs_diff\n";
  for (const auto& r : report.rows) {
    os << r.k << "," << format_double(r.cesaro) << "," << format_double(r.trace) << ","
       << format_double(r.abs_diff) << "\n";
  }
}

void write_crosscheck(std::ostream& os, const CrosscheckReport& report) {
  os << "m,dimension,sup_distance\n";
  for (const auto& r : report.rows) {
    os << r.m << "," << r.dimension << "," << format_double(r.sup_distance) << "\n";
  }
}

}  // namespace jacobi_spectra
