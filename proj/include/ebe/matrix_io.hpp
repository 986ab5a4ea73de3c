#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ebe/linalg.hpp"

namespace ebe {

/// Plain-text matrix: one row per line, whitespace-separated `re+imi` entries,
/// e.g. `0.5+0i 0.25-0.125i`. Blank lines and lines starting with '#' are skipped.
ComplexMatrix read_matrix(std::istream& in);
ComplexMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix(std::ostream& out, const ComplexMatrix& m);

/// Parses a single `re+imi` / `re-imi` token.
cplx parse_complex(std::string_view token);
std::string format_complex(cplx z);

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double x);

/// Writes `contents` to `path` through a temporary file in the same
/// directory and a rename, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Minimal CSV row builder with 17-significant-digit numbers.
class CsvRow {
 public:
  CsvRow& operator<<(double x);
  CsvRow& operator<<(std::size_t x);
  CsvRow& operator<<(int x);
  CsvRow& operator<<(std::string_view s);
  CsvRow& operator<<(const char* s) { return *this << std::string_view(s); }
  CsvRow& operator<<(bool b) { return *this << (b ? std::string_view("true") : "false"); }
  std::string str() const { return line_ + "\n"; }

 private:
  void sep();
  std::string line_;
  bool first_ = true;
};

}  // namespace ebe
