#include "ebe/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "ebe/errors.hpp"

namespace ebe {

namespace {

// std::from_chars rejects a leading '+'.
const char* parse_real(const char* first, const char* last, double& value) {
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{}) return nullptr;
  return ptr;
}

}  // namespace

cplx parse_complex(std::string_view token) {
  const char* first = token.data();
  const char* last = first + token.size();
  double re = 0.0, im = 0.0;
  const char* p = parse_real(first, last, re);
  if (p == nullptr) throw ValidationError("matrix entry '" + std::string(token) + "': bad real part");
  if (p == last) return {re, 0.0};
  if (*p != '+' && *p != '-')
    throw ValidationError("matrix entry '" + std::string(token) + "': expected re+imi");
  const char* q = parse_real(p, last, im);
  if (q == nullptr || q + 1 != last || *q != 'i')
    throw ValidationError("matrix entry '" + std::string(token) + "': expected re+imi");
  return {re, im};
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_complex(cplx z) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

ComplexMatrix read_matrix(std::istream& in) {
  std::vector<std::vector<cplx>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string tok;
    std::vector<cplx> row;
    while (tokens >> tok) {
      if (row.empty() && tok.front() == '#') break;
      try {
        row.push_back(parse_complex(tok));
      } catch (const ValidationError& e) {
        throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  require(!rows.empty(), "matrix file: no rows");
  const std::size_t n = rows.size();
  std::vector<cplx> data;
  data.reserve(n * n);
  for (const auto& row : rows) {
    require(row.size() == n, "matrix file: matrix must be square (" + std::to_string(n) +
                                 " rows, a row has " + std::to_string(row.size()) + " entries)");
    data.insert(data.end(), row.begin(), row.end());
  }
  return ComplexMatrix(n, std::move(data));
}

ComplexMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open matrix file " + path.string());
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const ComplexMatrix& m) {
  for (std::size_t r = 0; r < m.dim(); ++r) {
    for (std::size_t c = 0; c < m.dim(); ++c) {
      if (c) out << ' ';
      out << format_complex(m(r, c));
    }
    out << '\n';
  }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw ValidationError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void CsvRow::sep() {
  if (!first_) line_ += ',';
  first_ = false;
}

CsvRow& CsvRow::operator<<(double x) {
  sep();
  line_ += format_double(x);
  return *this;
}

CsvRow& CsvRow::operator<<(std::size_t x) {
  sep();
  line_ += std::to_string(x);
  return *this;
}

CsvRow& CsvRow::operator<<(int x) {
  sep();
  line_ += std::to_string(x);
  return *this;
}

CsvRow& CsvRow::operator<<(std::string_view s) {
  sep();
  line_ += s;
  return *this;
}

}  // namespace ebe
