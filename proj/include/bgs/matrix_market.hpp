#pragma once

#include "bgs/matrix.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace bgs {

namespace detail {

inline std::string lowercase(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline double parse_number(const std::string& text)
{
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) throw std::runtime_error("MatrixMarket: bad number '" + text + "'");
  return v;
}

inline bool next_data_line(std::istream& in, std::string& line)
{
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    return true;
  }
  return false;
}

} // namespace detail

/// Reads a real MatrixMarket file in `array` (dense, column-major) or
/// `coordinate` (1-based triplets) format, `general` or `symmetric`.
inline Matrix read_matrix_market(std::istream& in)
{
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("MatrixMarket: empty input");
  std::istringstream hs(header);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || detail::lowercase(object) != "matrix") {
    throw std::runtime_error("MatrixMarket: bad header line '" + header + "'");
  }
  format = detail::lowercase(format);
  field = detail::lowercase(field);
  symmetry = detail::lowercase(symmetry);
  if (field != "real" && field != "integer" && field != "double") {
    throw std::runtime_error("MatrixMarket: unsupported field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    throw std::runtime_error("MatrixMarket: unsupported symmetry '" + symmetry + "'");
  }
  const bool symmetric = symmetry == "symmetric";

  std::string line;
  if (!detail::next_data_line(in, line)) throw std::runtime_error("MatrixMarket: missing size line");
  std::istringstream ss(line);
  std::size_t rows = 0, cols = 0, nnz = 0;

  if (format == "array") {
    if (!(ss >> rows >> cols)) throw std::runtime_error("MatrixMarket: bad size line '" + line + "'");
    Matrix a(rows, cols);
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t i = symmetric ? j : 0; i < rows; ++i) {
        if (!detail::next_data_line(in, line)) throw std::runtime_error("MatrixMarket: truncated array data");
        a(i, j) = detail::parse_number(line);
        if (symmetric) a(j, i) = a(i, j);
      }
    }
    require_finite(a, "MatrixMarket");
    return a;
  }
  if (format == "coordinate") {
    if (!(ss >> rows >> cols >> nnz)) throw std::runtime_error("MatrixMarket: bad size line '" + line + "'");
    Matrix a(rows, cols);
    for (std::size_t e = 0; e < nnz; ++e) {
      if (!detail::next_data_line(in, line)) throw std::runtime_error("MatrixMarket: truncated coordinate data");
      std::istringstream es(line);
      std::size_t i = 0, j = 0;
      double v = 0.0;
      if (!(es >> i >> j >> v) || i == 0 || j == 0 || i > rows || j > cols) {
        throw std::runtime_error("MatrixMarket: bad entry '" + line + "'");
      }
      a(i - 1, j - 1) = v;
      if (symmetric) a(j - 1, i - 1) = v;
    }
    require_finite(a, "MatrixMarket");
    return a;
  }
  throw std::runtime_error("MatrixMarket: unsupported format '" + format + "'");
}

inline Matrix read_matrix_market(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw std::runtime_error("MatrixMarket: cannot open '" + path + "'");
  return read_matrix_market(in);
}

/// Dense array format with 17 significant digits, enough to round-trip binary64.
inline void write_matrix_market(std::ostream& out, const Matrix& a)
{
  out << "%%MatrixMarket matrix array real general\n" << a.rows() << ' ' << a.cols() << '\n';
  char buf[40];
  for (double v : a.data()) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out << buf;
  }
}

inline void write_matrix_market(const std::string& path, const Matrix& a)
{
  std::ofstream out(path);
  if (!out) throw std::runtime_error("MatrixMarket: cannot write '" + path + "'");
  write_matrix_market(out, a);
  if (!out) throw std::runtime_error("MatrixMarket: write to '" + path + "' failed");
}

} // namespace bgs
