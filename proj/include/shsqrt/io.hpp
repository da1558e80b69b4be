#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "shsqrt/matrix.hpp"

namespace shsqrt {

namespace detail {

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace detail

// Matrix Market "array real general": column-major dense entries, one per
// line, after the banner and the size line. Comments (%) are allowed
// anywhere before the data.
inline DenseMatrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open " + path + " for reading");
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(path + ":1: empty file");
  ++lineno;
  std::istringstream banner(line);
  std::string mm, object, format, field, symmetry;
  banner >> mm >> object >> format >> field >> symmetry;
  if (mm != "%%MatrixMarket" || detail::lower(object) != "matrix" ||
      detail::lower(format) != "array" || detail::lower(field) != "real" ||
      detail::lower(symmetry) != "general")
    throw ParseError(path + ":1: expected '%%MatrixMarket matrix array real general' header");
  // Skip comments and blank lines to the size line.
  std::size_t rows = 0, cols = 0;
  for (;;) {
    if (!std::getline(in, line))
      throw ParseError(path + ":" + std::to_string(lineno + 1) + ": missing size line");
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream sz(line);
    long long r = 0, c = 0;
    if (!(sz >> r >> c) || r <= 0 || c <= 0)
      throw ParseError(path + ":" + std::to_string(lineno) + ": bad size line '" + line + "'");
    rows = static_cast<std::size_t>(r);
    cols = static_cast<std::size_t>(c);
    break;
  }
  DenseMatrix m(rows, cols);
  std::size_t count = 0;
  const std::size_t total = rows * cols;
  while (count < total) {
    if (!std::getline(in, line))
      throw ParseError(path + ":" + std::to_string(lineno + 1) + ": expected " +
                       std::to_string(total) + " entries, got " + std::to_string(count));
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream vals(line);
    double v;
    while (vals >> v) {
      if (count >= total)
        throw ParseError(path + ":" + std::to_string(lineno) + ": extra data");
      m(count % rows, count / rows) = v;  // column-major order
      ++count;
    }
    std::string rest;
    if (vals.clear(), vals >> rest)
      throw ParseError(path + ":" + std::to_string(lineno) + ": bad value '" + rest + "'");
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream tail(line);
    std::string tok;
    if (tail >> tok)
      throw ParseError(path + ":" + std::to_string(lineno) + ": extra data");
  }
  return m;
}

inline void write_matrix(const std::string& path, const DenseMatrix& m,
                         const std::string& comment = "") {
  std::ofstream out(path);
  if (!out) throw FileError("cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix array real general\n";
  if (!comment.empty()) out << "% " << comment << "\n";
  out << m.rows() << " " << m.cols() << "\n";
  char buf[64];
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << buf << "\n";
    }
  if (!out) throw FileError("write failed for " + path);
}

}  // namespace shsqrt
