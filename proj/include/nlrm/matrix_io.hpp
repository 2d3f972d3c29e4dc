#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nlrm/dense_matrix.hpp"
#include "nlrm/errors.hpp"

namespace nlrm {

// CSV: row-major, comma-separated, no header.
// MatrixMarket: "%%MatrixMarket matrix array real general", column-major values.
// Values are written with 17 significant digits so a read-back is bit-exact.
enum class MatrixFormat { kCsv, kMatrixMarket };

/// .mtx / .mm select MatrixMarket; anything else is CSV.
inline MatrixFormat format_from_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return (ext == ".mtx" || ext == ".mm") ? MatrixFormat::kMatrixMarket : MatrixFormat::kCsv;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto is_space = [](char ch) { return std::isspace(static_cast<unsigned char>(ch)) != 0; };
  while (!s.empty() && is_space(s.front())) {
    s.remove_prefix(1);
  }
  while (!s.empty() && is_space(s.back())) {
    s.remove_suffix(1);
  }
  return s;
}

inline double parse_real(std::string_view token, std::size_t line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') {
    token.remove_prefix(1);
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line, "non-numeric token '" + std::string(token) + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(line, "non-finite value '" + std::string(token) + "'");
  }
  return value;
}

inline std::string format_real(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

inline DenseMatrix parse_csv(std::istream& in) {
  std::vector<double> values;
  Index cols = -1;
  Index rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty()) {
      continue;
    }
    Index count = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = body.find(',', start);
      const std::string_view token =
          body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      values.push_back(parse_real(token, line_no));
      ++count;
      if (comma == std::string_view::npos) {
        break;
      }
      start = comma + 1;
    }
    if (cols < 0) {
      cols = count;
    } else if (count != cols) {
      throw ParseError(line_no, "ragged row " + std::to_string(rows + 1) + ": expected " +
                                    std::to_string(cols) + " values, got " + std::to_string(count));
    }
    ++rows;
  }
  if (rows == 0) {
    throw ParseError(0, "CSV input is empty");
  }
  return DenseMatrix(rows, cols, values);
}

inline DenseMatrix parse_matrix_market(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) {
    throw ParseError(0, "MatrixMarket input is empty");
  }
  std::istringstream header(line);
  std::string banner;
  std::string object;
  std::string layout;
  std::string field;
  std::string symmetry;
  header >> banner >> object >> layout >> field >> symmetry;
  if (banner != "%%MatrixMarket") {
    throw ParseError(line_no, "missing %%MatrixMarket banner");
  }
  object = lower(object);
  layout = lower(layout);
  field = lower(field);
  symmetry = lower(symmetry);
  if (layout == "coordinate") {
    throw ParseError(line_no, "MatrixMarket coordinate (sparse) format is not supported; "
                              "use the dense 'array' format");
  }
  if (object != "matrix" || layout != "array" || field != "real" || symmetry != "general") {
    throw ParseError(line_no, "unsupported MatrixMarket header '" + line +
                                  "'; expected 'matrix array real general'");
  }

  Index rows = -1;
  Index cols = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '%') {
      continue;
    }
    std::istringstream size_line{std::string(body)};
    std::string extra;
    if (!(size_line >> rows >> cols) || (size_line >> extra) || rows < 0 || cols < 0) {
      throw ParseError(line_no, "malformed size line '" + std::string(body) + "'");
    }
    break;
  }
  if (rows < 0) {
    throw ParseError(line_no, "missing size line");
  }

  const auto expected = static_cast<std::size_t>(rows * cols);
  std::vector<double> column_major;
  column_major.reserve(expected);
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '%') {
      continue;
    }
    while (!body.empty()) {
      const auto end = std::find_if(body.begin(), body.end(), [](char ch) {
        return std::isspace(static_cast<unsigned char>(ch)) != 0;
      });
      const auto len = static_cast<std::size_t>(end - body.begin());
      column_major.push_back(parse_real(body.substr(0, len), line_no));
      body = trim(body.substr(len));
    }
    if (column_major.size() > expected) {
      throw ParseError(line_no, "more values than the declared " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    }
  }
  if (column_major.size() != expected) {
    throw ParseError(line_no, "expected " + std::to_string(expected) + " values, found " +
                                  std::to_string(column_major.size()));
  }

  DenseMatrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      out(i, j) = column_major[static_cast<std::size_t>(j * rows + i)];
    }
  }
  return out;
}

}  // namespace detail

inline DenseMatrix parse_matrix(std::istream& in, MatrixFormat format) {
  return format == MatrixFormat::kCsv ? detail::parse_csv(in) : detail::parse_matrix_market(in);
}

inline void print_matrix(std::ostream& out, const DenseMatrix& m, MatrixFormat format) {
  if (format == MatrixFormat::kCsv) {
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) {
        if (j > 0) {
          out << ',';
        }
        out << detail::format_real(m(i, j));
      }
      out << '\n';
    }
    return;
  }
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      out << detail::format_real(m(i, j)) << '\n';
    }
  }
}

inline DenseMatrix read_matrix(const std::filesystem::path& path, MatrixFormat format) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(0, "cannot open '" + path.string() + "'");
  }
  return parse_matrix(in, format);
}

inline DenseMatrix read_matrix(const std::filesystem::path& path) {
  return read_matrix(path, format_from_path(path));
}

inline void write_matrix(const DenseMatrix& m, const std::filesystem::path& path,
                         MatrixFormat format) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  print_matrix(out, m, format);
  if (!out) {
    throw std::runtime_error("write to '" + path.string() + "' failed");
  }
}

inline void write_matrix(const DenseMatrix& m, const std::filesystem::path& path) {
  write_matrix(m, path, format_from_path(path));
}

}  // namespace nlrm
