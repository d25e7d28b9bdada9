#include "simiter/matrix_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "simiter/errors.hpp"

namespace simiter {

std::string format_double(double x) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                 std::chars_format::general, 17);
  if (ec != std::errc{}) throw ContractError("format_double: conversion failed");
  return std::string(buf.data(), end);
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

namespace {

double parse_double(const std::string& token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw IoError("matrix text: cannot parse '" + token + "' as a float");
  }
  return value;
}

} // namespace

Matrix read_matrix(std::istream& in) {
  long long rows = -1;
  long long cols = -1;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0) {
    throw IoError("matrix text: missing or invalid 'rows cols' header");
  }
  const auto r = static_cast<std::size_t>(rows);
  const auto c = static_cast<std::size_t>(cols);
  std::vector<double> data;
  data.reserve(r * c);
  std::string token;
  for (std::size_t i = 0; i < r * c; ++i) {
    if (!(in >> token)) {
      throw IoError("matrix text: expected " + std::to_string(r * c) + " values, got " +
                    std::to_string(i));
    }
    data.push_back(parse_double(token));
  }
  if (in >> token) throw IoError("matrix text: trailing content '" + token + "'");
  try {
    return Matrix(r, c, std::move(data));
  } catch (const ContractError& e) {
    throw IoError(std::string("matrix text: ") + e.what());
  }
}

void save_matrix(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_matrix(out, m);
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

Matrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_matrix(in);
}

} // namespace simiter
