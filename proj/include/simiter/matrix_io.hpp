#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "simiter/matrix.hpp"

namespace simiter {

/// Formats a double with 17 significant digits (exact round trip).
std::string format_double(double x);

/// Text format: first line `rows cols`, then one line per row holding `cols`
/// values separated by single spaces.
void write_matrix(std::ostream& out, const Matrix& m);
Matrix read_matrix(std::istream& in);

/// File variants; failures to open or parse raise IoError.
void save_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix load_matrix(const std::filesystem::path& path);

} // namespace simiter
