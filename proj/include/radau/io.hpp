#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "radau/fem.hpp"

namespace radau {

/// Shortest form guaranteed to round-trip: 17 significant digits.
std::string format_double(double value);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Matrix Market "coordinate real general" text of a sparse matrix.
std::string matrix_market(const SparseMatrix& A);

}  // namespace radau
