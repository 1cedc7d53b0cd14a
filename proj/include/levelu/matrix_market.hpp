#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "levelu/sparse.hpp"

namespace levelu {

/// Reads a MatrixMarket coordinate file (real or integer field, general or
/// symmetric). Symmetric inputs are expanded to both triangles; indices come
/// back 0-based.
Triplets load_matrix_market(std::istream& in);
Triplets load_matrix_market(const std::filesystem::path& path);

/// Writes `a` as "coordinate real general" with 17 significant digits.
void write_matrix_market(std::ostream& out, const CscMatrix& a);

/// One 0-based index per line, interpreted as `order[new] = old`.
Permutation load_permutation(std::istream& in, Index n);
Permutation load_permutation(const std::filesystem::path& path, Index n);

/// One scalar per line.
std::vector<double> load_vector(std::istream& in);
std::vector<double> load_vector(const std::filesystem::path& path);
void write_vector(std::ostream& out, const std::vector<double>& v);

}  // namespace levelu
