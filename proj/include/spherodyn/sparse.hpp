// Copyright (c) 2026 the spherodyn developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHERODYN_SPARSE_HPP
#define SPHERODYN_SPARSE_HPP

#include <array>
#include <string>
#include <vector>

namespace spherodyn
{

// Compressed-row sparse matrix with sorted column indices per row.
struct SparseMatrix
{
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr;  // size rows + 1
  std::vector<int> col;
  std::vector<double> val;

  int nnz() const { return static_cast<int>(col.size()); }

  // Pointer to the stored entry (i, j), or nullptr if outside the pattern.
  double *find(int i, int j);
  const double *find(int i, int j) const;

  // Adds v to entry (i, j); the entry must exist in the pattern.
  void add(int i, int j, double v);

  void mat_vec(const std::vector<double> &x, std::vector<double> &y) const;
  std::vector<double> mat_vec(const std::vector<double> &x) const;
};

// Builds a CSR pattern (zero values) from an unsorted list of (row, col)
// index pairs; duplicates collapse.
SparseMatrix make_pattern(int rows, int cols, std::vector<std::array<int, 2>> &&entries);

// Matrix Market coordinate format, for offline inspection.
void write_matrix_market(const SparseMatrix &A, const std::string &path);

}  // namespace spherodyn

#endif  // SPHERODYN_SPARSE_HPP
