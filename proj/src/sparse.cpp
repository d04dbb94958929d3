// Copyright (c) 2026 the spherodyn developers.
// SPDX-License-Identifier: Apache-2.0

#include "spherodyn/sparse.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <stdexcept>

namespace spherodyn
{

double *SparseMatrix::find(int i, int j)
{
  const int *begin = col.data() + row_ptr[i];
  const int *end = col.data() + row_ptr[i + 1];
  const int *it = std::lower_bound(begin, end, j);
  if (it == end || *it != j)
  {
    return nullptr;
  }
  return val.data() + (it - col.data());
}

const double *SparseMatrix::find(int i, int j) const
{
  return const_cast<SparseMatrix *>(this)->find(i, j);
}

void SparseMatrix::add(int i, int j, double v)
{
  double *p = find(i, j);
  if (p == nullptr)
  {
    throw std::logic_error("sparse entry outside the symbolic pattern");
  }
  *p += v;
}

void SparseMatrix::mat_vec(const std::vector<double> &x, std::vector<double> &y) const
{
  y.assign(rows, 0.0);
  for (int i = 0; i < rows; ++i)
  {
    double acc = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
    {
      acc += val[k] * x[col[k]];
    }
    y[i] = acc;
  }
}

std::vector<double> SparseMatrix::mat_vec(const std::vector<double> &x) const
{
  std::vector<double> y;
  mat_vec(x, y);
  return y;
}

SparseMatrix make_pattern(int rows, int cols, std::vector<std::array<int, 2>> &&entries)
{
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());

  SparseMatrix A;
  A.rows = rows;
  A.cols = cols;
  A.row_ptr.assign(rows + 1, 0);
  A.col.reserve(entries.size());
  for (const auto &e : entries)
  {
    ++A.row_ptr[e[0] + 1];
    A.col.push_back(e[1]);
  }
  for (int i = 0; i < rows; ++i)
  {
    A.row_ptr[i + 1] += A.row_ptr[i];
  }
  A.val.assign(entries.size(), 0.0);
  return A;
}

void write_matrix_market(const SparseMatrix &A, const std::string &path)
{
  std::FILE *f = std::fopen(path.c_str(), "w");
  if (f == nullptr)
  {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  std::fprintf(f, "%%%%MatrixMarket matrix coordinate real general\n");
  std::fprintf(f, "%d %d %d\n", A.rows, A.cols, A.nnz());
  for (int i = 0; i < A.rows; ++i)
  {
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
    {
      std::fprintf(f, "%d %d %.17g\n", i + 1, A.col[k] + 1, A.val[k]);
    }
  }
  if (std::fclose(f) != 0)
  {
    throw std::runtime_error("write failure on " + path);
  }
}

}  // namespace spherodyn
