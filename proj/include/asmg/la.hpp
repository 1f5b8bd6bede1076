/*
 Copyright 2026 The asmg Authors.
 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

// Sparse (CSR) and small dense kernels used by the assembly, the hierarchy
// setup and the Krylov solvers.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace asmg {

using Vector = std::vector<double>;

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);

struct Triplet {
  int row;
  int col;
  double value;
};

class DenseMatrix;

/// Compressed sparse row matrix. Column indices are sorted and unique in
/// every row and no explicit zeros are stored. Immutable after construction.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(int rows, int cols, std::vector<int> row_ptr,
            std::vector<int> col_idx, std::vector<double> values);

  /// Sums duplicates and drops entries whose sum is exactly zero.
  static CsrMatrix from_triplets(int rows, int cols,
                                 std::vector<Triplet> entries);
  static CsrMatrix identity(int n);
  static CsrMatrix from_dense(const DenseMatrix& d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  std::span<const int> row_cols(int i) const {
    return {col_idx_.data() + row_ptr_[i],
            static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
  }
  std::span<const double> row_vals(int i) const {
    return {values_.data() + row_ptr_[i],
            static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
  }

  /// Entry (i, j) or 0 when structurally absent.
  double at(int i, int j) const;

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  Vector operator*(std::span<const double> x) const;

  Vector diagonal() const;
  CsrMatrix transpose() const;
  DenseMatrix to_dense() const;

  /// max |a_ij - a_ji| relative to max |a_ij|.
  double asymmetry() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b);
CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b, double alpha = 1.0,
              double beta = 1.0);

/// Galerkin product R^T A R. For symmetric A the result is symmetric
/// bit-for-bit: the computed product is averaged with its transpose.
CsrMatrix triple_product(const CsrMatrix& r, const CsrMatrix& a);

/// Submatrix A(rows, cols); index sets need not be sorted.
CsrMatrix extract(const CsrMatrix& a, std::span<const int> rows,
                  std::span<const int> cols);

/// B(i, j) = A(perm[i], perm[j]).
CsrMatrix permute_sym(const CsrMatrix& a, std::span<const int> perm);
std::vector<int> inverse_permutation(std::span<const int> perm);

/// Coordinate Matrix Market (general, real) for debugging.
void write_matrix_market(std::ostream& os, const CsrMatrix& a);

/// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * cols, fill) {}

  static DenseMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }
  double operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::span<const double> row(int i) const {
    return {data_.data() + static_cast<std::size_t>(i) * cols_,
            static_cast<std::size_t>(cols_)};
  }

  void multiply(std::span<const double> x, std::span<double> y) const;
  /// y = A^T x
  void multiply_transposed(std::span<const double> x, std::span<double> y) const;
  Vector operator*(std::span<const double> x) const;

  DenseMatrix transpose() const;
  /// (A + A^T) / 2 in place; requires a square matrix.
  void symmetrize();

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);

/// A = L L^T without pivoting. Throws ErrorKind::factorization naming the
/// first non-positive pivot.
class Cholesky {
 public:
  Cholesky() = default;
  explicit Cholesky(const DenseMatrix& a);

  int size() const { return l_.rows(); }
  const DenseMatrix& factor() const { return l_; }

  void solve_in_place(std::span<double> b) const;
  Vector solve(std::span<const double> b) const;
  /// X = A^{-1} B for a dense right-hand side block.
  DenseMatrix solve(const DenseMatrix& b) const;

 private:
  DenseMatrix l_;
};

/// A = L D L^T with unit lower triangular L, no pivoting.
struct Ldlt {
  DenseMatrix unit_lower;
  Vector diag;
};
Ldlt ldlt(const DenseMatrix& a);

/// P A = L U with partial pivoting.
class Lu {
 public:
  Lu() = default;
  explicit Lu(const DenseMatrix& a);

  void solve_in_place(std::span<double> b) const;
  Vector solve(std::span<const double> b) const;

 private:
  DenseMatrix lu_;
  std::vector<int> pivots_;
};

}  // namespace asmg
