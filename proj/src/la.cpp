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

#include "asmg/la.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <string>

#include "asmg/error.hpp"

namespace asmg {

namespace {

void require(bool ok, const char* what) {
  if (!ok) fail(ErrorKind::dimension, what);
}

}  // namespace

double dot(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), "dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
  require(x.size() == y.size(), "axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void scale(double a, std::span<double> x) {
  for (double& v : x) v *= a;
}

// ---------------------------------------------------------------------------
// CsrMatrix

CsrMatrix::CsrMatrix(int rows, int cols, std::vector<int> row_ptr,
                     std::vector<int> col_idx, std::vector<double> values)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)), values_(std::move(values)) {
  require(static_cast<int>(row_ptr_.size()) == rows_ + 1,
          "CsrMatrix: row_ptr size");
  require(col_idx_.size() == values_.size(), "CsrMatrix: col/value size");
  require(row_ptr_.back() == static_cast<int>(values_.size()),
          "CsrMatrix: row_ptr end");
}

CsrMatrix CsrMatrix::from_triplets(int rows, int cols,
                                   std::vector<Triplet> entries) {
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      fail(ErrorKind::dimension, "from_triplets: index out of range");
  }
  // Stable sort keeps the summation order of duplicates deterministic.
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });
  std::vector<int> row_ptr(rows + 1, 0);
  std::vector<int> col_idx;
  std::vector<double> values;
  col_idx.reserve(entries.size());
  values.reserve(entries.size());
  std::size_t k = 0;
  for (int i = 0; i < rows; ++i) {
    while (k < entries.size() && entries[k].row == i) {
      const int j = entries[k].col;
      double s = 0.0;
      while (k < entries.size() && entries[k].row == i &&
             entries[k].col == j) {
        s += entries[k].value;
        ++k;
      }
      if (s != 0.0) {
        col_idx.push_back(j);
        values.push_back(s);
      }
    }
    row_ptr[i + 1] = static_cast<int>(values.size());
  }
  return CsrMatrix(rows, cols, std::move(row_ptr), std::move(col_idx),
                   std::move(values));
}

CsrMatrix CsrMatrix::identity(int n) {
  std::vector<int> rp(n + 1), ci(n);
  std::iota(rp.begin(), rp.end(), 0);
  std::iota(ci.begin(), ci.end(), 0);
  return CsrMatrix(n, n, std::move(rp), std::move(ci), Vector(n, 1.0));
}

CsrMatrix CsrMatrix::from_dense(const DenseMatrix& d) {
  std::vector<int> rp(d.rows() + 1, 0);
  std::vector<int> ci;
  Vector v;
  for (int i = 0; i < d.rows(); ++i) {
    for (int j = 0; j < d.cols(); ++j) {
      if (d(i, j) != 0.0) {
        ci.push_back(j);
        v.push_back(d(i, j));
      }
    }
    rp[i + 1] = static_cast<int>(v.size());
  }
  return CsrMatrix(d.rows(), d.cols(), std::move(rp), std::move(ci),
                   std::move(v));
}

double CsrMatrix::at(int i, int j) const {
  const auto cols = row_cols(i);
  const auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return values_[row_ptr_[i] + (it - cols.begin())];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  require(static_cast<int>(x.size()) == cols_ &&
              static_cast<int>(y.size()) == rows_,
          "spmv: dimension mismatch");
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      s += values_[k] * x[col_idx_[k]];
    y[i] = s;
  }
}

Vector CsrMatrix::operator*(std::span<const double> x) const {
  Vector y(rows_);
  multiply(x, y);
  return y;
}

Vector CsrMatrix::diagonal() const {
  Vector d(std::min(rows_, cols_), 0.0);
  for (int i = 0; i < static_cast<int>(d.size()); ++i) d[i] = at(i, i);
  return d;
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<int> rp(cols_ + 1, 0);
  for (int j : col_idx_) ++rp[j + 1];
  std::partial_sum(rp.begin(), rp.end(), rp.begin());
  std::vector<int> ci(values_.size());
  Vector v(values_.size());
  std::vector<int> next(rp.begin(), rp.end() - 1);
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const int pos = next[col_idx_[k]]++;
      ci[pos] = i;
      v[pos] = values_[k];
    }
  }
  return CsrMatrix(cols_, rows_, std::move(rp), std::move(ci), std::move(v));
}

DenseMatrix CsrMatrix::to_dense() const {
  DenseMatrix d(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      d(i, col_idx_[k]) = values_[k];
  return d;
}

double CsrMatrix::asymmetry() const {
  if (rows_ != cols_) return INFINITY;
  double amax = 0.0, dmax = 0.0;
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      amax = std::max(amax, std::abs(values_[k]));
      dmax = std::max(dmax, std::abs(values_[k] - at(col_idx_[k], i)));
    }
  }
  return amax > 0.0 ? dmax / amax : 0.0;
}

// Row-by-row sparse product with a dense accumulator (Gustavson).
CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b) {
  require(a.cols() == b.rows(), "multiply: dimension mismatch");
  std::vector<int> rp(a.rows() + 1, 0);
  std::vector<int> ci;
  Vector v;
  Vector acc(b.cols(), 0.0);
  std::vector<char> used(b.cols(), 0);
  std::vector<int> pattern;
  for (int i = 0; i < a.rows(); ++i) {
    pattern.clear();
    const auto acols = a.row_cols(i);
    const auto avals = a.row_vals(i);
    for (std::size_t ka = 0; ka < acols.size(); ++ka) {
      const int r = acols[ka];
      const auto bcols = b.row_cols(r);
      const auto bvals = b.row_vals(r);
      for (std::size_t kb = 0; kb < bcols.size(); ++kb) {
        const int j = bcols[kb];
        if (!used[j]) {
          used[j] = 1;
          pattern.push_back(j);
        }
        acc[j] += avals[ka] * bvals[kb];
      }
    }
    std::sort(pattern.begin(), pattern.end());
    for (int j : pattern) {
      if (acc[j] != 0.0) {
        ci.push_back(j);
        v.push_back(acc[j]);
      }
      acc[j] = 0.0;
      used[j] = 0;
    }
    rp[i + 1] = static_cast<int>(v.size());
  }
  return CsrMatrix(a.rows(), b.cols(), std::move(rp), std::move(ci),
                   std::move(v));
}

CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b, double alpha,
              double beta) {
  require(a.rows() == b.rows() && a.cols() == b.cols(),
          "add: dimension mismatch");
  std::vector<Triplet> t;
  t.reserve(a.nnz() + b.nnz());
  for (int i = 0; i < a.rows(); ++i) {
    const auto ac = a.row_cols(i);
    const auto av = a.row_vals(i);
    for (std::size_t k = 0; k < ac.size(); ++k)
      t.push_back({i, ac[k], alpha * av[k]});
    const auto bc = b.row_cols(i);
    const auto bv = b.row_vals(i);
    for (std::size_t k = 0; k < bc.size(); ++k)
      t.push_back({i, bc[k], beta * bv[k]});
  }
  return CsrMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}

CsrMatrix triple_product(const CsrMatrix& r, const CsrMatrix& a) {
  require(a.rows() == a.cols() && a.cols() == r.rows(),
          "triple_product: dimension mismatch");
  const CsrMatrix rt = r.transpose();
  const CsrMatrix c = multiply(rt, multiply(a, r));
  if (a.asymmetry() != 0.0) return c;
  // fl(x + y) == fl(y + x), so the average is exactly symmetric.
  const CsrMatrix ct = c.transpose();
  return add(c, ct, 0.5, 0.5);
}

CsrMatrix extract(const CsrMatrix& a, std::span<const int> rows,
                  std::span<const int> cols) {
  std::vector<int> col_map(a.cols(), -1);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    require(cols[k] >= 0 && cols[k] < a.cols(), "extract: column index");
    col_map[cols[k]] = static_cast<int>(k);
  }
  std::vector<Triplet> t;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    require(rows[k] >= 0 && rows[k] < a.rows(), "extract: row index");
    const auto ac = a.row_cols(rows[k]);
    const auto av = a.row_vals(rows[k]);
    for (std::size_t q = 0; q < ac.size(); ++q) {
      const int j = col_map[ac[q]];
      if (j >= 0) t.push_back({static_cast<int>(k), j, av[q]});
    }
  }
  return CsrMatrix::from_triplets(static_cast<int>(rows.size()),
                                  static_cast<int>(cols.size()), std::move(t));
}

CsrMatrix permute_sym(const CsrMatrix& a, std::span<const int> perm) {
  require(a.rows() == a.cols() && static_cast<int>(perm.size()) == a.rows(),
          "permute_sym: dimension mismatch");
  return extract(a, perm, perm);
}

std::vector<int> inverse_permutation(std::span<const int> perm) {
  std::vector<int> inv(perm.size(), -1);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    require(perm[i] >= 0 && perm[i] < static_cast<int>(perm.size()) &&
                inv[perm[i]] < 0,
            "inverse_permutation: not a permutation");
    inv[perm[i]] = static_cast<int>(i);
  }
  return inv;
}

void write_matrix_market(std::ostream& os, const CsrMatrix& a) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  os << std::setprecision(17);
  for (int i = 0; i < a.rows(); ++i) {
    const auto c = a.row_cols(i);
    const auto v = a.row_vals(i);
    for (std::size_t k = 0; k < c.size(); ++k)
      os << i + 1 << ' ' << c[k] + 1 << ' ' << v[k] << '\n';
  }
}

// ---------------------------------------------------------------------------
// DenseMatrix

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix d(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = 1.0;
  return d;
}

void DenseMatrix::multiply(std::span<const double> x,
                           std::span<double> y) const {
  require(static_cast<int>(x.size()) == cols_ &&
              static_cast<int>(y.size()) == rows_,
          "dense multiply: dimension mismatch");
  for (int i = 0; i < rows_; ++i) {
    const double* a = data_.data() + static_cast<std::size_t>(i) * cols_;
    double s = 0.0;
    for (int j = 0; j < cols_; ++j) s += a[j] * x[j];
    y[i] = s;
  }
}

void DenseMatrix::multiply_transposed(std::span<const double> x,
                                      std::span<double> y) const {
  require(static_cast<int>(x.size()) == rows_ &&
              static_cast<int>(y.size()) == cols_,
          "dense multiply_transposed: dimension mismatch");
  std::fill(y.begin(), y.end(), 0.0);
  for (int i = 0; i < rows_; ++i) {
    const double* a = data_.data() + static_cast<std::size_t>(i) * cols_;
    const double xi = x[i];
    for (int j = 0; j < cols_; ++j) y[j] += a[j] * xi;
  }
}

Vector DenseMatrix::operator*(std::span<const double> x) const {
  Vector y(rows_);
  multiply(x, y);
  return y;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

void DenseMatrix::symmetrize() {
  require(rows_ == cols_, "symmetrize: not square");
  for (int i = 0; i < rows_; ++i) {
    for (int j = i + 1; j < cols_; ++j) {
      const double s = 0.5 * ((*this)(i, j) + (*this)(j, i));
      (*this)(i, j) = s;
      (*this)(j, i) = s;
    }
  }
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.cols() == b.rows(), "dense product: dimension mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(),
          "dense difference: dimension mismatch");
  DenseMatrix c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (std::size_t k = 0; k < cd.size(); ++k) cd[k] -= bd[k];
  return c;
}

// ---------------------------------------------------------------------------
// Factorizations

Cholesky::Cholesky(const DenseMatrix& a) : l_(a.rows(), a.cols()) {
  require(a.rows() == a.cols(), "cholesky: not square");
  const int n = a.rows();
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= l_(j, k) * l_(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) {
      fail(ErrorKind::factorization,
           "cholesky: non-positive pivot " + std::to_string(d) +
               " at index " + std::to_string(j));
    }
    const double ljj = std::sqrt(d);
    l_(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      const double* li = &l_(i, 0);
      const double* lj = &l_(j, 0);
      for (int k = 0; k < j; ++k) s -= li[k] * lj[k];
      l_(i, j) = s / ljj;
    }
  }
}

void Cholesky::solve_in_place(std::span<double> b) const {
  const int n = l_.rows();
  require(static_cast<int>(b.size()) == n, "cholesky solve: length");
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    const double* li = l_.row(i).data();
    for (int k = 0; k < i; ++k) s -= li[k] * b[k];
    b[i] = s / li[i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= l_(k, i) * b[k];
    b[i] = s / l_(i, i);
  }
}

Vector Cholesky::solve(std::span<const double> b) const {
  Vector x(b.begin(), b.end());
  solve_in_place(x);
  return x;
}

DenseMatrix Cholesky::solve(const DenseMatrix& b) const {
  require(b.rows() == size(), "cholesky block solve: rows");
  DenseMatrix x(b.rows(), b.cols());
  Vector col(b.rows());
  for (int j = 0; j < b.cols(); ++j) {
    for (int i = 0; i < b.rows(); ++i) col[i] = b(i, j);
    solve_in_place(col);
    for (int i = 0; i < b.rows(); ++i) x(i, j) = col[i];
  }
  return x;
}

Ldlt ldlt(const DenseMatrix& a) {
  require(a.rows() == a.cols(), "ldlt: not square");
  const int n = a.rows();
  Ldlt f{DenseMatrix::identity(n), Vector(n, 0.0)};
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k)
      d -= f.unit_lower(j, k) * f.unit_lower(j, k) * f.diag[k];
    if (d == 0.0 || !std::isfinite(d)) {
      fail(ErrorKind::factorization,
           "ldlt: zero pivot at index " + std::to_string(j));
    }
    f.diag[j] = d;
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k)
        s -= f.unit_lower(i, k) * f.unit_lower(j, k) * f.diag[k];
      f.unit_lower(i, j) = s / d;
    }
  }
  return f;
}

Lu::Lu(const DenseMatrix& a) : lu_(a), pivots_(a.rows()) {
  require(a.rows() == a.cols(), "lu: not square");
  const int n = a.rows();
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
    pivots_[k] = p;
    if (lu_(p, k) == 0.0) {
      fail(ErrorKind::factorization,
           "lu: singular matrix at column " + std::to_string(k));
    }
    if (p != k)
      for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
    for (int i = k + 1; i < n; ++i) {
      const double m = lu_(i, k) / lu_(k, k);
      lu_(i, k) = m;
      for (int j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
    }
  }
}

void Lu::solve_in_place(std::span<double> b) const {
  const int n = lu_.rows();
  require(static_cast<int>(b.size()) == n, "lu solve: length");
  for (int k = 0; k < n; ++k) std::swap(b[k], b[pivots_[k]]);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < i; ++k) b[i] -= lu_(i, k) * b[k];
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) b[i] -= lu_(i, k) * b[k];
    b[i] /= lu_(i, i);
  }
}

Vector Lu::solve(std::span<const double> b) const {
  Vector x(b.begin(), b.end());
  solve_in_place(x);
  return x;
}

}  // namespace asmg
