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

#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <sstream>

#include "asmg/error.hpp"
#include "asmg/la.hpp"
#include "test_util.hpp"

namespace asmg {
namespace {

using test::rel_frobenius;
using test::to_eigen;

CsrMatrix random_sparse(int rows, int cols, double density,
                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Triplet> t;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (std::abs(u(rng)) < density) t.push_back({i, j, u(rng)});
  return CsrMatrix::from_triplets(rows, cols, std::move(t));
}

CsrMatrix random_sparse_symmetric(int n, double density, std::uint64_t seed) {
  const CsrMatrix a = random_sparse(n, n, density, seed);
  return add(a, a.transpose());
}

TEST(Csr, FromTripletsSumsDuplicatesAndDropsZeros) {
  const CsrMatrix a = CsrMatrix::from_triplets(
      2, 3, {{0, 1, 1.0}, {0, 1, 2.0}, {1, 2, 5.0}, {1, 0, 1.0}, {1, 0, -1.0}});
  EXPECT_EQ(a.nnz(), 2u);
  EXPECT_EQ(a.at(0, 1), 3.0);
  EXPECT_EQ(a.at(1, 2), 5.0);
  EXPECT_EQ(a.at(1, 0), 0.0);
  EXPECT_THROW(CsrMatrix::from_triplets(2, 2, {{2, 0, 1.0}}), Error);
}

TEST(Csr, MultiplyMatchesDenseOracle) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const CsrMatrix a = random_sparse(10, 10, 0.3, seed);
    const Vector x = test::random_values(10, seed + 100);
    const Vector y = a * x;
    const Eigen::VectorXd ref = to_eigen(a) * test::to_eigen(x);
    EXPECT_LE((test::to_eigen(y) - ref).norm(), 1e-15 * ref.norm());
  }
  const CsrMatrix r = random_sparse(64, 37, 0.1, 9);
  const Vector x = test::random_values(37, 3);
  const Eigen::VectorXd ref = to_eigen(r) * test::to_eigen(x);
  EXPECT_LE((test::to_eigen(r * x) - ref).norm(), 1e-13 * ref.norm());
}

TEST(Csr, TransposeAndDense) {
  const CsrMatrix a = random_sparse(7, 5, 0.4, 2);
  EXPECT_EQ(to_eigen(a.transpose()), to_eigen(a).transpose());
  EXPECT_EQ(test::to_eigen(a.to_dense()), to_eigen(a));
  EXPECT_EQ(to_eigen(CsrMatrix::from_dense(a.to_dense())), to_eigen(a));
}

TEST(Csr, DiagonalAndAsymmetry) {
  const CsrMatrix s = random_sparse_symmetric(12, 0.3, 4);
  EXPECT_EQ(s.asymmetry(), 0.0);
  const Vector d = s.diagonal();
  for (int i = 0; i < 12; ++i) EXPECT_EQ(d[i], s.at(i, i));
  const CsrMatrix a = CsrMatrix::from_triplets(2, 2, {{0, 1, 1.0}});
  EXPECT_GT(a.asymmetry(), 0.0);
}

TEST(SparseProducts, MultiplyAndAddMatchDense) {
  const CsrMatrix a = random_sparse(20, 15, 0.2, 5);
  const CsrMatrix b = random_sparse(15, 12, 0.2, 6);
  EXPECT_LT(rel_frobenius(to_eigen(multiply(a, b)), to_eigen(a) * to_eigen(b)),
            1e-14);
  const CsrMatrix c = random_sparse(20, 15, 0.2, 7);
  EXPECT_LT(rel_frobenius(to_eigen(add(a, c, 2.0, -0.5)),
                          2.0 * to_eigen(a) - 0.5 * to_eigen(c)),
            1e-15);
}

TEST(SparseProducts, TripleProductIdentityIsExact) {
  const CsrMatrix a = random_sparse_symmetric(30, 0.2, 8);
  const CsrMatrix p = triple_product(CsrMatrix::identity(30), a);
  EXPECT_EQ(to_eigen(p), to_eigen(a));
}

TEST(SparseProducts, TripleProductMatchesDenseAndIsSymmetric) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const CsrMatrix a = random_sparse_symmetric(40, 0.15, seed);
    const CsrMatrix r = random_sparse(40, 25, 0.1, seed + 50);
    const CsrMatrix p = triple_product(r, a);
    EXPECT_EQ(p.asymmetry(), 0.0);
    EXPECT_LT(rel_frobenius(to_eigen(p),
                            to_eigen(r).transpose() * to_eigen(a) * to_eigen(r)),
              1e-13);
  }
}

TEST(SparseProducts, PermutationRoundTrip) {
  const CsrMatrix a = random_sparse(16, 16, 0.3, 3);
  std::vector<int> perm(16);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(5));
  const CsrMatrix b = permute_sym(a, perm);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) EXPECT_EQ(b.at(i, j), a.at(perm[i], perm[j]));
  EXPECT_EQ(to_eigen(permute_sym(b, inverse_permutation(perm))), to_eigen(a));
}

TEST(SparseProducts, ExtractSubmatrix) {
  const CsrMatrix a = random_sparse(10, 10, 0.5, 11);
  const std::vector<int> rows{7, 2, 5};
  const std::vector<int> cols{1, 9, 0, 4};
  const CsrMatrix s = extract(a, rows, cols);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_EQ(s.at(i, j), a.at(rows[i], cols[j]));
}

TEST(SparseProducts, MatrixMarketHeader) {
  std::ostringstream os;
  write_matrix_market(os, CsrMatrix::identity(3));
  EXPECT_EQ(os.str().rfind("%%MatrixMarket matrix coordinate real general", 0),
            0u);
}

TEST(Dense, ProductsAndTranspose) {
  const Eigen::MatrixXd a = test::random_matrix(5, 7, 1);
  const Eigen::MatrixXd b = test::random_matrix(7, 3, 2);
  const DenseMatrix da = test::from_eigen(a);
  EXPECT_LT(rel_frobenius(to_eigen(da * test::from_eigen(b)), a * b), 1e-15);
  EXPECT_EQ(to_eigen(da.transpose()), a.transpose());
  const Vector x = test::random_values(5, 3);
  Vector y(7);
  da.multiply_transposed(x, y);
  EXPECT_LT((test::to_eigen(y) - a.transpose() * test::to_eigen(x)).norm(),
            1e-15);
}

TEST(Cholesky, IdentityReturnsRhs) {
  const Cholesky c(DenseMatrix::identity(4));
  const Vector b{1.0, -2.0, 3.5, 0.25};
  EXPECT_EQ(c.solve(b), b);
}

TEST(Cholesky, HandSolvable) {
  DenseMatrix a(2, 2);
  a(0, 0) = 4;
  a(0, 1) = a(1, 0) = 1;
  a(1, 1) = 3;
  const Vector x = Cholesky(a).solve(Vector{1.0, 2.0});
  EXPECT_NEAR(x[0], 1.0 / 11.0, 1e-16);
  EXPECT_NEAR(x[1], 7.0 / 11.0, 1e-16);
}

TEST(Cholesky, RandomSpdResidual) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Eigen::MatrixXd a = test::random_spd(50, seed);
    const Cholesky c(test::from_eigen(a));
    const Vector b = test::random_values(50, seed + 7);
    const Vector x = c.solve(b);
    const Eigen::VectorXd r = test::to_eigen(b) - a * test::to_eigen(x);
    EXPECT_LE(r.norm() / test::to_eigen(b).norm(), 1e-12);
    const Eigen::MatrixXd l = to_eigen(c.factor());
    EXPECT_LT(rel_frobenius(l * l.transpose(), a), 1e-14);
  }
}

TEST(Cholesky, BlockSolve) {
  const Eigen::MatrixXd a = test::random_spd(12, 3);
  const Eigen::MatrixXd b = test::random_matrix(12, 4, 4);
  const DenseMatrix x = Cholesky(test::from_eigen(a)).solve(test::from_eigen(b));
  EXPECT_LT(rel_frobenius(to_eigen(x), a.llt().solve(b)), 1e-13);
}

TEST(Cholesky, RejectsIndefinite) {
  DenseMatrix a = DenseMatrix::identity(3);
  a(2, 2) = -1.0;
  try {
    Cholesky c(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::factorization);
  }
}

TEST(Ldlt, ReconstructsMatrix) {
  const Eigen::MatrixXd a = test::random_spd(9, 6);
  const Ldlt f = ldlt(test::from_eigen(a));
  const Eigen::MatrixXd l = to_eigen(f.unit_lower);
  for (int i = 0; i < 9; ++i) {
    EXPECT_EQ(l(i, i), 1.0);
    for (int j = i + 1; j < 9; ++j) EXPECT_EQ(l(i, j), 0.0);
  }
  EXPECT_LT(rel_frobenius(l * test::to_eigen(f.diag).asDiagonal() *
                              l.transpose(),
                          a),
            1e-14);
}

TEST(Lu, SolvesNonsymmetric) {
  const Eigen::MatrixXd a =
      test::random_matrix(20, 20, 8) + 5.0 * Eigen::MatrixXd::Identity(20, 20);
  const Vector b = test::random_values(20, 9);
  const Vector x = Lu(test::from_eigen(a)).solve(b);
  EXPECT_LT((test::to_eigen(x) - a.lu().solve(test::to_eigen(b))).norm(),
            1e-12);
}

TEST(Vectors, Kernels) {
  Vector x{1.0, 2.0, 2.0};
  Vector y{0.5, -1.0, 4.0};
  EXPECT_EQ(dot(x, y), 6.5);
  EXPECT_EQ(norm2(x), 3.0);
  axpy(2.0, x, y);
  EXPECT_EQ(y, (Vector{2.5, 3.0, 8.0}));
  scale(0.5, x);
  EXPECT_EQ(x, (Vector{0.5, 1.0, 1.0}));
}

}  // namespace
}  // namespace asmg
