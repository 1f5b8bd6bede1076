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

#include <memory>

#include "asmg/diagnostics.hpp"
#include "asmg/error.hpp"
#include "asmg/precond.hpp"
#include "aux_oracle.hpp"
#include "test_util.hpp"

namespace asmg {
namespace {

using test::rel_frobenius;
using test::to_eigen;

std::shared_ptr<const Hierarchy> make_hierarchy(int n,
                                                const CoefficientField& f,
                                                const HierarchyConfig& cfg) {
  return std::make_shared<const Hierarchy>(build_hierarchy(Grid(n), f, cfg));
}

AmliConfig exact_linear(int m = 0) {
  AmliConfig c;
  c.linear = true;
  c.direct_d_solve = true;
  c.smoother.sweeps = m;
  return c;
}

Eigen::MatrixXd dense_apply(const Operator& op, int n) {
  return to_eigen(dense_operator(op, n));
}

Eigen::MatrixXd dense_apply(const Operator& op, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  Vector e(cols, 0.0), y(rows);
  for (int j = 0; j < cols; ++j) {
    e[j] = 1.0;
    op(e, y);
    e[j] = 0.0;
    for (int i = 0; i < rows; ++i) m(i, j) = y[i];
  }
  return m;
}

// Eigenvalues of X = C^{-1} A built from columns of A (real parts).
Eigen::VectorXd preconditioned_spectrum(const Operator& c_inv,
                                        const CsrMatrix& a) {
  const int n = a.rows();
  Eigen::MatrixXd x(n, n);
  Vector col(n), y(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) col[i] = a.at(i, j);
    c_inv(col, y);
    for (int i = 0; i < n; ++i) x(i, j) = y[i];
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(x, false);
  Eigen::VectorXd ev = es.eigenvalues().real();
  std::sort(ev.data(), ev.data() + ev.size());
  return ev;
}

// ||E||_A for E given as a dense matrix.
double a_norm(const Eigen::MatrixXd& e, const Eigen::MatrixXd& a) {
  const Eigen::MatrixXd g = e.transpose() * a * e;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (g + g.transpose()), a, Eigen::EigenvaluesOnly);
  return std::sqrt(es.eigenvalues().maxCoeff());
}

TEST(Smoother, GaussSeidelMatchesTriangularSolve) {
  const CsrMatrix a = assemble_velocity(Grid(4), gen_random_field(4, 3, 1));
  const Eigen::MatrixXd ad = to_eigen(a);
  const int n = a.rows();
  const Vector b = test::random_values(n, 2);
  const Vector x0 = test::random_values(n, 3);
  const SmootherSpec gs{SmootherKind::gauss_seidel, 1, 0.0};
  const Eigen::VectorXd r = test::to_eigen(b) - ad * test::to_eigen(x0);

  Vector x = x0;
  smooth_forward(a, gs, b, x);
  Eigen::MatrixXd lower = ad.triangularView<Eigen::Lower>();
  Eigen::VectorXd ref =
      test::to_eigen(x0) + lower.triangularView<Eigen::Lower>().solve(r);
  EXPECT_LT((test::to_eigen(x) - ref).norm(), 1e-13 * ref.norm());

  x = x0;
  smooth_backward(a, gs, b, x);
  Eigen::MatrixXd upper = ad.triangularView<Eigen::Upper>();
  ref = test::to_eigen(x0) + upper.triangularView<Eigen::Upper>().solve(r);
  EXPECT_LT((test::to_eigen(x) - ref).norm(), 1e-13 * ref.norm());

  const SmootherSpec jac{SmootherKind::jacobi, 1, 0.5};
  x = x0;
  smooth_forward(a, jac, b, x);
  ref = test::to_eigen(x0) + 0.5 * ad.diagonal().cwiseInverse().asDiagonal() * r;
  EXPECT_LT((test::to_eigen(x) - ref).norm(), 1e-14 * ref.norm());
}

TEST(Smoother, IdentityMatrixSolvedInOneSweep) {
  const CsrMatrix a = CsrMatrix::identity(7);
  const Vector b = test::random_values(7, 1);
  Vector x(7, 3.0);
  smooth_forward(a, {}, b, x);
  for (int i = 0; i < 7; ++i) EXPECT_NEAR(x[i], b[i], 1e-15);
}

TEST(Smoother, SymmetrizedSmootherContractsInEnergy) {
  for (int q : {0, 6}) {
    const CsrMatrix a = assemble_velocity(Grid(8), gen_random_field(8, q, 4));
    const Eigen::MatrixXd ad = to_eigen(a);
    const int n = a.rows();
    for (SmootherSpec spec : {SmootherSpec{SmootherKind::gauss_seidel, 1},
                              SmootherSpec{SmootherKind::jacobi, 1, 0.5}}) {
      const Eigen::MatrixXd mbar_inv = dense_apply(
          [&](std::span<const double> r, std::span<double> z) {
            std::fill(z.begin(), z.end(), 0.0);
            symmetrized_smooth(a, spec, r, z);
          },
          n);
      EXPECT_LT((mbar_inv - mbar_inv.transpose()).norm(),
                1e-12 * mbar_inv.norm());
      const Eigen::MatrixXd e =
          Eigen::MatrixXd::Identity(n, n) - mbar_inv * ad;
      EXPECT_LT(a_norm(e, ad), 1.0) << "q=" << q;
    }
  }
}

TEST(Ilue, SingleSubdomainIsExact) {
  const auto h = make_hierarchy(8, gen_random_field(8, 4, 2), {1, 8, 4});
  const AsmgPreconditioner p(h, {});
  const CsrMatrix& d = h->level(0).a_hat11;
  const Vector x = test::random_values(d.rows(), 5);
  Vector y(d.rows());
  p.ilue(0).apply(d * x, y);
  for (int i = 0; i < d.rows(); ++i) EXPECT_NEAR(y[i], x[i], 1e-9);

  ApplyStats stats;
  Vector sol(d.rows());
  p.solve_d11(0, d * x, sol, &stats);
  EXPECT_EQ(stats.max_inner_iterations, 1);
}

TEST(Ilue, SymmetricPositiveDefiniteWithOverlap) {
  const auto h = make_hierarchy(8, gen_random_field(8, 5, 3), {1, 4, 2});
  ASSERT_GT(h->level(0).covering.size(), 1u);
  const AsmgPreconditioner p(h, {});
  const Ilue& ilue = p.ilue(0);
  const Eigen::MatrixXd b_inv = dense_apply(
      [&](std::span<const double> r, std::span<double> z) { ilue.apply(r, z); },
      ilue.size());
  EXPECT_LT((b_inv - b_inv.transpose()).norm(), 1e-10 * b_inv.norm());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (b_inv + b_inv.transpose()), Eigen::EigenvaluesOnly);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);

  // B = U^T diag(U)^{-1} U.
  const Eigen::MatrixXd u = to_eigen(ilue.upper());
  EXPECT_TRUE(u.isUpperTriangular());
  const Eigen::MatrixXd bmat =
      u.transpose() * u.diagonal().cwiseInverse().asDiagonal() * u;
  EXPECT_LT(rel_frobenius(b_inv * bmat,
                          Eigen::MatrixXd::Identity(u.rows(), u.rows())),
            1e-8);
}

TEST(Ilue, InnerIterationsOnOverlappingCovering) {
  for (int q = 0; q <= 6; ++q) {
    const auto h = make_hierarchy(16, gen_random_field(16, q, 9), {1, 8, 4});
    const AsmgPreconditioner p(h, {});
    const int n1 = h->level(0).num_fine();
    ApplyStats stats;
    Vector x(n1);
    p.solve_d11(0, test::random_values(n1, q + 1), x, &stats);
    EXPECT_LE(stats.max_inner_iterations, 10) << "q=" << q;
  }
}

TEST(Ilue, StallReported) {
  const auto h = make_hierarchy(16, gen_random_field(16, 6, 9), {1, 8, 4});
  AmliConfig cfg;
  cfg.inner_tol = 1e-14;
  cfg.inner_max_iter = 1;
  const AsmgPreconditioner p(h, cfg);
  const int n1 = h->level(0).num_fine();
  Vector x(n1);
  try {
    p.solve_d11(0, test::random_values(n1, 1), x, nullptr);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::stall);
  }
}

TEST(Transfer, LeftInverseOfExtension) {
  const auto h = make_hierarchy(16, gen_random_field(16, 3, 1), {1, 8, 4});
  const AsmgPreconditioner p(h, exact_linear());
  const AuxLevel& lv = h->level(0);
  const Vector v = test::random_values(lv.transform.size(), 2);
  Vector aux(lv.aux_size()), back(v.size());
  aux_extend(lv, v, aux);
  p.apply_pi(0, aux, back, nullptr);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(back[i], v[i], 1e-10);
}

TEST(Transfer, ProjectionIsIdempotent) {
  const auto h = make_hierarchy(16, gen_random_field(16, 6, 1), {1, 8, 4});
  const AsmgPreconditioner p(h, exact_linear());
  const AuxLevel& lv = h->level(0);
  auto pi = [&](const Vector& x) {
    Vector hat(lv.transform.size()), out(x.size());
    p.apply_pi(0, x, hat, nullptr);
    aux_extend(lv, hat, out);
    return out;
  };
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Vector v = test::random_values(lv.aux_size(), seed);
    const Vector pv = pi(v);
    const Vector ppv = pi(pv);
    double num = 0.0;
    for (std::size_t i = 0; i < pv.size(); ++i)
      num += (ppv[i] - pv[i]) * (ppv[i] - pv[i]);
    EXPECT_LE(std::sqrt(num) / norm2(pv), 1e-8);
  }
}

TEST(Transfer, MatchesDenseOracle) {
  const Grid g(8);
  const CoefficientField f = gen_random_field(8, 2, 6);
  const auto h = make_hierarchy(8, f, {1, 4, 2});
  const AsmgPreconditioner p(h, exact_linear());
  const AuxLevel& lv = h->level(0);
  const test::AuxOracle o =
      test::build_aux_oracle(g, f, lv.covering, lv.transform);
  const Eigen::MatrixXd pi_ref = test::dense_pi(o);
  const Eigen::MatrixXd pi = dense_apply(
      [&](std::span<const double> x, std::span<double> y) {
        p.apply_pi(0, x, y, nullptr);
      },
      lv.transform.size(), lv.aux_size());
  EXPECT_LT(rel_frobenius(pi, pi_ref), 1e-10);
  const Eigen::MatrixXd pit = dense_apply(
      [&](std::span<const double> x, std::span<double> y) {
        p.apply_pi_t(0, x, y, nullptr);
      },
      lv.aux_size(), lv.transform.size());
  EXPECT_LT(rel_frobenius(pit, pi_ref.transpose()), 1e-10);
}

TEST(AuxCorrection, SingleSubdomainIsExactInverse) {
  const auto h = make_hierarchy(8, gen_random_field(8, 5, 1), {1, 8, 4});
  const AsmgPreconditioner p(h, {});
  const CsrMatrix& a = h->matrix(0);
  const Vector x = test::random_values(a.rows(), 3);
  Vector z(a.rows());
  p.apply(a * x, z);
  for (int i = 0; i < a.rows(); ++i) EXPECT_NEAR(z[i], x[i], 1e-6 * norm2(x));
}

TEST(AuxCorrection, EliminatedFormMatchesLiteralSteps) {
  for (int q : {0, 3}) {
    const auto h = make_hierarchy(16, gen_random_field(16, q, 2), {2, 8, 4});
    AmliConfig lit = exact_linear(1);
    lit.literal_steps = true;
    const AsmgPreconditioner a(h, exact_linear(1)), b(h, lit);
    const Vector r = test::random_values(h->matrix(0).rows(), 4);
    Vector za(r.size()), zb(r.size());
    a.apply(r, za);
    b.apply(r, zb);
    double num = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
      num += (za[i] - zb[i]) * (za[i] - zb[i]);
    EXPECT_LT(std::sqrt(num) / norm2(za), 1e-8) << "q=" << q;
  }
}

TEST(AuxCorrection, SpectralEquivalenceWithIndependentCPi) {
  for (int q : {0, 3, 6}) {
    const Grid g(8);
    const CoefficientField f = gen_random_field(8, q, 11);
    const auto h = make_hierarchy(8, f, {1, 4, 2});
    const AsmgPreconditioner p(h, exact_linear());
    const AuxLevel& lv = h->level(0);
    const double c_pi = test::dense_c_pi(
        test::build_aux_oracle(g, f, lv.covering, lv.transform));
    const Eigen::VectorXd ev = preconditioned_spectrum(p.as_operator(),
                                                       h->matrix(0));
    EXPECT_GE(ev(0), 1.0 - 1e-8) << "q=" << q;
    EXPECT_LE(ev(ev.size() - 1), c_pi + 1e-6) << "q=" << q;
    EXPECT_NEAR(ev(ev.size() - 1), c_pi, 1e-6) << "q=" << q;
  }
}

// Rounding in the sparse D-solves grows with the contrast, so the 1e-10
// bound applies to moderate contrast and a looser one to q = 6.
TEST(AuxCorrection, LinearOperatorsAreSymmetric) {
  for (const auto& [q, tol] : {std::pair{0, 1e-10}, std::pair{2, 1e-10},
                               std::pair{6, 1e-8}}) {
    const auto h = make_hierarchy(16, gen_random_field(16, q, 5), {2, 8, 4});
    const int n = h->matrix(0).rows();
    for (int m : {0, 1, 2}) {
      const AsmgPreconditioner p(h, exact_linear(m));
      const Eigen::MatrixXd b_inv = dense_apply(p.as_operator(), n);
      EXPECT_LT((b_inv - b_inv.transpose()).norm(), tol * b_inv.norm())
          << "q=" << q << " m=" << m;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
          0.5 * (b_inv + b_inv.transpose()), Eigen::EigenvaluesOnly);
      EXPECT_GT(es.eigenvalues().minCoeff(), 0.0) << "q=" << q << " m=" << m;
    }
  }
}

TEST(AuxCorrection, NoSmoothingEqualsAuxCorrection) {
  const auto h = make_hierarchy(16, gen_random_field(16, 2, 5), {1, 8, 4});
  const AsmgPreconditioner p(h, {});
  const int n = h->level(0).transform.size();
  const Vector d = test::random_values(n, 1);
  Vector vb(n), vc(n);
  p.apply_b(0, d, vb, nullptr);
  p.apply_c(0, d, vc, nullptr);
  EXPECT_EQ(vb, vc);
}

TEST(AuxCorrection, RelaxationAboveCPiGivesContraction) {
  for (int q : {0, 6}) {
    const auto h = make_hierarchy(16, gen_random_field(16, q, 8), {1, 8, 4});
    AmliConfig cfg = exact_linear();
    const double c_pi = estimate_c_pi(AsmgPreconditioner(h, cfg), 0).value;
    cfg.tau = c_pi;
    const AsmgPreconditioner p(h, cfg);
    const int n = h->matrix(0).rows();
    const Eigen::MatrixXd a = to_eigen(h->matrix(0));
    const Eigen::MatrixXd e =
        Eigen::MatrixXd::Identity(n, n) - dense_apply(p.as_operator(), n) * a;
    EXPECT_LT(a_norm(e, a), 1.0) << "q=" << q;
  }
}

TEST(AuxCorrection, ConfigValidation) {
  const auto h = make_hierarchy(8, CoefficientField::constant(8), {1, 8, 4});
  AmliConfig bad;
  bad.nu = 0;
  EXPECT_THROW(AsmgPreconditioner(h, bad), Error);
  bad = {};
  bad.tau = 0.5;
  EXPECT_THROW(AsmgPreconditioner(h, bad), Error);
  EXPECT_THROW(AsmgPreconditioner(nullptr, {}), Error);
}

TEST(AuxCorrection, StatsCountInnerSolves) {
  const auto h = make_hierarchy(32, gen_random_field(32, 3, 2), {3, 8, 4});
  AmliConfig cfg;
  cfg.nu = 2;
  const AsmgPreconditioner p(h, cfg);
  ApplyStats stats;
  const Vector r = test::random_values(h->matrix(0).rows(), 1);
  Vector z(r.size());
  p.apply(r, z, &stats);
  // Two D-solves per auxiliary correction; W-cycle visits level 1 twice
  // and level 2 four times.
  EXPECT_EQ(stats.inner_solves, 2 * (1 + 2 + 4));
  EXPECT_GT(stats.max_inner_iterations, 0);
}

}  // namespace
}  // namespace asmg
