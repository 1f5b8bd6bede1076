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

#include <array>
#include <cmath>
#include <functional>

#include "asmg/coeff.hpp"
#include "asmg/error.hpp"
#include "asmg/mesh_fem.hpp"
#include "test_util.hpp"

namespace asmg {
namespace {

using test::rel_frobenius;
using test::to_eigen;

// RT0 shape functions on the cell [x0, x0+h] x [y0, y0+h], each with unit
// normal flux along the global +x / +y direction on its own edge.
struct Shape {
  std::function<std::array<double, 2>(double, double)> value;
  double divergence;
};

std::array<Shape, 4> cell_shapes(double x0, double y0, double h) {
  return {{
      {[=](double x, double) { return std::array{(x0 + h - x) / h, 0.0}; },
       -1.0 / h},
      {[=](double x, double) { return std::array{(x - x0) / h, 0.0}; },
       1.0 / h},
      {[=](double, double y) { return std::array{0.0, (y0 + h - y) / h}; },
       -1.0 / h},
      {[=](double, double y) { return std::array{0.0, (y - y0) / h}; },
       1.0 / h},
  }};
}

// 2x2 Gauss rule: exact for the bilinear integrands involved.
Eigen::MatrixXd quadrature_element(double alpha, double x0, double y0,
                                   double h, bool mass, bool divdiv) {
  const auto phi = cell_shapes(x0, y0, h);
  const double g = 0.5 / std::sqrt(3.0);
  const std::array<double, 2> pts{0.5 - g, 0.5 + g};
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      double s = 0.0;
      for (double px : pts) {
        for (double py : pts) {
          const double x = x0 + px * h;
          const double y = y0 + py * h;
          const auto u = phi[a].value(x, y);
          const auto v = phi[b].value(x, y);
          const double w = 0.25 * h * h;
          if (mass) s += w * alpha * (u[0] * v[0] + u[1] * v[1]);
          if (divdiv) s += w * phi[a].divergence * phi[b].divergence;
        }
      }
      m(a, b) = s;
    }
  }
  return m;
}

std::array<int, 4> oracle_edges(int n, int i, int j) {
  const int v0 = j * (n + 1) + i;
  const int h0 = n * (n + 1) + j * n + i;
  return {v0, v0 + 1, h0, h0 + n};
}

Eigen::MatrixXd oracle_velocity(const CoefficientField& f, bool mass,
                                bool divdiv) {
  const int n = f.n();
  const double h = 1.0 / n;
  const int ne = 2 * n * (n + 1);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(ne, ne);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const auto e = oracle_edges(n, i, j);
      const Eigen::MatrixXd loc =
          quadrature_element(f.alpha(j * n + i), i * h, j * h, h, mass, divdiv);
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) a(e[r], e[c]) += loc(r, c);
    }
  }
  return a;
}

TEST(Grid, EdgeAndCellCounts) {
  const Grid g(4);
  EXPECT_EQ(g.num_edges(), 40);
  EXPECT_EQ(g.num_cells(), 16);
  for (int n : {1, 2, 3, 8, 64}) {
    const Grid gn(n);
    EXPECT_EQ(gn.num_edges(), 2 * n * (n + 1));
  }
}

TEST(Grid, CellEdgesFollowNumbering) {
  const Grid g(4);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      const CellEdges ce = g.cell_edges(g.cell(i, j));
      const auto expect = oracle_edges(4, i, j);
      for (int k = 0; k < 4; ++k) EXPECT_EQ(ce.edge[k], expect[k]);
      EXPECT_EQ(ce.sign, (std::array<double, 4>{-1.0, 1.0, -1.0, 1.0}));
    }
  }
}

TEST(Grid, BoundaryEdgesHaveOneCell) {
  const Grid g(4);
  int boundary = 0;
  for (int e = 0; e < g.num_edges(); ++e) {
    const EdgeInfo info = g.edge_info(e);
    const int cells = (info.cells[0] >= 0) + (info.cells[1] >= 0);
    EXPECT_EQ(cells, info.boundary ? 1 : 2);
    boundary += info.boundary;
  }
  EXPECT_EQ(boundary, 16);
}

TEST(Grid, BuildGridRejectsNonPowerOfTwo) {
  EXPECT_THROW(build_grid(12), Error);
  EXPECT_THROW(build_grid(1), Error);
  EXPECT_NO_THROW(build_grid(16));
}

TEST(LocalMatrices, MassMatchesQuadrature) {
  for (double alpha : {1.0, 0.37, 1e-6}) {
    for (double h : {1.0, 0.25, 1.0 / 64}) {
      const Eigen::MatrixXd oracle =
          quadrature_element(alpha, 0.0, 0.0, h, true, false);
      EXPECT_LT(rel_frobenius(to_eigen(local_mass_matrix(alpha, h)), oracle),
                1e-14);
    }
  }
}

TEST(LocalMatrices, UnitMassEntries) {
  const DenseMatrix m = local_mass_matrix(1.0, 1.0);
  EXPECT_NEAR(m(0, 0), 1.0 / 3.0, 1e-16);
  EXPECT_NEAR(m(0, 1), 1.0 / 6.0, 1e-16);
  EXPECT_NEAR(m(2, 3), 1.0 / 6.0, 1e-16);
  EXPECT_EQ(m(0, 2), 0.0);
  EXPECT_EQ(m(1, 3), 0.0);
}

TEST(LocalMatrices, DivDivEntriesAreUnit) {
  const DenseMatrix d = local_divdiv_matrix();
  const Eigen::MatrixXd oracle =
      quadrature_element(1.0, 0.0, 0.0, 0.125, false, true);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      EXPECT_EQ(std::abs(d(i, j)), 1.0);
      EXPECT_NEAR(d(i, j), oracle(i, j), 1e-14);
    }
  }
}

TEST(LocalMatrices, RejectsNonPositiveAlpha) {
  EXPECT_THROW(local_velocity_matrix(0.0, 0.5), Error);
  EXPECT_THROW(local_velocity_matrix(-1.0, 0.5), Error);
}

TEST(Assembly, VelocityMatchesQuadratureOracle) {
  const CoefficientField one = CoefficientField::constant(2);
  EXPECT_LT(rel_frobenius(to_eigen(assemble_velocity(Grid(2), one)),
                          oracle_velocity(one, true, true)),
            1e-14);
  const CoefficientField f = gen_random_field(4, 3, 7);
  EXPECT_LT(rel_frobenius(to_eigen(assemble_velocity(Grid(4), f)),
                          oracle_velocity(f, true, true)),
            1e-14);
}

TEST(Assembly, VelocityIsSpdForGeneratedFields) {
  for (int n : {4, 8, 16}) {
    for (int q : {0, 3, 6}) {
      for (const CoefficientField& f :
           {gen_binary_islands(n, q), gen_random_field(n, q, 11)}) {
        const Eigen::MatrixXd a = to_eigen(assemble_velocity(Grid(n), f));
        EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(a).info(), Eigen::Success)
            << "n=" << n << " q=" << q;
      }
    }
  }
}

TEST(Assembly, MassPartLinearInAlpha) {
  const Grid g(8);
  const CoefficientField f = gen_random_field(8, 4, 3);
  Vector scaled = f.alpha();
  for (double& a : scaled) a *= 10.0;
  const CoefficientField f10(8, scaled, FieldSource::random);
  const Eigen::MatrixXd diff =
      to_eigen(assemble_velocity(g, f10)) - to_eigen(assemble_velocity(g, f));
  EXPECT_LT(rel_frobenius(diff, 9.0 * to_eigen(assemble_velocity_mass(g, f))),
            1e-13);

  const CoefficientField f2 = gen_random_field(8, 2, 5);
  Vector sum = f.alpha();
  for (std::size_t c = 0; c < sum.size(); ++c) sum[c] += f2.alpha()[c];
  const CoefficientField fs(8, sum, FieldSource::random);
  EXPECT_LT(rel_frobenius(to_eigen(assemble_velocity_mass(g, fs)),
                          to_eigen(assemble_velocity_mass(g, f)) +
                              to_eigen(assemble_velocity_mass(g, f2))),
            1e-14);
}

TEST(Saddle, StructureOnTwoByTwo) {
  const SaddleSystem s = assemble_saddle(Grid(2), CoefficientField::constant(2));
  const Eigen::MatrixXd k = to_eigen(s.assembled());
  EXPECT_EQ(k.rows(), 12 + 4);
  EXPECT_EQ((k - k.transpose()).norm(), 0.0);
  int zero_diag = 0;
  for (int i = 12; i < 16; ++i) zero_diag += k(i, i) == 0.0;
  EXPECT_EQ(zero_diag, 4);
  EXPECT_TRUE(k.bottomRightCorner(4, 4).isZero(0.0));
}

TEST(Saddle, DivergenceRowsAndPressureMass) {
  const Grid g(4);
  const SaddleSystem s = assemble_saddle(g, CoefficientField::constant(4));
  const double h = g.h();
  for (int c = 0; c < g.num_cells(); ++c) {
    const CellEdges ce = g.cell_edges(c);
    for (int k = 0; k < 4; ++k)
      EXPECT_DOUBLE_EQ(s.divergence.at(c, ce.edge[k]), ce.sign[k] * h);
    EXPECT_EQ(s.divergence.row_cols(c).size(), 4u);
    EXPECT_DOUBLE_EQ(s.pressure_mass[c], h * h);
  }
}

TEST(Saddle, VelocityEqualsMassPlusPenalizedDivergence) {
  for (const CoefficientField& f :
       {CoefficientField::constant(4), gen_random_field(4, 5, 9)}) {
    const SaddleSystem s = assemble_saddle(Grid(4), f);
    const Eigen::MatrixXd b = to_eigen(s.divergence);
    const Eigen::VectorXd mp = test::to_eigen(s.pressure_mass);
    const Eigen::MatrixXd rhs =
        to_eigen(s.mass) + b.transpose() * mp.cwiseInverse().asDiagonal() * b;
    EXPECT_LT(rel_frobenius(to_eigen(s.velocity), rhs), 1e-14);
  }
}

TEST(Saddle, ApplyMatchesAssembled) {
  const SaddleSystem s = assemble_saddle(Grid(4), gen_random_field(4, 2, 1));
  const Vector x = test::random_values(s.size(), 3);
  Vector y(s.size());
  s.apply(x, y);
  const Eigen::VectorXd ref = to_eigen(s.assembled()) * test::to_eigen(x);
  EXPECT_LT((test::to_eigen(y) - ref).norm() / ref.norm(), 1e-15);
}

TEST(Saddle, PressureRhsIsNegatedSource) {
  const Grid g(8);
  const Vector f = assemble_rhs(g, 1.0);
  const SaddleSystem s = assemble_saddle(g, CoefficientField::constant(8), f);
  for (int c = 0; c < g.num_cells(); ++c)
    EXPECT_DOUBLE_EQ(s.rhs_p[c], -f[c] * g.h() * g.h());
  for (double v : s.rhs_u) EXPECT_EQ(v, 0.0);
}

int count_value(const Vector& v, double x) {
  int k = 0;
  for (double e : v) k += e == x;
  return k;
}

TEST(SourceTerm, ZeroAmplitude) {
  for (double v : assemble_rhs(Grid(16), 0.0)) EXPECT_EQ(v, 0.0);
}

TEST(SourceTerm, BoxCellCounts) {
  const Vector f10 = assemble_rhs(Grid(10), 1.0);
  EXPECT_EQ(count_value(f10, 1.0), 1);
  EXPECT_EQ(count_value(f10, -1.0), 1);
  EXPECT_EQ(count_value(f10, 0.0), 98);
  // (2,7) is the cell [0.2,0.3]x[0.7,0.8].
  EXPECT_EQ(f10[7 * 10 + 2], 1.0);
  EXPECT_EQ(f10[2 * 10 + 7], -1.0);

  const Vector f20 = assemble_rhs(Grid(20), 1.0);
  EXPECT_EQ(count_value(f20, 1.0), 4);
  EXPECT_EQ(count_value(f20, -1.0), 4);
  EXPECT_EQ(count_value(f20, 0.0), 392);
}

TEST(SourceTerm, CellAveragesIntegrateToBoxArea) {
  for (int n : {8, 16, 32, 64}) {
    const Grid g(n);
    const Vector f = assemble_rhs(g, 2.5);
    double pos = 0.0, neg = 0.0;
    for (double v : f) (v > 0 ? pos : neg) += v * g.h() * g.h();
    EXPECT_NEAR(pos, 2.5 * 0.01, 1e-14) << n;
    EXPECT_NEAR(neg, -2.5 * 0.01, 1e-14) << n;
  }
}

}  // namespace
}  // namespace asmg
