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

// Uniform n x n grids on the unit square, lowest-order Raviart-Thomas
// velocity / piecewise-constant pressure numbering, and element assembly of
// the weighted H(div) form (alpha u, v) + (div u, div v).
//
// Edge numbering: all vertical edges first, then all horizontal edges, each
// in row-major order. A vertical edge at x = i h in cell row j has index
// j (n + 1) + i; a horizontal edge at y = j h in cell column i has index
// n (n + 1) + j n + i. Every edge carries one flux DOF oriented along the
// global normal (+x for vertical edges, +y for horizontal ones); DOF values
// are average normal fluxes.

#include <array>
#include <span>
#include <vector>

#include "asmg/la.hpp"

namespace asmg {

class CoefficientField;

enum class EdgeOrientation { vertical, horizontal };

struct EdgeInfo {
  EdgeOrientation orientation;
  std::array<int, 2> cells;  // -1 where the edge lies on the boundary
  bool boundary;
};

/// Local edge order inside a cell: left, right, bottom, top.
struct CellEdges {
  std::array<int, 4> edge;
  std::array<double, 4> sign;  // outward normal relative to global normal
};

class Grid {
 public:
  /// n cells per side; n >= 1 for a single grid, powers of two when used in
  /// a hierarchy (checked there and by build_grid).
  explicit Grid(int n);

  int n() const { return n_; }
  double h() const { return 1.0 / n_; }
  int num_cells() const { return n_ * n_; }
  int num_edges() const { return 2 * n_ * (n_ + 1); }
  int num_vertical_edges() const { return n_ * (n_ + 1); }

  int cell(int i, int j) const { return j * n_ + i; }
  int vertical_edge(int i, int j) const { return j * (n_ + 1) + i; }
  int horizontal_edge(int i, int j) const {
    return num_vertical_edges() + j * n_ + i;
  }

  CellEdges cell_edges(int c) const;
  EdgeInfo edge_info(int e) const;

 private:
  int n_;
};

/// Checked construction: n >= 2 and a power of two.
Grid build_grid(int n);

bool is_power_of_two(int n);

/// 4x4 element matrix of the weighted form on a square cell of size h, in
/// local order (left, right, bottom, top) with the global DOF orientation.
DenseMatrix local_velocity_matrix(double alpha, double h);
/// Mass part only: alpha h^2 [[1/3, 1/6], [1/6, 1/3]] per direction.
DenseMatrix local_mass_matrix(double alpha, double h);
/// Div-div part only: s s^T with s the outward-sign vector (entries +-1).
DenseMatrix local_divdiv_matrix();

/// Weighted H(div) matrix A = M_alpha + B^T M_p^{-1} B.
CsrMatrix assemble_velocity(const Grid& grid, const CoefficientField& field);
CsrMatrix assemble_velocity_mass(const Grid& grid,
                                 const CoefficientField& field);

struct SaddleSystem {
  CsrMatrix mass;        // M_alpha
  CsrMatrix divergence;  // B_div, one row per cell, entries +-h
  CsrMatrix velocity;    // A
  Vector pressure_mass;  // diagonal of M_p, entries h^2
  Vector rhs_u;
  Vector rhs_p;

  int num_velocity() const { return mass.rows(); }
  int num_pressure() const { return divergence.rows(); }
  int size() const { return num_velocity() + num_pressure(); }

  /// y = [[M, -B^T], [-B, 0]] x
  void apply(std::span<const double> x, std::span<double> y) const;
  /// The full indefinite matrix as CSR (for tests and debugging).
  CsrMatrix assembled() const;
};

/// Blocks of the mixed system; the pressure right-hand side is -(f, q).
SaddleSystem assemble_saddle(const Grid& grid, const CoefficientField& field,
                             std::span<const double> source = {});

/// Cellwise averages of the two-box source: +c on [0.2,0.3]x[0.7,0.8],
/// -c on [0.7,0.8]x[0.2,0.3].
Vector assemble_rhs(const Grid& grid, double c);

}  // namespace asmg
