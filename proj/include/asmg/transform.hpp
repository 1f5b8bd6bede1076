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

// Overlapping coverings by square cell blocks, the fine/coarse splitting of
// the RT0 edge DOFs between a grid and its 2x coarsening, and the compatible
// two-level basis transformation J = P J_pm together with its subdomain
// restrictions J_i.
//
// Two-level ("hat") ordering of the DOFs of an n x n grid:
//   [0, n^2)                  edges not contained in a coarse edge (interior)
//   [n^2, n^2 + |E_H|)        half-differences, one per coarse edge
//   [n^2 + |E_H|, N)          half-sums, one per coarse edge
// Half-sums are numbered like the edges of the coarse grid, so the coarse
// block is an RT0 flux vector on the coarse grid. With u = J u_hat the pair
// (u1, u2) on a coarse edge is u1 = s + d, u2 = s - d, i.e. the hat
// coordinates are d = (u1 - u2)/2 and s = (u1 + u2)/2.

#include <array>
#include <span>
#include <vector>

#include "asmg/la.hpp"
#include "asmg/mesh_fem.hpp"

namespace asmg {

/// Square block of cells [x0, x0 + size) x [y0, y0 + size).
struct CellBox {
  int x0 = 0;
  int y0 = 0;
  int size = 0;

  bool contains(const CellBox& inner) const {
    return inner.x0 >= x0 && inner.y0 >= y0 &&
           inner.x0 + inner.size <= x0 + size &&
           inner.y0 + inner.size <= y0 + size;
  }
};

struct Subdomain {
  CellBox box;
  std::vector<int> cells;
  /// Global edge indices (ascending); R_i maps global -> local by position.
  std::vector<int> dofs;
};

class Covering {
 public:
  Covering() = default;

  int grid_n() const { return n_; }
  int sub_cells() const { return sub_; }
  int stride() const { return stride_; }
  int per_side() const { return per_side_; }
  std::size_t size() const { return subdomains_.size(); }

  const Subdomain& operator[](std::size_t i) const { return subdomains_[i]; }
  const std::vector<Subdomain>& subdomains() const { return subdomains_; }

  /// Number of subdomains containing each cell.
  const std::vector<int>& multiplicity() const { return multiplicity_; }

  /// Indices of all subdomains whose box contains `box`.
  std::vector<int> containing(const CellBox& box) const;

  friend Covering build_covering(const Grid& grid, int sub_cells, int stride);

 private:
  int n_ = 0;
  int sub_ = 0;
  int stride_ = 0;
  int per_side_ = 0;
  std::vector<Subdomain> subdomains_;
  std::vector<int> multiplicity_;
};

/// Staggered lattice of sub_cells x sub_cells blocks with the given stride.
/// A grid with at most sub_cells cells per side gets a single subdomain.
/// stride must be even (blocks stay aligned with the coarse grid), divide
/// n - sub_cells, and not exceed sub_cells.
Covering build_covering(const Grid& grid, int sub_cells, int stride);

/// Element-level contribution to an assembled matrix: a dense block acting
/// on `dofs` and supported in `box`.
struct ElementContribution {
  CellBox box;
  std::vector<int> dofs;
  DenseMatrix matrix;
};

/// One 4x4 contribution per cell of the weighted H(div) form.
std::vector<ElementContribution> fe_elements(const Grid& grid,
                                             const CoefficientField& field);

/// A_i = sum over contributions e with box in Omega_i of A_e / mu(e), where
/// mu(e) is the number of subdomains containing e; expressed on Omega_i's
/// DOFs. Then A = sum_i R_i^T A_i R_i.
std::vector<DenseMatrix> assemble_local_matrices(
    const Covering& covering, std::span<const ElementContribution> elements);

/// Level-0 convenience: local matrix of subdomain i.
DenseMatrix assemble_local(const Grid& grid, const CoefficientField& field,
                           const Covering& covering, int i);

/// Sum_i R_i^T A_i R_i.
CsrMatrix sum_local_matrices(int num_dofs, const Covering& covering,
                             std::span<const DenseMatrix> local);

struct DofSplitting {
  int num_fine = 0;    // N1 = interior + half-differences
  int num_coarse = 0;  // N2 = |E_H|
  std::vector<int> interior_edges;              // ascending
  std::vector<std::array<int, 2>> coarse_pairs;  // by coarse edge index

  int size() const { return num_fine + num_coarse; }
  int num_interior() const { return static_cast<int>(interior_edges.size()); }
};

DofSplitting build_splitting(const Grid& fine, const Grid& coarse);

/// Column of J: the (at most two) original DOFs a hat DOF expands to.
struct HatColumn {
  std::array<int, 2> index{-1, -1};
  std::array<double, 2> coeff{0.0, 0.0};
  int count = 0;
};

struct LocalTransform {
  /// Global hat indices present in the subdomain (ascending). Fine DOFs
  /// come first since they precede coarse DOFs globally.
  std::vector<int> hat_dofs;
  int num_fine = 0;
  /// Columns of J_i in local original numbering.
  std::vector<HatColumn> columns;

  int size() const { return static_cast<int>(hat_dofs.size()); }
  int num_coarse() const { return size() - num_fine; }
  /// Coarse-grid edge index of local coarse DOF k (the rows of R_{i:2}).
  int coarse_dof(int k, int num_fine_global) const {
    return hat_dofs[num_fine + k] - num_fine_global;
  }
  /// A_hat_i = J_i^T A_i J_i.
  DenseMatrix transform(const DenseMatrix& a_local) const;
};

class TwoLevelTransform {
 public:
  TwoLevelTransform() = default;

  const DofSplitting& splitting() const { return splitting_; }
  int size() const { return splitting_.size(); }
  int num_fine() const { return splitting_.num_fine; }
  int num_coarse() const { return splitting_.num_coarse; }

  /// P: position in the two-level numbering -> original edge.
  const std::vector<int>& permutation() const { return perm_; }
  const CsrMatrix& matrix() const { return j_; }
  const CsrMatrix& inverse() const { return j_inv_; }
  const std::vector<HatColumn>& columns() const { return columns_; }
  const std::vector<LocalTransform>& local() const { return local_; }

  /// u = J u_hat
  void to_original(std::span<const double> hat, std::span<double> u) const;
  /// u_hat = J^T u
  void to_hat_transposed(std::span<const double> u,
                         std::span<double> hat) const;

  friend TwoLevelTransform build_transform(const Grid& fine,
                                           const Grid& coarse,
                                           const Covering& covering);

 private:
  DofSplitting splitting_;
  std::vector<int> perm_;
  std::vector<HatColumn> columns_;
  CsrMatrix j_;
  CsrMatrix j_inv_;
  std::vector<LocalTransform> local_;
};

/// Builds J and every J_i and verifies R_i J = J_i R_hat_i entrywise;
/// a violation throws ErrorKind::internal.
TwoLevelTransform build_transform(const Grid& fine, const Grid& coarse,
                                  const Covering& covering);

}  // namespace asmg
