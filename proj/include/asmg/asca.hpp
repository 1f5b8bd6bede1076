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

// Additive Schur complement approximation and the multilevel hierarchy.
//
// For a level with matrix A = sum_i R_i^T A_i R_i, every local matrix is
// transformed to the two-level basis, A_hat_i = J_i^T A_i J_i, and split
// into fine (1) and coarse (2) blocks. The coarse matrix is
//
//   Q = sum_i R_{i:2}^T (A_hat_{i:22} - A_hat_{i:21} A_hat_{i:11}^{-1}
//                        A_hat_{i:12}) R_{i:2},
//
// which is the Schur complement of the auxiliary matrix A_tilde (never
// assembled here) and becomes the next level matrix A^(k+1). The local
// Schur complements S_i are in turn the element contributions from which
// the next level's subdomain matrices are assembled.

#include <iosfwd>
#include <vector>

#include "asmg/coeff.hpp"
#include "asmg/la.hpp"
#include "asmg/mesh_fem.hpp"
#include "asmg/transform.hpp"

namespace asmg {

struct HierarchyConfig {
  int levels = 1;  // number of coarsening steps; level `levels` is direct
  int sub_cells = 8;
  int stride = 4;
};

/// S = A22 - A21 A11^{-1} A12 for a dense matrix whose first num_fine
/// rows/columns form the (SPD) 11 block.
DenseMatrix local_schur(const DenseMatrix& a, int num_fine);

/// Transformed blocks of one subdomain.
struct SubdomainBlocks {
  std::vector<int> fine;    // global hat indices of the fine DOFs (R_{i:1})
  std::vector<int> coarse;  // coarse-grid DOFs (R_{i:2})
  DenseMatrix a11;
  DenseMatrix a12;
  DenseMatrix a22;
  Cholesky a11_factor;
  DenseMatrix schur;
};

/// One non-coarsest level k of the hierarchy.
struct AuxLevel {
  Grid grid{1};
  Grid coarse_grid{1};
  CsrMatrix a;  // A^(k), original basis
  Covering covering;
  TwoLevelTransform transform;
  CsrMatrix a_hat;    // J^T A J
  CsrMatrix a_hat11;  // fine block, equal to R D_tilde R^T restricted
  std::vector<SubdomainBlocks> blocks;
  CsrMatrix q;  // ASCA coarse matrix

  int num_fine() const { return transform.num_fine(); }
  int num_coarse() const { return transform.num_coarse(); }
  /// Dimension of the auxiliary space: sum of local fine sizes + N2.
  int aux_size() const;
  /// Offset of subdomain i's fine block in an auxiliary vector.
  const std::vector<int>& aux_offsets() const { return aux_offsets_; }

  std::vector<int> aux_offsets_;
};

/// Builds the blocks and Q of one level from its element contributions and
/// returns the contributions for the next level (one S_i per subdomain).
AuxLevel build_level(const Grid& grid, CsrMatrix a,
                     std::span<const ElementContribution> elements,
                     const HierarchyConfig& config,
                     std::vector<ElementContribution>* coarse_elements);

/// Q = sum_i R_{i:2}^T S_i R_{i:2}.
CsrMatrix build_asca(int num_coarse, std::span<const SubdomainBlocks> blocks);

class Hierarchy {
 public:
  Hierarchy() = default;

  /// Number of coarsening steps; matrices exist for k = 0 .. levels().
  int levels() const { return static_cast<int>(aux_.size()); }
  const AuxLevel& level(int k) const { return aux_.at(k); }
  const CsrMatrix& matrix(int k) const;
  const Grid& grid(int k) const;
  const Cholesky& coarsest_factor() const { return coarsest_factor_; }

  friend Hierarchy build_hierarchy(const Grid& grid,
                                   const CoefficientField& field,
                                   const HierarchyConfig& config);

 private:
  std::vector<AuxLevel> aux_;
  Grid coarsest_grid_{1};
  CsrMatrix coarsest_;
  Cholesky coarsest_factor_;
};

/// Levels 0..config.levels with A^(k+1) := Q^(k) and a dense Cholesky
/// factorization of the coarsest matrix.
Hierarchy build_hierarchy(const Grid& grid, const CoefficientField& field,
                          const HierarchyConfig& config);

/// Per-level dimensions and nonzeros as CSV (level,n,dofs,nnz).
void write_hierarchy_summary(std::ostream& os, const Hierarchy& h);

}  // namespace asmg
