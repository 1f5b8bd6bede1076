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

#include "asmg/asca.hpp"

#include <ostream>
#include <string>

#include "asmg/error.hpp"
#include "asmg/parallel.hpp"

namespace asmg {

namespace {

constexpr int kMaxCoarsestDofs = 6000;

DenseMatrix block(const DenseMatrix& a, int r0, int rows, int c0, int cols) {
  DenseMatrix b(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) b(i, j) = a(r0 + i, c0 + j);
  return b;
}

}  // namespace

DenseMatrix local_schur(const DenseMatrix& a, int num_fine) {
  const int n2 = a.rows() - num_fine;
  const DenseMatrix a11 = block(a, 0, num_fine, 0, num_fine);
  const DenseMatrix a12 = block(a, 0, num_fine, num_fine, n2);
  const DenseMatrix a21 = block(a, num_fine, n2, 0, num_fine);
  DenseMatrix s = block(a, num_fine, n2, num_fine, n2);
  if (num_fine == 0) return s;
  const Cholesky f(a11);
  s = s - a21 * f.solve(a12);
  s.symmetrize();
  return s;
}

int AuxLevel::aux_size() const {
  int s = num_coarse();
  for (const auto& b : blocks) s += static_cast<int>(b.fine.size());
  return s;
}

CsrMatrix build_asca(int num_coarse, std::span<const SubdomainBlocks> blocks) {
  std::vector<Triplet> t;
  for (const auto& b : blocks) {
    const int m = static_cast<int>(b.coarse.size());
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c)
        t.push_back({b.coarse[r], b.coarse[c], b.schur(r, c)});
  }
  return CsrMatrix::from_triplets(num_coarse, num_coarse, std::move(t));
}

AuxLevel build_level(const Grid& grid, CsrMatrix a,
                     std::span<const ElementContribution> elements,
                     const HierarchyConfig& config,
                     std::vector<ElementContribution>* coarse_elements) {
  AuxLevel lv;
  lv.grid = grid;
  lv.coarse_grid = Grid(grid.n() / 2);
  lv.a = std::move(a);
  lv.covering = build_covering(grid, config.sub_cells, config.stride);
  lv.transform = build_transform(grid, lv.coarse_grid, lv.covering);
  lv.a_hat = triple_product(lv.transform.matrix(), lv.a);

  const int n1 = lv.num_fine();
  std::vector<int> fine_idx(n1);
  for (int k = 0; k < n1; ++k) fine_idx[k] = k;
  lv.a_hat11 = extract(lv.a_hat, fine_idx, fine_idx);

  const auto local = assemble_local_matrices(lv.covering, elements);
  lv.blocks.resize(lv.covering.size());
  parallel_for(lv.covering.size(), [&](std::size_t s) {
    const LocalTransform& lt = lv.transform.local()[s];
    const DenseMatrix a_hat_i = lt.transform(local[s]);
    SubdomainBlocks& b = lv.blocks[s];
    const int f = lt.num_fine;
    const int c = lt.num_coarse();
    b.fine.assign(lt.hat_dofs.begin(), lt.hat_dofs.begin() + f);
    b.coarse.resize(c);
    for (int k = 0; k < c; ++k) b.coarse[k] = lt.coarse_dof(k, n1);
    b.a11 = block(a_hat_i, 0, f, 0, f);
    b.a12 = block(a_hat_i, 0, f, f, c);
    b.a22 = block(a_hat_i, f, c, f, c);
    try {
      b.a11_factor = Cholesky(b.a11);
    } catch (const Error& e) {
      fail(ErrorKind::factorization,
           "ASCA: local fine block of subdomain " + std::to_string(s) +
               " on the " + std::to_string(grid.n()) + "x" +
               std::to_string(grid.n()) + " level is not SPD (" + e.what() +
               ")");
    }
    DenseMatrix s_i = b.a22 - b.a12.transpose() * b.a11_factor.solve(b.a12);
    s_i.symmetrize();
    b.schur = std::move(s_i);
  });

  lv.aux_offsets_.resize(lv.blocks.size());
  int off = 0;
  for (std::size_t s = 0; s < lv.blocks.size(); ++s) {
    lv.aux_offsets_[s] = off;
    off += static_cast<int>(lv.blocks[s].fine.size());
  }

  lv.q = build_asca(lv.num_coarse(), lv.blocks);

  if (coarse_elements) {
    coarse_elements->clear();
    coarse_elements->reserve(lv.blocks.size());
    for (std::size_t s = 0; s < lv.blocks.size(); ++s) {
      const CellBox& box = lv.covering[s].box;
      coarse_elements->push_back(
          {{box.x0 / 2, box.y0 / 2, box.size / 2}, lv.blocks[s].coarse,
           lv.blocks[s].schur});
    }
  }
  return lv;
}

const CsrMatrix& Hierarchy::matrix(int k) const {
  if (k < 0 || k > levels())
    fail(ErrorKind::config, "hierarchy: level " + std::to_string(k) +
                                " out of range");
  return k == levels() ? coarsest_ : aux_[k].a;
}

const Grid& Hierarchy::grid(int k) const {
  if (k < 0 || k > levels())
    fail(ErrorKind::config, "hierarchy: level " + std::to_string(k) +
                                " out of range");
  return k == levels() ? coarsest_grid_ : aux_[k].grid;
}

Hierarchy build_hierarchy(const Grid& grid, const CoefficientField& field,
                          const HierarchyConfig& config) {
  const int n = grid.n();
  if (!is_power_of_two(n))
    fail(ErrorKind::config, "hierarchy: n must be a power of two");
  if (config.levels < 0 || (n >> config.levels) < 1 ||
      (n >> config.levels) << config.levels != n) {
    fail(ErrorKind::config, "hierarchy: a " + std::to_string(n) + "x" +
                                std::to_string(n) + " grid cannot be coarsened " +
                                std::to_string(config.levels) + " times");
  }
  const Grid coarsest(n >> config.levels);
  if (coarsest.num_edges() > kMaxCoarsestDofs) {
    fail(ErrorKind::config,
         "hierarchy: coarsest level has " +
             std::to_string(coarsest.num_edges()) +
             " DOFs; use more levels (dense direct solve limit " +
             std::to_string(kMaxCoarsestDofs) + ")");
  }

  Hierarchy h;
  CsrMatrix a = assemble_velocity(grid, field);
  std::vector<ElementContribution> elements = fe_elements(grid, field);
  Grid g = grid;
  for (int k = 0; k < config.levels; ++k) {
    std::vector<ElementContribution> next;
    h.aux_.push_back(build_level(g, std::move(a), elements, config, &next));
    a = h.aux_.back().q;  // A^(k+1) := Q^(k)
    elements = std::move(next);
    g = h.aux_.back().coarse_grid;
  }
  h.coarsest_grid_ = g;
  h.coarsest_ = std::move(a);
  try {
    h.coarsest_factor_ = Cholesky(h.coarsest_.to_dense());
  } catch (const Error& e) {
    fail(ErrorKind::factorization,
         std::string("hierarchy: coarsest matrix is not SPD (") + e.what() +
             ")");
  }
  return h;
}

void write_hierarchy_summary(std::ostream& os, const Hierarchy& h) {
  os << "level,n,dofs,nnz\n";
  for (int k = 0; k <= h.levels(); ++k) {
    os << k << ',' << h.grid(k).n() << ',' << h.matrix(k).rows() << ','
       << h.matrix(k).nnz() << '\n';
  }
}

}  // namespace asmg
