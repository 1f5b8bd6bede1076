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

#include "asmg/transform.hpp"

#include <algorithm>
#include <string>

#include "asmg/coeff.hpp"
#include "asmg/error.hpp"

namespace asmg {

namespace {

int local_index(std::span<const int> sorted, int global) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), global);
  if (it == sorted.end() || *it != global) return -1;
  return static_cast<int>(it - sorted.begin());
}

std::vector<int> box_edges(const Grid& grid, const CellBox& b) {
  std::vector<int> e;
  e.reserve(2 * b.size * (b.size + 1));
  for (int j = b.y0; j < b.y0 + b.size; ++j)
    for (int i = b.x0; i <= b.x0 + b.size; ++i)
      e.push_back(grid.vertical_edge(i, j));
  for (int j = b.y0; j <= b.y0 + b.size; ++j)
    for (int i = b.x0; i < b.x0 + b.size; ++i)
      e.push_back(grid.horizontal_edge(i, j));
  std::sort(e.begin(), e.end());
  return e;
}

}  // namespace

// ---------------------------------------------------------------------------
// Covering

Covering build_covering(const Grid& grid, int sub_cells, int stride) {
  const int n = grid.n();
  if (sub_cells < 2 || sub_cells % 2 != 0)
    fail(ErrorKind::config, "covering: sub_cells must be even and >= 2, got " +
                                std::to_string(sub_cells));
  Covering c;
  c.n_ = n;
  if (n <= sub_cells) {
    c.sub_ = n;
    c.stride_ = n;
    c.per_side_ = 1;
  } else {
    if (stride <= 0 || stride % 2 != 0 || stride > sub_cells ||
        (n - sub_cells) % stride != 0) {
      fail(ErrorKind::config,
           "covering: stride " + std::to_string(stride) +
               " must be even, at most sub_cells=" +
               std::to_string(sub_cells) + " and divide n - sub_cells = " +
               std::to_string(n - sub_cells));
    }
    c.sub_ = sub_cells;
    c.stride_ = stride;
    c.per_side_ = (n - sub_cells) / stride + 1;
  }
  c.multiplicity_.assign(grid.num_cells(), 0);
  for (int by = 0; by < c.per_side_; ++by) {
    for (int bx = 0; bx < c.per_side_; ++bx) {
      Subdomain s;
      s.box = {bx * c.stride_, by * c.stride_, c.sub_};
      for (int j = s.box.y0; j < s.box.y0 + c.sub_; ++j) {
        for (int i = s.box.x0; i < s.box.x0 + c.sub_; ++i) {
          s.cells.push_back(grid.cell(i, j));
          ++c.multiplicity_[grid.cell(i, j)];
        }
      }
      s.dofs = box_edges(grid, s.box);
      c.subdomains_.push_back(std::move(s));
    }
  }
  return c;
}

std::vector<int> Covering::containing(const CellBox& box) const {
  auto range = [&](int lo_cell, int size) {
    const int lo = std::max(0, lo_cell + size - sub_);
    const int hi = std::min(lo_cell, n_ - sub_);
    const int first = (lo + stride_ - 1) / stride_;
    const int last = hi < 0 ? -1 : hi / stride_;
    return std::pair<int, int>{first, std::min(last, per_side_ - 1)};
  };
  const auto [x_first, x_last] = range(box.x0, box.size);
  const auto [y_first, y_last] = range(box.y0, box.size);
  std::vector<int> out;
  for (int by = y_first; by <= y_last; ++by)
    for (int bx = x_first; bx <= x_last; ++bx)
      out.push_back(by * per_side_ + bx);
  return out;
}

std::vector<ElementContribution> fe_elements(const Grid& grid,
                                             const CoefficientField& field) {
  if (field.n() != grid.n())
    fail(ErrorKind::dimension, "fe_elements: field/grid size mismatch");
  std::vector<ElementContribution> out;
  out.reserve(grid.num_cells());
  for (int c = 0; c < grid.num_cells(); ++c) {
    const CellEdges ce = grid.cell_edges(c);
    out.push_back({{c % grid.n(), c / grid.n(), 1},
                   {ce.edge.begin(), ce.edge.end()},
                   local_velocity_matrix(field.alpha(c), grid.h())});
  }
  return out;
}

std::vector<DenseMatrix> assemble_local_matrices(
    const Covering& covering, std::span<const ElementContribution> elements) {
  std::vector<DenseMatrix> local;
  local.reserve(covering.size());
  for (const auto& s : covering.subdomains()) {
    const int m = static_cast<int>(s.dofs.size());
    local.emplace_back(m, m);
  }
  std::vector<int> map;
  for (const auto& e : elements) {
    const auto owners = covering.containing(e.box);
    if (owners.empty()) {
      fail(ErrorKind::internal,
           "covering: element at (" + std::to_string(e.box.x0) + "," +
               std::to_string(e.box.y0) + ") is not inside any subdomain");
    }
    const double w = 1.0 / static_cast<double>(owners.size());
    for (int s : owners) {
      const auto& dofs = covering[s].dofs;
      map.resize(e.dofs.size());
      for (std::size_t a = 0; a < e.dofs.size(); ++a) {
        map[a] = local_index(dofs, e.dofs[a]);
        if (map[a] < 0)
          fail(ErrorKind::internal, "covering: element DOF outside subdomain");
      }
      DenseMatrix& a_loc = local[s];
      for (std::size_t a = 0; a < e.dofs.size(); ++a)
        for (std::size_t b = 0; b < e.dofs.size(); ++b)
          a_loc(map[a], map[b]) +=
              w * e.matrix(static_cast<int>(a), static_cast<int>(b));
    }
  }
  return local;
}

DenseMatrix assemble_local(const Grid& grid, const CoefficientField& field,
                           const Covering& covering, int i) {
  const auto elements = fe_elements(grid, field);
  return assemble_local_matrices(covering, elements).at(i);
}

CsrMatrix sum_local_matrices(int num_dofs, const Covering& covering,
                             std::span<const DenseMatrix> local) {
  std::vector<Triplet> t;
  for (std::size_t s = 0; s < covering.size(); ++s) {
    const auto& dofs = covering[s].dofs;
    const DenseMatrix& a = local[s];
    for (int r = 0; r < a.rows(); ++r)
      for (int c = 0; c < a.cols(); ++c)
        if (a(r, c) != 0.0) t.push_back({dofs[r], dofs[c], a(r, c)});
  }
  return CsrMatrix::from_triplets(num_dofs, num_dofs, std::move(t));
}

// ---------------------------------------------------------------------------
// Splitting and transforms

DofSplitting build_splitting(const Grid& fine, const Grid& coarse) {
  if (coarse.n() * 2 != fine.n()) {
    fail(ErrorKind::config, "splitting: coarse grid (" +
                                std::to_string(coarse.n()) +
                                ") is not the 2x coarsening of " +
                                std::to_string(fine.n()));
  }
  DofSplitting s;
  const int nc = coarse.n();
  s.coarse_pairs.resize(coarse.num_edges());
  for (int jj = 0; jj < nc; ++jj)
    for (int ii = 0; ii <= nc; ++ii)
      s.coarse_pairs[coarse.vertical_edge(ii, jj)] = {
          fine.vertical_edge(2 * ii, 2 * jj),
          fine.vertical_edge(2 * ii, 2 * jj + 1)};
  for (int jj = 0; jj <= nc; ++jj)
    for (int ii = 0; ii < nc; ++ii)
      s.coarse_pairs[coarse.horizontal_edge(ii, jj)] = {
          fine.horizontal_edge(2 * ii, 2 * jj),
          fine.horizontal_edge(2 * ii + 1, 2 * jj)};
  std::vector<char> paired(fine.num_edges(), 0);
  for (const auto& p : s.coarse_pairs) paired[p[0]] = paired[p[1]] = 1;
  for (int e = 0; e < fine.num_edges(); ++e)
    if (!paired[e]) s.interior_edges.push_back(e);
  s.num_coarse = coarse.num_edges();
  s.num_fine = static_cast<int>(s.interior_edges.size()) + s.num_coarse;
  if (s.size() != fine.num_edges())
    fail(ErrorKind::internal, "splitting: DOF counts do not add up");
  return s;
}

DenseMatrix LocalTransform::transform(const DenseMatrix& a_local) const {
  const int m = a_local.rows();
  const int k = size();
  // T = A J_i
  DenseMatrix t(m, k);
  for (int b = 0; b < k; ++b) {
    const HatColumn& col = columns[b];
    for (int r = 0; r < m; ++r) {
      double s = 0.0;
      for (int q = 0; q < col.count; ++q)
        s += col.coeff[q] * a_local(r, col.index[q]);
      t(r, b) = s;
    }
  }
  DenseMatrix out(k, k);
  for (int a = 0; a < k; ++a) {
    const HatColumn& col = columns[a];
    for (int b = 0; b < k; ++b) {
      double s = 0.0;
      for (int p = 0; p < col.count; ++p) s += col.coeff[p] * t(col.index[p], b);
      out(a, b) = s;
    }
  }
  out.symmetrize();
  return out;
}

TwoLevelTransform build_transform(const Grid& fine, const Grid& coarse,
                                  const Covering& covering) {
  TwoLevelTransform tr;
  tr.splitting_ = build_splitting(fine, coarse);
  const DofSplitting& sp = tr.splitting_;
  const int n = sp.size();
  const int n_int = sp.num_interior();
  const int n_pairs = sp.num_coarse;

  tr.columns_.resize(n);
  tr.perm_.reserve(n);
  std::vector<int> interior_hat(fine.num_edges(), -1);
  std::vector<int> pair_of(fine.num_edges(), -1);
  for (int k = 0; k < n_int; ++k) {
    const int e = sp.interior_edges[k];
    tr.columns_[k] = {{e, -1}, {1.0, 0.0}, 1};
    interior_hat[e] = k;
    tr.perm_.push_back(e);
  }
  for (int c = 0; c < n_pairs; ++c) {
    const auto [e1, e2] = sp.coarse_pairs[c];
    tr.columns_[n_int + c] = {{e1, e2}, {1.0, -1.0}, 2};
    tr.columns_[sp.num_fine + c] = {{e1, e2}, {1.0, 1.0}, 2};
    pair_of[e1] = pair_of[e2] = c;
    tr.perm_.push_back(e1);
    tr.perm_.push_back(e2);
  }

  std::vector<Triplet> jt, jit;
  jt.reserve(2 * n);
  jit.reserve(2 * n);
  for (int k = 0; k < n; ++k) {
    const HatColumn& col = tr.columns_[k];
    for (int q = 0; q < col.count; ++q) {
      jt.push_back({col.index[q], k, col.coeff[q]});
      jit.push_back({k, col.index[q], col.count == 1 ? 1.0 : 0.5 * col.coeff[q]});
    }
  }
  tr.j_ = CsrMatrix::from_triplets(n, n, std::move(jt));
  tr.j_inv_ = CsrMatrix::from_triplets(n, n, std::move(jit));

  // Local transforms and the compatibility check R_i J = J_i R_hat_i.
  tr.local_.reserve(covering.size());
  for (std::size_t s = 0; s < covering.size(); ++s) {
    const auto& dofs = covering[s].dofs;
    LocalTransform lt;
    for (int e : dofs) {
      if (interior_hat[e] >= 0) {
        lt.hat_dofs.push_back(interior_hat[e]);
      } else {
        lt.hat_dofs.push_back(n_int + pair_of[e]);
        lt.hat_dofs.push_back(sp.num_fine + pair_of[e]);
      }
    }
    std::sort(lt.hat_dofs.begin(), lt.hat_dofs.end());
    lt.hat_dofs.erase(std::unique(lt.hat_dofs.begin(), lt.hat_dofs.end()),
                      lt.hat_dofs.end());
    if (lt.hat_dofs.size() != dofs.size()) {
      fail(ErrorKind::internal,
           "transform: subdomain " + std::to_string(s) +
               " splits a coarse edge (box not aligned with the coarse grid)");
    }
    lt.num_fine = static_cast<int>(
        std::lower_bound(lt.hat_dofs.begin(), lt.hat_dofs.end(), sp.num_fine) -
        lt.hat_dofs.begin());
    lt.columns.resize(lt.hat_dofs.size());
    for (std::size_t k = 0; k < lt.hat_dofs.size(); ++k) {
      HatColumn col = tr.columns_[lt.hat_dofs[k]];
      for (int q = 0; q < col.count; ++q) {
        col.index[q] = local_index(dofs, col.index[q]);
        if (col.index[q] < 0)
          fail(ErrorKind::internal, "transform: local column leaves subdomain");
      }
      lt.columns[k] = col;
    }

    // Row a of J_i R_hat_i as (global hat, value) pairs.
    std::vector<std::vector<std::pair<int, double>>> rows(dofs.size());
    for (std::size_t k = 0; k < lt.columns.size(); ++k) {
      const HatColumn& col = lt.columns[k];
      for (int q = 0; q < col.count; ++q)
        rows[col.index[q]].emplace_back(lt.hat_dofs[k], col.coeff[q]);
    }
    for (std::size_t a = 0; a < dofs.size(); ++a) {
      auto& row = rows[a];
      std::sort(row.begin(), row.end());
      const auto cols = tr.j_.row_cols(dofs[a]);
      const auto vals = tr.j_.row_vals(dofs[a]);
      bool ok = row.size() == cols.size();
      for (std::size_t q = 0; ok && q < cols.size(); ++q)
        ok = row[q].first == cols[q] && row[q].second == vals[q];
      if (!ok) {
        fail(ErrorKind::internal,
             "transform: R_i J != J_i R_hat_i for subdomain " +
                 std::to_string(s) + ", local row " + std::to_string(a));
      }
    }
    tr.local_.push_back(std::move(lt));
  }
  return tr;
}

void TwoLevelTransform::to_original(std::span<const double> hat,
                                    std::span<double> u) const {
  if (static_cast<int>(hat.size()) != size() ||
      static_cast<int>(u.size()) != size())
    fail(ErrorKind::dimension, "transform: length mismatch");
  std::fill(u.begin(), u.end(), 0.0);
  for (int k = 0; k < size(); ++k) {
    const HatColumn& col = columns_[k];
    for (int q = 0; q < col.count; ++q) u[col.index[q]] += col.coeff[q] * hat[k];
  }
}

void TwoLevelTransform::to_hat_transposed(std::span<const double> u,
                                          std::span<double> hat) const {
  if (static_cast<int>(hat.size()) != size() ||
      static_cast<int>(u.size()) != size())
    fail(ErrorKind::dimension, "transform: length mismatch");
  for (int k = 0; k < size(); ++k) {
    const HatColumn& col = columns_[k];
    double s = 0.0;
    for (int q = 0; q < col.count; ++q) s += col.coeff[q] * u[col.index[q]];
    hat[k] = s;
  }
}

}  // namespace asmg
