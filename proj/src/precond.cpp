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

#include "asmg/precond.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <sstream>
#include <string>

#include "asmg/error.hpp"

namespace asmg {

struct AsmgPreconditioner::DirectSolver {
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
};

namespace {

double checked_diagonal(double d, int row) {
  if (d == 0.0)
    fail(ErrorKind::internal,
         "smoother: zero diagonal entry in row " + std::to_string(row));
  return d;
}

void jacobi_sweep(const CsrMatrix& a, const SmootherSpec& spec,
                  std::span<const double> b, std::span<double> x) {
  const int n = a.rows();
  Vector ax(n);
  a.multiply(x, ax);
  for (int i = 0; i < n; ++i)
    x[i] += spec.damping * (b[i] - ax[i]) / checked_diagonal(a.at(i, i), i);
}

void gauss_seidel_row(const CsrMatrix& a, std::span<const double> b,
                      std::span<double> x, int i) {
  const auto cols = a.row_cols(i);
  const auto vals = a.row_vals(i);
  double s = b[i];
  double d = 0.0;
  for (std::size_t p = 0; p < cols.size(); ++p) {
    if (cols[p] == i) d = vals[p];
    s -= vals[p] * x[cols[p]];
  }
  x[i] += s / checked_diagonal(d, i);
}

// y = M x on raw pointers.
void dense_mv(const DenseMatrix& m, const double* x, double* y) {
  for (int i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    double s = 0.0;
    for (int j = 0; j < m.cols(); ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

}  // namespace

void smooth_forward(const CsrMatrix& a, const SmootherSpec& spec,
                    std::span<const double> b, std::span<double> x) {
  switch (spec.kind) {
    case SmootherKind::none:
      return;
    case SmootherKind::jacobi:
      jacobi_sweep(a, spec, b, x);
      return;
    case SmootherKind::gauss_seidel:
      for (int i = 0; i < a.rows(); ++i) gauss_seidel_row(a, b, x, i);
      return;
  }
}

void smooth_backward(const CsrMatrix& a, const SmootherSpec& spec,
                     std::span<const double> b, std::span<double> x) {
  switch (spec.kind) {
    case SmootherKind::none:
      return;
    case SmootherKind::jacobi:
      jacobi_sweep(a, spec, b, x);
      return;
    case SmootherKind::gauss_seidel:
      for (int i = a.rows() - 1; i >= 0; --i) gauss_seidel_row(a, b, x, i);
      return;
  }
}

void symmetrized_smooth(const CsrMatrix& a, const SmootherSpec& spec,
                        std::span<const double> b, std::span<double> x) {
  smooth_forward(a, spec, b, x);
  smooth_backward(a, spec, b, x);
}

Ilue::Ilue(int n, std::span<const std::vector<int>> dofs,
           std::span<const DenseMatrix> local) {
  if (dofs.size() != local.size())
    fail(ErrorKind::dimension, "ilue: dofs/local count mismatch");
  std::vector<Triplet> t;
  for (std::size_t s = 0; s < local.size(); ++s) {
    const auto& idx = dofs[s];
    if (!std::is_sorted(idx.begin(), idx.end()))
      fail(ErrorKind::internal, "ilue: local indices must be ascending");
    Ldlt f;
    try {
      f = ldlt(local[s]);
    } catch (const Error& e) {
      fail(ErrorKind::factorization, "ilue: subdomain " + std::to_string(s) +
                                         ": " + e.what());
    }
    const int m = static_cast<int>(idx.size());
    for (int r = 0; r < m; ++r)
      for (int c = r; c < m; ++c)
        t.push_back({idx[r], idx[c], f.diag[r] * f.unit_lower(c, r)});
  }
  upper_ = CsrMatrix::from_triplets(n, n, std::move(t));
  diag_ = upper_.diagonal();
  for (int i = 0; i < n; ++i)
    if (diag_[i] == 0.0)
      fail(ErrorKind::factorization,
           "ilue: zero pivot in assembled U at row " + std::to_string(i));
}

void Ilue::apply(std::span<const double> r, std::span<double> y) const {
  const int n = size();
  if (static_cast<int>(r.size()) != n || static_cast<int>(y.size()) != n)
    fail(ErrorKind::dimension, "ilue: length mismatch");
  std::copy(r.begin(), r.end(), y.begin());
  // L = U^T diag(U)^{-1}: column j of L is row j of U scaled by 1/U_jj.
  for (int j = 0; j < n; ++j) {
    const double yj = y[j] / diag_[j];
    const auto cols = upper_.row_cols(j);
    const auto vals = upper_.row_vals(j);
    for (std::size_t p = 0; p < cols.size(); ++p)
      if (cols[p] > j) y[cols[p]] -= vals[p] * yj;
  }
  for (int i = n - 1; i >= 0; --i) {
    const auto cols = upper_.row_cols(i);
    const auto vals = upper_.row_vals(i);
    double s = y[i];
    for (std::size_t p = 0; p < cols.size(); ++p)
      if (cols[p] > i) s -= vals[p] * y[cols[p]];
    y[i] = s / diag_[i];
  }
}

AsmgPreconditioner::AsmgPreconditioner(
    std::shared_ptr<const Hierarchy> hierarchy, const AmliConfig& config)
    : hierarchy_(std::move(hierarchy)), config_(config) {
  if (!hierarchy_) fail(ErrorKind::config, "asmg: null hierarchy");
  if (config_.nu < 1) fail(ErrorKind::config, "asmg: nu must be >= 1");
  if (!(config_.tau >= 1.0)) fail(ErrorKind::config, "asmg: tau must be >= 1");
  if (config_.smoother.sweeps < 0)
    fail(ErrorKind::config, "asmg: smoothing steps m must be >= 0");
  if (!(config_.inner_tol > 0.0) || config_.inner_max_iter < 1)
    fail(ErrorKind::config, "asmg: invalid inner solver settings");
  for (int k = 0; k < hierarchy_->levels(); ++k) {
    const AuxLevel& lv = hierarchy_->level(k);
    std::vector<std::vector<int>> dofs;
    std::vector<DenseMatrix> local;
    dofs.reserve(lv.blocks.size());
    local.reserve(lv.blocks.size());
    for (const auto& b : lv.blocks) {
      dofs.push_back(b.fine);
      local.push_back(b.a11);
    }
    ilue_.emplace_back(lv.num_fine(), dofs, local);
    if (config_.direct_d_solve) {
      const CsrMatrix& d = lv.a_hat11;
      std::vector<Eigen::Triplet<double>> t;
      t.reserve(d.nnz());
      for (int i = 0; i < d.rows(); ++i) {
        const auto cols = d.row_cols(i);
        const auto vals = d.row_vals(i);
        for (std::size_t p = 0; p < cols.size(); ++p)
          t.emplace_back(i, cols[p], vals[p]);
      }
      Eigen::SparseMatrix<double> m(d.rows(), d.cols());
      m.setFromTriplets(t.begin(), t.end());
      auto solver = std::make_shared<DirectSolver>();
      solver->llt.compute(m);
      if (solver->llt.info() != Eigen::Success)
        fail(ErrorKind::factorization,
             "asmg: sparse Cholesky of D failed at level " +
                 std::to_string(k));
      direct_.push_back(std::move(solver));
    }
  }
}

void AsmgPreconditioner::solve_d11(int k, std::span<const double> b1,
                                   std::span<double> x1,
                                   ApplyStats* stats) const {
  const AuxLevel& lv = hierarchy_->level(k);
  if (config_.direct_d_solve) {
    const Eigen::Map<const Eigen::VectorXd> rhs(b1.data(), b1.size());
    Eigen::Map<Eigen::VectorXd> x(x1.data(), x1.size());
    x = direct_[k]->llt.solve(rhs);
    // One step of iterative refinement.
    Vector r(b1.size());
    lv.a_hat11.multiply(x1, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b1[i] - r[i];
    x += direct_[k]->llt.solve(Eigen::Map<const Eigen::VectorXd>(r.data(), r.size()));
    if (stats) ++stats->inner_solves;
    return;
  }
  std::fill(x1.begin(), x1.end(), 0.0);
  const Ilue& ilue = ilue_[k];
  const IterationResult res = pcg(
      asmg::as_operator(lv.a_hat11),
      [&ilue](std::span<const double> r, std::span<double> z) {
        ilue.apply(r, z);
      },
      b1, x1, {config_.inner_tol, config_.inner_max_iter});
  if (stats) {
    ++stats->inner_solves;
    stats->inner_iterations += res.iterations;
    stats->max_inner_iterations =
        std::max(stats->max_inner_iterations, res.iterations);
  }
  if (!res.converged) {
    std::ostringstream msg;
    msg << "inner PCG for D at level " << k << " did not reach a residual "
        << "reduction of " << config_.inner_tol << " within "
        << config_.inner_max_iter << " iterations (reached "
        << res.final_residual / res.initial_residual << ")";
    fail(ErrorKind::stall, msg.str());
  }
}

void AsmgPreconditioner::apply_pi_t(int k, std::span<const double> d_hat,
                                    std::span<double> aux,
                                    ApplyStats* stats) const {
  const AuxLevel& lv = hierarchy_->level(k);
  const int n1 = lv.num_fine();
  const int n2 = lv.num_coarse();
  const int fine_aux = lv.aux_size() - n2;
  if (static_cast<int>(d_hat.size()) != n1 + n2 ||
      static_cast<int>(aux.size()) != fine_aux + n2)
    fail(ErrorKind::dimension, "apply_pi_t: length mismatch");
  Vector w(n1);
  solve_d11(k, d_hat.first(n1), w, stats);
  Vector wl;
  for (std::size_t s = 0; s < lv.blocks.size(); ++s) {
    const SubdomainBlocks& b = lv.blocks[s];
    wl.resize(b.fine.size());
    for (std::size_t r = 0; r < b.fine.size(); ++r) wl[r] = w[b.fine[r]];
    dense_mv(b.a11, wl.data(), aux.data() + lv.aux_offsets()[s]);
  }
  std::copy(d_hat.begin() + n1, d_hat.end(), aux.begin() + fine_aux);
}

void AsmgPreconditioner::apply_pi(int k, std::span<const double> aux,
                                  std::span<double> v_hat,
                                  ApplyStats* stats) const {
  const AuxLevel& lv = hierarchy_->level(k);
  const int n1 = lv.num_fine();
  const int n2 = lv.num_coarse();
  const int fine_aux = lv.aux_size() - n2;
  if (static_cast<int>(v_hat.size()) != n1 + n2 ||
      static_cast<int>(aux.size()) != fine_aux + n2)
    fail(ErrorKind::dimension, "apply_pi: length mismatch");
  Vector t(n1, 0.0), tl;
  for (std::size_t s = 0; s < lv.blocks.size(); ++s) {
    const SubdomainBlocks& b = lv.blocks[s];
    tl.resize(b.fine.size());
    dense_mv(b.a11, aux.data() + lv.aux_offsets()[s], tl.data());
    for (std::size_t r = 0; r < b.fine.size(); ++r) t[b.fine[r]] += tl[r];
  }
  solve_d11(k, t, v_hat.first(n1), stats);
  std::copy(aux.begin() + fine_aux, aux.end(), v_hat.begin() + n1);
}

void AsmgPreconditioner::coarse_correction(int k, std::span<const double> g,
                                           std::span<double> p,
                                           ApplyStats* stats) const {
  const int k1 = k + 1;
  if (k1 == hierarchy_->levels()) {
    std::copy(g.begin(), g.end(), p.begin());
    hierarchy_->coarsest_factor().solve_in_place(p);
    return;
  }
  const AuxLevel& next = hierarchy_->level(k1);
  Vector g_hat(g.size()), y(g.size(), 0.0);
  next.transform.to_hat_transposed(g, g_hat);
  if (config_.linear) {
    apply_b(k1, g_hat, y, stats);
  } else {
    gcg(asmg::as_operator(next.a_hat),
        [this, k1, stats](std::span<const double> r, std::span<double> z) {
          apply_b(k1, r, z, stats);
        },
        g_hat, y, {0.0, config_.nu});
  }
  next.transform.to_original(y, p);
}

void AsmgPreconditioner::apply_c(int k, std::span<const double> d_hat,
                                 std::span<double> v_hat,
                                 ApplyStats* stats) const {
  if (config_.literal_steps) {
    apply_c_literal(k, d_hat, v_hat, stats);
    return;
  }
  const AuxLevel& lv = hierarchy_->level(k);
  const int n1 = lv.num_fine();
  const int n2 = lv.num_coarse();
  if (static_cast<int>(d_hat.size()) != n1 + n2 ||
      static_cast<int>(v_hat.size()) != n1 + n2)
    fail(ErrorKind::dimension, "apply_c: length mismatch");

  // g = d2 - A21 D^{-1} d1
  Vector x(n1 + n2, 0.0), ax(n1 + n2);
  solve_d11(k, d_hat.first(n1), std::span<double>(x).first(n1), stats);
  lv.a_hat.multiply(x, ax);
  Vector g(n2);
  for (int c = 0; c < n2; ++c) g[c] = d_hat[n1 + c] - ax[n1 + c];

  Vector p2(n2);
  coarse_correction(k, g, p2, stats);

  // v1 = D^{-1} (d1 - A12 p2), v2 = p2
  std::fill(x.begin(), x.begin() + n1, 0.0);
  std::copy(p2.begin(), p2.end(), x.begin() + n1);
  lv.a_hat.multiply(x, ax);
  Vector t(n1);
  for (int r = 0; r < n1; ++r) t[r] = d_hat[r] - ax[r];
  solve_d11(k, t, v_hat.first(n1), stats);
  std::copy(p2.begin(), p2.end(), v_hat.begin() + n1);
  if (config_.tau != 1.0) scale(1.0 / config_.tau, v_hat);
}

void AsmgPreconditioner::apply_c_literal(int k, std::span<const double> d_hat,
                                 std::span<double> v_hat,
                                 ApplyStats* stats) const {
  const AuxLevel& lv = hierarchy_->level(k);
  const int n2 = lv.num_coarse();
  const int fine_aux = lv.aux_size() - n2;
  Vector aux(lv.aux_size());
  apply_pi_t(k, d_hat, aux, stats);

  // p1 = A_tilde11^{-1} q1, g = q2 - A_tilde21 p1
  std::span<double> q2(aux.data() + fine_aux, n2);
  Vector g(q2.begin(), q2.end()), tmp;
  for (std::size_t s = 0; s < lv.blocks.size(); ++s) {
    const SubdomainBlocks& b = lv.blocks[s];
    std::span<double> p1(aux.data() + lv.aux_offsets()[s], b.fine.size());
    b.a11_factor.solve_in_place(p1);
    tmp.assign(b.coarse.size(), 0.0);
    b.a12.multiply_transposed(p1, tmp);
    for (std::size_t c = 0; c < b.coarse.size(); ++c) g[b.coarse[c]] -= tmp[c];
  }

  Vector p2(n2);
  coarse_correction(k, g, p2, stats);

  // q1 = p1 - A_tilde11^{-1} A_tilde12 p2, q2 = p2
  Vector p2l;
  for (std::size_t s = 0; s < lv.blocks.size(); ++s) {
    const SubdomainBlocks& b = lv.blocks[s];
    p2l.resize(b.coarse.size());
    for (std::size_t c = 0; c < b.coarse.size(); ++c) p2l[c] = p2[b.coarse[c]];
    tmp.resize(b.fine.size());
    b.a12.multiply(p2l, tmp);
    b.a11_factor.solve_in_place(tmp);
    double* q1 = aux.data() + lv.aux_offsets()[s];
    for (std::size_t r = 0; r < b.fine.size(); ++r) q1[r] -= tmp[r];
  }
  std::copy(p2.begin(), p2.end(), q2.begin());

  apply_pi(k, aux, v_hat, stats);
  if (config_.tau != 1.0) scale(1.0 / config_.tau, v_hat);
}

void AsmgPreconditioner::apply_b(int k, std::span<const double> d_hat,
                                 std::span<double> v_hat,
                                 ApplyStats* stats) const {
  const SmootherSpec& sm = config_.smoother;
  if (sm.sweeps == 0 || sm.kind == SmootherKind::none) {
    apply_c(k, d_hat, v_hat, stats);
    return;
  }
  const CsrMatrix& a = hierarchy_->level(k).a_hat;
  const std::size_t n = d_hat.size();
  Vector u(n, 0.0), r(n), c(n);
  for (int s = 0; s < sm.sweeps; ++s) smooth_forward(a, sm, d_hat, u);
  a.multiply(u, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = d_hat[i] - r[i];
  apply_c(k, r, c, stats);
  for (std::size_t i = 0; i < n; ++i) v_hat[i] = u[i] + c[i];
  for (int s = 0; s < sm.sweeps; ++s) smooth_backward(a, sm, d_hat, v_hat);
}

void AsmgPreconditioner::apply_level(int k, std::span<const double> r,
                                     std::span<double> z,
                                     ApplyStats* stats) const {
  if (k == hierarchy_->levels()) {
    std::copy(r.begin(), r.end(), z.begin());
    hierarchy_->coarsest_factor().solve_in_place(z);
    return;
  }
  const TwoLevelTransform& j = hierarchy_->level(k).transform;
  Vector r_hat(r.size()), z_hat(r.size());
  j.to_hat_transposed(r, r_hat);
  apply_b(k, r_hat, z_hat, stats);
  j.to_original(z_hat, z);
}

void AsmgPreconditioner::apply(std::span<const double> r, std::span<double> z,
                               ApplyStats* stats) const {
  apply_level(0, r, z, stats);
}

Operator AsmgPreconditioner::as_operator(ApplyStats* stats) const {
  return [this, stats](std::span<const double> r, std::span<double> z) {
    apply(r, z, stats);
  };
}

}  // namespace asmg
