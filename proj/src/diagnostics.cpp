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

#include "asmg/diagnostics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "asmg/error.hpp"
#include "asmg/solvers.hpp"

namespace asmg {

namespace {

using EMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                              Eigen::RowMajor>;

Eigen::Map<const EMatrix> view(const DenseMatrix& a) {
  return Eigen::Map<const EMatrix>(a.data().data(), a.rows(), a.cols());
}

Vector to_vector(const Eigen::VectorXd& v) {
  return Vector(v.data(), v.data() + v.size());
}

int fine_aux_size(const AuxLevel& lv) {
  return lv.aux_size() - lv.num_coarse();
}

}  // namespace

double rho_r(std::span<const double> residuals) {
  if (residuals.size() < 2)
    fail(ErrorKind::invalid_input, "rho_r: need at least two residuals");
  if (!(residuals.front() > 0.0))
    fail(ErrorKind::invalid_input, "rho_r: initial residual must be > 0");
  const double n = static_cast<double>(residuals.size() - 1);
  return std::pow(residuals.back() / residuals.front(), 1.0 / n);
}

DenseMatrix dense_operator(const Operator& op, int n) {
  DenseMatrix d(n, n);
  Vector e(n, 0.0), col(n);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    op(e, col);
    e[j] = 0.0;
    for (int i = 0; i < n; ++i) d(i, j) = col[i];
  }
  return d;
}

Vector symmetric_eigenvalues(const DenseMatrix& a) {
  if (a.rows() != a.cols())
    fail(ErrorKind::dimension, "eigenvalues: matrix is not square");
  Eigen::MatrixXd m = view(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m,
                                                     Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    fail(ErrorKind::internal, "eigenvalues: solver did not converge");
  return to_vector(es.eigenvalues());
}

Vector generalized_eigenvalues(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    fail(ErrorKind::dimension, "generalized eigenvalues: shape mismatch");
  Eigen::MatrixXd ma = view(a);
  Eigen::MatrixXd mb = view(b);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
      ma, mb, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success)
    fail(ErrorKind::factorization,
         "generalized eigenvalues: right-hand matrix is not SPD");
  return to_vector(es.eigenvalues());
}

PowerEstimate estimate_rho_e(const CsrMatrix& a, const Operator& c_inverse,
                             int max_iter, double rtol, std::uint64_t seed) {
  const int n = a.rows();
  Vector x = random_vector(n, seed), ax(n), c(n), y(n);
  auto a_norm = [&](const Vector& v) {
    a.multiply(v, ax);
    return std::sqrt(dot(v, ax));
  };
  scale(1.0 / a_norm(x), x);
  PowerEstimate est;
  double prev = -1.0;
  for (int it = 1; it <= max_iter; ++it) {
    a.multiply(x, ax);
    c_inverse(ax, c);
    for (int i = 0; i < n; ++i) y[i] = x[i] - c[i];
    const double ny = a_norm(y);
    est.value = ny;
    est.iterations = it;
    if (ny == 0.0 || (it > 2 && std::abs(ny - prev) <= rtol * ny)) {
      est.converged = true;
      break;
    }
    prev = ny;
    for (int i = 0; i < n; ++i) x[i] = y[i] / ny;
  }
  return est;
}

void aux_multiply(const AuxLevel& lv, std::span<const double> x,
                  std::span<double> y) {
  const int fa = fine_aux_size(lv);
  if (static_cast<int>(x.size()) != lv.aux_size() || x.size() != y.size())
    fail(ErrorKind::dimension, "aux_multiply: length mismatch");
  std::fill(y.begin(), y.end(), 0.0);
  Vector xc, t1, t2;
  for (std::size_t s = 0; s < lv.blocks.size(); ++s) {
    const SubdomainBlocks& b = lv.blocks[s];
    const int off = lv.aux_offsets()[s];
    const std::size_t f = b.fine.size(), c = b.coarse.size();
    std::span<const double> x1(x.data() + off, f);
    xc.resize(c);
    for (std::size_t k = 0; k < c; ++k) xc[k] = x[fa + b.coarse[k]];
    t1.resize(f);
    b.a11.multiply(x1, t1);
    std::span<double> y1(y.data() + off, f);
    for (std::size_t r = 0; r < f; ++r) y1[r] += t1[r];
    b.a12.multiply(xc, t1);
    for (std::size_t r = 0; r < f; ++r) y1[r] += t1[r];
    t2.resize(c);
    b.a12.multiply_transposed(x1, t2);
    for (std::size_t k = 0; k < c; ++k) y[fa + b.coarse[k]] += t2[k];
    b.a22.multiply(xc, t2);
    for (std::size_t k = 0; k < c; ++k) y[fa + b.coarse[k]] += t2[k];
  }
}

void aux_restrict(const AuxLevel& lv, std::span<const double> aux,
                  std::span<double> hat) {
  const int fa = fine_aux_size(lv);
  const int n1 = lv.num_fine();
  std::fill(hat.begin(), hat.begin() + n1, 0.0);
  for (std::size_t s = 0; s < lv.blocks.size(); ++s) {
    const auto& fine = lv.blocks[s].fine;
    const int off = lv.aux_offsets()[s];
    for (std::size_t r = 0; r < fine.size(); ++r) hat[fine[r]] += aux[off + r];
  }
  std::copy(aux.begin() + fa, aux.end(), hat.begin() + n1);
}

void aux_extend(const AuxLevel& lv, std::span<const double> hat,
                std::span<double> aux) {
  const int fa = fine_aux_size(lv);
  const int n1 = lv.num_fine();
  for (std::size_t s = 0; s < lv.blocks.size(); ++s) {
    const auto& fine = lv.blocks[s].fine;
    const int off = lv.aux_offsets()[s];
    for (std::size_t r = 0; r < fine.size(); ++r) aux[off + r] = hat[fine[r]];
  }
  std::copy(hat.begin() + n1, hat.end(), aux.begin() + fa);
}

DenseMatrix dense_aux_matrix(const AuxLevel& lv) {
  const int fa = fine_aux_size(lv);
  DenseMatrix d(lv.aux_size(), lv.aux_size());
  for (std::size_t s = 0; s < lv.blocks.size(); ++s) {
    const SubdomainBlocks& b = lv.blocks[s];
    const int off = lv.aux_offsets()[s];
    const int f = static_cast<int>(b.fine.size());
    const int c = static_cast<int>(b.coarse.size());
    for (int r = 0; r < f; ++r) {
      for (int q = 0; q < f; ++q) d(off + r, off + q) = b.a11(r, q);
      for (int q = 0; q < c; ++q) {
        d(off + r, fa + b.coarse[q]) = b.a12(r, q);
        d(fa + b.coarse[q], off + r) = b.a12(r, q);
      }
    }
    for (int r = 0; r < c; ++r)
      for (int q = 0; q < c; ++q)
        d(fa + b.coarse[r], fa + b.coarse[q]) += b.a22(r, q);
  }
  return d;
}

AuxSolver::AuxSolver(const AuxLevel& lv) : lv_(lv), q_(lv.q.to_dense()) {}

void AuxSolver::solve(std::span<const double> b, std::span<double> x) const {
  const int fa = fine_aux_size(lv_);
  if (static_cast<int>(b.size()) != lv_.aux_size() || b.size() != x.size())
    fail(ErrorKind::dimension, "aux solve: length mismatch");
  std::copy(b.begin(), b.end(), x.begin());
  std::span<double> x2 = x.subspan(fa);
  Vector t;
  for (std::size_t s = 0; s < lv_.blocks.size(); ++s) {
    const SubdomainBlocks& blk = lv_.blocks[s];
    std::span<double> x1(x.data() + lv_.aux_offsets()[s], blk.fine.size());
    blk.a11_factor.solve_in_place(x1);
    t.resize(blk.coarse.size());
    blk.a12.multiply_transposed(x1, t);
    for (std::size_t k = 0; k < t.size(); ++k) x2[blk.coarse[k]] -= t[k];
  }
  q_.solve_in_place(x2);
  Vector xc;
  for (std::size_t s = 0; s < lv_.blocks.size(); ++s) {
    const SubdomainBlocks& blk = lv_.blocks[s];
    xc.resize(blk.coarse.size());
    for (std::size_t k = 0; k < xc.size(); ++k) xc[k] = x2[blk.coarse[k]];
    t.resize(blk.fine.size());
    blk.a12.multiply(xc, t);
    blk.a11_factor.solve_in_place(t);
    double* x1 = x.data() + lv_.aux_offsets()[s];
    for (std::size_t r = 0; r < t.size(); ++r) x1[r] -= t[r];
  }
}

namespace {

// aux -> pi aux = R^T Pi aux
void apply_small_pi(const AsmgPreconditioner& p, int k,
                    std::span<const double> x, std::span<double> y) {
  const AuxLevel& lv = p.hierarchy().level(k);
  Vector hat(lv.transform.size());
  p.apply_pi(k, x, hat, nullptr);
  aux_extend(lv, hat, y);
}

// aux -> pi^T aux = Pi^T R aux
void apply_small_pi_t(const AsmgPreconditioner& p, int k,
                      std::span<const double> x, std::span<double> y) {
  const AuxLevel& lv = p.hierarchy().level(k);
  Vector hat(lv.transform.size());
  aux_restrict(lv, x, hat);
  p.apply_pi_t(k, hat, y, nullptr);
}

}  // namespace

CPiEstimate estimate_c_pi(const AsmgPreconditioner& p, int k,
                          int dense_limit) {
  const AuxLevel& lv = p.hierarchy().level(k);
  const int n = lv.aux_size();
  if (n > dense_limit) return estimate_c_pi_lanczos(p, k);
  const DenseMatrix at = dense_aux_matrix(lv);
  const DenseMatrix pi = dense_operator(
      [&](std::span<const double> x, std::span<double> y) {
        apply_small_pi(p, k, x, y);
      },
      n);
  DenseMatrix g = pi.transpose() * (at * pi);
  g.symmetrize();
  const Vector ev = generalized_eigenvalues(g, at);
  return {ev.back(), true, 0, true};
}

CPiEstimate estimate_c_pi_lanczos(const AsmgPreconditioner& p, int k,
                                  int max_iter, double rtol,
                                  std::uint64_t seed) {
  const AuxLevel& lv = p.hierarchy().level(k);
  const int n = lv.aux_size();
  const AuxSolver solver(lv);
  Vector t1(n), t2(n), w(n), aw(n);

  // T = A_tilde^{-1} pi^T A_tilde pi, self-adjoint in the A_tilde product.
  auto apply_t = [&](const Vector& v, Vector& out) {
    apply_small_pi(p, k, v, t1);
    aux_multiply(lv, t1, t2);
    apply_small_pi_t(p, k, t2, t1);
    solver.solve(t1, out);
  };

  std::vector<Vector> basis, abasis;
  Vector alpha, beta;
  Vector v = random_vector(n, seed);
  aux_multiply(lv, v, aw);
  double nv = std::sqrt(dot(v, aw));
  scale(1.0 / nv, v);
  scale(1.0 / nv, aw);

  CPiEstimate est;
  double prev = 0.0;
  for (int j = 0; j < std::min(max_iter, n); ++j) {
    basis.push_back(v);
    abasis.push_back(aw);
    apply_t(v, w);
    alpha.push_back(dot(w, abasis.back()));
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < basis.size(); ++i)
        axpy(-dot(w, abasis[i]), basis[i], w);
    }
    aux_multiply(lv, w, aw);
    const double b = std::sqrt(std::max(0.0, dot(w, aw)));

    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      tri(i, i) = alpha[i];
      if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri,
                                                       Eigen::EigenvaluesOnly);
    est.value = es.eigenvalues()(m - 1);
    est.iterations = m;
    if ((m > 2 && std::abs(est.value - prev) <= rtol * est.value) ||
        b <= 1e-14 * std::abs(est.value)) {
      est.converged = true;
      break;
    }
    prev = est.value;
    beta.push_back(b);
    for (int i = 0; i < n; ++i) {
      v[i] = w[i] / b;
      aw[i] /= b;
    }
    est.converged = false;
  }
  return est;
}

ComplexityReport operator_complexity(const Hierarchy& h) {
  ComplexityReport rep;
  double total = 0.0;
  for (int k = 0; k <= h.levels(); ++k) {
    rep.dofs.push_back(h.matrix(k).rows());
    rep.nnz.push_back(h.matrix(k).nnz());
    total += static_cast<double>(h.matrix(k).nnz());
  }
  rep.ratio = total / static_cast<double>(rep.nnz.front());
  for (int k = 0; k < h.levels(); ++k) {
    const AuxLevel& lv = h.level(k);
    std::vector<long> bound(lv.num_coarse(), 0);
    for (const auto& b : lv.blocks)
      for (int j : b.coarse) bound[j] += static_cast<long>(b.coarse.size());
    const CsrMatrix qt = lv.q.transpose();
    for (int j = 0; j < qt.rows(); ++j) {
      ++rep.columns_checked;
      if (static_cast<long>(qt.row_cols(j).size()) > bound[j])
        ++rep.bound_violations;
    }
  }
  return rep;
}

double inf_sup_constant(const SaddleSystem& system) {
  const int np = system.num_pressure();
  const Cholesky a(system.velocity.to_dense());
  const DenseMatrix bt = system.divergence.transpose().to_dense();
  const DenseMatrix x = a.solve(bt);  // A^{-1} B^T
  const DenseMatrix b = system.divergence.to_dense();
  DenseMatrix s = b * x;
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < np; ++j)
      s(i, j) /= std::sqrt(system.pressure_mass[i] * system.pressure_mass[j]);
  s.symmetrize();
  const Vector ev = symmetric_eigenvalues(s);
  return std::sqrt(std::max(0.0, ev.front()));
}

}  // namespace asmg
