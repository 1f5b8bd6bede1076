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

// ILUE, point smoothers, the transfer operator Pi and the nonlinear
// AMLI-cycle ASMG preconditioner.
//
// Vectors "at level k" live in the two-level (hat) basis of that level:
// d_hat = J^(k)^T d. Auxiliary vectors are stored as the concatenation of
// the subdomain fine blocks (offsets AuxLevel::aux_offsets()) followed by
// the N2 coarse entries.

#include <memory>
#include <span>
#include <vector>

#include "asmg/asca.hpp"
#include "asmg/krylov.hpp"
#include "asmg/la.hpp"

namespace asmg {

enum class SmootherKind { none, gauss_seidel, jacobi };

struct SmootherSpec {
  SmootherKind kind = SmootherKind::gauss_seidel;
  int sweeps = 0;  // m
  double damping = 2.0 / 3.0;  // Jacobi only
};

/// One sweep x += M^{-1} (b - A x): forward Gauss-Seidel (M = D + L) or
/// damped Jacobi (M = D / damping).
void smooth_forward(const CsrMatrix& a, const SmootherSpec& spec,
                    std::span<const double> b, std::span<double> x);
/// One sweep x += M^{-T} (b - A x).
void smooth_backward(const CsrMatrix& a, const SmootherSpec& spec,
                     std::span<const double> b, std::span<double> x);
/// x += Mbar^{-1} (b - A x), Mbar = M (M + M^T - A)^{-1} M^T: a forward
/// sweep followed by a backward sweep.
void symmetrized_smooth(const CsrMatrix& a, const SmootherSpec& spec,
                        std::span<const double> b, std::span<double> x);

/// B_ILUE = L U with U = sum_i R_i^T U_i R_i and L = U^T diag(U)^{-1},
/// where D_i = L_i U_i, diag(L_i) = I. Local index lists must be
/// ascending so that U is upper triangular.
class Ilue {
 public:
  Ilue() = default;
  Ilue(int n, std::span<const std::vector<int>> dofs,
       std::span<const DenseMatrix> local);

  int size() const { return upper_.rows(); }
  const CsrMatrix& upper() const { return upper_; }
  /// y = B_ILUE^{-1} r
  void apply(std::span<const double> r, std::span<double> y) const;

 private:
  CsrMatrix upper_;
  Vector diag_;
};

struct AmliConfig {
  int nu = 1;  // 1: V-cycle, 2: W-cycle
  SmootherSpec smoother;
  double inner_tol = 1e-6;  // residual reduction of the D-solves in Pi
  int inner_max_iter = 200;
  bool linear = false;  // p(t) = 1 - t instead of nu GCG iterations
  double tau = 1.0;     // the auxiliary correction is scaled by 1 / tau
  /// Solve with D by a sparse Cholesky factorisation instead of PCG; makes
  /// Pi exact, for diagnostics and oracles.
  bool direct_d_solve = false;
  /// Evaluate the auxiliary space correction step by step (restrict, local
  /// solves, coarse correction, back substitution, extend). The
  /// default evaluates the same operator in eliminated form,
  /// v1 = D^{-1}(d1 - A12 p2), v2 = p2 with g = d2 - A21 D^{-1} d1, which
  /// avoids the local round trip A_tilde11^{-1} (A_tilde11 w) that loses
  /// all accuracy at high contrast.
  bool literal_steps = false;
};

struct ApplyStats {
  long inner_solves = 0;
  long inner_iterations = 0;
  int max_inner_iterations = 0;  // n_i
};

class AsmgPreconditioner {
 public:
  AsmgPreconditioner(std::shared_ptr<const Hierarchy> hierarchy,
                     const AmliConfig& config);

  const Hierarchy& hierarchy() const { return *hierarchy_; }
  const AmliConfig& config() const { return config_; }
  const Ilue& ilue(int k) const { return ilue_.at(k); }

  /// x1 = A_hat11^{-1} b1 by ILUE-preconditioned PCG from a zero guess.
  void solve_d11(int k, std::span<const double> b1, std::span<double> x1,
                 ApplyStats* stats) const;

  /// aux = Pi^T d_hat
  void apply_pi_t(int k, std::span<const double> d_hat,
                  std::span<double> aux, ApplyStats* stats) const;
  /// v_hat = Pi aux
  void apply_pi(int k, std::span<const double> aux, std::span<double> v_hat,
                ApplyStats* stats) const;

  /// Auxiliary space correction C^{-1} = Pi A_tilde^{-1} Pi^T at level
  /// k < levels.
  void apply_c(int k, std::span<const double> d_hat, std::span<double> v_hat,
               ApplyStats* stats) const;
  /// Pre-smoothing, auxiliary space correction, post-smoothing; equals
  /// apply_c when m = 0.
  void apply_b(int k, std::span<const double> d_hat, std::span<double> v_hat,
               ApplyStats* stats) const;

  /// Approximate inverse of A^(k) in the original basis of level k; at the
  /// coarsest level the exact solve.
  void apply_level(int k, std::span<const double> r, std::span<double> z,
                   ApplyStats* stats) const;

  /// z = J^(0) B_hat^(0)[J^(0)^T r] (or the direct solve when levels = 0).
  void apply(std::span<const double> r, std::span<double> z,
             ApplyStats* stats = nullptr) const;

  Operator as_operator(ApplyStats* stats = nullptr) const;

 private:
  void apply_c_literal(int k, std::span<const double> d_hat,
                       std::span<double> v_hat, ApplyStats* stats) const;
  void coarse_correction(int k, std::span<const double> g,
                         std::span<double> p, ApplyStats* stats) const;

  std::shared_ptr<const Hierarchy> hierarchy_;
  AmliConfig config_;
  std::vector<Ilue> ilue_;
  struct DirectSolver;
  std::vector<std::shared_ptr<const DirectSolver>> direct_;
};

}  // namespace asmg
