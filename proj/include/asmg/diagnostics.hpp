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

// Convergence and robustness diagnostics: average residual reduction,
// A-norm of the error propagation operator, the constant c_Pi, operator
// complexity and a dense inf-sup check, plus the dense auxiliary-space
// objects they are built from.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "asmg/asca.hpp"
#include "asmg/krylov.hpp"
#include "asmg/la.hpp"
#include "asmg/mesh_fem.hpp"
#include "asmg/precond.hpp"

namespace asmg {

/// (||r_n|| / ||r_0||)^{1/n} over a residual history r_0 .. r_n.
double rho_r(std::span<const double> residuals);

/// Dense matrix whose column j is op(e_j).
DenseMatrix dense_operator(const Operator& op, int n);

/// Eigenvalues of a symmetric matrix, ascending.
Vector symmetric_eigenvalues(const DenseMatrix& a);
/// Eigenvalues of a x = lambda b x for symmetric a and SPD b, ascending.
Vector generalized_eigenvalues(const DenseMatrix& a, const DenseMatrix& b);

struct PowerEstimate {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;  // false: estimate is approximate
};

/// ||I - C^{-1} A||_A by power iteration in the A-inner product; stops when
/// successive estimates agree to rtol (relative).
PowerEstimate estimate_rho_e(const CsrMatrix& a, const Operator& c_inverse,
                             int max_iter = 500, double rtol = 1e-4,
                             std::uint64_t seed = 1);

/// y = A_tilde x on auxiliary vectors of a level.
void aux_multiply(const AuxLevel& lv, std::span<const double> x,
                  std::span<double> y);
/// hat = R aux
void aux_restrict(const AuxLevel& lv, std::span<const double> aux,
                  std::span<double> hat);
/// aux = R^T hat
void aux_extend(const AuxLevel& lv, std::span<const double> hat,
                std::span<double> aux);
/// Assembled A_tilde (dense); for oracles and small levels only.
DenseMatrix dense_aux_matrix(const AuxLevel& lv);

/// A_tilde^{-1} through its block factorisation with the local fine
/// blocks and a dense Cholesky factorisation of Q.
class AuxSolver {
 public:
  explicit AuxSolver(const AuxLevel& lv);
  void solve(std::span<const double> b, std::span<double> x) const;

 private:
  const AuxLevel& lv_;
  Cholesky q_;
};

struct CPiEstimate {
  double value = 0.0;
  bool dense = false;
  int iterations = 0;
  bool converged = true;
};

/// c_Pi = ||R^T Pi||^2_{A_tilde} at level k: largest generalised
/// eigenvalue of (pi^T A_tilde pi, A_tilde). Dense when the auxiliary
/// dimension is at most dense_limit, Lanczos in the A_tilde-inner product
/// otherwise. The D-solves use the preconditioner's inner tolerance, which
/// should be tight (1e-12) for this purpose.
CPiEstimate estimate_c_pi(const AsmgPreconditioner& p, int k,
                          int dense_limit = 4000);
CPiEstimate estimate_c_pi_lanczos(const AsmgPreconditioner& p, int k,
                                  int max_iter = 200, double rtol = 1e-9,
                                  std::uint64_t seed = 1);

struct ComplexityReport {
  std::vector<int> dofs;
  std::vector<std::size_t> nnz;
  double ratio = 1.0;
  /// Columns j of Q^(k) violating nnz_j <= sum_{i : j in C_i} |C_i|.
  long bound_violations = 0;
  long columns_checked = 0;
};

ComplexityReport operator_complexity(const Hierarchy& h);

/// Smallest singular value of M_p^{-1/2} B_div A^{-1/2} (dense).
double inf_sup_constant(const SaddleSystem& system);

}  // namespace asmg
