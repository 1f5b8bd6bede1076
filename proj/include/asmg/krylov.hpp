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

// Krylov iterations on abstract operators: preconditioned CG, the
// generalised (flexible) CG used with variable preconditioners, and
// preconditioned MinRes for symmetric indefinite systems.

#include <functional>
#include <span>
#include <vector>

#include "asmg/la.hpp"

namespace asmg {

/// y = Op(x). Preconditioners use the same signature (y = B^{-1} x).
using Operator =
    std::function<void(std::span<const double>, std::span<double>)>;

Operator as_operator(const CsrMatrix& a);
Operator identity_operator();

struct IterationOptions {
  /// Stop when the monitored residual norm is <= rtol times its initial
  /// value. rtol = 0 runs exactly max_iter iterations (or until the
  /// residual vanishes) and reports converged.
  double rtol = 1e-8;
  int max_iter = 1000;
};

struct IterationResult {
  bool converged = false;
  int iterations = 0;
  double initial_residual = 0.0;
  double final_residual = 0.0;
  /// Monitored residual norm after each iteration, starting with the
  /// initial one (size iterations + 1).
  std::vector<double> residuals;
};

/// Preconditioned CG; x holds the initial guess on entry. Monitors the
/// Euclidean residual norm. A non-positive curvature p^T A p throws
/// ErrorKind::breakdown.
IterationResult pcg(const Operator& a, const Operator& precond,
                    std::span<const double> b, std::span<double> x,
                    const IterationOptions& options);

/// Generalised conjugate gradient with a possibly nonlinear
/// preconditioner: every new direction is A-orthogonalised against all
/// previous ones. Monitors the Euclidean residual norm. Non-positive
/// curvature throws ErrorKind::breakdown.
IterationResult gcg(const Operator& a, const Operator& precond,
                    std::span<const double> b, std::span<double> x,
                    const IterationOptions& options);

/// Preconditioned MinRes (SPD preconditioner, symmetric a). Monitors the
/// preconditioned residual norm ||r||_{B^{-1}}, which is non-increasing.
IterationResult minres(const Operator& a, const Operator& precond,
                       std::span<const double> b, std::span<double> x,
                       const IterationOptions& options);

}  // namespace asmg
