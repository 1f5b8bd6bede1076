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

// Outer solvers for the mixed system: the block-diagonal preconditioner
// diag(A, M_p) realised with ASMG on the velocity block, and MinRes.

#include <cstdint>
#include <memory>
#include <span>

#include "asmg/krylov.hpp"
#include "asmg/mesh_fem.hpp"
#include "asmg/precond.hpp"

namespace asmg {

/// Velocity block: GCG on A preconditioned by ASMG, run from a zero guess
/// until the residual is reduced by varpi (or velocity_max_iter steps).
/// Pressure block: M_p^{-1}.
class BlockPreconditioner {
 public:
  BlockPreconditioner(const SaddleSystem& system,
                      std::shared_ptr<const AsmgPreconditioner> asmg,
                      double varpi, int velocity_max_iter = 200);

  void apply(std::span<const double> r, std::span<double> z) const;
  Operator as_operator() const;

  /// Statistics accumulated over all applications.
  const ApplyStats& inner_stats() const { return *inner_; }
  long velocity_solves() const { return *solves_; }
  long velocity_iterations() const { return *iterations_; }
  int max_velocity_iterations() const { return *max_iterations_; }

 private:
  const SaddleSystem& system_;
  std::shared_ptr<const AsmgPreconditioner> asmg_;
  double varpi_;
  int velocity_max_iter_;
  std::shared_ptr<ApplyStats> inner_ = std::make_shared<ApplyStats>();
  std::shared_ptr<long> solves_ = std::make_shared<long>(0);
  std::shared_ptr<long> iterations_ = std::make_shared<long>(0);
  std::shared_ptr<int> max_iterations_ = std::make_shared<int>(0);
};

struct SaddleSolveOptions {
  double tol = 1e-8;
  int max_iter = 500;
  /// Random initial guess (seeded); otherwise zero.
  bool random_guess = false;
  std::uint64_t seed = 1;
};

struct SaddleSolveReport {
  IterationResult minres;
  /// ||b - K x|| / ||b - K x0|| recomputed from the returned iterate.
  double true_residual = 0.0;
  long velocity_solves = 0;
  int max_velocity_iterations = 0;  // n_ASMG per velocity solve, worst case
  int max_inner_iterations = 0;     // n_i
};

/// Solves [[M, -B^T], [-B, 0]] [u; p] = [rhs_u; rhs_p]; x = [u; p] on exit.
SaddleSolveReport solve_saddle(const SaddleSystem& system,
                               const BlockPreconditioner& precond,
                               std::span<double> x,
                               const SaddleSolveOptions& options);

/// Uniform values in [-1, 1) from mt19937_64 (a fixed algorithm, so the
/// sequence is reproducible across platforms).
Vector random_vector(std::size_t n, std::uint64_t seed);

}  // namespace asmg
