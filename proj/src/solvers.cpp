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

#include "asmg/solvers.hpp"

#include <algorithm>
#include <random>

#include "asmg/error.hpp"

namespace asmg {

BlockPreconditioner::BlockPreconditioner(
    const SaddleSystem& system, std::shared_ptr<const AsmgPreconditioner> asmg,
    double varpi, int velocity_max_iter)
    : system_(system),
      asmg_(std::move(asmg)),
      varpi_(varpi),
      velocity_max_iter_(velocity_max_iter) {
  if (!asmg_) fail(ErrorKind::config, "block preconditioner: null ASMG");
  if (!(varpi_ > 1.0))
    fail(ErrorKind::config, "block preconditioner: varpi must be > 1");
  if (asmg_->hierarchy().matrix(0).rows() != system_.num_velocity())
    fail(ErrorKind::dimension,
         "block preconditioner: hierarchy does not match the system");
}

void BlockPreconditioner::apply(std::span<const double> r,
                                std::span<double> z) const {
  const int nu = system_.num_velocity();
  const int np = system_.num_pressure();
  if (static_cast<int>(r.size()) != nu + np || r.size() != z.size())
    fail(ErrorKind::dimension, "block preconditioner: length mismatch");
  std::span<double> zu = z.first(nu);
  std::fill(zu.begin(), zu.end(), 0.0);
  const IterationResult res =
      gcg(asmg::as_operator(system_.velocity), asmg_->as_operator(inner_.get()),
          r.first(nu), zu, {1.0 / varpi_, velocity_max_iter_});
  ++*solves_;
  *iterations_ += res.iterations;
  *max_iterations_ = std::max(*max_iterations_, res.iterations);
  for (int c = 0; c < np; ++c)
    z[nu + c] = r[nu + c] / system_.pressure_mass[c];
}

Operator BlockPreconditioner::as_operator() const {
  return [this](std::span<const double> r, std::span<double> z) {
    apply(r, z);
  };
}

Vector random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Vector v(n);
  // 53 random mantissa bits mapped to [-1, 1).
  for (double& x : v)
    x = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
  return v;
}

SaddleSolveReport solve_saddle(const SaddleSystem& system,
                               const BlockPreconditioner& precond,
                               std::span<double> x,
                               const SaddleSolveOptions& options) {
  const int n = system.size();
  if (static_cast<int>(x.size()) != n)
    fail(ErrorKind::dimension, "solve_saddle: length mismatch");
  Vector b(n);
  std::copy(system.rhs_u.begin(), system.rhs_u.end(), b.begin());
  std::copy(system.rhs_p.begin(), system.rhs_p.end(),
            b.begin() + system.num_velocity());
  if (options.random_guess) {
    const Vector x0 = random_vector(n, options.seed);
    std::copy(x0.begin(), x0.end(), x.begin());
  } else {
    std::fill(x.begin(), x.end(), 0.0);
  }
  const Operator k = [&system](std::span<const double> v, std::span<double> y) {
    system.apply(v, y);
  };
  Vector r(n);
  k(x, r);
  for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
  const double r0 = norm2(r);

  const long solves_before = precond.velocity_solves();
  SaddleSolveReport rep;
  rep.minres = minres(k, precond.as_operator(), b, x,
                      {options.tol, options.max_iter});
  k(x, r);
  for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
  rep.true_residual = r0 > 0.0 ? norm2(r) / r0 : norm2(r);
  rep.velocity_solves = precond.velocity_solves() - solves_before;
  rep.max_velocity_iterations = precond.max_velocity_iterations();
  rep.max_inner_iterations = precond.inner_stats().max_inner_iterations;
  return rep;
}

}  // namespace asmg
