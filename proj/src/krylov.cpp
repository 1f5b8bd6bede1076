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

#include "asmg/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "asmg/error.hpp"

namespace asmg {

namespace {

void check_sizes(std::span<const double> b, std::span<double> x) {
  if (b.size() != x.size())
    fail(ErrorKind::dimension, "krylov: rhs and solution lengths differ");
}

bool reached(double r, double r0, const IterationOptions& o) {
  return r == 0.0 || (o.rtol > 0.0 && r <= o.rtol * r0);
}

}  // namespace

Operator as_operator(const CsrMatrix& a) {
  return [&a](std::span<const double> x, std::span<double> y) {
    a.multiply(x, y);
  };
}

Operator identity_operator() {
  return [](std::span<const double> x, std::span<double> y) {
    std::copy(x.begin(), x.end(), y.begin());
  };
}

IterationResult pcg(const Operator& a, const Operator& precond,
                    std::span<const double> b, std::span<double> x,
                    const IterationOptions& options) {
  check_sizes(b, x);
  const std::size_t n = b.size();
  Vector r(n), z(n), p(n), ap(n);
  a(x, ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];

  IterationResult res;
  res.initial_residual = res.final_residual = norm2(r);
  res.residuals.push_back(res.initial_residual);
  if (reached(res.initial_residual, res.initial_residual, options)) {
    res.converged = true;
    return res;
  }

  precond(r, z);
  p = z;
  double rz = dot(r, z);
  while (res.iterations < options.max_iter) {
    a(p, ap);
    const double curv = dot(p, ap);
    if (!(curv > 0.0))
      fail(ErrorKind::breakdown,
           "pcg: non-positive curvature at iteration " +
               std::to_string(res.iterations + 1));
    const double alpha = rz / curv;
    axpy(alpha, p, x);
    axpy(-alpha, ap, r);
    ++res.iterations;
    res.final_residual = norm2(r);
    res.residuals.push_back(res.final_residual);
    if (reached(res.final_residual, res.initial_residual, options)) {
      res.converged = true;
      break;
    }
    precond(r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return res;
}

IterationResult gcg(const Operator& a, const Operator& precond,
                    std::span<const double> b, std::span<double> x,
                    const IterationOptions& options) {
  check_sizes(b, x);
  const std::size_t n = b.size();
  Vector r(n), v(n), av(n);
  a(x, av);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - av[i];

  IterationResult res;
  res.initial_residual = res.final_residual = norm2(r);
  res.residuals.push_back(res.initial_residual);
  if (reached(res.initial_residual, res.initial_residual, options)) {
    res.converged = true;
    return res;
  }

  std::vector<Vector> dirs, adirs;
  std::vector<double> curvs;
  while (res.iterations < options.max_iter) {
    precond(r, v);
    a(v, av);
    for (std::size_t j = 0; j < dirs.size(); ++j) {
      const double c = dot(av, dirs[j]) / curvs[j];
      axpy(-c, dirs[j], v);
      axpy(-c, adirs[j], av);
    }
    const double curv = dot(v, av);
    if (!(curv > 0.0))
      fail(ErrorKind::breakdown,
           "gcg: non-positive curvature at iteration " +
               std::to_string(res.iterations + 1));
    const double alpha = dot(r, v) / curv;
    axpy(alpha, v, x);
    axpy(-alpha, av, r);
    ++res.iterations;
    res.final_residual = norm2(r);
    res.residuals.push_back(res.final_residual);
    if (reached(res.final_residual, res.initial_residual, options)) {
      res.converged = true;
      break;
    }
    if (res.iterations < options.max_iter) {
      dirs.push_back(v);
      adirs.push_back(av);
      curvs.push_back(curv);
    }
  }
  if (options.rtol == 0.0) res.converged = true;
  return res;
}

IterationResult minres(const Operator& a, const Operator& precond,
                       std::span<const double> b, std::span<double> x,
                       const IterationOptions& options) {
  check_sizes(b, x);
  const std::size_t n = b.size();
  Vector v_prev(n, 0.0), v(n), v_next(n), z(n), z_next(n), az(n);
  Vector w_prev(n, 0.0), w(n, 0.0), w_next(n);

  a(x, az);
  for (std::size_t i = 0; i < n; ++i) v[i] = b[i] - az[i];
  precond(v, z);
  const double zv = dot(z, v);
  if (zv < 0.0)
    fail(ErrorKind::breakdown, "minres: preconditioner is not positive");
  double gamma = std::sqrt(zv);
  double gamma_prev = 1.0;
  const double gamma1 = gamma;

  IterationResult res;
  res.initial_residual = res.final_residual = gamma1;
  res.residuals.push_back(gamma1);
  if (reached(gamma1, gamma1, options)) {
    res.converged = true;
    return res;
  }

  double eta = gamma1;
  double s_prev = 0.0, s = 0.0, c_prev = 1.0, c = 1.0;
  while (res.iterations < options.max_iter) {
    scale(1.0 / gamma, z);
    a(z, az);
    const double delta = dot(az, z);
    for (std::size_t i = 0; i < n; ++i)
      v_next[i] = az[i] - (delta / gamma) * v[i] -
                  (gamma / gamma_prev) * v_prev[i];
    precond(v_next, z_next);
    const double zv_next = dot(z_next, v_next);
    if (zv_next < 0.0)
      fail(ErrorKind::breakdown, "minres: preconditioner is not positive");
    const double gamma_next = std::sqrt(zv_next);

    const double a0 = c * delta - c_prev * s * gamma;
    const double a1 = std::sqrt(a0 * a0 + gamma_next * gamma_next);
    const double a2 = s * delta + c_prev * c * gamma;
    const double a3 = s_prev * gamma;
    if (a1 == 0.0) fail(ErrorKind::breakdown, "minres: singular tridiagonal");
    const double c_next = a0 / a1;
    const double s_next = gamma_next / a1;
    for (std::size_t i = 0; i < n; ++i)
      w_next[i] = (z[i] - a3 * w_prev[i] - a2 * w[i]) / a1;
    axpy(c_next * eta, w_next, x);
    eta = -s_next * eta;

    ++res.iterations;
    res.final_residual = std::abs(eta);
    res.residuals.push_back(res.final_residual);

    std::swap(v_prev, v);
    std::swap(v, v_next);
    std::swap(z, z_next);
    std::swap(w_prev, w);
    std::swap(w, w_next);
    gamma_prev = gamma;
    gamma = gamma_next;
    s_prev = s;
    s = s_next;
    c_prev = c;
    c = c_next;

    if (reached(res.final_residual, gamma1, options)) {
      res.converged = true;
      break;
    }
    if (gamma == 0.0) {
      res.converged = true;  // invariant subspace: exact solution found
      break;
    }
  }
  return res;
}

}  // namespace asmg
