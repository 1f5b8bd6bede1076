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

#include "asmg/mesh_fem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "asmg/coeff.hpp"
#include "asmg/error.hpp"

namespace asmg {

Grid::Grid(int n) : n_(n) {
  if (n < 1) fail(ErrorKind::config, "grid: n must be positive");
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

Grid build_grid(int n) {
  if (n < 2 || !is_power_of_two(n)) {
    fail(ErrorKind::config,
         "grid: cells per side must be a power of two >= 2, got " +
             std::to_string(n));
  }
  return Grid(n);
}

CellEdges Grid::cell_edges(int c) const {
  const int i = c % n_;
  const int j = c / n_;
  return {{vertical_edge(i, j), vertical_edge(i + 1, j), horizontal_edge(i, j),
           horizontal_edge(i, j + 1)},
          {-1.0, 1.0, -1.0, 1.0}};
}

EdgeInfo Grid::edge_info(int e) const {
  if (e < num_vertical_edges()) {
    const int i = e % (n_ + 1);
    const int j = e / (n_ + 1);
    const int left = i > 0 ? cell(i - 1, j) : -1;
    const int right = i < n_ ? cell(i, j) : -1;
    return {EdgeOrientation::vertical, {left, right}, left < 0 || right < 0};
  }
  const int k = e - num_vertical_edges();
  const int i = k % n_;
  const int j = k / n_;
  const int below = j > 0 ? cell(i, j - 1) : -1;
  const int above = j < n_ ? cell(i, j) : -1;
  return {EdgeOrientation::horizontal, {below, above}, below < 0 || above < 0};
}

DenseMatrix local_mass_matrix(double alpha, double h) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    fail(ErrorKind::invalid_input,
         "local_velocity_matrix: coefficient must be positive, got " +
             std::to_string(alpha));
  }
  // Both basis functions of a direction point along the global normal, so
  // the coupling is positive.
  const double a = alpha * h * h / 3.0;
  const double b = alpha * h * h / 6.0;
  DenseMatrix m(4, 4);
  m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = a;
  m(0, 1) = m(1, 0) = m(2, 3) = m(3, 2) = b;
  return m;
}

namespace {
constexpr double kOutward[4] = {-1.0, 1.0, -1.0, 1.0};
}  // namespace

DenseMatrix local_divdiv_matrix() {
  // div phi = +-1/h on the cell; integrated products are +-1.
  DenseMatrix d(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) d(i, j) = kOutward[i] * kOutward[j];
  return d;
}

DenseMatrix local_velocity_matrix(double alpha, double h) {
  DenseMatrix m = local_mass_matrix(alpha, h);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) += kOutward[i] * kOutward[j];
  return m;
}

namespace {

void check_field(const Grid& grid, const CoefficientField& field) {
  if (field.n() != grid.n() ||
      static_cast<int>(field.alpha().size()) != grid.num_cells()) {
    fail(ErrorKind::dimension,
         "assembly: field has " + std::to_string(field.alpha().size()) +
             " cells, grid has " + std::to_string(grid.num_cells()));
  }
}

CsrMatrix assemble_cells(const Grid& grid, const CoefficientField& field,
                         bool with_divdiv) {
  check_field(grid, field);
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(grid.num_cells()) * 16);
  for (int c = 0; c < grid.num_cells(); ++c) {
    const DenseMatrix m =
        with_divdiv ? local_velocity_matrix(field.alpha(c), grid.h())
                    : local_mass_matrix(field.alpha(c), grid.h());
    const CellEdges ce = grid.cell_edges(c);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        t.push_back({ce.edge[a], ce.edge[b], m(a, b)});
  }
  return CsrMatrix::from_triplets(grid.num_edges(), grid.num_edges(),
                                  std::move(t));
}

}  // namespace

CsrMatrix assemble_velocity(const Grid& grid, const CoefficientField& field) {
  return assemble_cells(grid, field, true);
}

CsrMatrix assemble_velocity_mass(const Grid& grid,
                                 const CoefficientField& field) {
  return assemble_cells(grid, field, false);
}

void SaddleSystem::apply(std::span<const double> x, std::span<double> y) const {
  const int nu = num_velocity();
  const int np = num_pressure();
  if (static_cast<int>(x.size()) != nu + np ||
      static_cast<int>(y.size()) != nu + np) {
    fail(ErrorKind::dimension, "saddle apply: length mismatch");
  }
  const auto xu = x.first(nu);
  const auto xp = x.subspan(nu);
  auto yu = y.first(nu);
  auto yp = y.subspan(nu);
  mass.multiply(xu, yu);
  // yu -= B^T xp ; yp = -B xu
  for (int c = 0; c < np; ++c) {
    const auto cols = divergence.row_cols(c);
    const auto vals = divergence.row_vals(c);
    double s = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      yu[cols[k]] -= vals[k] * xp[c];
      s += vals[k] * xu[cols[k]];
    }
    yp[c] = -s;
  }
}

CsrMatrix SaddleSystem::assembled() const {
  const int nu = num_velocity();
  std::vector<Triplet> t;
  for (int i = 0; i < nu; ++i) {
    const auto c = mass.row_cols(i);
    const auto v = mass.row_vals(i);
    for (std::size_t k = 0; k < c.size(); ++k) t.push_back({i, c[k], v[k]});
  }
  for (int r = 0; r < num_pressure(); ++r) {
    const auto c = divergence.row_cols(r);
    const auto v = divergence.row_vals(r);
    for (std::size_t k = 0; k < c.size(); ++k) {
      t.push_back({nu + r, c[k], -v[k]});
      t.push_back({c[k], nu + r, -v[k]});
    }
  }
  return CsrMatrix::from_triplets(size(), size(), std::move(t));
}

SaddleSystem assemble_saddle(const Grid& grid, const CoefficientField& field,
                             std::span<const double> source) {
  check_field(grid, field);
  if (!source.empty() && static_cast<int>(source.size()) != grid.num_cells())
    fail(ErrorKind::dimension, "assemble_saddle: source length");
  SaddleSystem s;
  s.mass = assemble_velocity_mass(grid, field);
  s.velocity = assemble_velocity(grid, field);
  const double h = grid.h();
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(grid.num_cells()) * 4);
  for (int c = 0; c < grid.num_cells(); ++c) {
    const CellEdges ce = grid.cell_edges(c);
    for (int a = 0; a < 4; ++a) t.push_back({c, ce.edge[a], ce.sign[a] * h});
  }
  s.divergence = CsrMatrix::from_triplets(grid.num_cells(), grid.num_edges(),
                                          std::move(t));
  s.pressure_mass.assign(grid.num_cells(), h * h);
  s.rhs_u.assign(grid.num_edges(), 0.0);
  s.rhs_p.assign(grid.num_cells(), 0.0);
  for (std::size_t c = 0; c < source.size(); ++c)
    s.rhs_p[c] = -h * h * source[c];
  return s;
}

Vector assemble_rhs(const Grid& grid, double c) {
  const int n = grid.n();
  Vector f(grid.num_cells(), 0.0);
  if (c == 0.0) return f;
  struct Box {
    double x0, x1, y0, y1, value;
  };
  const Box boxes[2] = {{0.2, 0.3, 0.7, 0.8, c}, {0.7, 0.8, 0.2, 0.3, -c}};
  auto overlap = [](double a0, double a1, double b0, double b1) {
    return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
  };
  const double area = 1.0 / (static_cast<double>(n) * n);
  for (int j = 0; j < n; ++j) {
    const double y0 = static_cast<double>(j) / n;
    const double y1 = static_cast<double>(j + 1) / n;
    for (int i = 0; i < n; ++i) {
      const double x0 = static_cast<double>(i) / n;
      const double x1 = static_cast<double>(i + 1) / n;
      double v = 0.0;
      for (const Box& b : boxes) {
        double frac =
            overlap(x0, x1, b.x0, b.x1) * overlap(y0, y1, b.y0, b.y1) / area;
        if (frac < 1e-12) frac = 0.0;
        if (frac > 1.0 - 1e-12) frac = 1.0;
        v += frac * b.value;
      }
      f[grid.cell(i, j)] = v;
    }
  }
  return f;
}

}  // namespace asmg
