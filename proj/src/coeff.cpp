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

#include "asmg/coeff.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "asmg/error.hpp"

namespace asmg {

CoefficientField::CoefficientField(int n, Vector alpha, FieldSource source)
    : n_(n), alpha_(std::move(alpha)), source_(source) {
  if (n <= 0 || alpha_.size() != static_cast<std::size_t>(n) * n)
    fail(ErrorKind::dimension, "coefficient field: expected n*n values");
  for (double a : alpha_) {
    if (!(a > 0.0) || !std::isfinite(a))
      fail(ErrorKind::invalid_input, "coefficient field: alpha must be > 0");
  }
}

CoefficientField CoefficientField::constant(int n, double alpha) {
  return CoefficientField(n, Vector(static_cast<std::size_t>(n) * n, alpha),
                          FieldSource::constant);
}

std::vector<bool> island_mask(int n, const IslandLayout& layout) {
  if (layout.lattice < 1 || !(layout.island_side > 0.0) ||
      layout.lattice * layout.island_side > 1.0) {
    fail(ErrorKind::config,
         "island layout: islands of side " +
             std::to_string(layout.island_side) + " on a " +
             std::to_string(layout.lattice) +
             "-lattice do not fit in the unit square");
  }
  // Per axis: cells whose centre lies in [c - s/2, c + s/2) for some centre
  // c = (2k + 1) / (2 lattice). Evaluated in units of cells.
  std::vector<bool> axis(n, false);
  for (int k = 0; k < layout.lattice; ++k) {
    const double centre = (2.0 * k + 1.0) / (2.0 * layout.lattice) * n;
    const double lo = centre - 0.5 * layout.island_side * n;
    const double hi = centre + 0.5 * layout.island_side * n;
    for (int i = 0; i < n; ++i) {
      const double mid = i + 0.5;
      if (lo <= mid && mid < hi) axis[i] = true;
    }
  }
  std::vector<bool> mask(static_cast<std::size_t>(n) * n, false);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) mask[j * n + i] = axis[i] && axis[j];
  return mask;
}

CoefficientField gen_binary_islands(int n, int q, const IslandLayout& layout) {
  if (q < 0) fail(ErrorKind::config, "binary islands: q must be >= 0");
  const auto mask = island_mask(n, layout);
  const double background = std::pow(10.0, -q);
  Vector alpha(mask.size());
  for (std::size_t c = 0; c < mask.size(); ++c)
    alpha[c] = mask[c] ? 1.0 : background;
  return CoefficientField(n, std::move(alpha), FieldSource::binary);
}

namespace {

// Unbiased draw from [0, bound) by rejection; the output of mt19937_64 is
// fixed by the standard, unlike std::uniform_int_distribution.
std::uint64_t uniform_below(std::uint64_t bound, std::mt19937_64& rng) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

CoefficientField gen_random_field(int n, int q, std::uint64_t seed,
                                  const IslandLayout& layout) {
  if (q < 0) fail(ErrorKind::config, "random field: q must be >= 0");
  const auto mask = island_mask(n, layout);
  std::mt19937_64 rng(seed);
  Vector alpha(mask.size());
  for (std::size_t c = 0; c < mask.size(); ++c) {
    if (mask[c]) {
      alpha[c] = 1.0;
      continue;
    }
    const auto e = uniform_below(static_cast<std::uint64_t>(q) + 1, rng);
    alpha[c] = std::pow(10.0, -static_cast<double>(e));
  }
  return CoefficientField(n, std::move(alpha), FieldSource::random);
}

Raster read_raster(std::istream& is) {
  Raster r;
  std::string line;
  if (!std::getline(is, line))
    fail(ErrorKind::io, "raster: missing header line \"nx ny\"");
  {
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> r.nx >> r.ny) || (hs >> extra))
      fail(ErrorKind::io, "raster: header must be \"nx ny\", got \"" + line +
                              "\"");
  }
  if (r.nx <= 0 || r.ny <= 0)
    fail(ErrorKind::io, "raster: dimensions must be positive");
  const std::size_t count = static_cast<std::size_t>(r.nx) * r.ny;
  r.permeability.reserve(count);
  std::string token;
  while (is >> token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size())
      fail(ErrorKind::io, "raster: value " +
                              std::to_string(r.permeability.size() + 1) +
                              " is not a number: \"" + token + "\"");
    if (!(v > 0.0) || !std::isfinite(v))
      fail(ErrorKind::io, "raster: value " +
                              std::to_string(r.permeability.size() + 1) +
                              " must be strictly positive, got " + token);
    r.permeability.push_back(v);
  }
  if (r.permeability.size() != count)
    fail(ErrorKind::io, "raster: expected " + std::to_string(count) +
                            " values, found " +
                            std::to_string(r.permeability.size()));
  return r;
}

Raster load_raster(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "raster: cannot open " + path);
  try {
    return read_raster(in);
  } catch (const Error& e) {
    fail(e.kind(), path + ": " + e.what());
  }
}

void write_raster(std::ostream& os, const Raster& raster) {
  os << raster.nx << ' ' << raster.ny << '\n' << std::setprecision(17);
  for (int j = 0; j < raster.ny; ++j) {
    for (int i = 0; i < raster.nx; ++i) {
      if (i) os << ' ';
      os << raster.permeability[static_cast<std::size_t>(j) * raster.nx + i];
    }
    os << '\n';
  }
}

CoefficientField resample(const Raster& raster, int n) {
  if (n <= 0) fail(ErrorKind::config, "resample: n must be positive");
  Vector alpha(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    const int sj = std::min(raster.ny - 1,
                            static_cast<int>((j + 0.5) * raster.ny / n));
    for (int i = 0; i < n; ++i) {
      const int si = std::min(raster.nx - 1,
                              static_cast<int>((i + 0.5) * raster.nx / n));
      alpha[static_cast<std::size_t>(j) * n + i] =
          1.0 / raster.permeability[static_cast<std::size_t>(sj) * raster.nx +
                                    si];
    }
  }
  return rescale(CoefficientField(n, std::move(alpha), FieldSource::raster));
}

Raster to_raster(const CoefficientField& field) {
  Raster r{field.n(), field.n(), Vector(field.alpha().size())};
  for (std::size_t c = 0; c < r.permeability.size(); ++c)
    r.permeability[c] = 1.0 / field.alpha()[c];
  return r;
}

double contrast(const CoefficientField& field) {
  const auto [lo, hi] =
      std::minmax_element(field.alpha().begin(), field.alpha().end());
  // K = 1/alpha, so max K / min K = max alpha / min alpha.
  return *hi / *lo;
}

CoefficientField rescale(const CoefficientField& field) {
  const double amax =
      *std::max_element(field.alpha().begin(), field.alpha().end());
  if (amax == 1.0) return field;
  Vector alpha = field.alpha();
  for (double& a : alpha) a /= amax;
  return CoefficientField(field.n(), std::move(alpha), field.source());
}

}  // namespace asmg
