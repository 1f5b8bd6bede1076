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

// Cellwise coefficient fields alpha = K^{-1} for the three benchmark
// families: binary islands, islands in a random background, and rasters
// (e.g. a 2-D SPE10 permeability slice).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "asmg/la.hpp"

namespace asmg {

enum class FieldSource { binary, random, raster, constant };

class CoefficientField {
 public:
  CoefficientField() = default;
  /// alpha indexed like Grid::cell (row-major from the bottom-left).
  CoefficientField(int n, Vector alpha, FieldSource source);

  static CoefficientField constant(int n, double alpha = 1.0);

  int n() const { return n_; }
  const Vector& alpha() const { return alpha_; }
  double alpha(int cell) const { return alpha_[cell]; }
  FieldSource source() const { return source_; }

 private:
  int n_ = 0;
  Vector alpha_;
  FieldSource source_ = FieldSource::constant;
};

/// Square inclusions on a regular lattice of the unit square. The default
/// is a 4 x 4 lattice of islands of side 1/8, centred at (2k+1)/8.
struct IslandLayout {
  int lattice = 4;
  double island_side = 0.125;
};

/// True for cells whose centre lies in an island (half-open boxes).
std::vector<bool> island_mask(int n, const IslandLayout& layout);

/// alpha = 1 on islands, 10^{-q} elsewhere.
CoefficientField gen_binary_islands(int n, int q,
                                    const IslandLayout& layout = {});

/// alpha = 1 on islands; each background cell independently draws an
/// integer exponent uniformly from {0, ..., q} and gets 10^{-exponent}.
/// Deterministic for a fixed seed on every platform (mt19937_64 with an
/// explicit rejection sampler).
CoefficientField gen_random_field(int n, int q, std::uint64_t seed,
                                  const IslandLayout& layout = {});

/// Permeability raster as stored on disk.
struct Raster {
  int nx = 0;
  int ny = 0;
  Vector permeability;  // row-major from the bottom-left cell
};

Raster read_raster(std::istream& is);
Raster load_raster(const std::string& path);
void write_raster(std::ostream& os, const Raster& raster);

/// Nearest-neighbour resampling in cell-centre coordinates onto an n x n
/// grid; alpha = 1/K followed by rescale().
CoefficientField resample(const Raster& raster, int n);

/// Raster of K = 1/alpha for a field.
Raster to_raster(const CoefficientField& field);

/// max K / min K.
double contrast(const CoefficientField& field);

/// K <- K * max(K^{-1}), i.e. alpha <- alpha / max(alpha); afterwards
/// min K = 1 and the contrast is unchanged.
CoefficientField rescale(const CoefficientField& field);

}  // namespace asmg
