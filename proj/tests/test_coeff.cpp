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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "asmg/coeff.hpp"
#include "asmg/error.hpp"

namespace asmg {
namespace {

// Default layout in units of 1/16: per axis the islands cover
// [4k + 1, 4k + 3) for k = 0..3, tested at the cell centre.
bool oracle_island(int n, int i, int j) {
  auto axis = [n](int c) {
    const double t = (c + 0.5) * 16.0 / n;
    const double r = std::fmod(t, 4.0);
    return r >= 1.0 && r < 3.0;
  };
  return axis(i) && axis(j);
}

TEST(BinaryIslands, ZeroContrastIsConstant) {
  const CoefficientField f = gen_binary_islands(16, 0);
  for (double a : f.alpha()) EXPECT_EQ(a, 1.0);
  EXPECT_EQ(contrast(f), 1.0);
}

TEST(BinaryIslands, IslandCellsMatchLattice) {
  const int n = 32;
  const CoefficientField f = gen_binary_islands(n, 6);
  int islands = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const bool in = oracle_island(n, i, j);
      EXPECT_EQ(f.alpha(j * n + i), in ? 1.0 : 1e-6) << i << "," << j;
      islands += in;
    }
  }
  // 16 islands of (n/8)^2 cells.
  EXPECT_EQ(islands, 16 * (n / 8) * (n / 8));
  EXPECT_DOUBLE_EQ(contrast(f), 1e6);
}

TEST(BinaryIslands, ContrastIsTenToTheQ) {
  for (int q = 1; q <= 6; ++q)
    EXPECT_NEAR(contrast(gen_binary_islands(16, q)) / std::pow(10.0, q), 1.0,
                1e-12);
}

TEST(BinaryIslands, RejectsOversizedLayout) {
  EXPECT_THROW(gen_binary_islands(16, 2, {4, 0.3}), Error);
  EXPECT_THROW(gen_binary_islands(16, -1), Error);
}

TEST(RandomField, ZeroContrastIgnoresSeed) {
  for (std::uint64_t seed : {1u, 2u, 99u})
    for (double a : gen_random_field(16, 0, seed).alpha()) EXPECT_EQ(a, 1.0);
}

TEST(RandomField, DeterministicForSeed) {
  const auto a = gen_random_field(8, 2, 1234).alpha();
  const auto b = gen_random_field(8, 2, 1234).alpha();
  EXPECT_EQ(a, b);
  EXPECT_NE(a, gen_random_field(8, 2, 1235).alpha());
}

TEST(RandomField, IslandsKeepUnitCoefficient) {
  const int n = 32;
  const CoefficientField f = gen_random_field(n, 5, 3);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (oracle_island(n, i, j)) {
        EXPECT_EQ(f.alpha(j * n + i), 1.0);
      }
}

TEST(RandomField, ContrastBoundedByTenToTheQ) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const CoefficientField f = gen_random_field(16, 4, seed);
    const double k = contrast(f);
    EXPECT_LE(k, 1e4 * (1 + 1e-12));
    bool drew_four = false;
    for (double a : f.alpha()) drew_four |= std::abs(a - 1e-4) < 1e-18;
    EXPECT_EQ(drew_four, std::abs(k - 1e4) < 1e-8);
  }
}

std::vector<long> exponent_histogram(int n, int q, std::uint64_t seed) {
  const CoefficientField f = gen_random_field(n, q, seed);
  const auto mask = island_mask(n, {});
  std::vector<long> hist(q + 1, 0);
  for (std::size_t c = 0; c < mask.size(); ++c) {
    if (mask[c]) continue;
    const int e = static_cast<int>(std::lround(-std::log10(f.alpha()[c])));
    EXPECT_GE(e, 0);
    EXPECT_LE(e, q);
    ++hist[std::clamp(e, 0, q)];
  }
  return hist;
}

// Pearson chi-square against the uniform distribution on {0..q}; 22.46 is
// the 0.999 quantile for 6 degrees of freedom.
TEST(RandomField, ExponentHistogramIsUniform) {
  const int q = 6;
  for (std::uint64_t seed : {1u, 42u, 2026u}) {
    const auto hist = exponent_histogram(512, q, seed);
    long total = 0;
    for (long h : hist) total += h;
    const double mean = static_cast<double>(total) / (q + 1);
    double chi2 = 0.0;
    for (long h : hist) chi2 += (h - mean) * (h - mean) / mean;
    EXPECT_LT(chi2, 22.46) << "seed " << seed;
  }
}

// Per-exponent 3 sigma bound on a pooled sample of several fields.
TEST(RandomField, PooledExponentCountsWithinThreeSigma) {
  const int q = 6;
  std::vector<long> pooled(q + 1, 0);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto hist = exponent_histogram(512, q, seed);
    for (int e = 0; e <= q; ++e) pooled[e] += hist[e];
  }
  long total = 0;
  for (long h : pooled) total += h;
  const double p = 1.0 / (q + 1);
  const double mean = total * p;
  const double sigma = std::sqrt(total * p * (1 - p));
  for (int e = 0; e <= q; ++e)
    EXPECT_LE(std::abs(pooled[e] - mean), 3 * sigma) << "exponent " << e;
}

TEST(Raster, IdentityResampling) {
  std::istringstream in("2 2\n1 10\n100 1000\n");
  const Raster r = read_raster(in);
  const CoefficientField f = resample(r, 2);
  const Vector expect{1.0, 0.1, 0.01, 0.001};
  for (int c = 0; c < 4; ++c) EXPECT_DOUBLE_EQ(f.alpha(c), expect[c]);
}

TEST(Raster, NearestNeighbourReplication) {
  std::istringstream in("2 2\n1 10\n100 1000\n");
  const CoefficientField f = resample(read_raster(in), 4);
  const Vector expect{1.0, 0.1, 0.01, 0.001};
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i)
      EXPECT_DOUBLE_EQ(f.alpha(j * 4 + i), expect[(j / 2) * 2 + i / 2]);
}

TEST(Raster, ResampleRescalesToUnitMinimumPermeability) {
  std::istringstream in("3 1\n5 50 0.5\n");
  const CoefficientField f = resample(read_raster(in), 4);
  const double amax = *std::max_element(f.alpha().begin(), f.alpha().end());
  EXPECT_DOUBLE_EQ(amax, 1.0);
  EXPECT_NEAR(contrast(f), 100.0, 1e-12);
}

TEST(Raster, WriteReadRoundTrip) {
  const CoefficientField f = gen_random_field(8, 3, 17);
  std::stringstream io;
  write_raster(io, to_raster(f));
  const Raster back = read_raster(io);
  EXPECT_EQ(back.nx, 8);
  EXPECT_EQ(back.ny, 8);
  const Raster r = to_raster(f);
  EXPECT_EQ(back.permeability, r.permeability);
}

TEST(Raster, ParseErrors) {
  const char* bad[] = {
      "",                 // empty
      "2\n1 2\n",         // short header
      "2 2 2\n1 2 3 4",   // long header
      "2 2\n1 2 3\n",     // too few values
      "2 2\n1 2 3 4 5\n", // too many values
      "2 2\n1 2 x 4\n",   // not a number
      "2 2\n1 2 0 4\n",   // zero permeability
      "2 2\n1 -2 3 4\n",  // negative
      "0 2\n",            // zero size
  };
  for (const char* text : bad) {
    std::istringstream in(text);
    try {
      read_raster(in);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::io) << text;
    }
  }
}

TEST(Raster, MissingFileIsIoError) {
  try {
    load_raster("/nonexistent/raster.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
  }
}

TEST(Rescale, UnchangedWhenAlreadyNormalised) {
  const CoefficientField f = gen_random_field(8, 4, 2);
  EXPECT_EQ(rescale(f).alpha(), f.alpha());
}

TEST(Rescale, ShiftsPermeabilityRange) {
  // K in {1e-3, 1e4} -> K in {1, 1e7}.
  const CoefficientField f(2, {1e3, 1e-4, 1e3, 1e-4}, FieldSource::raster);
  const CoefficientField g = rescale(f);
  const Raster k = to_raster(g);
  EXPECT_NEAR(*std::min_element(k.permeability.begin(), k.permeability.end()),
              1.0, 1e-12);
  EXPECT_NEAR(*std::max_element(k.permeability.begin(), k.permeability.end()),
              1e7, 1e-5);
  EXPECT_NEAR(contrast(f) / 1e7, 1.0, 1e-12);
  EXPECT_NEAR(contrast(g) / 1e7, 1.0, 1e-12);
}

TEST(Rescale, PreservesContrastAndIsIdempotent) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Vector a = gen_random_field(16, 6, seed).alpha();
    for (double& x : a) x *= 37.5;
    const CoefficientField f(16, a, FieldSource::random);
    const CoefficientField g = rescale(f);
    EXPECT_NEAR(contrast(g) / contrast(f), 1.0, 1e-12);
    EXPECT_EQ(rescale(g).alpha(), g.alpha());
  }
}

TEST(Contrast, ScaleInvariant) {
  Vector a = gen_random_field(8, 5, 4).alpha();
  const double k = contrast(CoefficientField(8, a, FieldSource::random));
  for (double& x : a) x *= 1e-3;
  EXPECT_NEAR(contrast(CoefficientField(8, a, FieldSource::random)) / k, 1.0,
              1e-12);
}

TEST(Field, RejectsBadValues) {
  EXPECT_THROW(CoefficientField(2, {1, 1, 1}, FieldSource::raster), Error);
  EXPECT_THROW(CoefficientField(2, {1, 0, 1, 1}, FieldSource::raster), Error);
}

}  // namespace
}  // namespace asmg
