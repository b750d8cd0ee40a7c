// Copyright 2026 The mlcompat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Synthetic "nuclei" micrographs: bright discs on a dark noisy background,
// with a known object count.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "mlcompat/error.hpp"
#include "mlcompat/image_tools.hpp"
#include "mlcompat/random.hpp"

namespace mlcompat {

struct SyntheticSpec {
  std::size_t rows = 100;
  std::size_t cols = 100;
  std::size_t num_blobs = 5;
  std::size_t blob_radius = 3;
  double background_level = 0.1;
  double foreground_level = 0.8;
  double noise_sigma = 0.02;
  std::uint64_t seed = 42;

  /// Throws InvalidArgument unless levels lie in [0,1] with
  /// foreground > background + 4 sigma.
  void validate() const {
    if (rows == 0 || cols == 0) throw InvalidArgument("synthetic image needs positive size");
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(background_level) || !in_unit(foreground_level))
      throw InvalidArgument("synthetic levels must lie in [0,1]");
    if (!(noise_sigma >= 0.0)) throw InvalidArgument("noise sigma must be non-negative");
    if (!(foreground_level > background_level + 4.0 * noise_sigma))
      throw InvalidArgument("foreground must exceed background by more than 4 sigma");
  }
};

struct SyntheticImage {
  GrayImage image;
  std::size_t ground_truth_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> centers;  // (row, col)
};

// Minimum center distance: two discs of radius r whose centers are at least
// 2r+3 apart keep two background pixels between them in every direction.
inline double min_center_distance(std::size_t radius) { return 2.0 * radius + 3.0; }

inline constexpr std::size_t kPlacementAttemptsPerBlob = 2000;

/// Deterministic in `spec.seed`. Discs lie fully inside the image; noise is
/// Gaussian truncated at two sigma, then clamped to [0,1].
inline SyntheticImage generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const std::size_t r = spec.blob_radius;
  const double area_needed = static_cast<double>(spec.num_blobs) * std::numbers::pi *
                             std::pow(min_center_distance(r) / 2.0, 2);
  const bool fits = 2 * r + 1 <= spec.rows && 2 * r + 1 <= spec.cols;
  if (spec.num_blobs > 0 &&
      (!fits || area_needed > static_cast<double>(spec.rows * spec.cols)))
    throw PlacementInfeasible("cannot place " + std::to_string(spec.num_blobs) +
                              " blobs of radius " + std::to_string(r) + " in " +
                              std::to_string(spec.rows) + "x" + std::to_string(spec.cols));

  Rng rng(spec.seed);
  SyntheticImage out;
  const double min_dist2 = std::pow(min_center_distance(r), 2);
  for (std::size_t b = 0; b < spec.num_blobs; ++b) {
    bool placed = false;
    for (std::size_t attempt = 0; attempt < kPlacementAttemptsPerBlob && !placed; ++attempt) {
      const std::size_t cr = r + rng.below(spec.rows - 2 * r);
      const std::size_t cc = r + rng.below(spec.cols - 2 * r);
      placed = std::all_of(out.centers.begin(), out.centers.end(), [&](const auto& p) {
        const double dr = static_cast<double>(p.first) - static_cast<double>(cr);
        const double dc = static_cast<double>(p.second) - static_cast<double>(cc);
        return dr * dr + dc * dc >= min_dist2;
      });
      if (placed) out.centers.emplace_back(cr, cc);
    }
    if (!placed)
      throw PlacementInfeasible("rejection sampling gave up on blob " + std::to_string(b + 1) +
                                " of " + std::to_string(spec.num_blobs));
  }

  std::vector<double> px(spec.rows * spec.cols, spec.background_level);
  const auto r2 = static_cast<long long>(r * r);
  for (const auto& [cr, cc] : out.centers) {
    for (std::size_t y = cr - r; y <= cr + r; ++y) {
      for (std::size_t x = cc - r; x <= cc + r; ++x) {
        const auto dy = static_cast<long long>(y) - static_cast<long long>(cr);
        const auto dx = static_cast<long long>(x) - static_cast<long long>(cc);
        if (dy * dy + dx * dx <= r2) px[y * spec.cols + x] = spec.foreground_level;
      }
    }
  }
  if (spec.noise_sigma > 0.0) {
    for (auto& p : px) {
      double z;
      do {
        z = rng.normal();
      } while (std::abs(z) > 2.0);
      p = std::clamp(p + spec.noise_sigma * z, 0.0, 1.0);
    }
  }
  out.image = GrayImage(spec.rows, spec.cols, std::move(px));
  out.ground_truth_count = spec.num_blobs;
  return out;
}

}  // namespace mlcompat
