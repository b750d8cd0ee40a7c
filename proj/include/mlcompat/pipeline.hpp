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

// The two reference image-analysis programs as library calls.
//
//   janus:  Otsu threshold -> binarize -> label -> count objects
//   janus2: Otsu threshold -> binarize -> count foreground pixels ->
//           min/max normalize onto the [0, 7000] death-signal scale

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "json.hpp"
#include "mlcompat/error.hpp"
#include "mlcompat/image_tools.hpp"

namespace mlcompat {

struct JanusResult {
  double threshold_level = 0.0;
  std::size_t object_count = 0;
  bool degenerate = false;
};

/// Binarization used by both programs. A degenerate (single-bin) image
/// becomes all background.
inline BinaryImage otsu_binarize(const GrayImage& img, OtsuResult* threshold = nullptr) {
  const auto t = graythresh(img);
  if (threshold) *threshold = t;
  if (t.degenerate) return BinaryImage::zeros(img.rows(), img.cols());
  return im2bw(img, t.level);
}

inline JanusResult janus(const GrayImage& img, Connectivity conn = Connectivity::Eight) {
  OtsuResult t;
  const auto bw = otsu_binarize(img, &t);
  return {t.level, bwlabel(bw, conn).num_labels, t.degenerate};
}

inline constexpr double kDeathSignalScale = 7000.0;

struct DeathSignal {
  std::size_t raw_count = 0;
  double normalized = 0.0;
};

struct Calibration {
  double min_ref = 0.0;
  double max_ref = 0.0;
};

/// 7000 * (raw - min_ref) / (max_ref - min_ref), clamped to [0, 7000].
inline double normalize_death_signal(double raw_count, const Calibration& cal) {
  if (!(cal.max_ref > cal.min_ref)) throw BadCalibration(cal.min_ref, cal.max_ref);
  const double v = kDeathSignalScale * (raw_count - cal.min_ref) / (cal.max_ref - cal.min_ref);
  return std::clamp(v, 0.0, kDeathSignalScale);
}

inline std::size_t death_pixel_count(const GrayImage& img) {
  return count_foreground(otsu_binarize(img));
}

inline std::vector<DeathSignal> janus2(std::span<const GrayImage> images, const Calibration& cal) {
  if (!(cal.max_ref > cal.min_ref)) throw BadCalibration(cal.min_ref, cal.max_ref);
  std::vector<DeathSignal> out;
  out.reserve(images.size());
  for (const auto& img : images) {
    const auto raw = death_pixel_count(img);
    out.push_back({raw, normalize_death_signal(static_cast<double>(raw), cal)});
  }
  return out;
}

/// Anchors taken from the smallest and largest count of a dataset, for when
/// no external calibration is supplied.
inline Calibration calibration_from_counts(std::span<const std::size_t> raw_counts) {
  if (raw_counts.empty()) throw EmptyInput();
  const auto [lo, hi] = std::minmax_element(raw_counts.begin(), raw_counts.end());
  Calibration cal{static_cast<double>(*lo), static_cast<double>(*hi)};
  if (!(cal.max_ref > cal.min_ref)) throw BadCalibration(cal.min_ref, cal.max_ref);
  return cal;
}

struct SignalSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample (n-1); 0 for a single replica
};

inline SignalSummary summarize(std::span<const DeathSignal> signals) {
  SignalSummary s;
  s.n = signals.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (const auto& d : signals) sum += d.normalized;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (const auto& d : signals) ss += (d.normalized - s.mean) * (d.normalized - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

inline nlohmann::ordered_json to_json(const JanusResult& r) {
  nlohmann::ordered_json j;
  j["level"] = r.threshold_level;
  j["count"] = r.object_count;
  j["degenerate"] = r.degenerate;
  return j;
}

inline nlohmann::ordered_json to_json(const DeathSignal& d) {
  nlohmann::ordered_json j;
  j["raw_count"] = d.raw_count;
  j["normalized"] = d.normalized;
  return j;
}

}  // namespace mlcompat
