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

// Image functions with MATLAB semantics: histogram, Otsu threshold,
// binarization, gray-range normalization and connected-component labeling.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mlcompat/error.hpp"
#include "mlcompat/matrix.hpp"

namespace mlcompat {

/// Row-major 2-D raster.
template <typename T>
class Raster {
 public:
  Raster() = default;
  Raster(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), pixels_(rows * cols, fill) {}
  Raster(std::size_t rows, std::size_t cols, std::vector<T> pixels)
      : rows_(rows), cols_(cols), pixels_(std::move(pixels)) {
    if (pixels_.size() != rows_ * cols_)
      throw InvalidArgument("pixel count " + std::to_string(pixels_.size()) +
                            " does not match " + std::to_string(rows_) + "x" +
                            std::to_string(cols_));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return pixels_.size(); }

  T operator()(std::size_t r, std::size_t c) const { return pixels_[r * cols_ + c]; }
  std::span<const T> pixels() const { return pixels_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 protected:
  T& at(std::size_t r, std::size_t c) { return pixels_[r * cols_ + c]; }
  std::vector<T>& mutable_pixels() { return pixels_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> pixels_;
};

/// Gray intensities in [0,1]. Construction rejects anything else.
class GrayImage : public Raster<double> {
 public:
  GrayImage() = default;
  GrayImage(std::size_t rows, std::size_t cols, std::vector<double> pixels)
      : Raster(rows, cols, std::move(pixels)) {
    if (rows == 0 || cols == 0) throw InvalidArgument("image dimensions must be positive");
    for (double p : this->pixels())
      if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("gray pixel outside [0,1]");
  }
  static GrayImage filled(std::size_t rows, std::size_t cols, double value) {
    return GrayImage(rows, cols, std::vector<double>(rows * cols, value));
  }
};

/// Pixels strictly 0 or 1.
class BinaryImage : public Raster<std::uint8_t> {
 public:
  BinaryImage() = default;
  BinaryImage(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> pixels)
      : Raster(rows, cols, std::move(pixels)) {
    for (auto p : this->pixels())
      if (p > 1) throw InvalidArgument("binary pixel other than 0 or 1");
  }
  static BinaryImage zeros(std::size_t rows, std::size_t cols) {
    return BinaryImage(rows, cols, std::vector<std::uint8_t>(rows * cols, 0));
  }
};

/// Component labels; 0 is background and 1..num_labels are used without gaps.
struct LabelMap {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint32_t> labels;
  std::size_t num_labels = 0;

  std::uint32_t operator()(std::size_t r, std::size_t c) const { return labels[r * cols + c]; }
};

struct Histogram256 {
  std::array<std::uint64_t, 256> bins{};

  std::uint64_t total() const { return std::accumulate(bins.begin(), bins.end(), std::uint64_t{0}); }
  std::size_t occupied_bins() const {
    return static_cast<std::size_t>(std::count_if(bins.begin(), bins.end(), [](auto b) { return b > 0; }));
  }
};

enum class Connectivity { Four = 4, Eight = 8 };

inline Connectivity connectivity_from_int(int n) {
  if (n == 4) return Connectivity::Four;
  if (n == 8) return Connectivity::Eight;
  throw InvalidArgument("connectivity must be 4 or 8");
}

/// Bin index of an intensity: round-half-up of p*255.
inline std::size_t intensity_bin(double p) {
  return static_cast<std::size_t>(std::floor(p * 255.0 + 0.5));
}

inline Histogram256 imhist(const GrayImage& img) {
  Histogram256 h;
  for (double p : img.pixels()) ++h.bins[intensity_bin(p)];
  return h;
}

struct OtsuResult {
  double threshold_bin = 0.0;  // mean of all maximizing bins
  double level = 0.0;          // threshold_bin / 255
  bool degenerate = false;     // fewer than two occupied bins
};

/// Otsu's method over a 256-bin histogram.
///
/// Class 0 is bins [0,t], class 1 is (t,255]. Between-class variance is
/// proportional to (N*S0 - n0*S)^2 / (n0*n1), with N, S the total count and
/// intensity sum and n0, S0 the class-0 count and sum. The ratios are compared
/// exactly by cross-multiplying big integers, so plateaus of equal variance
/// are found without rounding noise. Ties resolve to the mean maximizer.
inline OtsuResult otsu_threshold(const Histogram256& hist) {
  using boost::multiprecision::cpp_int;
  OtsuResult result;
  if (hist.occupied_bins() < 2) {
    result.degenerate = true;
    return result;
  }
  std::uint64_t total = 0;
  cpp_int weighted_total = 0;
  for (std::size_t i = 0; i < 256; ++i) {
    total += hist.bins[i];
    weighted_total += cpp_int(hist.bins[i]) * i;
  }

  cpp_int best_num = -1;  // below any real score
  cpp_int best_den = 1;
  std::uint64_t tie_sum = 0;
  std::uint64_t tie_count = 0;
  std::uint64_t n0 = 0;
  cpp_int s0 = 0;
  for (std::size_t t = 0; t < 256; ++t) {
    n0 += hist.bins[t];
    s0 += cpp_int(hist.bins[t]) * t;
    const std::uint64_t n1 = total - n0;
    if (n0 == 0 || n1 == 0) continue;
    const cpp_int d = cpp_int(total) * s0 - cpp_int(n0) * weighted_total;
    const cpp_int num = d * d;
    const cpp_int den = cpp_int(n0) * n1;
    const cpp_int lhs = num * best_den;
    const cpp_int rhs = best_num * den;
    if (lhs > rhs) {
      best_num = num;
      best_den = den;
      tie_sum = t;
      tie_count = 1;
    } else if (lhs == rhs) {
      tie_sum += t;
      ++tie_count;
    }
  }
  result.threshold_bin = static_cast<double>(tie_sum) / static_cast<double>(tie_count);
  result.level = result.threshold_bin / 255.0;
  return result;
}

/// MATLAB `graythresh`. A single-bin image is degenerate and yields level 0.
inline OtsuResult graythresh(const GrayImage& img) { return otsu_threshold(imhist(img)); }

/// MATLAB `im2bw`: 1 where pixel > level.
inline BinaryImage im2bw(const GrayImage& img, double level) {
  if (!(level >= 0.0 && level <= 1.0)) throw LevelOutOfRange(level);
  std::vector<std::uint8_t> out;
  out.reserve(img.size());
  for (double p : img.pixels()) out.push_back(p > level ? 1 : 0);
  return BinaryImage(img.rows(), img.cols(), std::move(out));
}

/// MATLAB `mat2gray`: affine rescale of [min,max] onto [0,1]; a constant
/// matrix maps to zeros.
inline GrayImage mat2gray(const Matrix& m) {
  if (m.empty()) throw EmptyInput();
  double lo = m.data()[0];
  double hi = lo;
  for (double v : m.data()) {
    if (!std::isfinite(v)) throw InvalidArgument("mat2gray requires finite input");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::vector<double> px(m.size(), 0.0);
  if (hi > lo) {
    const double range = hi - lo;
    for (std::size_t i = 0; i < px.size(); ++i)
      px[i] = std::clamp((m.data()[i] - lo) / range, 0.0, 1.0);
  }
  return GrayImage(m.rows(), m.cols(), std::move(px));
}

namespace detail {

class DisjointSets {
 public:
  std::uint32_t make() {
    parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
    return parent_.back();
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void join(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a < b) parent_[b] = a;
    else if (b < a) parent_[a] = b;
  }
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace detail

/// MATLAB `bwlabel` by two-pass union-find. Labels follow the row-major
/// order in which components are first met.
inline LabelMap bwlabel(const BinaryImage& img, Connectivity conn = Connectivity::Eight) {
  const std::size_t rows = img.rows();
  const std::size_t cols = img.cols();
  LabelMap out{rows, cols, std::vector<std::uint32_t>(rows * cols, 0), 0};
  if (rows == 0 || cols == 0) return out;

  constexpr std::uint32_t kNone = 0xFFFFFFFFu;
  std::vector<std::uint32_t> provisional(rows * cols, kNone);
  detail::DisjointSets sets;

  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (!img(r, c)) continue;
      std::uint32_t label = kNone;
      auto visit = [&](std::size_t rr, std::size_t cc) {
        const auto l = provisional[rr * cols + cc];
        if (l == kNone) return;
        if (label == kNone) label = l;
        else sets.join(label, l);
      };
      if (c > 0) visit(r, c - 1);
      if (r > 0) {
        visit(r - 1, c);
        if (conn == Connectivity::Eight) {
          if (c > 0) visit(r - 1, c - 1);
          if (c + 1 < cols) visit(r - 1, c + 1);
        }
      }
      provisional[r * cols + c] = label == kNone ? sets.make() : label;
    }
  }

  std::vector<std::uint32_t> final_label(sets.size(), 0);
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < provisional.size(); ++i) {
    if (provisional[i] == kNone) continue;
    const auto root = sets.find(provisional[i]);
    if (final_label[root] == 0) final_label[root] = ++next;
    out.labels[i] = final_label[root];
  }
  out.num_labels = next;
  return out;
}

inline std::size_t count_foreground(const BinaryImage& img) {
  return static_cast<std::size_t>(std::count(img.pixels().begin(), img.pixels().end(), 1));
}

}  // namespace mlcompat
